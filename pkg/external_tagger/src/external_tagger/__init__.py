"""Stdin/stdout punctuation tagging adapter for streaming decoders."""

from .models import HFTokenClassificationModel, ModelBackend, StubModel, load_model
from .protocol import TAG_NAMES, word_tags_from_pieces
from .server import serve, tag_words

__version__ = "0.1.0"

__all__ = [
    "HFTokenClassificationModel",
    "ModelBackend",
    "StubModel",
    "TAG_NAMES",
    "load_model",
    "serve",
    "tag_words",
    "word_tags_from_pieces",
]
