"""Model backends: anything that tags subword pieces can sit behind serve().

A backend returns piece counts per word plus one tag name per piece; the
serving loop collapses those to word level. The stub backend needs no ML
stack and is what the protocol tests run against. The optional Hugging Face
backend shows how a real pretrained token-classification checkpoint plugs
in; it needs the `hf` extra and local model files.
"""

from __future__ import annotations

import json
from typing import Protocol, Sequence

from .protocol import TAG_NAMES


class ModelBackend(Protocol):
    def tag_pieces(self, words: Sequence[str]) -> tuple[list[int], list[str]]:
        """Return (pieces per word, tag name per piece) for one request."""
        ...


class StubModel:
    """Ends a sentence at the end of every input.

    Words split into character pieces so the last-piece path is exercised:
    every piece is O except the final piece of the final word, which is
    PERIOD.
    """

    def tag_pieces(self, words: Sequence[str]) -> tuple[list[int], list[str]]:
        counts = [max(len(w), 1) for w in words]
        tags = ["O"] * sum(counts)
        if tags:
            tags[-1] = "PERIOD"
        return counts, tags


class HFTokenClassificationModel:
    """Pretrained token-classification checkpoint adapter.

    ``label_map`` translates the checkpoint's label names into the four tag
    names; labels missing from the map fall back to O. Requires the
    transformers/torch extra and a local or cached checkpoint.
    """

    def __init__(self, model_path: str, label_map: dict[str, str] | None = None):
        try:
            import torch  # noqa: F401
            from transformers import AutoModelForTokenClassification, AutoTokenizer
        except ImportError as exc:
            raise RuntimeError(
                "the hf backend needs the 'hf' extra (transformers, torch)"
            ) from exc
        self._tokenizer = AutoTokenizer.from_pretrained(model_path)
        self._model = AutoModelForTokenClassification.from_pretrained(model_path)
        self._model.eval()
        id2label = self._model.config.id2label
        label_map = label_map or {}
        self._tag_by_id = {}
        for label_id, label in id2label.items():
            tag = label_map.get(label, label if label in TAG_NAMES else "O")
            self._tag_by_id[int(label_id)] = tag

    def tag_pieces(self, words: Sequence[str]) -> tuple[list[int], list[str]]:
        import torch

        counts = []
        pieces = []
        for word in words:
            word_pieces = self._tokenizer.tokenize(word) or [word]
            counts.append(len(word_pieces))
            pieces.extend(word_pieces)
        if not pieces:
            return [], []
        encoded = self._tokenizer(
            pieces, is_split_into_words=True, return_tensors="pt", add_special_tokens=False
        )
        with torch.no_grad():
            logits = self._model(**encoded).logits[0]
        label_ids = logits.argmax(dim=-1).tolist()
        return counts, [self._tag_by_id.get(i, "O") for i in label_ids]


def load_model(spec: str) -> ModelBackend:
    """Build a backend from a --model spec: "stub" or "hf:<path>[:<label-map.json>]"."""
    if spec == "stub":
        return StubModel()
    if spec.startswith("hf:"):
        rest = spec[3:]
        path, _, map_path = rest.partition(":")
        if not path:
            raise ValueError("hf spec needs a model path: hf:<path>")
        label_map = None
        if map_path:
            with open(map_path, encoding="utf-8") as fh:
                label_map = json.load(fh)
        return HFTokenClassificationModel(path, label_map)
    raise ValueError(f"unknown model spec {spec!r}; expected 'stub' or 'hf:<path>'")
