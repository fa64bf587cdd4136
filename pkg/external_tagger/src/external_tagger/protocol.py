"""Wire protocol pieces shared by the serving loop and its tests.

Requests arrive one JSON object per line: {"id": <int>, "words": [...]}.
Responses echo the id with one tag name per word: {"id": ..., "tags": [...]};
failures keep the stream alive via {"id": ..., "error": "..."}. Tag names
are the decoder's serialization: O, COMMA, PERIOD, QMARK.
"""

from __future__ import annotations

import json
from typing import Sequence

TAG_NAMES = ("O", "COMMA", "PERIOD", "QMARK")


def parse_request(line: str) -> tuple[object, list[str]]:
    """Return (id, words) or raise ValueError with a client-safe message."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise ValueError("request must be a JSON object")
    request_id = obj.get("id")
    if "words" not in obj:
        raise RequestError(request_id, "missing field words")
    words = obj["words"]
    if not isinstance(words, list) or not all(isinstance(w, str) for w in words):
        raise RequestError(request_id, "words must be a list of strings")
    return request_id, words


class RequestError(ValueError):
    """Bad request whose id is known, so the error response can echo it."""

    def __init__(self, request_id: object, message: str):
        super().__init__(message)
        self.request_id = request_id


def response_line(request_id: object, tags: Sequence[str]) -> str:
    return json.dumps({"id": request_id, "tags": list(tags)}, ensure_ascii=False)


def error_line(request_id: object, message: str) -> str:
    return json.dumps({"id": request_id, "error": message}, ensure_ascii=False)


def word_tags_from_pieces(piece_counts: Sequence[int], piece_tags: Sequence[str]) -> list[str]:
    """Word-level tags under the last-piece convention.

    Each word's tag is the tag of its final subword piece; tags on earlier
    pieces are discarded.
    """
    if sum(piece_counts) != len(piece_tags):
        raise ValueError(
            f"piece counts sum to {sum(piece_counts)}, have {len(piece_tags)} piece tags"
        )
    tags = []
    pos = 0
    for count in piece_counts:
        if count < 1:
            raise ValueError("every word needs at least one piece")
        pos += count
        tags.append(piece_tags[pos - 1])
    return tags
