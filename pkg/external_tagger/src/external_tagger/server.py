"""Serving loop: one request line in, one response line out, flush each.

Requests are handled strictly in order. Malformed requests produce error
records and the loop continues; only a model that fails to load aborts the
process, before any request is read.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence, TextIO

from .models import ModelBackend, load_model
from .protocol import (
    RequestError,
    error_line,
    parse_request,
    response_line,
    word_tags_from_pieces,
)


def tag_words(model: ModelBackend, words: Sequence[str]) -> list[str]:
    piece_counts, piece_tags = model.tag_pieces(words)
    if len(piece_counts) != len(words):
        raise ValueError(
            f"backend returned {len(piece_counts)} piece counts for {len(words)} words"
        )
    return word_tags_from_pieces(piece_counts, piece_tags)


def serve(model: ModelBackend, stdin: TextIO, stdout: TextIO) -> None:
    for line in stdin:
        if not line.strip():
            continue
        try:
            request_id, words = parse_request(line)
        except RequestError as exc:
            stdout.write(error_line(exc.request_id, str(exc)) + "\n")
            stdout.flush()
            continue
        except ValueError as exc:
            stdout.write(error_line(None, str(exc)) + "\n")
            stdout.flush()
            continue
        try:
            out = response_line(request_id, tag_words(model, words))
        except Exception as exc:  # keep serving after a bad request
            out = error_line(request_id, f"tagging failed: {exc}")
        stdout.write(out + "\n")
        stdout.flush()


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="punct-external-tagger",
        description="Serve word-level punctuation tags over stdin/stdout.",
    )
    parser.add_argument(
        "--model",
        required=True,
        help="model spec: 'stub' or 'hf:<path>[:<label-map.json>]'",
    )
    args = parser.parse_args(argv)
    try:
        model = load_model(args.model)
    except Exception as exc:
        print(f"model load failed: {exc}", file=sys.stderr)
        return 1
    serve(model, sys.stdin, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
