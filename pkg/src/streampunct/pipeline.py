"""Corpus preparation: written-form paragraphs to (words, tags) rows.

Mirrors the production data flow at desk scale: clean a punctuated
paragraph, strip punctuation into per-word tags, trim to a token budget,
and split train/validation. Spoken-form normalization is simplified to
case-folding; digits pass through as word tokens.
"""

from __future__ import annotations

import json
import random
import re
import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, TextIO

from .core import PunctTag, SubwordTokenizer, Word, tag_for_symbol


class DataFormatError(ValueError):
    """An input file or record does not match its documented format."""


@dataclass(frozen=True)
class TrainingRow:
    """Aligned spoken-form words and punctuation tags, one per paragraph.

    Rows always end at a sentence end (last tag terminal).
    """

    words: tuple[Word, ...]
    tags: tuple[PunctTag, ...]
    source_id: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "words", tuple(Word(w) for w in self.words))
        object.__setattr__(self, "tags", tuple(self.tags))
        if len(self.words) != len(self.tags) or not self.words:
            raise ValueError(
                f"row needs equal non-zero words/tags lengths, "
                f"got {len(self.words)}/{len(self.tags)}"
            )
        if not self.tags[-1].is_terminal:
            raise ValueError("row must end with a terminal tag")


# Fold sentence-final '!' into '.', clause marks ';' ':' into ',', and smart
# quotes/dashes into their ASCII forms before filtering.
_FOLD = str.maketrans({
    "!": ".",
    ";": ",",
    ":": ",",
    "’": "'",
    "‘": "'",
    "–": "-",
    "—": "-",
})

_SPACE_BEFORE_PUNCT_RE = re.compile(r"\s+(?=[.,?])")
_PUNCT_RUN_RE = re.compile(r"([.,?])[.,?]+")
_WS_RE = re.compile(r"\s+")
_TRAILING_PUNCT_RE = re.compile(r"[.,?]+$")


def clean_paragraph(raw: str) -> str | None:
    """Normalize one raw paragraph; return None when nothing usable remains.

    Keeps letters, digits, whitespace, the tag punctuation {. , ?}, and the
    mid-word characters {- '}. '!' folds to '.', ';' and ':' fold to ',';
    everything else is removed. Whitespace and punctuation runs collapse.
    """
    text = unicodedata.normalize("NFKC", raw).translate(_FOLD)
    text = "".join(
        ch if ch.isalnum() or ch.isspace() or ch in ".,?'-" else " " for ch in text
    )
    text = _WS_RE.sub(" ", text).strip()
    text = _SPACE_BEFORE_PUNCT_RE.sub("", text)
    text = _PUNCT_RUN_RE.sub(r"\1", text)
    if not any(ch.isalnum() for ch in text):
        return None
    return text


def strip_and_tag(paragraph: str, source_id: str = "") -> TrainingRow:
    """Convert a cleaned paragraph into a spoken-form row.

    Lower-cases, splits on whitespace, and moves each word's trailing
    '.', ',' or '?' into its tag. The row is trimmed back to the last
    sentence end; a paragraph with no complete sentence is rejected.
    """
    words: list[Word] = []
    tags: list[PunctTag] = []
    for token in paragraph.lower().split():
        m = _TRAILING_PUNCT_RE.search(token)
        if m:
            tag = tag_for_symbol(m.group()[0])
            text = token[: m.start()]
        else:
            tag = PunctTag.O
            text = token
        if not text:
            # Orphan punctuation (e.g. a leading ". "): fold into the
            # previous word when it has no tag yet, else drop.
            if words and tags[-1] is PunctTag.O:
                tags[-1] = tag
            continue
        words.append(Word(text))
        tags.append(tag)

    last_terminal = _last_terminal_index(tags)
    if last_terminal is None:
        raise ValueError("paragraph reduces to zero complete sentences")
    return TrainingRow(tuple(words[: last_terminal + 1]), tuple(tags[: last_terminal + 1]), source_id)


def _last_terminal_index(tags: Sequence[PunctTag]) -> int | None:
    for i in range(len(tags) - 1, -1, -1):
        if tags[i].is_terminal:
            return i
    return None


def trim_row(
    row: TrainingRow,
    tok: SubwordTokenizer,
    max_tokens: int = 250,
) -> TrainingRow | None:
    """Enforce the subword token budget; trim back to the last sentence end.

    Returns the row unchanged when within budget, a shortened row otherwise,
    or None when no complete sentence fits.
    """
    if max_tokens < 1:
        raise ValueError(f"max_tokens must be >= 1, got {max_tokens}")
    counts = [len(tok.tokenize(w)) for w in row.words]
    if sum(counts) <= max_tokens:
        return row
    budget = max_tokens
    fit = 0
    for count in counts:
        if count > budget:
            break
        budget -= count
        fit += 1
    last_terminal = _last_terminal_index(row.tags[:fit])
    if last_terminal is None:
        return None
    return TrainingRow(row.words[: last_terminal + 1], row.tags[: last_terminal + 1], row.source_id)


def split_corpus(
    rows: Sequence[TrainingRow], seed: int
) -> tuple[list[TrainingRow], list[TrainingRow]]:
    """Deterministic train/validation split: 10%, capped at 50k rows."""
    rows = list(rows)
    k = min(len(rows) // 10, 50_000)
    indices = list(range(len(rows)))
    random.Random(seed).shuffle(indices)
    chosen = set(indices[:k])
    train = [row for i, row in enumerate(rows) if i not in chosen]
    validation = [row for i, row in enumerate(rows) if i in chosen]
    return train, validation


def row_to_record(row: TrainingRow) -> dict:
    return {
        "words": [str(w) for w in row.words],
        "tags": [t.name for t in row.tags],
        "source_id": row.source_id,
    }


def row_from_record(obj: object) -> TrainingRow:
    if not isinstance(obj, dict):
        raise DataFormatError(f"row record must be a JSON object, got {type(obj).__name__}")
    try:
        words = obj["words"]
        tags = obj["tags"]
    except KeyError as exc:
        raise DataFormatError(f"row record missing field {exc.args[0]!r}") from None
    if not isinstance(words, list) or not isinstance(tags, list):
        raise DataFormatError("row record fields 'words' and 'tags' must be lists")
    try:
        return TrainingRow(
            tuple(Word(w) for w in words),
            tuple(PunctTag.from_name(t) for t in tags),
            str(obj.get("source_id", "")),
        )
    except (TypeError, ValueError) as exc:
        raise DataFormatError(f"bad row record: {exc}") from None


def save_rows(rows: Iterable[TrainingRow], path: str | Path) -> None:
    """Write rows as line-delimited JSON (UTF-8, LF)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in rows:
            fh.write(json.dumps(row_to_record(row), ensure_ascii=False) + "\n")


def load_rows(source: str | Path | TextIO) -> list[TrainingRow]:
    """Read a line-delimited JSON row file."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            return load_rows(fh)
    rows = []
    for lineno, line in enumerate(source, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataFormatError(f"line {lineno}: invalid JSON: {exc}") from None
        try:
            rows.append(row_from_record(obj))
        except DataFormatError as exc:
            raise DataFormatError(f"line {lineno}: {exc}") from None
    return rows
