"""Core domain types for streaming punctuation.

A *word* is spoken-form text (no trailing sentence punctuation); punctuation
lives in the tag attached to the word. Sentences are emitted as tagged word
lists whose last tag closes the sentence. All types here are immutable values
and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Protocol, Sequence


class PunctTag(Enum):
    """Four-way punctuation tag attached to a word."""

    O = "O"
    COMMA = "COMMA"
    PERIOD = "PERIOD"
    QMARK = "QMARK"

    @property
    def is_terminal(self) -> bool:
        """True for tags that end a sentence (PERIOD, QMARK)."""
        return self is PunctTag.PERIOD or self is PunctTag.QMARK

    @property
    def symbol(self) -> str:
        """Display character appended to the word ("" for O)."""
        return _TAG_SYMBOLS[self]

    @classmethod
    def from_name(cls, name: str) -> "PunctTag":
        try:
            return cls[name]
        except KeyError:
            raise ValueError(f"unknown punctuation tag name: {name!r}") from None


_TAG_SYMBOLS = {
    PunctTag.O: "",
    PunctTag.COMMA: ",",
    PunctTag.PERIOD: ".",
    PunctTag.QMARK: "?",
}

# Characters that may appear as a word's trailing punctuation in written form.
TAG_CHARS = ".,?"

_SYMBOL_TO_TAG = {",": PunctTag.COMMA, ".": PunctTag.PERIOD, "?": PunctTag.QMARK}


def tag_for_symbol(symbol: str) -> PunctTag:
    """Map a trailing punctuation character to its tag."""
    try:
        return _SYMBOL_TO_TAG[symbol]
    except KeyError:
        raise ValueError(f"no tag for symbol {symbol!r}") from None


class Word(str):
    """A spoken-form word.

    Non-empty, contains no whitespace, and never ends with '.', ',' or '?'
    (trailing punctuation belongs in tags). Mid-word characters such as
    hyphens, apostrophes, and abbreviation periods ("u.s") are allowed.
    """

    __slots__ = ()

    def __new__(cls, text: str) -> "Word":
        if not text:
            raise ValueError("word text must be non-empty")
        if any(ch.isspace() for ch in text):
            raise ValueError(f"word text may not contain whitespace: {text!r}")
        if text[-1] in TAG_CHARS:
            raise ValueError(f"word text may not end with tag punctuation: {text!r}")
        return super().__new__(cls, text)


@dataclass(frozen=True)
class Segment:
    """One batch of words from the upstream decoder.

    Within a session, seq_no values presented to the streaming decoder must
    increase by 1 starting at 0.
    """

    session_id: str
    seq_no: int
    words: tuple[Word, ...]

    def __post_init__(self) -> None:
        if self.seq_no < 0:
            raise ValueError(f"seq_no must be non-negative, got {self.seq_no}")
        object.__setattr__(self, "words", tuple(Word(w) for w in self.words))


@dataclass(frozen=True)
class TaggedWord:
    word: Word
    tag: PunctTag


@dataclass(frozen=True)
class TaggedSentence:
    """An emitted sentence: tagged words plus a finality marker.

    ``forced`` marks sentences closed by a flush or overflow policy rather
    than a predicted boundary; only those may have had their last tag
    rewritten. Non-final words never carry a terminal tag.
    """

    items: tuple[TaggedWord, ...]
    forced: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "items", tuple(self.items))
        if not self.items:
            raise ValueError("sentence must contain at least one word")
        if not self.forced and not self.items[-1].tag.is_terminal:
            raise ValueError("unforced sentence must end with a terminal tag")
        for tw in self.items[:-1]:
            if tw.tag.is_terminal:
                raise ValueError(f"non-final word carries terminal tag: {tw}")

    @property
    def terminal(self) -> PunctTag:
        """Tag of the last word (the sentence's closing tag)."""
        return self.items[-1].tag

    @property
    def words(self) -> tuple[Word, ...]:
        return tuple(tw.word for tw in self.items)

    @property
    def tags(self) -> tuple[PunctTag, ...]:
        return tuple(tw.tag for tw in self.items)


class SubwordTokenizer(Protocol):
    """Deterministic word-to-pieces tokenizer.

    ``tokenize`` returns a non-empty piece list; ``detokenize`` must invert
    it exactly for every word.
    """

    def tokenize(self, word: str) -> list[str]: ...

    def detokenize(self, pieces: Sequence[str]) -> str: ...


class WholeWordTokenizer:
    """Trivial tokenizer: every word is a single piece."""

    def tokenize(self, word: str) -> list[str]:
        return [word]

    def detokenize(self, pieces: Sequence[str]) -> str:
        return "".join(pieces)


class GreedyVocabTokenizer:
    """Greedy longest-match subword tokenizer over a fixed piece vocabulary.

    Unknown spans fall back to single characters, so any word tokenizes and
    concatenating the pieces reconstructs it exactly.
    """

    def __init__(self, vocab: Iterable[str]):
        self._vocab = frozenset(p for p in vocab if p)
        self._max_len = max((len(p) for p in self._vocab), default=1)

    @classmethod
    def from_file(cls, path: str | Path) -> "GreedyVocabTokenizer":
        """Load a vocabulary file: one piece per line, blank lines ignored."""
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        return cls(line.strip() for line in lines if line.strip())

    def tokenize(self, word: str) -> list[str]:
        pieces: list[str] = []
        i = 0
        while i < len(word):
            end = min(len(word), i + self._max_len)
            for j in range(end, i, -1):
                if word[i:j] in self._vocab or j == i + 1:
                    pieces.append(word[i:j])
                    i = j
                    break
        return pieces

    def detokenize(self, pieces: Sequence[str]) -> str:
        return "".join(pieces)


def render_sentence(sentence: TaggedSentence, capitalize: bool = True) -> str:
    """Assemble display text: words space-joined, tag symbols appended.

    With ``capitalize``, the first character is upper-cased (a no-op when the
    sentence starts with a digit).
    """
    text = " ".join(tw.word + tw.tag.symbol for tw in sentence.items)
    if capitalize:
        text = text[:1].upper() + text[1:]
    return text


def word_tags_to_subword_tags(
    words: Sequence[Word],
    tags: Sequence[PunctTag],
    tok: SubwordTokenizer,
) -> list[tuple[str, PunctTag]]:
    """Expand word-level tags to piece level.

    Each word's tag moves to its last piece; earlier pieces get O.
    """
    if len(words) != len(tags):
        raise ValueError(f"words/tags length mismatch: {len(words)} != {len(tags)}")
    out: list[tuple[str, PunctTag]] = []
    for word, tag in zip(words, tags):
        pieces = tok.tokenize(word)
        if not pieces:
            raise ValueError(f"tokenizer returned no pieces for {word!r}")
        out.extend((piece, PunctTag.O) for piece in pieces[:-1])
        out.append((pieces[-1], tag))
    return out


def subword_tags_to_word_tags(
    pieces: Sequence[tuple[str, PunctTag]],
    word_boundaries: Sequence[int],
) -> list[PunctTag]:
    """Collapse piece-level tags back to word level (last piece wins)."""
    if any(count < 1 for count in word_boundaries):
        raise ValueError("every word must span at least one piece")
    if sum(word_boundaries) != len(pieces):
        raise ValueError(
            f"piece counts sum to {sum(word_boundaries)}, have {len(pieces)} pieces"
        )
    tags: list[PunctTag] = []
    pos = 0
    for count in word_boundaries:
        pos += count
        tags.append(pieces[pos - 1][1])
    return tags
