"""Shared test helpers: scripted/pseudo-random taggers and synthetic corpora."""

from __future__ import annotations

import hashlib
import random

from streampunct import PunctTag, TrainingRow, Word

T = PunctTag


def words_of(text: str) -> tuple[Word, ...]:
    return tuple(Word(w) for w in text.split())


def tags_of(names: str) -> tuple[PunctTag, ...]:
    return tuple(PunctTag[n] for n in names.split())


class ScriptedTagger:
    """Returns a fixed tag script per exact window content."""

    def __init__(self, script: dict[str, str]):
        self._script = {
            tuple(window.split()): tags_of(tag_names) for window, tag_names in script.items()
        }

    def tag(self, words):
        return list(self._script[tuple(str(w) for w in words)])


class HashTagger:
    """Deterministic pseudo-random tagger: tags are a pure hash of the window.

    Overlapping windows get unrelated tags, which stresses the decoder's
    conservation guarantees without breaking the determinism contract.
    """

    def __init__(self, seed: int, weights=(70, 10, 15, 5)):
        self._seed = seed
        self._weights = weights

    def tag(self, words):
        key = f"{self._seed}|" + "\x00".join(words)
        digest = hashlib.blake2b(key.encode(), digest_size=8).digest()
        rng = random.Random(int.from_bytes(digest, "big"))
        order = (T.O, T.COMMA, T.PERIOD, T.QMARK)
        return [rng.choices(order, weights=self._weights)[0] for _ in words]


_FILLER = (
    "the a this that committee board report budget plan review member vote "
    "motion item agenda note detail figure total result answer question city "
    "office team week month value point case file line"
).split()


def unique_start_rows(n_sentences: int, seed: int) -> list[TrainingRow]:
    """Sentences whose first word is globally unique.

    Any decoder window starts right after a sentence boundary, so unique
    leading words make every oracle lookup land on its true position.
    """
    rng = random.Random(seed)
    rows = []
    for k in range(n_sentences):
        length = rng.randint(3, 9)
        words = [f"u{k:05d}"] + [rng.choice(_FILLER) for _ in range(length)]
        tags = [T.O] * len(words)
        if length >= 3 and rng.random() < 0.4:
            tags[rng.randint(1, len(words) - 2)] = T.COMMA
        tags[-1] = T.QMARK if rng.random() < 0.2 else T.PERIOD
        rows.append(TrainingRow(tuple(words), tuple(tags), source_id=f"u{k:05d}"))
    return rows


_OPENERS = "however meanwhile finally yesterday afterwards basically".split()
_SUBJECTS = ["the team", "the board", "my manager", "the committee", "our group", "the vendor"]
_VERBS = "approved reviewed rejected shipped tested revised".split()
_OBJECTS = ["the budget", "the report", "the proposal", "a new plan", "the schedule", "the draft"]
_ENDERS = "today tomorrow quickly internally officially separately".split()
_QSTARTERS = "did will can should".split()
_QENDERS = "yet correctly already soon".split()


def template_sentence(rng: random.Random) -> tuple[list[str], list[PunctTag]]:
    if rng.random() < 0.2:
        words = (
            [rng.choice(_QSTARTERS)]
            + rng.choice(_SUBJECTS).split()[1:]
            + [rng.choice(_VERBS)]
            + rng.choice(_OBJECTS).split()
            + [rng.choice(_QENDERS)]
        )
        tags = [T.O] * len(words)
        tags[-1] = T.QMARK
        return words, tags
    words = []
    tags = []
    if rng.random() < 0.5:
        words.append(rng.choice(_OPENERS))
        tags.append(T.COMMA if rng.random() < 0.8 else T.O)
    words += rng.choice(_SUBJECTS).split() + [rng.choice(_VERBS)] + rng.choice(_OBJECTS).split()
    words.append(rng.choice(_ENDERS))
    tags += [T.O] * (len(words) - len(tags))
    tags[-1] = T.PERIOD
    return words, tags


def template_rows(min_tokens: int, seed: int) -> list[TrainingRow]:
    """Template-generated multi-sentence paragraphs totalling >= min_tokens words."""
    rng = random.Random(seed)
    rows = []
    total = 0
    k = 0
    while total < min_tokens:
        words: list[str] = []
        tags: list[PunctTag] = []
        for _ in range(rng.randint(2, 5)):
            sw, st = template_sentence(rng)
            words += sw
            tags += st
        rows.append(TrainingRow(tuple(words), tuple(tags), source_id=f"t{k:06d}"))
        total += len(words)
        k += 1
    return rows
