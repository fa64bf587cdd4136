"""Punctuation taggers: the interface, a test oracle, and a trainable model.

Every tagger maps a word sequence to an equal-length tag sequence,
deterministically and without memory across calls; all cross-call context is
the streaming decoder's job. The trainable model is a windowed averaged
perceptron over word features, small enough to train on a laptop.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Protocol, Sequence

from .core import PunctTag, Word

TAG_ORDER = (PunctTag.O, PunctTag.COMMA, PunctTag.PERIOD, PunctTag.QMARK)
_TAG_INDEX = {tag: i for i, tag in enumerate(TAG_ORDER)}

MODEL_MAGIC = "STREAMPUNCT-PERCEPTRON"
MODEL_VERSION = "v1"


class ModelFormatError(ValueError):
    """Model file is malformed (bad magic, truncated, or unparsable)."""


class ModelVersionError(ModelFormatError):
    """Model file carries an unsupported format version."""


class Tagger(Protocol):
    def tag(self, words: Sequence[Word]) -> list[PunctTag]: ...


class AllOTagger:
    """Predicts no punctuation anywhere."""

    def tag(self, words: Sequence[Word]) -> list[PunctTag]:
        return [PunctTag.O] * len(words)


class OracleTagger:
    """Returns ground-truth tags by locating the query in a reference stream.

    The query must be a contiguous subsequence of the reference word stream
    (matched case-insensitively); the tags at the matched positions are
    returned verbatim, so the oracle never invents boundaries. Ambiguous
    queries resolve to the first occurrence.
    """

    def __init__(self, words: Sequence[str], tags: Sequence[PunctTag]):
        if len(words) != len(tags):
            raise ValueError(f"words/tags length mismatch: {len(words)} != {len(tags)}")
        self._words = [w.lower() for w in words]
        self._tags = list(tags)
        self._starts: dict[str, list[int]] = {}
        for i, w in enumerate(self._words):
            self._starts.setdefault(w, []).append(i)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[Sequence[str], Sequence[PunctTag]]]) -> "OracleTagger":
        """Build one oracle over the concatenation of (words, tags) pairs."""
        words: list[str] = []
        tags: list[PunctTag] = []
        for w, t in pairs:
            words.extend(w)
            tags.extend(t)
        return cls(words, tags)

    def tag(self, words: Sequence[Word]) -> list[PunctTag]:
        if not words:
            return []
        query = [w.lower() for w in words]
        n = len(query)
        for start in self._starts.get(query[0], ()):
            if self._words[start : start + n] == query:
                return list(self._tags[start : start + n])
        raise ValueError(
            f"window {query[:5]}...({n} words) is not a contiguous "
            "subsequence of the oracle reference"
        )


def perceptron_features(
    words: Sequence[Word],
    i: int,
    window_before: int = 4,
    window_after: int = 4,
) -> list[str]:
    """Feature strings for the word at position ``i``.

    Covers the word itself, neighbors up to the window sizes (padded at
    stream edges), a character shape, the forward bigram, and a bucketed
    distance from the segment start.
    """
    if not 0 <= i < len(words):
        raise IndexError(f"position {i} out of range for {len(words)} words")
    current = words[i].lower()
    feats = [f"w0={current}"]
    for k in range(1, window_before + 1):
        left = words[i - k].lower() if i - k >= 0 else "<pad>"
        feats.append(f"w-{k}={left}")
    for k in range(1, window_after + 1):
        right = words[i + k].lower() if i + k < len(words) else "<pad>"
        feats.append(f"w+{k}={right}")
    feats.append(f"shape={_shape(current)}")
    nxt = words[i + 1].lower() if i + 1 < len(words) else "<pad>"
    feats.append(f"bigram={current}_{nxt}")
    feats.append(f"dist={_distance_bucket(i)}")
    return feats


def _shape(word: str) -> str:
    return "".join("d" if ch.isdigit() else "w" if ch.isalpha() else ch for ch in word)


def _distance_bucket(i: int) -> str:
    if i < 4:
        return str(i)
    for hi in (8, 16, 32):
        if i < hi:
            return f"{hi // 2}-{hi - 1}"
    return "32+"


def _predict(weights: dict[str, list[float]], feats: Sequence[str]) -> PunctTag:
    scores = [0.0, 0.0, 0.0, 0.0]
    for f in feats:
        vec = weights.get(f)
        if vec is not None:
            scores[0] += vec[0]
            scores[1] += vec[1]
            scores[2] += vec[2]
            scores[3] += vec[3]
    # Ties prefer the earliest class in TAG_ORDER, i.e. O.
    best = 0
    for c in range(1, 4):
        if scores[c] > scores[best]:
            best = c
    return TAG_ORDER[best]


@dataclass
class PerceptronModel:
    """Finalized (averaged) windowed perceptron; read-only after training."""

    weights: dict[str, list[float]] = field(repr=False)
    window_before: int = 4
    window_after: int = 4
    epochs_trained: int = 0
    vocab_truncation: int | None = None

    def weight(self, feature: str, tag: PunctTag) -> float:
        vec = self.weights.get(feature)
        return 0.0 if vec is None else vec[_TAG_INDEX[tag]]

    def tag(self, words: Sequence[Word]) -> list[PunctTag]:
        return [
            _predict(
                self.weights,
                perceptron_features(words, i, self.window_before, self.window_after),
            )
            for i in range(len(words))
        ]


def perceptron_train(
    corpus: Sequence[tuple[Sequence[Word], Sequence[PunctTag]]],
    epochs: int,
    seed: int,
    window_before: int = 4,
    window_after: int = 4,
    vocab_truncation: int | None = None,
) -> PerceptronModel:
    """Averaged-perceptron training over per-token multiclass decisions.

    Row order is reshuffled each epoch by a generator seeded with ``seed``,
    so the result is a pure function of (corpus, epochs, seed).
    """
    rows = list(corpus)
    if not rows:
        raise ValueError("training corpus is empty")
    if epochs < 1:
        raise ValueError(f"epochs must be >= 1, got {epochs}")
    for words, tags in rows:
        if len(words) != len(tags) or not words:
            raise ValueError(
                f"corpus rows need equal non-zero words/tags lengths, "
                f"got {len(words)}/{len(tags)}"
            )

    feat_cache = [
        [perceptron_features(words, i, window_before, window_after) for i in range(len(words))]
        for words, _ in rows
    ]

    rng = random.Random(seed)
    weights: dict[str, list[float]] = {}
    totals: dict[str, list[float]] = {}
    stamps: dict[str, list[int]] = {}

    def bump(feature: str, cls: int, delta: float, step: int) -> None:
        vec = weights.get(feature)
        if vec is None:
            vec = weights[feature] = [0.0] * 4
            totals[feature] = [0.0] * 4
            stamps[feature] = [0] * 4
        totals[feature][cls] += (step - stamps[feature][cls]) * vec[cls]
        stamps[feature][cls] = step
        vec[cls] += delta

    step = 0
    order = list(range(len(rows)))
    for _ in range(epochs):
        rng.shuffle(order)
        for ri in order:
            tags = rows[ri][1]
            for i, gold in enumerate(tags):
                step += 1
                feats = feat_cache[ri][i]
                pred = _predict(weights, feats)
                if pred is not gold:
                    gold_cls = _TAG_INDEX[gold]
                    pred_cls = _TAG_INDEX[pred]
                    for f in feats:
                        bump(f, gold_cls, +1.0, step)
                        bump(f, pred_cls, -1.0, step)

    averaged: dict[str, list[float]] = {}
    for f, vec in weights.items():
        avg = [
            (totals[f][c] + (step - stamps[f][c]) * vec[c]) / step
            for c in range(4)
        ]
        if any(avg):
            averaged[f] = avg

    if vocab_truncation is not None and len(averaged) > vocab_truncation:
        by_mass = sorted(
            averaged, key=lambda f: (sum(abs(w) for w in averaged[f]), f), reverse=True
        )
        averaged = {f: averaged[f] for f in by_mass[:vocab_truncation]}

    return PerceptronModel(
        weights=averaged,
        window_before=window_before,
        window_after=window_after,
        epochs_trained=epochs,
        vocab_truncation=vocab_truncation,
    )


def token_accuracy(
    model: PerceptronModel,
    corpus: Iterable[tuple[Sequence[Word], Sequence[PunctTag]]],
) -> float:
    """Fraction of tokens tagged correctly over the given rows."""
    correct = total = 0
    for words, tags in corpus:
        pred = model.tag(words)
        correct += sum(1 for p, g in zip(pred, tags) if p is g)
        total += len(tags)
    return correct / total if total else 0.0


def model_save(model: PerceptronModel, path: str | Path) -> None:
    """Write the versioned plain-text weight table (UTF-8, LF)."""
    lines = [
        f"{MODEL_MAGIC} {MODEL_VERSION}",
        f"window_before={model.window_before} window_after={model.window_after}",
    ]
    for feature in sorted(model.weights):
        vec = model.weights[feature]
        for tag in TAG_ORDER:
            w = vec[_TAG_INDEX[tag]]
            if w != 0.0:
                lines.append(f"{feature}\t{tag.name}\t{w!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


_WINDOW_RE = re.compile(r"^window_before=(\d+) window_after=(\d+)$")


def model_load(path: str | Path) -> PerceptronModel:
    """Load a model file; predictions match the saved model exactly."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or not lines[0].startswith(MODEL_MAGIC):
        raise ModelFormatError(f"{path}: missing {MODEL_MAGIC} header")
    version = lines[0][len(MODEL_MAGIC) :].strip()
    if version != MODEL_VERSION:
        raise ModelVersionError(f"{path}: unsupported model version {version!r}")
    if len(lines) < 2:
        raise ModelFormatError(f"{path}: truncated before window line")
    m = _WINDOW_RE.match(lines[1])
    if not m:
        raise ModelFormatError(f"{path}: bad window line {lines[1]!r}")
    weights: dict[str, list[float]] = {}
    for lineno, line in enumerate(lines[2:], start=3):
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ModelFormatError(f"{path}:{lineno}: expected 3 tab-separated fields")
        feature, tag_name, weight_text = parts
        try:
            tag = PunctTag.from_name(tag_name)
            weight = float(weight_text)
        except ValueError as exc:
            raise ModelFormatError(f"{path}:{lineno}: {exc}") from None
        weights.setdefault(feature, [0.0] * 4)[_TAG_INDEX[tag]] = weight
    return PerceptronModel(
        weights=weights,
        window_before=int(m.group(1)),
        window_after=int(m.group(2)),
    )
