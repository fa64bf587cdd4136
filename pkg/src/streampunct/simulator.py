"""Decoder-style segmentation of a word stream, without audio.

Emulates the pause behavior that drives real segmenters: fixed-size cuts,
a per-word break probability (hesitation pauses), and tag-aware boundary
noise that hits or misses true sentence ends. Time limits are modeled in
words; the default 120-word cap stands in for a 40-second forced timeout
at conversational speed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .core import PunctTag, Segment, Word

POLICY_KINDS = ("fixed", "break", "noise")

DEFAULT_MAX_SEGMENT_WORDS = 120


@dataclass(frozen=True)
class SegmentPolicy:
    kind: str
    k: int = 1
    p: float = 0.0
    p_break_inside: float = 0.0
    p_miss_boundary: float = 0.0
    seed: int = 0
    max_segment_words: int = DEFAULT_MAX_SEGMENT_WORDS

    def __post_init__(self) -> None:
        if self.kind not in POLICY_KINDS:
            raise ValueError(
                f"unknown policy kind {self.kind!r}; valid kinds: {', '.join(POLICY_KINDS)}"
            )
        if self.max_segment_words < 1:
            raise ValueError(f"max_segment_words must be >= 1, got {self.max_segment_words}")
        if self.kind == "fixed" and self.k < 1:
            raise ValueError(f"fixed policy needs k >= 1, got {self.k}")
        for name in ("p", "p_break_inside", "p_miss_boundary"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")

    @classmethod
    def fixed(cls, k: int, **kwargs) -> "SegmentPolicy":
        return cls(kind="fixed", k=k, **kwargs)

    @classmethod
    def break_prob(cls, p: float, **kwargs) -> "SegmentPolicy":
        return cls(kind="break", p=p, **kwargs)

    @classmethod
    def boundary_noise(
        cls, p_break_inside: float, p_miss_boundary: float, **kwargs
    ) -> "SegmentPolicy":
        return cls(
            kind="noise",
            p_break_inside=p_break_inside,
            p_miss_boundary=p_miss_boundary,
            **kwargs,
        )


def parse_policy(
    text: str, seed: int = 0, max_segment_words: int = DEFAULT_MAX_SEGMENT_WORDS
) -> SegmentPolicy:
    """Parse a policy string: "fixed:3", "break:0.15", or "noise:0.3,0.1"."""
    kind, sep, args = text.partition(":")
    try:
        if not sep:
            raise ValueError("missing ':'")
        if kind == "fixed":
            return SegmentPolicy.fixed(int(args), seed=seed, max_segment_words=max_segment_words)
        if kind == "break":
            return SegmentPolicy.break_prob(
                float(args), seed=seed, max_segment_words=max_segment_words
            )
        if kind == "noise":
            inside, _, miss = args.partition(",")
            if not miss:
                raise ValueError("noise needs two probabilities")
            return SegmentPolicy.boundary_noise(
                float(inside), float(miss), seed=seed, max_segment_words=max_segment_words
            )
        raise ValueError(f"unknown kind {kind!r}")
    except ValueError as exc:
        raise ValueError(
            f"bad policy {text!r} ({exc}); expected fixed:<k>, break:<p>, or noise:<p_in>,<p_miss>"
        ) from None


def simulate_segments(
    words: Sequence[Word],
    policy: SegmentPolicy,
    session_id: str,
    tags: Sequence[PunctTag] | None = None,
) -> list[Segment]:
    """Cut a word stream into decoder-like segments under a policy.

    ``tags`` supplies the reference tags the noise policy needs; other
    policies ignore them. Segment words concatenate back to the input, no
    segment is empty, and seq_no runs densely from 0.
    """
    if not words:
        raise ValueError("cannot segment an empty word stream")
    if policy.kind == "noise":
        if tags is None:
            raise ValueError("noise policy requires reference tags")
        if len(tags) != len(words):
            raise ValueError(f"words/tags length mismatch: {len(words)} != {len(tags)}")

    rng = random.Random(policy.seed)
    pieces: list[list[Word]] = []
    current: list[Word] = []
    for i, word in enumerate(words):
        current.append(word)
        if len(current) >= policy.max_segment_words:
            cut = True
        elif policy.kind == "fixed":
            cut = len(current) >= policy.k
        elif policy.kind == "break":
            cut = rng.random() < policy.p
        else:
            if tags[i].is_terminal:
                cut = rng.random() < 1.0 - policy.p_miss_boundary
            else:
                cut = rng.random() < policy.p_break_inside
        if cut:
            pieces.append(current)
            current = []
    if current:
        pieces.append(current)

    return [
        Segment(session_id=session_id, seq_no=n, words=tuple(piece))
        for n, piece in enumerate(pieces)
    ]
