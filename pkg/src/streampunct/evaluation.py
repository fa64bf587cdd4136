"""Punctuation and segmentation scoring.

Punctuation quality is word-level P/R/F1 per class (COMMA, PERIOD, QMARK;
O is never scored) with a micro-averaged overall row. Segmentation quality
looks only at sentence boundaries: commas are ignored and the two terminal
tags are interchangeable, scored with F1 and the precision-weighted F0.5.
All 0/0 ratios are defined as 0. Alignment is positional over identical
word streams; diverging streams are a hard error, not a silent skip.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from statistics import fmean
from typing import Iterable, Sequence

from .core import PunctTag, TaggedSentence
from .pipeline import TrainingRow

SCORED_CLASSES = (PunctTag.COMMA, PunctTag.PERIOD, PunctTag.QMARK)


class AlignmentError(ValueError):
    """Hypothesis and reference word streams differ."""


@dataclass(frozen=True)
class MetricConfig:
    beta: float = 0.5
    classes: tuple[PunctTag, ...] = SCORED_CLASSES

    def __post_init__(self) -> None:
        if self.beta <= 0:
            raise ValueError(f"beta must be positive, got {self.beta}")


def f_beta(p: float, r: float, beta: float) -> float:
    """Weighted harmonic mean of precision and recall; 0 when p = r = 0."""
    if not 0.0 <= p <= 1.0 or not 0.0 <= r <= 1.0:
        raise ValueError(f"precision/recall must be in [0, 1], got p={p}, r={r}")
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    denom = beta * beta * p + r
    if denom == 0.0:
        return 0.0
    return (1.0 + beta * beta) * p * r / denom


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


@dataclass
class EvalCounts:
    """Raw match counts; summable across sessions before computing ratios."""

    class_tp: dict[PunctTag, int] = field(default_factory=dict)
    class_hyp: dict[PunctTag, int] = field(default_factory=dict)
    class_ref: dict[PunctTag, int] = field(default_factory=dict)
    boundary_tp: int = 0
    boundary_hyp: int = 0
    boundary_ref: int = 0
    words: int = 0

    def add(self, other: "EvalCounts") -> None:
        for tag, n in other.class_tp.items():
            self.class_tp[tag] = self.class_tp.get(tag, 0) + n
        for tag, n in other.class_hyp.items():
            self.class_hyp[tag] = self.class_hyp.get(tag, 0) + n
        for tag, n in other.class_ref.items():
            self.class_ref[tag] = self.class_ref.get(tag, 0) + n
        self.boundary_tp += other.boundary_tp
        self.boundary_hyp += other.boundary_hyp
        self.boundary_ref += other.boundary_ref
        self.words += other.words


def count_tags(
    ref: Sequence[PunctTag],
    hyp: Sequence[PunctTag],
    cfg: MetricConfig = MetricConfig(),
) -> EvalCounts:
    if len(ref) != len(hyp):
        raise ValueError(f"ref/hyp length mismatch: {len(ref)} != {len(hyp)}")
    counts = EvalCounts(words=len(ref))
    scored = set(cfg.classes)
    for r, h in zip(ref, hyp):
        if h in scored:
            counts.class_hyp[h] = counts.class_hyp.get(h, 0) + 1
        if r in scored:
            counts.class_ref[r] = counts.class_ref.get(r, 0) + 1
            if h is r:
                counts.class_tp[r] = counts.class_tp.get(r, 0) + 1
        if r.is_terminal:
            counts.boundary_ref += 1
            if h.is_terminal:
                counts.boundary_tp += 1
        if h.is_terminal:
            counts.boundary_hyp += 1
    return counts


@dataclass(frozen=True)
class ClassScores:
    precision: float
    recall: float
    f1: float
    ref_count: int
    hyp_count: int
    tp_count: int


@dataclass(frozen=True)
class OverallScores:
    precision: float
    recall: float
    f1: float
    ref_count: int
    hyp_count: int
    tp_count: int


@dataclass(frozen=True)
class SegmentationScores:
    precision: float
    recall: float
    f1: float
    f05: float
    ref_count: int
    hyp_count: int
    tp_count: int


@dataclass(frozen=True)
class EvalReport:
    per_class: dict[PunctTag, ClassScores]
    overall: OverallScores
    segmentation: SegmentationScores


def report_from_counts(counts: EvalCounts, cfg: MetricConfig = MetricConfig()) -> EvalReport:
    per_class: dict[PunctTag, ClassScores] = {}
    for tag in cfg.classes:
        tp = counts.class_tp.get(tag, 0)
        hyp = counts.class_hyp.get(tag, 0)
        ref = counts.class_ref.get(tag, 0)
        p, r = _ratio(tp, hyp), _ratio(tp, ref)
        per_class[tag] = ClassScores(p, r, f_beta(p, r, 1.0), ref, hyp, tp)

    tp = sum(counts.class_tp.get(tag, 0) for tag in cfg.classes)
    hyp = sum(counts.class_hyp.get(tag, 0) for tag in cfg.classes)
    ref = sum(counts.class_ref.get(tag, 0) for tag in cfg.classes)
    p, r = _ratio(tp, hyp), _ratio(tp, ref)
    overall = OverallScores(p, r, f_beta(p, r, 1.0), ref, hyp, tp)

    sp = _ratio(counts.boundary_tp, counts.boundary_hyp)
    sr = _ratio(counts.boundary_tp, counts.boundary_ref)
    segmentation = SegmentationScores(
        sp,
        sr,
        f_beta(sp, sr, 1.0),
        f_beta(sp, sr, cfg.beta),
        counts.boundary_ref,
        counts.boundary_hyp,
        counts.boundary_tp,
    )
    return EvalReport(per_class=per_class, overall=overall, segmentation=segmentation)


def punctuation_scores(
    ref: Sequence[PunctTag],
    hyp: Sequence[PunctTag],
    cfg: MetricConfig = MetricConfig(),
) -> EvalReport:
    """Score one positionally aligned tag-sequence pair."""
    return report_from_counts(count_tags(ref, hyp, cfg), cfg)


def segmentation_scores(
    ref: Sequence[PunctTag],
    hyp: Sequence[PunctTag],
    cfg: MetricConfig = MetricConfig(),
) -> SegmentationScores:
    """Boundary-only scores: commas ignored, PERIOD/QMARK interchangeable."""
    return report_from_counts(count_tags(ref, hyp, cfg), cfg).segmentation


def relative_gain(new_score: float, old_score: float) -> float:
    """Percent change of new_score over old_score."""
    if old_score <= 0:
        raise ValueError(f"old_score must be positive, got {old_score}")
    return 100.0 * (new_score - old_score) / old_score


def mean_gain(gains: Iterable[float]) -> float:
    """Arithmetic mean of a gain column."""
    return fmean(gains)


def round_half_up(value: float, ndigits: int = 0) -> float:
    """Table-style rounding: ties go away from zero, not to even."""
    exp = Decimal(1).scaleb(-ndigits)
    return float(Decimal(repr(value)).quantize(exp, rounding=ROUND_HALF_UP))


def session_counts(
    ref_rows: Iterable[TrainingRow],
    hyp_sentences: Iterable[TaggedSentence],
    cfg: MetricConfig = MetricConfig(),
) -> EvalCounts:
    """Flatten one session's reference rows and hypothesis sentences.

    The two word streams must match case-insensitively; any divergence
    signals an upstream alignment problem and raises AlignmentError.
    """
    ref_words: list[str] = []
    ref_tags: list[PunctTag] = []
    for row in ref_rows:
        ref_words.extend(w.lower() for w in row.words)
        ref_tags.extend(row.tags)
    hyp_words: list[str] = []
    hyp_tags: list[PunctTag] = []
    for sentence in hyp_sentences:
        hyp_words.extend(w.lower() for w in sentence.words)
        hyp_tags.extend(sentence.tags)

    for i, (rw, hw) in enumerate(zip(ref_words, hyp_words)):
        if rw != hw:
            raise AlignmentError(
                f"word streams diverge at position {i}: reference {rw!r} vs hypothesis {hw!r}"
            )
    if len(ref_words) != len(hyp_words):
        raise AlignmentError(
            f"word streams diverge at position {min(len(ref_words), len(hyp_words))}: "
            f"reference has {len(ref_words)} words, hypothesis {len(hyp_words)}"
        )
    return count_tags(ref_tags, hyp_tags, cfg)


def evaluate_session(
    ref_rows: Iterable[TrainingRow],
    hyp_sentences: Iterable[TaggedSentence],
    cfg: MetricConfig = MetricConfig(),
) -> EvalReport:
    """Full report for one hypothesis/reference pair."""
    return report_from_counts(session_counts(ref_rows, hyp_sentences, cfg), cfg)


def report_to_dict(report: EvalReport) -> dict:
    """Machine-readable form with full-precision floats."""
    return {
        "per_class": {
            tag.name: {
                "precision": s.precision,
                "recall": s.recall,
                "f1": s.f1,
                "ref_count": s.ref_count,
                "hyp_count": s.hyp_count,
                "tp_count": s.tp_count,
            }
            for tag, s in report.per_class.items()
        },
        "overall": {
            "precision": report.overall.precision,
            "recall": report.overall.recall,
            "f1": report.overall.f1,
            "ref_count": report.overall.ref_count,
            "hyp_count": report.overall.hyp_count,
            "tp_count": report.overall.tp_count,
        },
        "segmentation": {
            "precision": report.segmentation.precision,
            "recall": report.segmentation.recall,
            "f1": report.segmentation.f1,
            "f05": report.segmentation.f05,
            "ref_count": report.segmentation.ref_count,
            "hyp_count": report.segmentation.hyp_count,
            "tp_count": report.segmentation.tp_count,
        },
    }


def format_report(report: EvalReport, round_percent: bool = False) -> str:
    """Aligned text table; with round_percent, integer percents for publication-style reports."""

    def pct(x: float) -> str:
        if round_percent:
            return f"{round_half_up(100.0 * x):.0f}"
        return f"{100.0 * x:.2f}"

    width = 6 if round_percent else 8
    lines = []
    header = f"{'class':<14}{'P':>{width}}{'R':>{width}}{'F1':>{width}}{'F0.5':>{width}}"
    lines.append(header + f"{'ref':>8}{'hyp':>8}{'tp':>8}")
    for tag, s in report.per_class.items():
        lines.append(
            f"{tag.name:<14}{pct(s.precision):>{width}}{pct(s.recall):>{width}}"
            f"{pct(s.f1):>{width}}{'':>{width}}{s.ref_count:>8}{s.hyp_count:>8}{s.tp_count:>8}"
        )
    o = report.overall
    lines.append(
        f"{'OVERALL':<14}{pct(o.precision):>{width}}{pct(o.recall):>{width}}"
        f"{pct(o.f1):>{width}}{'':>{width}}{o.ref_count:>8}{o.hyp_count:>8}{o.tp_count:>8}"
    )
    s = report.segmentation
    lines.append(
        f"{'SEGMENTATION':<14}{pct(s.precision):>{width}}{pct(s.recall):>{width}}"
        f"{pct(s.f1):>{width}}{pct(s.f05):>{width}}{s.ref_count:>8}{s.hyp_count:>8}{s.tp_count:>8}"
    )
    return "\n".join(lines)
