"""Dynamic decoding window over a pluggable punctuation tagger.

The streaming decoder ignores upstream segment boundaries: it keeps a buffer
of words whose sentence membership is still open, re-tags buffer + incoming
segment on every step, and emits a sentence only once a following word shows
that the next sentence has begun. The remainder carries over as the new
buffer. A per-segment baseline mode (no carry-over, forced segment-final
punctuation) is provided for comparison.

State handling is functional: operations return the successor WindowState.
One state must not be shared across threads; distinct sessions are
independent.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

from .core import PunctTag, Segment, TaggedSentence, TaggedWord, Word
from .tagger import Tagger


class StreamOrderError(ValueError):
    """Segment arrived for the wrong session or out of sequence."""


@dataclass(frozen=True)
class DecoderConfig:
    max_buffer_words: int = 250
    emit_requires_following_word: bool = True
    forced_terminal: PunctTag = PunctTag.PERIOD
    capitalize_output: bool = True

    def __post_init__(self) -> None:
        if self.max_buffer_words < 1:
            raise ValueError(f"max_buffer_words must be >= 1, got {self.max_buffer_words}")
        if not self.forced_terminal.is_terminal:
            raise ValueError(f"forced_terminal must be PERIOD or QMARK, got {self.forced_terminal}")


@dataclass(frozen=True)
class WindowState:
    """Per-session decoder state: the unfinalized word buffer plus counters.

    Buffer words carry no tags; tags are recomputed on every step.
    """

    session_id: str
    buffer: tuple[Word, ...] = ()
    next_seq_expected: int = 0
    emitted_word_count: int = 0


@dataclass(frozen=True)
class EmissionBatch:
    sentences: tuple[TaggedSentence, ...] = ()
    is_flush: bool = False


def _tag_window(tagger: Tagger, window: Sequence[Word]) -> list[PunctTag]:
    tags = tagger.tag(window)
    if len(tags) != len(window):
        raise ValueError(
            f"tagger returned {len(tags)} tags for {len(window)} words"
        )
    return tags


def _sentence(words: Sequence[Word], tags: Sequence[PunctTag], forced: bool) -> TaggedSentence:
    return TaggedSentence(
        items=tuple(TaggedWord(w, t) for w, t in zip(words, tags)),
        forced=forced,
    )


def _close_forced(
    words: Sequence[Word], tags: Sequence[PunctTag], forced_terminal: PunctTag
) -> TaggedSentence:
    tags = list(tags)
    if not tags[-1].is_terminal:
        tags[-1] = forced_terminal
    return _sentence(words, tags, forced=True)


def push_segment(
    state: WindowState,
    segment: Segment,
    tagger: Tagger,
    cfg: DecoderConfig = DecoderConfig(),
) -> tuple[WindowState, EmissionBatch]:
    """Advance one step: absorb a segment, emit any completed sentences.

    The decoding window is buffer + segment. Every terminal tag marks a
    boundary; a boundary at the window's final position is not eligible while
    ``emit_requires_following_word`` is set, because no word of a following
    sentence has been seen yet. Eligible prefixes are emitted in order and the
    suffix becomes the new buffer. If that suffix would exceed
    ``max_buffer_words``, it is force-emitted whole as one forced sentence.
    """
    if segment.session_id != state.session_id:
        raise StreamOrderError(
            f"segment for session {segment.session_id!r} pushed into "
            f"session {state.session_id!r}"
        )
    if segment.seq_no != state.next_seq_expected:
        raise StreamOrderError(
            f"session {state.session_id!r}: expected seq_no "
            f"{state.next_seq_expected}, got {segment.seq_no}"
        )

    advanced = state.next_seq_expected + 1
    if not segment.words:
        # Nothing new: re-tagging the unchanged buffer cannot make a
        # previously ineligible boundary eligible (taggers are deterministic).
        return (
            WindowState(state.session_id, state.buffer, advanced, state.emitted_word_count),
            EmissionBatch(),
        )

    window: tuple[Word, ...] = state.buffer + segment.words
    tags = _tag_window(tagger, window)

    last = len(window) - 1
    sentences: list[TaggedSentence] = []
    start = 0
    for i, tag in enumerate(tags):
        if not tag.is_terminal:
            continue
        if i == last and cfg.emit_requires_following_word:
            continue
        sentences.append(_sentence(window[start : i + 1], tags[start : i + 1], forced=False))
        start = i + 1

    remainder = window[start:]
    if len(remainder) > cfg.max_buffer_words:
        sentences.append(_close_forced(remainder, tags[start:], cfg.forced_terminal))
        remainder = ()

    emitted = sum(len(s.items) for s in sentences)
    new_state = WindowState(
        session_id=state.session_id,
        buffer=remainder,
        next_seq_expected=advanced,
        emitted_word_count=state.emitted_word_count + emitted,
    )
    return new_state, EmissionBatch(tuple(sentences))


def flush(
    state: WindowState,
    tagger: Tagger,
    cfg: DecoderConfig = DecoderConfig(),
) -> tuple[WindowState, EmissionBatch]:
    """Finalize a session: emit everything left in the buffer.

    The final window position is now an eligible boundary; any trailing words
    without one are closed as a single forced sentence.
    """
    if not state.buffer:
        return state, EmissionBatch(is_flush=True)

    tags = _tag_window(tagger, state.buffer)
    sentences = _split_all(state.buffer, tags, cfg.forced_terminal)
    new_state = WindowState(
        session_id=state.session_id,
        buffer=(),
        next_seq_expected=state.next_seq_expected,
        emitted_word_count=state.emitted_word_count + len(state.buffer),
    )
    return new_state, EmissionBatch(tuple(sentences), is_flush=True)


def _split_all(
    words: Sequence[Word], tags: Sequence[PunctTag], forced_terminal: PunctTag
) -> list[TaggedSentence]:
    """Split at every terminal tag; force-close an unterminated remainder."""
    sentences: list[TaggedSentence] = []
    start = 0
    for i, tag in enumerate(tags):
        if tag.is_terminal:
            sentences.append(_sentence(words[start : i + 1], tags[start : i + 1], forced=False))
            start = i + 1
    if start < len(words):
        sentences.append(_close_forced(words[start:], tags[start:], forced_terminal))
    return sentences


def baseline_punctuate(
    segment: Segment,
    tagger: Tagger,
    cfg: DecoderConfig = DecoderConfig(),
) -> EmissionBatch:
    """Per-segment punctuation with no carry-over (the baseline system).

    Each segment is tagged in isolation and fully finalized; a segment whose
    tail lacks a predicted terminal is force-terminated, which is exactly the
    over-segmentation behavior the streaming decoder removes.
    """
    if not segment.words:
        return EmissionBatch()
    tags = _tag_window(tagger, segment.words)
    return EmissionBatch(tuple(_split_all(segment.words, tags, cfg.forced_terminal)))


Mode = Literal["streaming", "baseline"]


def run_session(
    segments: Iterable[Segment],
    tagger: Tagger,
    cfg: DecoderConfig = DecoderConfig(),
    mode: Mode = "streaming",
) -> list[TaggedSentence]:
    """Decode one session end to end and return all emitted sentences."""
    if mode not in ("streaming", "baseline"):
        raise ValueError(f"unknown mode {mode!r}")
    out: list[TaggedSentence] = []
    if mode == "baseline":
        for segment in segments:
            out.extend(baseline_punctuate(segment, tagger, cfg).sentences)
        return out

    state: WindowState | None = None
    for segment in segments:
        if state is None:
            state = WindowState(session_id=segment.session_id)
        state, batch = push_segment(state, segment, tagger, cfg)
        out.extend(batch.sentences)
    if state is not None:
        _, batch = flush(state, tagger, cfg)
        out.extend(batch.sentences)
    return out
