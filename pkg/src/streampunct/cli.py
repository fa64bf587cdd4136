"""Command-line pipeline: prepare, train, simulate, run, eval.

All stream interfaces are line-delimited JSON (UTF-8, LF), one record per
line, so stages compose over pipes and leave replayable artifacts:

    streampunct simulate text.txt --policy break:0.3 |
    streampunct run --mode streaming --model model.txt |
    streampunct eval rows.jsonl -

Exit codes: 0 success, 2 usage error, 3 data/format error, 4 stream-order
error.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import ExitStack, contextmanager
from pathlib import Path

from .core import (
    GreedyVocabTokenizer,
    PunctTag,
    Segment,
    TaggedSentence,
    TaggedWord,
    WholeWordTokenizer,
    Word,
    render_sentence,
)
from .evaluation import (
    AlignmentError,
    EvalCounts,
    MetricConfig,
    format_report,
    report_from_counts,
    report_to_dict,
    session_counts,
)
from .external import ExternalTaggerError, SubprocessTagger
from .pipeline import (
    DataFormatError,
    TrainingRow,
    clean_paragraph,
    load_rows,
    row_to_record,
    save_rows,
    split_corpus,
    strip_and_tag,
    trim_row,
)
from .simulator import DEFAULT_MAX_SEGMENT_WORDS, parse_policy, simulate_segments
from .streaming import (
    DecoderConfig,
    StreamOrderError,
    WindowState,
    baseline_punctuate,
    flush,
    push_segment,
)
from .tagger import (
    ModelFormatError,
    OracleTagger,
    model_load,
    model_save,
    perceptron_train,
    token_accuracy,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_ORDER = 4


class UsageError(Exception):
    pass


def _log(message: str) -> None:
    print(message, file=sys.stderr)


@contextmanager
def _open_in(path: str):
    if path == "-":
        yield sys.stdin
    else:
        with open(path, encoding="utf-8") as fh:
            yield fh


@contextmanager
def _open_out(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _write_record(fh, obj: dict) -> None:
    fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


# ---------------------------------------------------------------- prepare


def cmd_prepare(args: argparse.Namespace) -> int:
    tok = GreedyVocabTokenizer.from_file(args.vocab) if args.vocab else WholeWordTokenizer()
    rows: list[TrainingRow] = []
    dropped = {"no_content": 0, "no_sentence": 0, "over_budget": 0}
    paragraphs = 0
    with _open_in(args.corpus) as fh:
        for lineno, line in enumerate(fh, start=1):
            paragraphs += 1
            cleaned = clean_paragraph(line.rstrip("\n"))
            if cleaned is None:
                dropped["no_content"] += 1
                continue
            try:
                row = strip_and_tag(cleaned, source_id=f"p{lineno:06d}")
            except ValueError:
                dropped["no_sentence"] += 1
                continue
            trimmed = trim_row(row, tok, args.max_tokens)
            if trimmed is None:
                dropped["over_budget"] += 1
                continue
            rows.append(trimmed)

    if not rows:
        raise DataFormatError(f"{args.corpus}: zero surviving rows")

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.no_split:
        save_rows(rows, out_dir / "rows.jsonl")
        files = {"rows": len(rows)}
    else:
        train, validation = split_corpus(rows, args.seed)
        save_rows(train, out_dir / "train.jsonl")
        save_rows(validation, out_dir / "validation.jsonl")
        files = {"train": len(train), "validation": len(validation)}

    tag_counts = {tag.name: 0 for tag in PunctTag}
    word_total = 0
    for row in rows:
        word_total += len(row.words)
        for tag in row.tags:
            tag_counts[tag.name] += 1
    stats = {
        "paragraphs": paragraphs,
        "rows": len(rows),
        "words": word_total,
        "dropped": dropped,
        "tag_distribution": tag_counts,
        **{f"{name}_rows": count for name, count in files.items()},
    }
    (out_dir / "stats.json").write_text(
        json.dumps(stats, indent=2) + "\n", encoding="utf-8"
    )
    _log(f"prepare: {paragraphs} paragraphs -> {len(rows)} rows ({word_total} words)")
    for name, count in files.items():
        _log(f"prepare: {name}: {count} rows")
    _log(f"prepare: dropped {dropped}")
    _log(f"prepare: tags {tag_counts}")
    return EXIT_OK


# ------------------------------------------------------------------ train


def cmd_train(args: argparse.Namespace) -> int:
    if args.epochs < 1:
        raise UsageError(f"--epochs must be >= 1, got {args.epochs}")
    rows = load_rows(args.rows)
    if not rows:
        raise DataFormatError(f"{args.rows}: no training rows")
    model = perceptron_train(
        [(row.words, row.tags) for row in rows],
        epochs=args.epochs,
        seed=args.seed,
        window_before=args.window_before,
        window_after=args.window_after,
        vocab_truncation=args.vocab_truncation,
    )
    model_save(model, args.model_out)
    _log(
        f"train: {len(rows)} rows, {args.epochs} epochs -> "
        f"{len(model.weights)} features -> {args.model_out}"
    )
    if args.validate:
        held_out = load_rows(args.validate)
        acc = token_accuracy(model, [(row.words, row.tags) for row in held_out])
        _log(f"train: validation token accuracy {acc:.4f} ({len(held_out)} rows)")
    return EXIT_OK


# --------------------------------------------------------------- simulate


def cmd_simulate(args: argparse.Namespace) -> int:
    with _open_in(args.input) as fh:
        if args.rows:
            rows = load_rows(fh)
        else:
            rows = []
            for lineno, line in enumerate(fh, start=1):
                cleaned = clean_paragraph(line.rstrip("\n"))
                if cleaned is None:
                    continue
                try:
                    rows.append(strip_and_tag(cleaned, source_id=f"line-{lineno:06d}"))
                except ValueError:
                    _log(f"simulate: skipping line {lineno}: no complete sentence")
    if not rows:
        raise DataFormatError(f"{args.input}: no usable input lines")

    if args.emit_rows:
        save_rows(rows, args.emit_rows)

    with _open_out(args.out) as out:
        for i, row in enumerate(rows):
            policy = parse_policy(
                args.policy, seed=args.seed + i, max_segment_words=args.max_segment_words
            )
            session_id = f"{args.session_prefix}{i:06d}"
            for segment in simulate_segments(row.words, policy, session_id, tags=row.tags):
                _write_record(
                    out,
                    {
                        "session_id": segment.session_id,
                        "seq_no": segment.seq_no,
                        "words": [str(w) for w in segment.words],
                    },
                )
    return EXIT_OK


# -------------------------------------------------------------------- run


def _parse_stream_record(obj: object, lineno: int) -> Segment:
    if not isinstance(obj, dict):
        raise DataFormatError(f"line {lineno}: stream record must be a JSON object")
    for key in ("session_id", "seq_no", "words"):
        if key not in obj:
            raise DataFormatError(f"line {lineno}: stream record missing field {key!r}")
    if not isinstance(obj["session_id"], str):
        raise DataFormatError(f"line {lineno}: session_id must be a string")
    if not isinstance(obj["seq_no"], int) or isinstance(obj["seq_no"], bool):
        raise DataFormatError(f"line {lineno}: seq_no must be an integer")
    if not isinstance(obj["words"], list):
        raise DataFormatError(f"line {lineno}: words must be a list")
    try:
        return Segment(
            session_id=obj["session_id"],
            seq_no=obj["seq_no"],
            words=tuple(Word(w) for w in obj["words"]),
        )
    except (TypeError, ValueError) as exc:
        raise DataFormatError(f"line {lineno}: bad stream record: {exc}") from None


def _sentence_record(session_id: str, sentence: TaggedSentence, capitalize: bool) -> dict:
    return {
        "session_id": session_id,
        "text": render_sentence(sentence, capitalize),
        "words": [str(w) for w in sentence.words],
        "tags": [t.name for t in sentence.tags],
        "forced": sentence.forced,
    }


class _OraclePool:
    """Per-session oracles paired with reference rows in arrival order."""

    def __init__(self, rows: list[TrainingRow]):
        self._rows = rows
        self._taggers: list[OracleTagger] = []

    def for_session(self, index: int, session_id: str) -> OracleTagger:
        if index >= len(self._rows):
            raise DataFormatError(
                f"session {session_id!r} is session #{index + 1} but the oracle "
                f"reference has only {len(self._rows)} rows"
            )
        while len(self._taggers) <= index:
            row = self._rows[len(self._taggers)]
            self._taggers.append(OracleTagger(row.words, row.tags))
        return self._taggers[index]


def cmd_run(args: argparse.Namespace) -> int:
    cfg = DecoderConfig(
        max_buffer_words=args.max_buffer_words,
        emit_requires_following_word=not args.allow_final_boundary,
        forced_terminal=PunctTag.from_name(args.forced_terminal),
        capitalize_output=not args.no_capitalize,
    )

    with ExitStack() as stack:
        oracle_pool: _OraclePool | None = None
        shared_tagger = None
        if args.model:
            shared_tagger = model_load(args.model)
        elif args.oracle:
            oracle_pool = _OraclePool(load_rows(args.oracle))
        else:
            shared_tagger = stack.enter_context(SubprocessTagger(args.external))

        states: dict[str, WindowState] = {}
        session_order: list[str] = []
        session_index: dict[str, int] = {}
        emitted: dict[str, list[TaggedSentence]] = {}
        next_seq: dict[str, int] = {}

        def tagger_for(session_id: str):
            if oracle_pool is not None:
                return oracle_pool.for_session(session_index[session_id], session_id)
            return shared_tagger

        in_fh = stack.enter_context(_open_in(args.records))
        for lineno, line in enumerate(in_fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"line {lineno}: invalid JSON: {exc}") from None
            segment = _parse_stream_record(obj, lineno)
            sid = segment.session_id
            if sid not in emitted:
                session_index[sid] = len(session_order)
                session_order.append(sid)
                emitted[sid] = []
                states[sid] = WindowState(session_id=sid)
                next_seq[sid] = 0
            if segment.seq_no != next_seq[sid]:
                raise StreamOrderError(
                    f"line {lineno}: session {sid!r} expected seq_no "
                    f"{next_seq[sid]}, got record {line.strip()}"
                )
            next_seq[sid] += 1
            if args.mode == "streaming":
                states[sid], batch = push_segment(states[sid], segment, tagger_for(sid), cfg)
            else:
                batch = baseline_punctuate(segment, tagger_for(sid), cfg)
            emitted[sid].extend(batch.sentences)

        if args.mode == "streaming":
            for sid in session_order:
                _, batch = flush(states[sid], tagger_for(sid), cfg)
                emitted[sid].extend(batch.sentences)

        out_fh = stack.enter_context(_open_out(args.out))
        for sid in session_order:
            for sentence in emitted[sid]:
                _write_record(out_fh, _sentence_record(sid, sentence, cfg.capitalize_output))
    return EXIT_OK


# ------------------------------------------------------------------- eval


def _load_sentence_records(path: str) -> dict[str, list[TaggedSentence]]:
    """Group hypothesis sentences by session, in first-seen order."""
    groups: dict[str, list[TaggedSentence]] = {}
    with _open_in(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"line {lineno}: invalid JSON: {exc}") from None
            if not isinstance(obj, dict):
                raise DataFormatError(f"line {lineno}: sentence record must be a JSON object")
            try:
                words = [Word(w) for w in obj["words"]]
                tags = [PunctTag.from_name(t) for t in obj["tags"]]
                session_id = obj["session_id"]
                forced = bool(obj.get("forced", False))
                sentence = TaggedSentence(
                    items=tuple(TaggedWord(w, t) for w, t in zip(words, tags)),
                    forced=forced,
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise DataFormatError(f"line {lineno}: bad sentence record: {exc}") from None
            if len(words) != len(tags):
                raise DataFormatError(f"line {lineno}: words/tags length mismatch")
            groups.setdefault(session_id, []).append(sentence)
    return groups


def cmd_eval(args: argparse.Namespace) -> int:
    ref_rows = load_rows(args.ref)
    groups = _load_sentence_records(args.hyp)
    cfg = MetricConfig()

    if len(groups) == len(ref_rows):
        # One reference row per session, paired in order.
        counts = EvalCounts()
        for (session_id, sentences), row in zip(groups.items(), ref_rows):
            try:
                counts.add(session_counts([row], sentences, cfg))
            except AlignmentError as exc:
                raise AlignmentError(f"session {session_id!r}: {exc}") from None
    else:
        flat = [s for sentences in groups.values() for s in sentences]
        counts = session_counts(ref_rows, flat, cfg)

    report = report_from_counts(counts, cfg)
    print(format_report(report, round_percent=args.round))
    if args.json:
        Path(args.json).write_text(
            json.dumps(report_to_dict(report), indent=2) + "\n", encoding="utf-8"
        )
    return EXIT_OK


# ----------------------------------------------------------------- parser


def _policy_text(text: str) -> str:
    try:
        parse_policy(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="streampunct",
        description="Streaming punctuation pipeline: prepare, train, simulate, run, eval.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prepare", help="convert a punctuated corpus into training rows")
    p.add_argument("corpus", help="input text, one paragraph per line ('-' for stdin)")
    p.add_argument("out_dir", help="output directory for row files and stats")
    p.add_argument("--max-tokens", type=int, default=250, help="subword budget per row")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--vocab", help="subword vocabulary file (default: whole-word pieces)")
    p.add_argument("--no-split", action="store_true", help="write one rows.jsonl, no split")
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("train", help="train the perceptron tagger on a rows file")
    p.add_argument("rows")
    p.add_argument("model_out")
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--window-before", type=int, default=4)
    p.add_argument("--window-after", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--vocab-truncation", type=int, default=None)
    p.add_argument("--validate", help="rows file for held-out token accuracy")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("simulate", help="cut text into decoder-like stream records")
    p.add_argument("input", nargs="?", default="-", help="text or rows file ('-' for stdin)")
    p.add_argument("--policy", required=True, type=_policy_text,
                   help="fixed:<k>, break:<p>, or noise:<p_in>,<p_miss>")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--session-prefix", default="s")
    p.add_argument("--max-segment-words", type=int, default=DEFAULT_MAX_SEGMENT_WORDS)
    p.add_argument("--rows", action="store_true", help="input is a rows file, not raw text")
    p.add_argument("--emit-rows", help="also write the derived reference rows here")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("run", help="decode stream records into sentence records")
    p.add_argument("records", nargs="?", default="-", help="stream records ('-' for stdin)")
    p.add_argument("--mode", required=True, choices=("streaming", "baseline"))
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--model", help="perceptron model file")
    source.add_argument("--oracle", help="reference rows file; row i serves session i")
    source.add_argument("--external", help="command for an external tagger process")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--max-buffer-words", type=int, default=250)
    p.add_argument("--allow-final-boundary", action="store_true",
                   help="emit at a boundary even with no following word yet")
    p.add_argument("--forced-terminal", choices=("PERIOD", "QMARK"), default="PERIOD")
    p.add_argument("--no-capitalize", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("eval", help="score sentence records against reference rows")
    p.add_argument("ref", help="reference rows file")
    p.add_argument("hyp", nargs="?", default="-", help="sentence records ('-' for stdin)")
    p.add_argument("--round", action="store_true", help="print integer percents")
    p.add_argument("--json", help="also write the full-precision report here")
    p.set_defaults(func=cmd_eval)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        _log(f"usage error: {exc}")
        return EXIT_USAGE
    except StreamOrderError as exc:
        _log(f"stream-order error: {exc}")
        return EXIT_ORDER
    except (DataFormatError, AlignmentError, ModelFormatError, ExternalTaggerError) as exc:
        _log(f"error: {exc}")
        return EXIT_DATA
    except OSError as exc:
        _log(f"error: {exc}")
        return EXIT_DATA
    except ValueError as exc:
        _log(f"error: {exc}")
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
