"""Adapter-behind-the-decoder integration.

Drives the decoder CLI with this adapter as its --external tagger and checks
the output matches an in-process tagger with the stub's behavior (sentence
ends at end of input), word for word and tag for tag.
"""

import json
import subprocess
import sys

SEGMENTS = [
    {"session_id": "t1", "seq_no": 0, "words": ["it", "can", "happen"]},
    {"session_id": "t1", "seq_no": 1, "words": ["in", "new", "york", "city", "right", "so"]},
]


class EndOfInputTagger:
    """Word-level twin of the stub backend: PERIOD on the last word only."""

    def tag(self, words):
        from streampunct import PunctTag

        tags = [PunctTag.O] * len(words)
        if tags:
            tags[-1] = PunctTag.PERIOD
        return tags


def expected_records() -> list[dict]:
    from streampunct import Segment, render_sentence, run_session

    segments = [Segment(r["session_id"], r["seq_no"], tuple(r["words"])) for r in SEGMENTS]
    out = run_session(segments, EndOfInputTagger(), mode="streaming")
    return [
        {
            "session_id": "t1",
            "text": render_sentence(s, True),
            "words": [str(w) for w in s.words],
            "tags": [t.name for t in s.tags],
            "forced": s.forced,
        }
        for s in out
    ]


def test_decoder_with_external_stub_matches_in_process_tagger(tmp_path):
    records = tmp_path / "records.jsonl"
    records.write_text(
        "".join(json.dumps(r) + "\n" for r in SEGMENTS), encoding="utf-8"
    )
    adapter_cmd = f"{sys.executable} -m external_tagger --model stub"
    proc = subprocess.run(
        [
            sys.executable, "-m", "streampunct.cli", "run", str(records),
            "--mode", "streaming", "--external", adapter_cmd,
        ],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    got = [json.loads(line) for line in proc.stdout.splitlines()]
    assert got == expected_records()
    # The stub never predicts a boundary before the end of input, so the
    # whole stream arrives as one naturally terminated sentence at flush.
    assert len(got) == 1
    assert got[0]["text"] == "It can happen in new york city right so."
    assert got[0]["forced"] is False


def test_baseline_mode_with_external_stub(tmp_path):
    records = tmp_path / "records.jsonl"
    records.write_text(
        "".join(json.dumps(r) + "\n" for r in SEGMENTS), encoding="utf-8"
    )
    adapter_cmd = f"{sys.executable} -m external_tagger --model stub"
    proc = subprocess.run(
        [
            sys.executable, "-m", "streampunct.cli", "run", str(records),
            "--mode", "baseline", "--external", adapter_cmd,
        ],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    got = [json.loads(line) for line in proc.stdout.splitlines()]
    # Stub closes each segment naturally, one sentence per segment.
    assert [r["text"] for r in got] == [
        "It can happen.",
        "In new york city right so.",
    ]
    assert [r["forced"] for r in got] == [False, False]
