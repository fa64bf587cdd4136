import io
import json
import random
import subprocess
import sys

import pytest

from external_tagger import StubModel, load_model, serve, tag_words, word_tags_from_pieces
from external_tagger.protocol import TAG_NAMES


def serve_lines(text: str) -> list[dict]:
    out = io.StringIO()
    serve(StubModel(), io.StringIO(text), out)
    return [json.loads(line) for line in out.getvalue().splitlines()]


class TestServeLoop:
    def test_sane_request(self):
        (resp,) = serve_lines('{"id": 1, "words": ["hello", "world"]}\n')
        assert resp == {"id": 1, "tags": ["O", "PERIOD"]}

    def test_empty_words(self):
        (resp,) = serve_lines('{"id": 2, "words": []}\n')
        assert resp == {"id": 2, "tags": []}

    def test_missing_words_field(self):
        (resp,) = serve_lines('{"id": 3}\n')
        assert resp == {"id": 3, "error": "missing field words"}

    def test_malformed_json_keeps_serving(self):
        responses = serve_lines('{oops\n{"id": 4, "words": ["ok"]}\n')
        assert "error" in responses[0]
        assert responses[1] == {"id": 4, "tags": ["PERIOD"]}

    def test_non_object_request(self):
        (resp,) = serve_lines("[1, 2]\n")
        assert "error" in resp

    def test_bad_words_type(self):
        (resp,) = serve_lines('{"id": 5, "words": "not-a-list"}\n')
        assert resp["id"] == 5 and "error" in resp

    def test_blank_lines_skipped(self):
        assert serve_lines("\n\n") == []

    def test_requests_processed_in_order(self):
        text = "".join(f'{{"id": {i}, "words": ["w{i}"]}}\n' for i in range(20))
        responses = serve_lines(text)
        assert [r["id"] for r in responses] == list(range(20))


class TestWordTagsFromPieces:
    def test_last_piece_wins(self):
        assert word_tags_from_pieces([2, 1], ["O", "COMMA", "PERIOD"]) == ["COMMA", "PERIOD"]

    def test_count_mismatch(self):
        with pytest.raises(ValueError):
            word_tags_from_pieces([2], ["O"])

    def test_zero_count(self):
        with pytest.raises(ValueError):
            word_tags_from_pieces([0, 1], ["O"])


class TestStubModel:
    def test_character_pieces_and_final_period(self):
        counts, tags = StubModel().tag_pieces(["ab", "c"])
        assert counts == [2, 1]
        assert tags == ["O", "O", "PERIOD"]

    def test_word_level_view(self):
        assert tag_words(StubModel(), ["hello", "world"]) == ["O", "PERIOD"]
        assert tag_words(StubModel(), []) == []

    def test_deterministic(self):
        words = ["a", "bb", "ccc"]
        assert tag_words(StubModel(), words) == tag_words(StubModel(), words)


class TestLoadModel:
    def test_stub_spec(self):
        assert isinstance(load_model("stub"), StubModel)

    def test_unknown_spec(self):
        with pytest.raises(ValueError):
            load_model("magic")

    def test_bad_model_spec_exits_nonzero_before_serving(self):
        proc = subprocess.run(
            [sys.executable, "-m", "external_tagger", "--model", "magic"],
            input="", capture_output=True, text=True, timeout=60,
        )
        assert proc.returncode != 0
        assert proc.stdout == ""


class TestProtocolConformance:
    def test_thousand_randomized_requests(self):
        """Adapter answers 1,000 randomized requests id- and length-matched."""
        rng = random.Random(2024)
        proc = subprocess.Popen(
            [sys.executable, "-m", "external_tagger", "--model", "stub"],
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            bufsize=1,
        )
        try:
            for _ in range(1000):
                request_id = rng.randrange(10**9)
                n_words = rng.randint(0, 12)
                words = [
                    "".join(rng.choice("abcdefghij") for _ in range(rng.randint(1, 8)))
                    for _ in range(n_words)
                ]
                proc.stdin.write(json.dumps({"id": request_id, "words": words}) + "\n")
                proc.stdin.flush()
                response = json.loads(proc.stdout.readline())
                assert response["id"] == request_id
                assert "error" not in response
                assert len(response["tags"]) == len(words)
                assert all(t in TAG_NAMES for t in response["tags"])
        finally:
            proc.stdin.close()
            proc.wait(timeout=10)
