import pytest

from streampunct import (
    DataFormatError,
    GreedyVocabTokenizer,
    TrainingRow,
    WholeWordTokenizer,
    clean_paragraph,
    load_rows,
    save_rows,
    split_corpus,
    strip_and_tag,
    trim_row,
)

from conftest import T, tags_of, words_of


class TestCleanParagraph:
    def test_folding_and_whitespace_collapse(self):
        assert clean_paragraph("Hello,   world!!") == "Hello, world."

    def test_symbol_stripping(self):
        assert clean_paragraph("(see #4)") == "see 4"

    def test_empty_drops(self):
        assert clean_paragraph("") is None
        assert clean_paragraph("?!... ---") is None

    def test_semicolon_and_colon_fold_to_comma(self):
        assert clean_paragraph("first; second: third.") == "first, second, third."

    def test_smart_quotes_and_dashes(self):
        assert clean_paragraph("don’t stop—ever.") == "don't stop-ever."

    def test_mid_word_symbols_kept(self):
        assert clean_paragraph("the well-known u.s. case.") == "the well-known u.s. case."


class TestStripAndTag:
    def test_basic(self):
        row = strip_and_tag("Hello, world.")
        assert row.words == words_of("hello world")
        assert row.tags == tags_of("COMMA PERIOD")

    def test_question(self):
        row = strip_and_tag("Is it raining? Yes.")
        assert row.words == words_of("is it raining yes")
        assert row.tags == tags_of("O O QMARK PERIOD")

    def test_table_scenario(self):
        row = strip_and_tag("It can happen in New York City, right?")
        assert row.tags == tags_of("O O O O O O COMMA QMARK")

    def test_no_sentence_rejected(self):
        with pytest.raises(ValueError):
            strip_and_tag("just a fragment")
        with pytest.raises(ValueError):
            strip_and_tag("")

    def test_trailing_fragment_trimmed_to_sentence_end(self):
        row = strip_and_tag("Done. and then some")
        assert row.words == words_of("done")
        assert row.tags == tags_of("PERIOD")

    def test_mid_word_period_kept_in_word(self):
        row = strip_and_tag("the u.s. economy grew.")
        assert row.words == words_of("the u.s economy grew")
        assert row.tags == tags_of("O PERIOD O PERIOD")[:4]


class TestTrimRow:
    def test_under_budget_unchanged(self):
        row = strip_and_tag("One two three. Four five.")
        assert trim_row(row, WholeWordTokenizer(), 250) is row

    def test_trim_back_to_last_terminal(self):
        row = TrainingRow(words_of("a b c"), (T.PERIOD, T.O, T.PERIOD))
        trimmed = trim_row(row, WholeWordTokenizer(), 2)
        assert trimmed.words == words_of("a")
        assert trimmed.tags == (T.PERIOD,)

    def test_no_terminal_within_budget_drops(self):
        row = TrainingRow(words_of("a b c d"), (T.O, T.O, T.O, T.PERIOD))
        assert trim_row(row, WholeWordTokenizer(), 2) is None

    def test_subword_budget_counts_pieces(self):
        # Char fallback prices "it" at 2 and "can" at 3; "happen" matches the
        # vocab as 2 pieces. Budget 5 fits exactly the first two words.
        tok = GreedyVocabTokenizer(["hap", "pen"])
        row = TrainingRow(words_of("it can happen"), (T.PERIOD, T.PERIOD, T.PERIOD))
        assert [len(tok.tokenize(w)) for w in row.words] == [2, 3, 2]
        trimmed = trim_row(row, tok, 5)
        assert trimmed.words == words_of("it can")

    def test_bad_budget(self):
        row = TrainingRow(words_of("a"), (T.PERIOD,))
        with pytest.raises(ValueError):
            trim_row(row, WholeWordTokenizer(), 0)


class TestTrainingRowInvariants:
    def test_lengths_must_match(self):
        with pytest.raises(ValueError):
            TrainingRow(words_of("a b"), (T.PERIOD,))

    def test_must_end_terminal(self):
        with pytest.raises(ValueError):
            TrainingRow(words_of("a"), (T.COMMA,))

    def test_internal_terminals_allowed(self):
        row = TrainingRow(words_of("a b"), (T.PERIOD, T.QMARK))
        assert row.tags == (T.PERIOD, T.QMARK)


def make_rows(n):
    return [TrainingRow((f"w{i}",), (T.PERIOD,), source_id=f"r{i}") for i in range(n)]


class TestSplitCorpus:
    def test_ten_percent(self):
        train, validation = split_corpus(make_rows(100), seed=0)
        assert len(validation) == 10 and len(train) == 90

    def test_floor_edge(self):
        train, validation = split_corpus(make_rows(5), seed=0)
        assert len(validation) == 0 and len(train) == 5

    def test_partition_and_determinism(self):
        rows = make_rows(37)
        t1, v1 = split_corpus(rows, seed=3)
        t2, v2 = split_corpus(rows, seed=3)
        assert (t1, v1) == (t2, v2)
        assert sorted(r.source_id for r in t1 + v1) == sorted(r.source_id for r in rows)
        assert not {r.source_id for r in t1} & {r.source_id for r in v1}

    def test_seed_changes_selection(self):
        rows = make_rows(50)
        _, v1 = split_corpus(rows, seed=1)
        _, v2 = split_corpus(rows, seed=2)
        assert {r.source_id for r in v1} != {r.source_id for r in v2}


class TestRowIO:
    def test_round_trip(self, tmp_path):
        rows = [
            strip_and_tag("Hello, world.", source_id="p1"),
            strip_and_tag("Is it raining? Yes.", source_id="p2"),
        ]
        path = tmp_path / "rows.jsonl"
        save_rows(rows, path)
        assert load_rows(path) == rows

    def test_bad_json_rejected(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text("{not json}\n", encoding="utf-8")
        with pytest.raises(DataFormatError):
            load_rows(path)

    def test_missing_field_rejected(self, tmp_path):
        path = tmp_path / "missing.jsonl"
        path.write_text('{"words": ["a"]}\n', encoding="utf-8")
        with pytest.raises(DataFormatError):
            load_rows(path)

    def test_bad_tag_rejected(self, tmp_path):
        path = tmp_path / "badtag.jsonl"
        path.write_text('{"words": ["a"], "tags": ["STOP"]}\n', encoding="utf-8")
        with pytest.raises(DataFormatError):
            load_rows(path)
