import pytest

from streampunct import SegmentPolicy, parse_policy, simulate_segments

from conftest import T, tags_of, words_of


class TestPolicy:
    def test_parse_forms(self):
        assert parse_policy("fixed:3").k == 3
        assert parse_policy("break:0.15").p == 0.15
        noise = parse_policy("noise:0.3,0.1")
        assert (noise.p_break_inside, noise.p_miss_boundary) == (0.3, 0.1)

    @pytest.mark.parametrize("bad", ["chunk:3", "fixed", "break:two", "noise:0.3", "fixed:0"])
    def test_parse_rejects_malformed(self, bad):
        with pytest.raises(ValueError) as exc_info:
            parse_policy(bad)
        assert "fixed" in str(exc_info.value)  # message names valid kinds

    def test_probability_range_checked(self):
        with pytest.raises(ValueError):
            SegmentPolicy.break_prob(1.5)


class TestSimulateSegments:
    def test_fixed_sizes(self):
        segs = simulate_segments(words_of("a b c d e f g"), SegmentPolicy.fixed(3), "s")
        assert [len(s.words) for s in segs] == [3, 3, 1]
        assert [s.seq_no for s in segs] == [0, 1, 2]

    def test_break_zero_single_segment(self):
        words = words_of("a b c d")
        segs = simulate_segments(words, SegmentPolicy.break_prob(0.0), "s")
        assert len(segs) == 1 and segs[0].words == words

    def test_deterministic_per_seed(self):
        words = tuple(f"w{i}" for i in range(200))
        policy = SegmentPolicy.break_prob(0.3, seed=11)
        a = simulate_segments(words, policy, "s")
        b = simulate_segments(words, policy, "s")
        assert [s.words for s in a] == [s.words for s in b]

    def test_worst_case_slow_speaker(self):
        words = words_of("it can happen in new york city right")
        tags = tags_of("O O O O O O COMMA QMARK")
        policy = SegmentPolicy.boundary_noise(1.0, 0.0)
        segs = simulate_segments(words, policy, "s", tags=tags)
        assert [len(s.words) for s in segs] == [1] * 8

    def test_noise_never_misses_boundary(self):
        words = words_of("a b c d e f")
        tags = tags_of("O O PERIOD O O PERIOD")
        policy = SegmentPolicy.boundary_noise(0.0, 0.0, seed=5)
        segs = simulate_segments(words, policy, "s", tags=tags)
        assert [list(map(str, s.words)) for s in segs] == [["a", "b", "c"], ["d", "e", "f"]]

    def test_noise_requires_tags(self):
        with pytest.raises(ValueError):
            simulate_segments(words_of("a"), SegmentPolicy.boundary_noise(0.5, 0.5), "s")

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError):
            simulate_segments((), SegmentPolicy.fixed(1), "s")

    def test_max_segment_words_enforced(self):
        words = tuple(f"w{i}" for i in range(300))
        segs = simulate_segments(words, SegmentPolicy.break_prob(0.0, max_segment_words=120), "s")
        assert [len(s.words) for s in segs] == [120, 120, 60]

    def test_word_conservation(self):
        words = tuple(f"w{i}" for i in range(57))
        for policy in (SegmentPolicy.fixed(4), SegmentPolicy.break_prob(0.4, seed=2)):
            segs = simulate_segments(words, policy, "s")
            assert tuple(w for s in segs for w in s.words) == words
            assert all(s.words for s in segs)
