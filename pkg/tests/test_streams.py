import itertools

import pytest
from hypothesis import given, settings, strategies as st

from squareful import streams
from squareful.omega import OmegaParams, OmegaSystem
from squareful.squares import build_alphabet
from squareful.streams import (
    InfiniteWord,
    SourcePoisonedError,
    detect_period,
    expand,
    periodic_word,
    shift,
    sl_cycle,
    sqrt_stream,
)

S = "01010010"
ALPH = build_alphabet(1, 0)


@pytest.fixture()
def sys():
    return OmegaSystem(OmegaParams())


class TestInfiniteWord:
    def test_prefix_examples(self, sys):
        assert periodic_word(S).prefix(10) == "0101001001"
        assert shift(periodic_word(S), 3).prefix(5) == "10010"
        assert sys.big_gamma(1).prefix(8) == S

    def test_monotone_and_deterministic(self):
        src = periodic_word("0110")
        a = src.prefix(5)
        b = src.prefix(11)
        assert b.startswith(a)
        assert src.prefix(5) == a
        assert src.prefix(11) == b

    @given(st.lists(st.integers(0, 200), min_size=1, max_size=12))
    def test_window_matches_prefix(self, cuts):
        def chunks():
            for i in itertools.count():
                yield "01101" * (i % 3 + 1)

        src = InfiniteWord(chunks())
        ref = InfiniteWord(chunks())
        hi = max(cuts) + 50
        text = ref.prefix(hi)
        for c in cuts:
            assert src.window(c, c + 17) == text[c : c + 17]
        assert src.prefix(hi) == text

    def test_letter(self):
        src = periodic_word(S)
        assert [src.letter(i) for i in range(8)] == list(S)

    def test_as_json(self):
        payload = periodic_word(S).as_json(8)
        assert payload == {"descriptor": f"({S})^w", "prefix": S, "prefix_len": 8}


class TestShift:
    def test_composition(self):
        w = periodic_word("0110100")
        assert shift(shift(w, 3), 4).prefix(30) == shift(periodic_word("0110100"), 7).prefix(30)

    def test_full_period_shift(self):
        assert shift(periodic_word(S), len(S)).prefix(40) == periodic_word(S).prefix(40)

    def test_zero_shift_is_identity(self, sys):
        g = sys.big_gamma(1)
        assert shift(g, 0) is g


class TestSqrtStream:
    def test_fixed_words(self, sys):
        sbar = "1001001010010"
        assert sqrt_stream(ALPH, periodic_word(sbar)).prefix(3 * 13) == sbar * 3
        g = sys.big_gamma(1)
        assert sqrt_stream(ALPH, sys.big_gamma(1)).prefix(5000) == g.prefix(5000)

    def test_section3_image(self, sys):
        # T^4 of two S blocks: the square root starts with 010010
        prod = sl_cycle("S", sys.s_word, sys.l_word, 4)
        out = sqrt_stream(ALPH, expand(prod))
        assert out.prefix(6) == "010010"

    def test_laziness_bound(self, sys):
        for m in (1, 5, 50, 333, 2048):
            src = sys.big_gamma(1)
            out = sqrt_stream(ALPH, src)
            out.prefix(m)
            assert src.max_queried <= 2 * m + 2 * len("10010")

    def test_agrees_with_finite_root_on_square_prefixes(self, sys):
        from squareful.squares import factor_minimal_squares, sqrt_finite

        g = sys.big_gamma(1)
        text = g.prefix(400)
        roots, _ = factor_minimal_squares(ALPH, text)
        covered = sum(2 * len(r) for r in roots)
        out = sqrt_stream(ALPH, sys.big_gamma(1))
        assert out.prefix(covered // 2) == sqrt_finite(ALPH, text[:covered])

    def test_first_letter_preserved(self, sys):
        for src in (sys.big_gamma(1), sys.big_gamma(2), sys.s_omega(), sys.l_omega()):
            out = sqrt_stream(ALPH, src)
            assert out.prefix(1) == src.prefix(1)

    def test_poisoned_source(self):
        bad = periodic_word("11")  # no minimal square ever matches
        out = sqrt_stream(ALPH, bad)
        with pytest.raises(SourcePoisonedError) as exc:
            out.prefix(1)
        assert exc.value.position == 0
        with pytest.raises(SourcePoisonedError):
            out.prefix(1)
        assert out.prefix(0) == ""

    def test_poison_position_mid_stream(self):
        # valid square, then garbage: failure lands after the first square
        bad = InfiniteWord(iter(["0101" + "11", "1" * 64, "1" * 64]))
        out = sqrt_stream(ALPH, bad)
        with pytest.raises(SourcePoisonedError) as exc:
            out.prefix(3)
        assert exc.value.position == 4


class TestDetectPeriod:
    def test_examples(self, sys):
        assert detect_period(sys.s_omega(), 8, 48, conjugate_of=S)
        assert not detect_period(sys.big_gamma(1), 8, 48, conjugate_of=S)
        with pytest.raises(ValueError):
            detect_period(sys.s_omega(), 8, 16)

    def test_sqrt_cubed_of_section3_word(self, sys):
        prod = sl_cycle("S", sys.s_word, sys.l_word, 4)
        word = expand(prod)
        for _ in range(3):
            word = sqrt_stream(ALPH, word)
        assert detect_period(word, 8, 48, conjugate_of=S)
        assert word.prefix(8) == S


class TestSLProduct:
    def test_expand_examples(self, sys):
        assert expand(sl_cycle("S", sys.s_word, sys.l_word)).prefix(24) == sys.s_word * 3
        lss = expand(sl_cycle("LSS", sys.s_word, sys.l_word))
        assert lss.prefix(24) == sys.l_word + sys.s_word * 2
        g2 = sys.big_gamma(2)
        blocks = sys.gamma_star(2)
        prod = streams.SLProduct(blocks, 0, sys.s_word, sys.l_word)
        assert expand(prod).prefix(500) == g2.prefix(500)

    def test_validation(self, sys):
        with pytest.raises(ValueError):
            streams.SLProduct(periodic_word("S"), 9, sys.s_word, sys.l_word)
        with pytest.raises(ValueError):
            streams.SLProduct(periodic_word("S"), 0, sys.s_word, "01")
        with pytest.raises(ValueError):
            sl_cycle("SX", sys.s_word, sys.l_word)

    def test_block_words(self, sys):
        prod = sl_cycle("SL", sys.s_word, sys.l_word)
        assert prod.block(0) == sys.s_word
        assert prod.block(1) == sys.l_word
        assert prod.block(2) == sys.s_word
