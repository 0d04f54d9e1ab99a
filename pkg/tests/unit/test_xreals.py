"""Unit tests for extended real arithmetic."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from setlat.domain.exceptions import NoSamplesError, ValidationError
from setlat.domain.xreals import (
    NEG_INF,
    POS_INF,
    format_xreal,
    inf_add,
    inf_residual,
    liminf_tail,
    parse_xreal,
    xmax,
    xmin,
    xreal,
    xscale,
)

# integer-valued so that r - s <= t and r <= s + t agree exactly
finite = st.integers(min_value=-10**6, max_value=10**6).map(float)
extended = st.one_of(finite, st.just(POS_INF), st.just(NEG_INF))


class TestInfAddition:
    """Test the ⊕ operation."""

    def test_finite_sum(self):
        assert inf_add(1.5, 2.0) == 3.5

    def test_plus_infinity_absorbs(self):
        """+inf wins even against -inf."""
        assert inf_add(POS_INF, NEG_INF) == POS_INF
        assert inf_add(NEG_INF, POS_INF) == POS_INF

    def test_minus_infinity(self):
        assert inf_add(NEG_INF, 3.0) == NEG_INF

    @given(extended, extended)
    def test_commutative(self, r, s):
        assert inf_add(r, s) == inf_add(s, r)

    @given(extended)
    def test_zero_is_neutral(self, r):
        assert inf_add(r, 0.0) == r


class TestInfResidual:
    """Test the ∸ operation."""

    @pytest.mark.parametrize("r,s,expected", [
        (3.0, 1.0, 2.0),
        (1.0, POS_INF, NEG_INF),
        (NEG_INF, NEG_INF, NEG_INF),
        (2.0, NEG_INF, POS_INF),
        (POS_INF, NEG_INF, POS_INF),
        (POS_INF, 1.0, POS_INF),
        (NEG_INF, 1.0, NEG_INF),
        (POS_INF, POS_INF, NEG_INF),
    ])
    def test_table(self, r, s, expected):
        """Test every infinite combination."""
        assert inf_residual(r, s) == expected

    @given(extended, extended)
    def test_residuation_law(self, r, s):
        """r <= s ⊕ (r ∸ s), and r ∸ s is the least such t."""
        t = inf_residual(r, s)
        assert r <= inf_add(s, t)

    @given(extended, extended, extended)
    def test_galois_connection(self, r, s, t):
        """r ∸ s <= t iff r <= s ⊕ t."""
        assert (inf_residual(r, s) <= t) == (r <= inf_add(s, t))


class TestHelpers:
    """Test scaling, min/max, tails and formatting."""

    def test_xreal_rejects_nan(self):
        with pytest.raises(ValidationError):
            xreal(math.nan)

    def test_xscale(self):
        assert xscale(2.0, 0.5) == 1.0
        assert xscale(POS_INF, 3.0) == POS_INF
        assert xscale(NEG_INF, 3.0) == NEG_INF

    def test_xscale_rejects_nonpositive(self):
        with pytest.raises(ValidationError):
            xscale(1.0, 0.0)

    def test_empty_min_and_max(self):
        assert xmin([]) == POS_INF
        assert xmax([]) == NEG_INF

    def test_liminf_tail(self):
        samples = [(0.4, 5.0), (0.2, -1.0), (0.1, 2.0), (0.05, 3.0)]

        assert liminf_tail(samples, 2) == 2.0
        assert liminf_tail(samples, 3) == -1.0

    def test_liminf_tail_requires_samples(self):
        with pytest.raises(NoSamplesError):
            liminf_tail([], 1)

    def test_liminf_tail_window_range(self):
        with pytest.raises(ValidationError):
            liminf_tail([(0.1, 1.0)], 2)

    def test_liminf_tail_requires_decreasing_steps(self):
        with pytest.raises(ValidationError):
            liminf_tail([(0.1, 1.0), (0.2, 2.0)], 1)

    @pytest.mark.parametrize("value,text", [
        (POS_INF, "+inf"),
        (NEG_INF, "-inf"),
        (0.0, "0"),
        (-0.0, "0"),
        (1.5, "1.5"),
        (-2.0, "-2"),
    ])
    def test_format(self, value, text):
        assert format_xreal(value) == text

    @pytest.mark.parametrize("text,value", [
        ("+inf", POS_INF), ("inf", POS_INF), ("-inf", NEG_INF), (" 2.5 ", 2.5),
    ])
    def test_parse(self, text, value):
        assert parse_xreal(text) == value

    def test_parse_garbage(self):
        with pytest.raises(ValidationError):
            parse_xreal("abc")
