"""The Verschiebung quotient two ways: closed form against brute enumeration.

Frozen expectations below were worked out by hand from the definition of
s(p, bound, d) and the splitting exponents; the brute-force route recomputes
them with no structure theory.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ktrunc.exactalg import GroupStructure
from ktrunc.wittsplit import (
    EnumerationBoundError,
    SplitParams,
    brute_force_quotient,
    h_function,
    predicted_quotient,
    s_function,
)


class TestSplitParams:
    def test_valuation_split(self):
        params = SplitParams(2, 1, 12)
        assert (params.u, params.e_prime) == (2, 3)
        assert SplitParams(3, 1, 9).u == 2
        assert SplitParams(3, 1, 9).e_prime == 1
        assert SplitParams(5, 2, 6).u == 0

    def test_validation(self):
        with pytest.raises(ValueError, match="not prime"):
            SplitParams(4, 1, 2)
        with pytest.raises(ValueError, match="positive"):
            SplitParams(2, 0, 2)
        with pytest.raises(ValueError, match="positive"):
            SplitParams(2, 1, 0)


class TestSFunction:
    def test_hand_values(self):
        assert s_function(2, 6, 1) == 3  # 1, 2, 4
        assert s_function(2, 6, 5) == 1
        assert s_function(2, 4, 3) == 1
        assert s_function(3, 9, 1) == 3  # 1, 3, 9
        assert s_function(3, 9, 2) == 2  # 2, 6
        assert s_function(7, 6, 7) == 0

    @given(
        st.sampled_from([2, 3, 5]),
        st.integers(1, 200),
        st.integers(1, 50),
    )
    @settings(max_examples=200, deadline=None)
    def test_counts_by_enumeration(self, p, bound, d):
        want = sum(1 for v in range(12) if p**v * d <= bound)
        assert s_function(p, bound, d) == want

    @given(st.sampled_from([2, 3]), st.integers(1, 100), st.integers(1, 20))
    @settings(max_examples=100, deadline=None)
    def test_monotone_in_bound(self, p, bound, d):
        assert s_function(p, bound, d) <= s_function(p, bound + 1, d)


class TestHFunction:
    def test_hand_values(self):
        # e = 3 is prime to 2, so u = 0 and only multiples of 3 are capped
        assert h_function(2, 2, 3, 1) == 3
        assert h_function(2, 2, 3, 3) == 0
        assert h_function(2, 2, 3, 5) == 1
        # e = 2 = 2^1: everything capped at u = 1
        assert h_function(2, 2, 2, 1) == 1
        assert h_function(2, 2, 2, 3) == 1
        # e = 4 = 2^2
        assert h_function(2, 1, 4, 1) == 2
        assert h_function(2, 1, 4, 3) == 1
        # e = 6 = 2 * 3: cap only at multiples of 3
        assert h_function(2, 1, 6, 1) == 3
        assert h_function(2, 1, 6, 3) == 1
        assert h_function(2, 1, 6, 5) == 1

    def test_rejects_weight_divisible_by_p(self):
        with pytest.raises(ValueError):
            h_function(2, 1, 2, 4)

    def test_order_identity(self):
        # sum of exponents over prime-to-p weights is r(e-1) exactly
        for p in (2, 3, 5):
            for e in range(1, 7):
                for r in range(1, 7):
                    total = sum(
                        h_function(p, r, e, m)
                        for m in range(1, r * e + 1)
                        if m % p
                    )
                    assert total == r * (e - 1), (p, e, r)


class TestPredictedQuotient:
    def test_hand_built_groups(self):
        assert predicted_quotient(SplitParams(2, 2, 2)).factors == (2, 2)
        assert predicted_quotient(SplitParams(2, 2, 3)).factors == (2, 8)
        assert predicted_quotient(SplitParams(2, 1, 3)).factors == (4,)
        assert predicted_quotient(SplitParams(3, 1, 3)).factors == (3, 3)
        assert predicted_quotient(SplitParams(5, 1, 5)).factors == (5, 5, 5, 5)
        assert predicted_quotient(SplitParams(2, 3, 2)).factors == (2, 2, 2)
        assert predicted_quotient(SplitParams(2, 1, 4)).factors == (2, 4)
        assert predicted_quotient(SplitParams(2, 1, 6)).factors == (2, 2, 8)

    def test_trivial_at_e_equal_one(self):
        for p, r in [(2, 3), (3, 2), (7, 1)]:
            assert predicted_quotient(SplitParams(p, r, 1)).is_trivial()

    def test_order(self):
        for p, r, e in [(2, 3, 4), (3, 2, 3), (5, 1, 4), (7, 2, 2)]:
            g = predicted_quotient(SplitParams(p, r, e))
            assert g.order() == p ** (r * (e - 1))


class TestBruteForce:
    def test_matches_prediction_on_small_grid(self):
        for p in (2, 3):
            for e in range(1, 5):
                for r in (1, 2):
                    if p ** (r * e) > 1 << 14:
                        continue
                    params = SplitParams(p, r, e)
                    assert brute_force_quotient(
                        params, enum_bound=1 << 14
                    ) == predicted_quotient(params), (p, r, e)

    def test_named_examples(self):
        assert brute_force_quotient(SplitParams(2, 2, 2)).factors == (2, 2)
        assert brute_force_quotient(SplitParams(2, 2, 3)).factors == (2, 8)

    def test_five_typical(self):
        got = brute_force_quotient(SplitParams(5, 1, 5))
        assert got == GroupStructure([5, 5, 5, 5])

    def test_bound_respected(self):
        with pytest.raises(EnumerationBoundError):
            brute_force_quotient(SplitParams(2, 5, 4), enum_bound=1 << 16)
        with pytest.raises(EnumerationBoundError):
            brute_force_quotient(SplitParams(2, 2, 2), enum_bound=8)
