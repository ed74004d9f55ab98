import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cyclocert.padic import (
    ResidueInt,
    decompose,
    teichmuller,
    teichmuller_table,
    valuation,
)


class TestTeichmuller:
    def test_identity_lift(self):
        assert teichmuller(1, 5, 2).value == 1

    def test_minus_one_lift(self):
        assert teichmuller(4, 5, 2).value == 24  # -1 lifts to -1

    def test_value_by_repeated_powering(self):
        # oracle: 2^5 = 32 ≡ 7 mod 25, and 7^4 ≡ 1 mod 25
        t = teichmuller(2, 5, 2)
        assert t.value == 7
        assert pow(7, 4, 25) == 1

    def test_rejects_multiples_of_p(self):
        with pytest.raises(ValueError):
            teichmuller(10, 5, 3)

    def test_rejects_small_or_even_p(self):
        for bad in (2, 3, 4, 9):
            with pytest.raises(ValueError):
                teichmuller(1, bad, 2)

    @settings(max_examples=60, deadline=None)
    @given(
        st.sampled_from([5, 7, 11, 13, 17]),
        st.integers(min_value=1, max_value=10**6),
        st.integers(min_value=1, max_value=10**6),
    )
    def test_multiplicative(self, p, a, b):
        if a % p == 0 or b % p == 0:
            return
        N = 4
        ta, tb = teichmuller(a, p, N), teichmuller(b, p, N)
        assert (ta * tb).value == teichmuller(a * b, p, N).value

    @settings(max_examples=40, deadline=None)
    @given(st.sampled_from([5, 7, 13]), st.integers(min_value=1, max_value=10**6))
    def test_congruent_to_input_mod_p(self, p, a):
        if a % p == 0:
            return
        assert teichmuller(a, p, 5).value % p == a % p

    @pytest.mark.parametrize("p", [5, 7, 11])
    def test_precision_reduction_consistent(self, p):
        for a in range(1, p):
            hi = teichmuller(a, p, 6)
            lo = teichmuller(a, p, 5)
            assert hi.value % p**5 == lo.value

    def test_table_matches_pointwise(self):
        for p in (5, 13, 37):
            table = teichmuller_table(p, 4)
            for a in range(1, p):
                assert table[a] == teichmuller(a, p, 4).value

    def test_is_torsion(self):
        for a in range(1, 13):
            if a % 13 == 0:
                continue
            t = teichmuller(a, 13, 4)
            assert pow(t.value, 12, 13**4) == 1


class TestDecompose:
    def test_trivial(self):
        d = decompose(1, 5, 1)
        assert (d.omega_part.value, d.index) == (1, 0)

    def test_one_plus_p(self):
        d = decompose(6, 5, 1)
        assert (d.omega_part.value, d.index) == (1, 1)

    def test_two_mod_25(self):
        # oracle: exhaustive search gives 7 * 6^2 = 252 ≡ 2 mod 25
        d = decompose(2, 5, 1)
        assert (d.omega_part.value, d.index) == (7, 2)
        assert 7 * 6**2 % 25 == 2

    @pytest.mark.parametrize("p", [5, 7, 11, 13])
    @pytest.mark.parametrize("n", [1, 2])
    def test_roundtrip_exhaustive(self, p, n):
        q = p ** (n + 1)
        for a in range(1, q):
            if a % p == 0:
                continue
            d = decompose(a, p, n)
            assert d.reconstruct() == a
            assert 0 <= d.index < p**n
            assert pow(d.omega_part.value, p - 1, q) == 1

    def test_rejects_multiples_of_p(self):
        with pytest.raises(ValueError):
            decompose(35, 7, 2)


class TestValuation:
    def test_integer(self):
        assert valuation(18, 3) == 2

    def test_unit_fraction(self):
        assert valuation(Fraction(1, 3), 5) == 0

    def test_negative_valuation(self):
        # 2730 = 2 * 3 * 5 * 7 * 13
        assert valuation(Fraction(-691, 2730), 7) == -1

    def test_zero(self):
        assert valuation(0, 5) == math.inf

    def test_rejects_composite(self):
        with pytest.raises(ValueError):
            valuation(10, 6)


class TestResidueInt:
    def test_normalizes_negative(self):
        assert ResidueInt(-1, 5, 2).value == 24

    def test_mixed_precision_is_error(self):
        x = ResidueInt(3, 5, 2)
        y = ResidueInt(3, 5, 3)
        with pytest.raises(ValueError):
            _ = x + y

    def test_mixed_prime_is_error(self):
        with pytest.raises(ValueError):
            _ = ResidueInt(1, 5, 2) * ResidueInt(1, 7, 2)

    def test_inverse(self):
        x = ResidueInt(3, 7, 3)
        assert (x * x.inverse()).value == 1

    def test_non_unit_inverse_fails(self):
        with pytest.raises(ZeroDivisionError):
            ResidueInt(7, 7, 2).inverse()

    def test_valuation(self):
        assert ResidueInt(50, 5, 4).padic_valuation() == 2
        assert ResidueInt(0, 5, 4).padic_valuation() == math.inf

    def test_rejects_p_below_5(self):
        with pytest.raises(ValueError):
            ResidueInt(1, 3, 2)
