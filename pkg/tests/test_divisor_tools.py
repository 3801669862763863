"""
Tests for the number-theoretic helpers.
"""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.divisor_tools import (
    DivisorPoset,
    dirichlet_convolution,
    dirichlet_psi,
    divisor_lattice,
    divisor_poset,
    divisors,
    euler_phi,
    factorize,
    gcd_of_set,
    is_gcd_closed,
    is_lcm_closed,
    is_multiple_closed,
    lcm_of_set,
    multiple_closure,
    nt_mobius,
    shifted,
    zeta,
)
from src.errors import EmptySetError, InputError, MissingValueError
from src.poset_core import PosetFunction


class TestArithmetic:
    """Test factorization and classical functions."""

    def test_factorize(self):
        assert factorize(1) == {}
        assert factorize(360) == {2: 3, 3: 2, 5: 1}
        assert factorize(97) == {97: 1}

    def test_factorize_rejects_non_positive(self):
        for bad in (0, -4, True, "6"):
            with pytest.raises(InputError):
                factorize(bad)

    def test_divisors(self):
        assert divisors(1) == [1]
        assert divisors(12) == [1, 2, 3, 4, 6, 12]

    def test_mobius_values(self):
        assert [nt_mobius(n) for n in (1, 2, 6, 12, 30)] == [1, -1, 1, 0, -1]

    def test_euler_phi(self):
        assert [euler_phi(n) for n in range(1, 7)] == [1, 1, 2, 2, 4, 2]

    @given(st.integers(min_value=1, max_value=500))
    def test_phi_sums_to_n(self, n):
        """Sum of phi(d) over d | n is n."""
        assert sum(euler_phi(d) for d in divisors(n)) == n

    def test_gcd_and_lcm(self):
        assert lcm_of_set([4, 6]) == 12
        assert gcd_of_set([4, 6]) == 2
        with pytest.raises(EmptySetError):
            lcm_of_set([])
        with pytest.raises(InputError):
            gcd_of_set([0, 3])


class TestClosures:
    """Test closure predicates on sets of integers."""

    def test_multiple_closure(self):
        assert multiple_closure([2, 3]) == [2, 3, 6]
        assert is_multiple_closed([2, 3, 6])
        assert is_multiple_closed([1, 2, 3, 6])
        assert not is_multiple_closed([2, 3])
        assert not is_multiple_closed([1, 6])

    def test_lcm_and_gcd_closed(self):
        assert is_lcm_closed([2, 3, 6])
        assert not is_lcm_closed([2, 3])
        assert is_gcd_closed([1, 2, 3])
        assert not is_gcd_closed([2, 3])


class TestDivisorPoset:
    """Test divisor posets."""

    def test_lattice_of_twelve(self):
        lattice = divisor_lattice(12)
        assert isinstance(lattice, DivisorPoset)
        assert lattice.carrier == (1, 2, 3, 4, 6, 12)
        assert lattice.leq(2, 12)
        assert not lattice.leq(4, 6)

    def test_poset_from_elements(self):
        poset = divisor_poset([6, 2, 3])
        assert poset.carrier == (2, 3, 6)
        assert poset.top() == 6
        assert poset.bottom() is None

    def test_rejects_duplicates_and_zero(self):
        with pytest.raises(InputError):
            divisor_poset([2, 2])
        with pytest.raises(InputError):
            divisor_poset([0, 1])


class TestDirichlet:
    """Test Dirichlet convolution and the shifted Psi term."""

    def test_zeta_squared_counts_divisors(self):
        assert dirichlet_convolution(zeta, zeta, 12) == 6

    def test_identity_times_mobius_is_phi(self):
        assert dirichlet_convolution(lambda n: n, nt_mobius, 12) == euler_phi(12)

    def test_shifted(self):
        assert shifted(lambda n: n, 3)(4) == 12

    def test_psi_term(self):
        """[zeta * (f_a mu)](n) for f = N."""
        assert dirichlet_psi(lambda k: k, 2, 3) == -4
        assert dirichlet_psi(lambda k: k, 1, 6) == 2

    def test_mapping_functions(self):
        f = PosetFunction({1: 1, 2: Fraction(1, 2)})
        assert dirichlet_convolution(f, zeta, 2) == Fraction(3, 2)
        with pytest.raises(MissingValueError):
            dirichlet_convolution(f, zeta, 3)
