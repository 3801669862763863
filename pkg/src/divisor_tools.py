"""
Number-theoretic layer: divisor lattices, gcd/lcm, the number-theoretic Möbius
function, shifted functions f_a and Dirichlet-convolution evaluation.
"""

import logging
import math
from collections.abc import Mapping
from fractions import Fraction
from functools import reduce
from itertools import combinations
from typing import Any, Callable, Dict, Iterable, List, Sequence, Union

from src.errors import EmptySetError, InputError, MissingValueError
from src.poset_core import FinitePoset

logger = logging.getLogger(__name__)

ArithmeticalFunction = Union[Mapping, Callable[[int], Any]]


class DivisorPoset(FinitePoset):
    """Finite set of positive integers ordered by divisibility.

    Ascending numeric order is a linear extension, so the carrier is kept sorted.
    """

    def __init__(self, elements: Iterable[int]):
        numbers = _positive_integers(elements)
        if len(set(numbers)) != len(numbers):
            raise InputError("divisor poset elements must be distinct")
        carrier = sorted(numbers)
        up = [[j for j in range(i, len(carrier)) if carrier[j] % carrier[i] == 0]
              for i in range(len(carrier))]
        super().__init__(carrier, up)

    def subposet(self, elements: Iterable[int]) -> "DivisorPoset":
        chosen = set(elements)
        for element in chosen:
            self.index(element)
        return DivisorPoset(chosen)


def _positive_integers(values: Iterable[Any]) -> List[int]:
    numbers = list(values)
    if not numbers:
        raise EmptySetError("expected a nonempty set of positive integers")
    for value in numbers:
        if isinstance(value, bool) or not isinstance(value, int) or value < 1:
            raise InputError(f"expected a positive integer, got {value!r}")
    return numbers


def divisor_lattice(n: int) -> DivisorPoset:
    """All divisors of n under divisibility."""
    return DivisorPoset(divisors(n))


def divisor_poset(elements: Iterable[int]) -> DivisorPoset:
    return DivisorPoset(elements)


def lcm_of_set(values: Sequence[int]) -> int:
    return reduce(math.lcm, _positive_integers(values))


def gcd_of_set(values: Sequence[int]) -> int:
    return reduce(math.gcd, _positive_integers(values))


def factorize(n: int) -> Dict[int, int]:
    """Prime factorization by trial division."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InputError(f"expected a positive integer, got {n!r}")
    factors: Dict[int, int] = {}
    candidate = 2
    while candidate * candidate <= n:
        while n % candidate == 0:
            factors[candidate] = factors.get(candidate, 0) + 1
            n //= candidate
        candidate += 1 if candidate == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def divisors(n: int) -> List[int]:
    """Divisors of n in ascending order."""
    result = [1]
    for prime, exponent in factorize(n).items():
        result = [d * prime ** e for d in result for e in range(exponent + 1)]
    return sorted(result)


def nt_mobius(n: int) -> int:
    factors = factorize(n)
    if any(exponent > 1 for exponent in factors.values()):
        return 0
    return -1 if len(factors) % 2 else 1


def euler_phi(n: int) -> int:
    result = n
    for prime in factorize(n):
        result = result // prime * (prime - 1)
    return result


def multiple_closure(values: Sequence[int]) -> List[int]:
    """M_S: every y dividing lcm S that is a multiple of some member of S."""
    numbers = _positive_integers(values)
    top = lcm_of_set(numbers)
    return [y for y in divisors(top) if any(y % x == 0 for x in numbers)]


def is_multiple_closed(values: Sequence[int]) -> bool:
    return set(multiple_closure(values)) == set(values)


def is_lcm_closed(values: Sequence[int]) -> bool:
    present = set(_positive_integers(values))
    return all(math.lcm(a, b) in present for a, b in combinations(present, 2))


def is_gcd_closed(values: Sequence[int]) -> bool:
    present = set(_positive_integers(values))
    return all(math.gcd(a, b) in present for a, b in combinations(present, 2))


# Arithmetical functions

def zeta(_n: int) -> int:
    """The constant-1 arithmetical function."""
    return 1


def _evaluate(f: ArithmeticalFunction, n: int) -> Fraction:
    if isinstance(f, Mapping):
        try:
            value = f[n]
        except KeyError:
            raise MissingValueError(n, getattr(f, "name", "f")) from None
    else:
        value = f(n)
    return Fraction(value)


def shifted(f: ArithmeticalFunction, a: int) -> Callable[[int], Fraction]:
    """f_a(n) = f(a n)."""
    return lambda n: _evaluate(f, a * n)


def dirichlet_convolution(f: ArithmeticalFunction, g: ArithmeticalFunction, n: int) -> Fraction:
    """(f * g)(n) = sum over d | n of f(d) g(n / d)."""
    return sum((_evaluate(f, d) * _evaluate(g, n // d) for d in divisors(n)), Fraction(0))


def dirichlet_psi(f: ArithmeticalFunction, a: int, n: int) -> Fraction:
    """[zeta * (f_a mu)](n) = sum over d | n of f(a d) mu(d)."""
    f_a = shifted(f, a)
    return dirichlet_convolution(zeta, lambda d: f_a(d) * nt_mobius(d), n)
