"""
Worked MAX/MIN and GCD examples.

Each example builds its matrix on an integer chain hosted in the segment
[x_1, x_n] of (Z, <=) with f(k) = k + t, evaluates the closed-form
expression directly, runs the engine method the example illustrates, and
runs the oracle. Examples 1-4 are MAX (join) matrices, 5-8 are MIN (meet)
matrices; even-numbered ones need a consecutive chain. `smith` is the GCD
matrix on {1, ..., n} with f = N, whose determinant is the product of the
Euler phi values.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Sequence, Union

from src.divisor_tools import divisor_lattice, euler_phi, lcm_of_set
from src.errors import EmptySetError, HypothesisError, InputError
from src.exact_linalg_oracle import oracle_det, oracle_inverse
from src.matrix_engine import (
    DEFAULT_CAP,
    MatrixKind,
    MatrixSpec,
    Method,
    build_matrix,
    det_closed_form,
    inverse_closed_form,
)
from src.poset_core import OrderedSubset, identity_function, integer_chain, linear_function, to_fraction
from src.rat_matrix import RatMatrix

logger = logging.getLogger(__name__)

Value = Union[Fraction, RatMatrix]


@dataclass(frozen=True)
class ExampleReport:
    """The three independent evaluations of one worked example."""
    name: str
    description: str
    method: Method
    matrix: RatMatrix
    closed_form: Value
    engine: Value
    oracle: Value

    @property
    def is_inverse(self) -> bool:
        return isinstance(self.engine, RatMatrix)

    @property
    def agree(self) -> bool:
        return self.closed_form == self.engine == self.oracle


@dataclass(frozen=True)
class _Example:
    kind: MatrixKind
    method: Method
    inverse: bool
    consecutive: bool
    description: str
    formula: Callable[[List[Fraction], Fraction], Value]


# Closed-form expressions; xs are the chain elements as Fractions.

def _product(values) -> Fraction:
    result = Fraction(1)
    for value in values:
        result *= value
    return result


def max_det(xs: List[Fraction], t: Fraction) -> Fraction:
    """(x_1 - x_2)(x_2 - x_3) ... (x_{n-1} - x_n)(x_n + t)."""
    return _product(a - b for a, b in zip(xs, xs[1:])) * (xs[-1] + t)


def max_consecutive_det(xs: List[Fraction], t: Fraction) -> Fraction:
    return (-1) ** (len(xs) - 1) * (xs[-1] + t)


def min_det(xs: List[Fraction], t: Fraction) -> Fraction:
    """(x_1 + t)(x_2 - x_1) ... (x_n - x_{n-1})."""
    return (xs[0] + t) * _product(b - a for a, b in zip(xs, xs[1:]))


def min_consecutive_det(xs: List[Fraction], t: Fraction) -> Fraction:
    # consecutive differences are all 1, so the product collapses to x_1 + t
    return xs[0] + t


def _tridiagonal(diagonal: Sequence[Fraction], off: Sequence[Fraction]) -> RatMatrix:
    n = len(diagonal)
    rows = []
    for i in range(n):
        row = [Fraction(0)] * n
        row[i] = diagonal[i]
        if i > 0:
            row[i - 1] = off[i - 1]
        if i < n - 1:
            row[i + 1] = off[i]
        rows.append(row)
    return RatMatrix.from_rows(rows, cols=n)


def max_inverse(xs: List[Fraction], t: Fraction) -> RatMatrix:
    n = len(xs)
    if n == 1:
        return RatMatrix.from_rows([[1 / (xs[0] + t)]])
    diagonal = [1 / (xs[0] - xs[1])]
    diagonal += [1 / (xs[i - 1] - xs[i]) + 1 / (xs[i] - xs[i + 1]) for i in range(1, n - 1)]
    diagonal.append(1 / (xs[n - 2] - xs[n - 1]) + 1 / (xs[n - 1] + t))
    return _tridiagonal(diagonal, [1 / abs(a - b) for a, b in zip(xs, xs[1:])])


def max_consecutive_inverse(xs: List[Fraction], t: Fraction) -> RatMatrix:
    n = len(xs)
    if n == 1:
        return RatMatrix.from_rows([[1 / (xs[0] + t)]])
    diagonal = [Fraction(-1)] + [Fraction(-2)] * (n - 2) + [-1 + 1 / (xs[-1] + t)]
    return _tridiagonal(diagonal, [Fraction(1)] * (n - 1))


def min_inverse(xs: List[Fraction], t: Fraction) -> RatMatrix:
    n = len(xs)
    if n == 1:
        return RatMatrix.from_rows([[1 / (xs[0] + t)]])
    f = [x + t for x in xs]
    diagonal = [1 / (xs[1] - xs[0]) * f[1] / f[0]]
    diagonal += [1 / f[i] * (f[i - 1] / (xs[i] - xs[i - 1]) + f[i + 1] / (xs[i + 1] - xs[i]))
                 for i in range(1, n - 1)]
    diagonal.append(1 / f[n - 1] * (f[n - 2] / (xs[n - 1] - xs[n - 2]) + 1))
    return _tridiagonal(diagonal, [-1 / abs(a - b) for a, b in zip(xs, xs[1:])])


def min_consecutive_inverse(xs: List[Fraction], t: Fraction) -> RatMatrix:
    n = len(xs)
    if n == 1:
        return RatMatrix.from_rows([[1 / (xs[0] + t)]])
    diagonal = [(xs[0] + 1 + t) / (xs[0] + t)] + [Fraction(2)] * (n - 2) + [Fraction(1)]
    return _tridiagonal(diagonal, [Fraction(-1)] * (n - 1))


EXAMPLES: Dict[str, _Example] = {
    "1": _Example(MatrixKind.JOIN, Method.JOIN_CLOSED, False, False,
                  "det of the MAX matrix on a chain", max_det),
    "2": _Example(MatrixKind.JOIN, Method.UPPER_CLOSED, False, True,
                  "det of the MAX matrix on a consecutive chain", max_consecutive_det),
    "3": _Example(MatrixKind.JOIN, Method.JOIN_CLOSED, True, False,
                  "inverse of the MAX matrix on a chain", max_inverse),
    "4": _Example(MatrixKind.JOIN, Method.UPPER_CLOSED, True, True,
                  "inverse of the MAX matrix on a consecutive chain", max_consecutive_inverse),
    "5": _Example(MatrixKind.MEET, Method.JOIN_CLOSED, False, False,
                  "det of the MIN matrix on a chain", min_det),
    "6": _Example(MatrixKind.MEET, Method.UPPER_CLOSED, False, True,
                  "det of the MIN matrix on a consecutive chain", min_consecutive_det),
    "7": _Example(MatrixKind.MEET, Method.JOIN_CLOSED, True, False,
                  "inverse of the MIN matrix on a chain", min_inverse),
    "8": _Example(MatrixKind.MEET, Method.UPPER_CLOSED, True, True,
                  "inverse of the MIN matrix on a consecutive chain", min_consecutive_inverse),
}


def chain_spec(chain: Sequence[int], t, kind: MatrixKind) -> MatrixSpec:
    """MAX or MIN matrix of f(k) = k + t on a chain hosted in [min, max]."""
    if not chain:
        raise EmptySetError("the chain is empty")
    if any(a >= b for a, b in zip(chain, chain[1:])):
        raise InputError("chain elements must be strictly increasing")
    host = integer_chain(chain[0], chain[-1])
    s = OrderedSubset.of(host, chain)
    return MatrixSpec(kind, s, s, linear_function(host, t))


def consecutive_chain(start: int, n: int) -> List[int]:
    if n < 1:
        raise InputError("a chain needs at least one element")
    return list(range(start, start + n))


def _check_hypotheses(number: str, example: _Example, chain: Sequence[int], t: Fraction) -> None:
    if example.consecutive and any(b - a != 1 for a, b in zip(chain, chain[1:])):
        raise HypothesisError(f"example {number} needs a chain of consecutive integers")
    if example.kind is MatrixKind.JOIN:
        if example.inverse and t == -chain[-1]:
            raise HypothesisError(f"t = -x_n = {t} makes the MAX matrix singular")
        return
    # MIN examples divide by f on the chain members
    for k in chain:
        if k + t == 0:
            raise HypothesisError(f"f vanishes at {k}; the MIN examples need t != -x_i")


def run_example(number: Union[int, str], chain: Sequence[int], t=0, cap: int = DEFAULT_CAP) -> ExampleReport:
    number = str(number)
    if number not in EXAMPLES:
        raise InputError(f"unknown example {number!r}; choose 1-8 or smith")
    example = EXAMPLES[number]
    spec = chain_spec(list(chain), t, example.kind)
    t = to_fraction(t)
    _check_hypotheses(number, example, list(chain), t)
    logger.debug("example %s on chain %s with t = %s", number, list(chain), t)

    xs = [Fraction(x) for x in chain]
    matrix = build_matrix(spec)
    if example.inverse:
        engine: Value = inverse_closed_form(spec, example.method, cap=cap)
        oracle: Value = oracle_inverse(matrix)
    else:
        engine = det_closed_form(spec, example.method, cap=cap)
        oracle = oracle_det(matrix)
    return ExampleReport(f"example {number}", example.description, example.method, matrix,
                         example.formula(xs, t), engine, oracle)


def run_smith(n: int = 6, cap: int = DEFAULT_CAP, force: bool = False) -> ExampleReport:
    """GCD matrix on {1, ..., n} with f = N, hosted in the divisors of lcm(1..n)."""
    if n < 1:
        raise InputError("n must be positive")
    members = list(range(1, n + 1))
    host = divisor_lattice(lcm_of_set(members))
    s = OrderedSubset.of(host, members)
    spec = MatrixSpec(MatrixKind.MEET, s, s, identity_function(host))
    matrix = build_matrix(spec)
    engine = det_closed_form(spec, Method.CAUCHY_BINET, cap=cap, force=force)
    return ExampleReport("smith", "det of the GCD matrix on {1..n}", Method.CAUCHY_BINET, matrix,
                         _product(Fraction(euler_phi(k)) for k in members), engine, oracle_det(matrix))
