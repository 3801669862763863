"""
Join and meet matrices on one or two subsets of a finite lattice.

Builds [X,Y]_f and (X,Y)_f, the incidence matrices E(X), the diagonal Lambda
and Delta factors, and evaluates determinants and inverses through the
closed forms: the Cauchy-Binet sum over maximal minors, the join-closed and
upper-closed product and Möbius-quotient forms, and the Dirichlet forms on
divisor lattices. Meet matrices are reduced to join matrices of 1/f through
the semimultiplicative transfer identities.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, List, Optional, Tuple

from src.divisor_tools import DivisorPoset, is_multiple_closed, nt_mobius
from src.errors import (
    CombinatorialBlowupError,
    ConsistencyError,
    HypothesisError,
    InputError,
    NotSquareError,
    SemimultiplicativityError,
    SingularMatrixError,
    ZeroPsiError,
    ZeroValueError,
)
from src.exact_linalg_oracle import bareiss_det, identity_check, matmul
from src.poset_core import (
    ElementId,
    FinitePoset,
    OrderedSubset,
    PosetFunction,
    closure_predicates,
    join_closure,
)
from src.psi_engine import PsiVector, psi_dirichlet, psi_join_closed, psi_recursive, psi_upper_closed
from src.rat_matrix import RatMatrix

logger = logging.getLogger(__name__)

DEFAULT_CAP = 10 ** 6

__all__ = [
    "DEFAULT_CAP", "JoinFactorization", "MatrixKind", "MatrixSpec", "MeetFactorization", "Method",
    "RatMatrix", "SemimultiplicativityReport", "build_matrix", "default_basis", "det_closed_form",
    "factorize_join", "factorize_meet", "incidence_e", "inverse_closed_form", "resolve_basis",
    "select_method", "semimultiplicative_check",
]


class MatrixKind(str, Enum):
    JOIN = "join"
    MEET = "meet"


class Method(str, Enum):
    AUTO = "auto"
    CAUCHY_BINET = "cauchy_binet"
    COFACTOR_CB = "cofactor_cb"
    JOIN_CLOSED = "join_closed"
    UPPER_CLOSED = "upper_closed"
    DIRICHLET = "dirichlet"


@dataclass(frozen=True)
class MatrixSpec:
    """Data of a join or meet matrix: the kind, X, Y, f and an optional basis D."""
    kind: MatrixKind
    x: OrderedSubset
    y: OrderedSubset
    f: PosetFunction
    d: Optional[OrderedSubset] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", MatrixKind(self.kind))
        if self.x.poset is not self.y.poset:
            raise InputError("X and Y must live in the same host poset")
        if self.d is not None:
            if self.d.poset is not self.x.poset:
                raise InputError("the basis must live in the host poset of X and Y")
            present = set(self.d.members)
            for a in self.x:
                for b in self.y:
                    joined = self.poset.join(a, b)
                    if joined not in present:
                        raise HypothesisError(f"basis misses the join {joined!r} of {a!r} and {b!r}")

    @property
    def poset(self) -> FinitePoset:
        return self.x.poset

    @property
    def single_set(self) -> bool:
        return self.x.same_members(self.y)

    def is_square(self) -> bool:
        return len(self.x) == len(self.y)


@dataclass(frozen=True)
class SemimultiplicativityReport:
    holds: bool
    witness: Optional[Tuple[ElementId, ElementId]] = None

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class JoinFactorization:
    """[X,Y]_f = E(X) Lambda_{D,f} E(Y)^T."""
    e_x: RatMatrix
    lam: RatMatrix
    e_y: RatMatrix
    psi: PsiVector

    @property
    def basis(self) -> OrderedSubset:
        return self.psi.basis

    def product(self) -> RatMatrix:
        return matmul(matmul(self.e_x, self.lam), self.e_y.transpose())


@dataclass(frozen=True)
class MeetFactorization:
    """(X,Y)_f = Delta_{X,f} E(X) Lambda_{D,1/f} E(Y)^T Delta_{Y,f}."""
    delta_x: RatMatrix
    e_x: RatMatrix
    lam: RatMatrix
    e_y: RatMatrix
    delta_y: RatMatrix
    psi: PsiVector

    @property
    def basis(self) -> OrderedSubset:
        return self.psi.basis

    def product(self) -> RatMatrix:
        inner = matmul(matmul(self.e_x, self.lam), self.e_y.transpose())
        return matmul(matmul(self.delta_x, inner), self.delta_y)


# Construction

def build_matrix(spec: MatrixSpec) -> RatMatrix:
    """Entry (i, j) is f(x_i join y_j), or f(x_i meet y_j) for the meet kind."""
    poset = spec.poset
    bound = poset.join if spec.kind is MatrixKind.JOIN else poset.meet
    rows = ([spec.f[bound(a, b)] for b in spec.y] for a in spec.x)
    return RatMatrix.from_rows(rows, cols=len(spec.y))


def incidence_e(x: OrderedSubset, d: OrderedSubset) -> RatMatrix:
    """e_ij = 1 if x_i is below d_j, else 0."""
    poset = x.poset
    return RatMatrix.from_rows(([int(poset.leq(a, b)) for b in d] for a in x), cols=len(d))


def default_basis(x: OrderedSubset, y: OrderedSubset) -> OrderedSubset:
    """Join-closure of the pairwise joins x_i join y_j."""
    poset = x.poset
    joins = {poset.join(a, b) for a in x for b in y}
    return join_closure(OrderedSubset.in_carrier_order(poset, joins))


def resolve_basis(spec: MatrixSpec) -> OrderedSubset:
    return spec.d if spec.d is not None else default_basis(spec.x, spec.y)


def factorize_join(spec: MatrixSpec) -> JoinFactorization:
    if spec.kind is not MatrixKind.JOIN:
        raise InputError("factorize_join needs a join matrix")
    d = resolve_basis(spec)
    psi = psi_recursive(d, spec.f)
    return JoinFactorization(incidence_e(spec.x, d), RatMatrix.diagonal(psi.values), incidence_e(spec.y, d), psi)


def factorize_meet(spec: MatrixSpec) -> MeetFactorization:
    if spec.kind is not MatrixKind.MEET:
        raise InputError("factorize_meet needs a meet matrix")
    _check_meet_hypotheses(spec)
    d = resolve_basis(spec)
    psi = psi_recursive(d, spec.f.reciprocal())
    return MeetFactorization(
        delta_x=RatMatrix.diagonal([spec.f[a] for a in spec.x]),
        e_x=incidence_e(spec.x, d),
        lam=RatMatrix.diagonal(psi.values),
        e_y=incidence_e(spec.y, d),
        delta_y=RatMatrix.diagonal([spec.f[b] for b in spec.y]),
        psi=psi,
    )


def semimultiplicative_check(f: PosetFunction, poset: FinitePoset,
                             pairs: Optional[Iterable[Tuple[ElementId, ElementId]]] = None
                             ) -> SemimultiplicativityReport:
    """Test f(x)f(y) = f(x meet y)f(x join y) on all pairs (or the given ones)."""
    candidates = combinations(poset.carrier, 2) if pairs is None else pairs
    for a, b in candidates:
        if f[a] * f[b] != f[poset.meet(a, b)] * f[poset.join(a, b)]:
            return SemimultiplicativityReport(False, (a, b))
    return SemimultiplicativityReport(True)


def _check_meet_hypotheses(spec: MatrixSpec) -> None:
    for element in list(spec.x) + list(spec.y):
        if spec.f[element] == 0:
            raise ZeroValueError(element)
    report = semimultiplicative_check(spec.f, spec.poset, ((a, b) for a in spec.x for b in spec.y))
    if not report:
        raise SemimultiplicativityError(report.witness)


# Method selection

def select_method(spec: MatrixSpec, method: Method = Method.AUTO, for_inverse: bool = False) -> Method:
    """Resolve `auto`: upper-closed, then join-closed, then the general sum."""
    method = Method(method)
    if for_inverse and method is Method.CAUCHY_BINET:
        method = Method.COFACTOR_CB
    if not for_inverse and method is Method.COFACTOR_CB:
        method = Method.CAUCHY_BINET
    if method is not Method.AUTO:
        return method
    general = Method.COFACTOR_CB if for_inverse else Method.CAUCHY_BINET
    if not spec.single_set:
        return general
    flags = closure_predicates(spec.x)
    if flags.is_upper_closed_up_to_join:
        return Method.UPPER_CLOSED
    if flags.is_join_closed:
        return Method.JOIN_CLOSED
    return general


def _require_square(spec: MatrixSpec) -> int:
    if not spec.is_square():
        raise NotSquareError(f"|X| = {len(spec.x)} differs from |Y| = {len(spec.y)}")
    return len(spec.x)


def _require_single_set(spec: MatrixSpec, method: Method) -> OrderedSubset:
    if not spec.single_set:
        raise HypothesisError(f"method {method.value} needs X = Y")
    return spec.x


def _check_cap(m: int, k: int, cap: int, force: bool) -> None:
    count = math.comb(m, k)
    logger.debug("Cauchy-Binet enumeration over C(%d, %d) = %d subsets", m, k, count)
    if count > cap and not force:
        raise CombinatorialBlowupError(count, cap)


def _product(values: Iterable[Fraction]) -> Fraction:
    result = Fraction(1)
    for value in values:
        result *= value
    return result


def _closed_psi(s: OrderedSubset, g: PosetFunction, method: Method, use_generated: bool) -> PsiVector:
    if method is Method.JOIN_CLOSED:
        return psi_join_closed(s, g, use_generated=use_generated)
    if method is Method.UPPER_CLOSED:
        return psi_upper_closed(s, g)
    if method is Method.DIRICHLET:
        return psi_dirichlet(s, g)
    raise InputError(f"{method.value} is not a closed-set method")


# Determinants

def _cauchy_binet_det(x: OrderedSubset, y: OrderedSubset, g: PosetFunction, d: OrderedSubset,
                      cap: int, force: bool) -> Fraction:
    n, m = len(x), len(d)
    if n > m:
        return Fraction(0)
    _check_cap(m, n, cap, force)
    psi = psi_recursive(d, g)
    e_x, e_y = incidence_e(x, d), incidence_e(y, d)
    rows = range(n)
    total = Fraction(0)
    for cols in combinations(range(m), n):
        weight = _product(psi.values[c] for c in cols)
        if weight == 0:
            continue
        minor_x = bareiss_det(e_x.submatrix(rows, cols))
        if minor_x == 0:
            continue
        total += minor_x * bareiss_det(e_y.submatrix(rows, cols)) * weight
    return total


def _join_determinant(spec: MatrixSpec, g: PosetFunction, method: Method, cap: int, force: bool,
                      use_generated: bool) -> Fraction:
    if method is Method.CAUCHY_BINET:
        return _cauchy_binet_det(spec.x, spec.y, g, resolve_basis(spec), cap, force)
    s = _require_single_set(spec, method)
    return _closed_psi(s, g, method, use_generated).product()


def det_closed_form(spec: MatrixSpec, method: Method = Method.AUTO, cap: int = DEFAULT_CAP,
                    force: bool = False, use_generated: bool = False) -> Fraction:
    """Determinant of the spec's matrix by the chosen closed form.

    Meet matrices use det (X,Y)_f = prod f(x_v) f(y_v) * det [X,Y]_{1/f}.
    """
    _require_square(spec)
    method = select_method(spec, method)
    logger.debug("determinant of %s matrix by %s", spec.kind.value, method.value)
    if spec.kind is MatrixKind.JOIN:
        return _join_determinant(spec, spec.f, method, cap, force, use_generated)
    _check_meet_hypotheses(spec)
    prefactor = _product(spec.f[a] * spec.f[b] for a, b in zip(spec.x, spec.y))
    return prefactor * _join_determinant(spec, spec.f.reciprocal(), method, cap, force, use_generated)


# Inverses

def _cofactor_inverse(x: OrderedSubset, y: OrderedSubset, g: PosetFunction, d: OrderedSubset,
                      det: Fraction, cap: int, force: bool) -> RatMatrix:
    n, m = len(x), len(d)
    k = n - 1
    _check_cap(m, k, cap, force)
    psi = psi_recursive(d, g)
    e_x, e_y = incidence_e(x, d), incidence_e(y, d)
    subsets = list(combinations(range(m), k))
    weights = [_product(psi.values[c] for c in cols) for cols in subsets]

    def minors(e: RatMatrix, skip: int) -> List[Fraction]:
        rows = [r for r in range(n) if r != skip]
        return [bareiss_det(e.submatrix(rows, cols)) if w else Fraction(0)
                for cols, w in zip(subsets, weights)]

    minors_x = [minors(e_x, j) for j in range(n)]
    minors_y = [minors(e_y, i) for i in range(n)]
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            cofactor = sum((a * b * w for a, b, w in zip(minors_x[j], minors_y[i], weights)), Fraction(0))
            row.append((-1) ** (i + j) * cofactor / det)
        rows.append(row)
    return RatMatrix.from_rows(rows, cols=n)


def _mobius_quotient_inverse(s: OrderedSubset, psi: PsiVector,
                             mu: Callable[[ElementId, ElementId], int]) -> RatMatrix:
    """b_ij = sum over x_k below x_i and x_j of mu(x_k, x_i) mu(x_k, x_j) / Psi(x_k)."""
    poset = s.poset
    for element, value in zip(s.members, psi.values):
        if value == 0:
            raise ZeroPsiError(element)
    n = len(s)
    rows = []
    for a in s:
        row = []
        for b in s:
            total = Fraction(0)
            for c, value in zip(s.members, psi.values):
                if poset.leq(c, a) and poset.leq(c, b):
                    total += Fraction(mu(c, a) * mu(c, b)) / value
            row.append(total)
        rows.append(row)
    return RatMatrix.from_rows(rows, cols=n)


def _join_inverse(spec: MatrixSpec, g: PosetFunction, method: Method, cap: int, force: bool,
                  use_generated: bool) -> RatMatrix:
    if method is Method.COFACTOR_CB:
        d = resolve_basis(spec)
        det = _cauchy_binet_det(spec.x, spec.y, g, d, cap, force)
        if det == 0:
            raise SingularMatrixError("the matrix is singular (Cauchy-Binet determinant is 0)")
        return _cofactor_inverse(spec.x, spec.y, g, d, det, cap, force)

    s = _require_single_set(spec, method)
    if method is Method.DIRICHLET:
        if not (isinstance(s.poset, DivisorPoset) and is_multiple_closed(list(s.members))):
            raise HypothesisError("the Dirichlet inverse needs a set multiple-closed up to its lcm")
        return _mobius_quotient_inverse(s, psi_dirichlet(s, g), lambda a, b: nt_mobius(b // a))
    psi = _closed_psi(s, g, method, use_generated)
    if method is Method.UPPER_CLOSED:
        return _mobius_quotient_inverse(s, psi, s.poset.mobius)
    return _mobius_quotient_inverse(s, psi, s.as_poset().mobius)


def inverse_closed_form(spec: MatrixSpec, method: Method = Method.AUTO, cap: int = DEFAULT_CAP,
                        force: bool = False, use_generated: bool = False,
                        verify: bool = False) -> RatMatrix:
    """Inverse of the spec's matrix by the chosen closed form.

    Meet matrices use (X,Y)_f^-1 = Delta_Y^-1 [X,Y]_{1/f}^-1 Delta_X^-1.
    With verify the result is multiplied back against the matrix.
    """
    _require_square(spec)
    method = select_method(spec, method, for_inverse=True)
    logger.debug("inverse of %s matrix by %s", spec.kind.value, method.value)
    if spec.kind is MatrixKind.JOIN:
        result = _join_inverse(spec, spec.f, method, cap, force, use_generated)
    else:
        _check_meet_hypotheses(spec)
        inner = _join_inverse(spec, spec.f.reciprocal(), method, cap, force, use_generated)
        result = inner.scale_rows([1 / spec.f[b] for b in spec.y]).scale_cols([1 / spec.f[a] for a in spec.x])
    if verify and not identity_check(matmul(build_matrix(spec), result)):
        raise ConsistencyError(f"{method.value} inverse failed its identity check")
    return result
