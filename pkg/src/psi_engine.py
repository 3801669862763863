"""
Psi_{D,f}: the values with f(d_k) = sum of Psi(d_v) over d_k below d_v.

Each formula of the construction gets its own function so they can be
cross-validated: the defining recursion, the Möbius form over (D, <=), the
join-closed double sum over P_D, the upper-closed form and the Dirichlet
form on divisor carriers.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Tuple

from src.divisor_tools import (
    DivisorPoset,
    dirichlet_psi,
    divisors,
    is_lcm_closed,
    is_multiple_closed,
    lcm_of_set,
)
from src.errors import HypothesisError, InputError, MissingValueError, ZeroValueError
from src.poset_core import (
    ElementId,
    OrderedSubset,
    PosetFunction,
    closure_predicates,
    join_closure,
    upper_part,
)

logger = logging.getLogger(__name__)


class PsiMethod(str, Enum):
    RECURSIVE = "recursive"
    MOBIUS = "mobius"
    JOIN_CLOSED = "join_closed"
    UPPER_CLOSED = "upper_closed"
    DIRICHLET = "dirichlet"


@dataclass(frozen=True)
class PsiVector:
    """Psi values on the basis D, tagged with the formula that produced them."""
    basis: OrderedSubset
    values: Tuple[Fraction, ...]
    method: PsiMethod

    def __post_init__(self):
        if len(self.values) != len(self.basis):
            raise InputError("Psi vector length differs from its basis")

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, element: ElementId) -> Fraction:
        return self.values[self.basis.index(element)]

    def as_dict(self) -> Dict[ElementId, Fraction]:
        return dict(zip(self.basis.members, self.values))

    def product(self) -> Fraction:
        result = Fraction(1)
        for value in self.values:
            result *= value
        return result

    def reconstructs(self, f: PosetFunction) -> bool:
        """f(d_k) equals the sum of Psi(d_v) over d_v above d_k, for every k."""
        poset = self.basis.poset
        members = self.basis.members
        for k, d_k in enumerate(members):
            total = sum((self.values[v] for v in range(k, len(members)) if poset.leq(d_k, members[v])),
                        Fraction(0))
            if total != f[d_k]:
                return False
        return True

    def same_values(self, other: "PsiVector") -> bool:
        return self.basis.same_members(other.basis) and self.values == other.values


def psi_recursive(d: OrderedSubset, f: PosetFunction) -> PsiVector:
    """Psi(d_k) = f(d_k) minus Psi over strict successors, largest index first."""
    poset = d.poset
    m = len(d)
    values: List[Fraction] = [Fraction(0)] * m
    for k in reversed(range(m)):
        successors = (values[v] for v in range(k + 1, m) if poset.leq(d[k], d[v]))
        values[k] = f[d[k]] - sum(successors, Fraction(0))
    return PsiVector(d, tuple(values), PsiMethod.RECURSIVE)


def psi_mobius(d: OrderedSubset, f: PosetFunction) -> PsiVector:
    """Psi(d_k) = sum of f(d_v) mu_D(d_k, d_v) over d_v above d_k."""
    local = d.as_poset()
    values = []
    for k, d_k in enumerate(d.members):
        values.append(sum((f[d_v] * local.mobius(d_k, d_v) for d_v in d.members[k:]
                           if local.leq(d_k, d_v)), Fraction(0)))
    return PsiVector(d, tuple(values), PsiMethod.MOBIUS)


def psi_join_closed(d: OrderedSubset, f: PosetFunction, use_generated: bool = False) -> PsiVector:
    """Join-closed form: double sum over z in P_D and w in [z, join D].

    z runs over elements above d_k that lie above no later d_t. With
    use_generated the Möbius function of <D> replaces that of P_D. Psi on a
    join-closed D depends on f restricted to D only, so when f is undefined
    or zero (for 1/f) strictly inside P_D the sum runs over D itself.
    """
    if not closure_predicates(d).is_join_closed:
        raise HypothesisError("the basis is not join-closed")
    if use_generated:
        return _join_closed_sum(d, f, join_closure(d))
    try:
        return _join_closed_sum(d, f, upper_part(d))
    except (MissingValueError, ZeroValueError) as e:
        if e.element in d:
            raise
        logger.debug("f unusable at %r outside D; join-closed Psi over D itself", e.element)
        return _join_closed_sum(d, f, d)


def _join_closed_sum(d: OrderedSubset, f: PosetFunction, carrier: OrderedSubset) -> PsiVector:
    poset = d.poset
    top = poset.join_all(d.members)
    local = carrier.as_poset()
    logger.debug("join-closed Psi over %d-element carrier", len(carrier))

    inner: Dict[ElementId, Fraction] = {}
    values = []
    for k, d_k in enumerate(d.members):
        later = d.members[k + 1:]
        total = Fraction(0)
        for z in carrier.members:
            if not poset.leq(d_k, z) or any(poset.leq(d_t, z) for d_t in later):
                continue
            if z not in inner:
                inner[z] = sum((f[w] * local.mobius(z, w) for w in local.interval(z, top)), Fraction(0))
            total += inner[z]
        values.append(total)
    return PsiVector(d, tuple(values), PsiMethod.JOIN_CLOSED)


def psi_upper_closed(d: OrderedSubset, f: PosetFunction) -> PsiVector:
    """Upper-closed form: Möbius sum with mu of P_D (which equals D here)."""
    if not closure_predicates(d).is_upper_closed_up_to_join:
        raise HypothesisError("the basis is not upper-closed up to its join")
    local = upper_part(d).as_poset()
    values = []
    for k, d_k in enumerate(d.members):
        values.append(sum((f[d_v] * local.mobius(d_k, d_v) for d_v in d.members[k:]
                           if local.leq(d_k, d_v)), Fraction(0)))
    return PsiVector(d, tuple(values), PsiMethod.UPPER_CLOSED)


def psi_dirichlet(d: OrderedSubset, f: PosetFunction) -> PsiVector:
    """Dirichlet form on a divisor carrier.

    Multiple-closed D: Psi(d_k) = [zeta * (f_{d_k} mu)](lcm D / d_k).
    LCM-closed D: the same terms summed over z with d_k | z | lcm D and no
    later d_t dividing z.
    """
    if not isinstance(d.poset, DivisorPoset):
        raise HypothesisError("the Dirichlet form needs a divisor poset")
    members = list(d.members)
    top = lcm_of_set(members)
    if is_multiple_closed(members):
        values = [dirichlet_psi(f, d_k, top // d_k) for d_k in members]
    elif is_lcm_closed(members):
        candidates = divisors(top)
        values = []
        for k, d_k in enumerate(members):
            later = members[k + 1:]
            zs = [z for z in candidates if z % d_k == 0 and not any(z % d_t == 0 for d_t in later)]
            values.append(sum((dirichlet_psi(f, z, top // z) for z in zs), Fraction(0)))
    else:
        raise HypothesisError("the Dirichlet form needs an LCM-closed basis")
    return PsiVector(d, tuple(values), PsiMethod.DIRICHLET)


_DISPATCH = {
    PsiMethod.RECURSIVE: psi_recursive,
    PsiMethod.MOBIUS: psi_mobius,
    PsiMethod.UPPER_CLOSED: psi_upper_closed,
    PsiMethod.DIRICHLET: psi_dirichlet,
}


def compute_psi(d: OrderedSubset, f: PosetFunction, method: PsiMethod = PsiMethod.RECURSIVE,
                use_generated: bool = False) -> PsiVector:
    method = PsiMethod(method)
    if method is PsiMethod.JOIN_CLOSED:
        return psi_join_closed(d, f, use_generated=use_generated)
    return _DISPATCH[method](d, f)


def applicable_methods(d: OrderedSubset) -> List[PsiMethod]:
    """Methods whose hypotheses hold for the basis d."""
    flags = closure_predicates(d)
    methods = [PsiMethod.RECURSIVE, PsiMethod.MOBIUS]
    if flags.is_join_closed:
        methods.append(PsiMethod.JOIN_CLOSED)
    if flags.is_upper_closed_up_to_join:
        methods.append(PsiMethod.UPPER_CLOSED)
    if isinstance(d.poset, DivisorPoset) and is_lcm_closed(list(d.members)):
        methods.append(PsiMethod.DIRICHLET)
    return methods


def cross_check_psi(d: OrderedSubset, f: PosetFunction,
                    use_generated: bool = False) -> Dict[PsiMethod, PsiVector]:
    """Psi by every applicable method, keyed by method."""
    return {method: compute_psi(d, f, method, use_generated=use_generated)
            for method in applicable_methods(d)}
