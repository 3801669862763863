"""
Randomized verification campaign.

Every trial draws a small lattice (a divisor lattice, a union/intersection
closed family of subsets of a small set, or a segment of the integers),
random subsets X and Y, an arbitrary rational f for the join side and a
semimultiplicative nonzero f for the meet side, then checks the engine
against itself and against the oracle:

- every applicable Psi form agrees and reconstructs f
- E(X) Lambda E(Y)^T and its meet counterpart rebuild the matrix
- closed-form, Cauchy-Binet and (on LCM-closed divisor sets) Dirichlet
  determinants match the oracle
- closed-form and cofactor inverses match the oracle, singular cases raise

All randomness comes from one seeded random.Random, so a report is a pure
function of the settings.
"""

import logging
import random
from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

from src.divisor_tools import (
    DivisorPoset,
    divisor_lattice,
    divisors,
    factorize,
    is_lcm_closed,
    is_multiple_closed,
)
from src.errors import InputError, SingularMatrixError
from src.exact_linalg_oracle import oracle_det, oracle_inverse
from src.matrix_engine import (
    DEFAULT_CAP,
    MatrixKind,
    MatrixSpec,
    Method,
    build_matrix,
    det_closed_form,
    factorize_join,
    factorize_meet,
    inverse_closed_form,
)
from src.poset_core import (
    FinitePoset,
    OrderedSubset,
    PosetFunction,
    build_poset,
    dump_poset,
    integer_chain,
    join_closure,
)
from src.psi_engine import cross_check_psi

logger = logging.getLogger(__name__)

FAMILIES = ("divisor", "boolean", "chain")


@dataclass
class CampaignSettings:
    """Knobs of a campaign; defaults mirror the `verify` config section."""
    trials: int = 200
    seed: int = 42
    max_elements: int = 8
    max_subset_size: int = 5
    divisor_bound: int = 360
    boolean_rank: int = 3
    numerator_range: int = 9
    denominator_max: int = 5
    cap: int = DEFAULT_CAP
    use_generated: bool = False

    @classmethod
    def from_config(cls, section: Dict[str, Any], **overrides) -> "CampaignSettings":
        known = {f.name for f in fields(cls)}
        values = {k: v for k, v in section.items() if k in known}
        values.update({k: v for k, v in overrides.items() if v is not None})
        settings = cls(**values)
        settings.validate()
        return settings

    def validate(self) -> None:
        if self.trials < 1:
            raise InputError("trials must be at least 1")
        if self.max_elements < 1 or self.max_subset_size < 1:
            raise InputError("max_elements and max_subset_size must be positive")
        if self.divisor_bound < 1 or self.boolean_rank < 1 or self.denominator_max < 1:
            raise InputError("divisor_bound, boolean_rank and denominator_max must be positive")


@dataclass
class Trial:
    index: int
    family: str
    host: FinitePoset
    x: OrderedSubset
    y: OrderedSubset
    f_join: PosetFunction
    f_meet: PosetFunction


@dataclass
class Failure:
    trial: Trial
    check: str
    message: str

    def counterexample(self) -> str:
        """The failing host in poset text format, with the rest as comments."""
        t = self.trial
        lines = [
            f"# trial {t.index} ({t.family}) failed {self.check}: {self.message}",
            f"# X: {','.join(str(e) for e in t.x)}",
            f"# Y: {','.join(str(e) for e in t.y)}",
            "# f_join: " + " ".join(f"{e}={t.f_join[e]}" for e in t.host),
            "# f_meet: " + " ".join(f"{e}={t.f_meet[e]}" for e in t.host),
        ]
        return "\n".join(lines) + "\n" + dump_poset(t.host)


@dataclass
class CampaignReport:
    settings: CampaignSettings
    passed: int = 0
    checks_run: int = 0
    family_counts: Dict[str, int] = field(default_factory=lambda: {name: 0 for name in FAMILIES})
    failures: List[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def render(self) -> str:
        lines = [f"verify: seed {self.settings.seed}, {self.settings.trials} trials"]
        lines.extend(f"family {name}: {self.family_counts[name]}" for name in FAMILIES)
        lines.append(f"checks: {self.checks_run}")
        if self.failures:
            lines.append(f"first failure:\n{self.failures[0].counterexample().rstrip()}")
        lines.append(f"{self.passed}/{self.settings.trials} pass")
        return "\n".join(lines)


# Random hosts

def random_rational(rng: random.Random, settings: CampaignSettings, nonzero: bool = False) -> Fraction:
    bound = settings.numerator_range
    while True:
        numerator = rng.randint(-bound, bound)
        if numerator or not nonzero:
            return Fraction(numerator, rng.randint(1, settings.denominator_max))


def random_divisor_host(rng: random.Random, settings: CampaignSettings) -> FinitePoset:
    while True:
        n = rng.randint(1, settings.divisor_bound)
        if len(divisors(n)) <= settings.max_elements:
            return divisor_lattice(n)


def boolean_label(mask: int, rank: int) -> str:
    return "s" + format(mask, f"0{rank}b")


def boolean_sublattice(masks, rank: int) -> FinitePoset:
    """The subsets given as bit masks, ordered by inclusion."""
    ordered = sorted(set(masks), key=lambda m: (bin(m).count("1"), m))
    labels = [boolean_label(m, rank) for m in ordered]
    relations = [(boolean_label(a, rank), boolean_label(b, rank))
                 for a in ordered for b in ordered if a != b and a & b == a]
    return build_poset(labels, relations)


def boolean_lattice(rank: int) -> FinitePoset:
    return boolean_sublattice(range(2 ** rank), rank)


def _union_intersection_closure(masks: List[int]) -> List[int]:
    closed = set(masks)
    while True:
        fresh = {op(a, b) for a in closed for b in closed for op in (int.__and__, int.__or__)} - closed
        if not fresh:
            return sorted(closed)
        closed |= fresh


def random_boolean_host(rng: random.Random, settings: CampaignSettings) -> FinitePoset:
    rank = settings.boolean_rank
    universe = list(range(2 ** rank))
    for _ in range(20):
        seeds = rng.sample(universe, rng.randint(1, min(4, len(universe))))
        closed = _union_intersection_closure(seeds)
        if len(closed) <= settings.max_elements:
            return boolean_sublattice(closed, rank)
    return boolean_sublattice([rng.choice(universe)], rank)


def random_chain_host(rng: random.Random, settings: CampaignSettings) -> FinitePoset:
    low = rng.randint(-4, 4)
    return integer_chain(low, low + rng.randint(1, settings.max_elements) - 1)


_HOSTS: Dict[str, Callable[[random.Random, CampaignSettings], FinitePoset]] = {
    "divisor": random_divisor_host,
    "boolean": random_boolean_host,
    "chain": random_chain_host,
}


# Random functions

def random_function(rng: random.Random, settings: CampaignSettings, host: FinitePoset) -> PosetFunction:
    return PosetFunction({e: random_rational(rng, settings) for e in host}, name="f")


def semimultiplicative_function(rng: random.Random, settings: CampaignSettings, family: str,
                                host: FinitePoset) -> PosetFunction:
    """Nonzero f with f(x)f(y) = f(x meet y)f(x join y) on the host."""
    c = random_rational(rng, settings, nonzero=True)
    if family == "divisor":
        primes = sorted(factorize(max(host.carrier)))
        weights = {p: random_rational(rng, settings, nonzero=True) for p in primes}
        values = {}
        for e in host:
            value = c
            for p, exponent in factorize(e).items():
                value *= weights[p] ** exponent
            values[e] = value
        return PosetFunction(values, name="g")
    if family == "boolean":
        weights = [random_rational(rng, settings, nonzero=True) for _ in range(settings.boolean_rank)]
        values = {}
        for e in host:
            value = c
            for i, bit in enumerate(reversed(e[1:])):
                if bit == "1":
                    value *= weights[i]
            values[e] = value
        return PosetFunction(values, name="g")
    # every function on a chain is semimultiplicative
    return PosetFunction({e: random_rational(rng, settings, nonzero=True) for e in host}, name="g")


def random_subset(rng: random.Random, settings: CampaignSettings, host: FinitePoset) -> OrderedSubset:
    k = rng.randint(1, min(settings.max_subset_size, len(host)))
    return OrderedSubset.of(host, rng.sample(host.carrier, k))


def draw_trial(rng: random.Random, settings: CampaignSettings, index: int) -> Trial:
    family = rng.choice(FAMILIES)
    host = _HOSTS[family](rng, settings)
    x = random_subset(rng, settings, host)
    y = x if rng.random() < 0.5 else random_subset(rng, settings, host)
    return Trial(index, family, host, x, y,
                 random_function(rng, settings, host),
                 semimultiplicative_function(rng, settings, family, host))


# Checks; each returns None on success or a message

def check_psi_forms(trial: Trial, settings: CampaignSettings) -> Optional[str]:
    for d in (join_closure(trial.x), trial.x):
        results = cross_check_psi(d, trial.f_join, use_generated=settings.use_generated)
        reference = next(iter(results.values()))
        for method, vector in results.items():
            if not vector.same_values(reference):
                return f"Psi by {method.value} differs from {reference.method.value} on D = {list(d)}"
            if not vector.reconstructs(trial.f_join):
                return f"Psi by {method.value} does not reconstruct f on D = {list(d)}"
    return None


def check_factorization(trial: Trial, settings: CampaignSettings) -> Optional[str]:
    join = MatrixSpec(MatrixKind.JOIN, trial.x, trial.y, trial.f_join)
    if factorize_join(join).product() != build_matrix(join):
        return "E(X) Lambda E(Y)^T differs from the join matrix"
    meet = MatrixSpec(MatrixKind.MEET, trial.x, trial.y, trial.f_meet)
    if factorize_meet(meet).product() != build_matrix(meet):
        return "Delta_X E(X) Lambda E(Y)^T Delta_Y differs from the meet matrix"
    return None


def _specs(trial: Trial) -> List[MatrixSpec]:
    return [MatrixSpec(MatrixKind.JOIN, trial.x, trial.y, trial.f_join),
            MatrixSpec(MatrixKind.MEET, trial.x, trial.y, trial.f_meet)]


def _methods(trial: Trial, general: Method, for_inverse: bool = False) -> List[Method]:
    """AUTO, the general sum and, on LCM-closed divisor sets, the Dirichlet form."""
    methods = [Method.AUTO, general]
    members = list(trial.x.members)
    if isinstance(trial.host, DivisorPoset) and trial.x.same_members(trial.y):
        closed = is_multiple_closed(members) if for_inverse else is_lcm_closed(members)
        if closed:
            methods.append(Method.DIRICHLET)
    return methods


def check_determinants(trial: Trial, settings: CampaignSettings) -> Optional[str]:
    if len(trial.x) != len(trial.y):
        return None
    for spec in _specs(trial):
        expected = oracle_det(build_matrix(spec))
        for method in _methods(trial, Method.CAUCHY_BINET):
            got = det_closed_form(spec, method, cap=settings.cap, use_generated=settings.use_generated)
            if got != expected:
                return f"{spec.kind.value} det by {method.value} is {got}, oracle says {expected}"
    return None


def check_inverses(trial: Trial, settings: CampaignSettings) -> Optional[str]:
    if len(trial.x) != len(trial.y):
        return None
    for spec in _specs(trial):
        matrix = build_matrix(spec)
        singular = oracle_det(matrix) == 0
        expected = None if singular else oracle_inverse(matrix)
        for method in _methods(trial, Method.COFACTOR_CB, for_inverse=True):
            try:
                got = inverse_closed_form(spec, method, cap=settings.cap, use_generated=settings.use_generated)
            except SingularMatrixError:
                if singular:
                    continue
                return f"{spec.kind.value} inverse by {method.value} reported an invertible matrix singular"
            if singular:
                return f"{spec.kind.value} inverse by {method.value} returned a result for a singular matrix"
            if got != expected:
                return f"{spec.kind.value} inverse by {method.value} differs from the oracle"
    return None


CHECKS: Tuple[Tuple[str, Callable[[Trial, CampaignSettings], Optional[str]]], ...] = (
    ("psi_forms", check_psi_forms),
    ("factorization", check_factorization),
    ("determinant", check_determinants),
    ("inverse", check_inverses),
)


def run_trial(trial: Trial, settings: CampaignSettings, report: CampaignReport) -> bool:
    for name, check in CHECKS:
        report.checks_run += 1
        try:
            message = check(trial, settings)
        except Exception as e:  # pylint: disable=broad-except
            message = f"{type(e).__name__}: {e}"
        if message is not None:
            logger.debug("trial %d failed %s: %s", trial.index, name, message)
            report.failures.append(Failure(trial, name, message))
            return False
    return True


def run_campaign(settings: CampaignSettings) -> CampaignReport:
    settings.validate()
    rng = random.Random(settings.seed)
    report = CampaignReport(settings)
    for index in range(1, settings.trials + 1):
        trial = draw_trial(rng, settings, index)
        report.family_counts[trial.family] += 1
        if run_trial(trial, settings, report):
            report.passed += 1
    logger.debug("campaign finished: %d/%d trials passed", report.passed, settings.trials)
    return report
