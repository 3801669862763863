"""
Plain-text report formatting.

Renders exact rationals, matrices, Psi vectors and verdicts into the stable
line format printed on stdout: one matrix row per line, entries as canonical
rationals separated by single spaces.
"""

from fractions import Fraction
from typing import Iterable, List, Optional

from src.poset_core import ClosureFlags, ElementId, OrderedSubset
from src.psi_engine import PsiVector
from src.rat_matrix import RatMatrix


def format_rational(value: Fraction) -> str:
    """`p/q` in lowest terms, or a bare integer when q = 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_matrix(m: RatMatrix) -> str:
    return "\n".join(" ".join(format_rational(v) for v in row) for row in m)


def format_elements(elements: Iterable[ElementId]) -> str:
    return ",".join(str(e) for e in elements)


def verdict(agree: bool) -> str:
    return "AGREE" if agree else "DISAGREE"


class ReportFormatter:
    """Builds the stdout report of a CLI command, line by line."""

    def __init__(self):
        self.lines: List[str] = []

    def field(self, name: str, value) -> "ReportFormatter":
        if isinstance(value, Fraction):
            value = format_rational(value)
        self.lines.append(f"{name}: {value}")
        return self

    def subset(self, name: str, s: OrderedSubset) -> "ReportFormatter":
        return self.field(name, format_elements(s))

    def matrix(self, name: str, m: RatMatrix) -> "ReportFormatter":
        self.lines.append(f"{name}:")
        if m.rows and m.cols:
            self.lines.append(format_matrix(m))
        return self

    def psi(self, vector: PsiVector, name: Optional[str] = None) -> "ReportFormatter":
        label = name or f"psi[{vector.method.value}]"
        entries = " ".join(f"{e}={format_rational(v)}" for e, v in zip(vector.basis, vector.values))
        self.lines.append(f"{label}: {entries}")
        return self

    def flags(self, flags: ClosureFlags) -> "ReportFormatter":
        for name in ("is_meet_closed", "is_join_closed", "is_lower_closed",
                     "is_upper_closed", "is_upper_closed_up_to_join"):
            self.field(name, str(getattr(flags, name)).lower())
        return self

    def comparison(self, engine, oracle) -> "ReportFormatter":
        """Oracle value and the AGREE/DISAGREE verdict against the engine's."""
        if isinstance(oracle, RatMatrix):
            self.matrix("oracle", oracle)
        else:
            self.field("oracle", oracle)
        return self.field("verdict", verdict(engine == oracle))

    def render(self) -> str:
        return "\n".join(self.lines)
