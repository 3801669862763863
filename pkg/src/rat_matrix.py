"""
Dense matrices of exact rationals.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Iterator, List, Optional, Sequence, Tuple

from src.errors import DimensionError, InputError


def _entry(value: Any) -> Fraction:
    if isinstance(value, float):
        raise InputError(f"floating-point entry {value!r} is not accepted")
    return value if isinstance(value, Fraction) else Fraction(value)


@dataclass(frozen=True)
class RatMatrix:
    """Immutable rows x cols matrix; entries are reduced Fractions."""
    entries: Tuple[Tuple[Fraction, ...], ...]
    cols: int

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[Any]], cols: Optional[int] = None) -> "RatMatrix":
        converted = tuple(tuple(_entry(v) for v in row) for row in rows)
        widths = {len(row) for row in converted}
        if len(widths) > 1:
            raise DimensionError("rows have different lengths")
        width = widths.pop() if widths else (cols or 0)
        if cols is not None and width != cols:
            raise DimensionError(f"expected {cols} columns, got {width}")
        return cls(converted, width)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls.from_rows(([int(i == j) for j in range(n)] for i in range(n)), cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls.from_rows(([0] * cols for _ in range(rows)), cols=cols)

    @classmethod
    def diagonal(cls, values: Sequence[Any]) -> "RatMatrix":
        n = len(values)
        return cls.from_rows(([values[i] if i == j else 0 for j in range(n)] for i in range(n)), cols=n)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, key: Tuple[int, int]) -> Fraction:
        i, j = key
        return self.entries[i][j]

    def __iter__(self) -> Iterator[Tuple[Fraction, ...]]:
        return iter(self.entries)

    def to_lists(self) -> List[List[Fraction]]:
        return [list(row) for row in self.entries]

    def transpose(self) -> "RatMatrix":
        return RatMatrix.from_rows((tuple(self.entries[i][j] for i in range(self.rows))
                                    for j in range(self.cols)), cols=self.rows)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RatMatrix":
        return RatMatrix.from_rows(([self.entries[i][j] for j in cols] for i in rows), cols=len(cols))

    def scale_rows(self, factors: Sequence[Fraction]) -> "RatMatrix":
        return RatMatrix.from_rows(([factors[i] * v for v in row] for i, row in enumerate(self.entries)),
                                   cols=self.cols)

    def scale_cols(self, factors: Sequence[Fraction]) -> "RatMatrix":
        return RatMatrix.from_rows(([factors[j] * v for j, v in enumerate(row)] for row in self.entries),
                                   cols=self.cols)
