"""
Finite posets and lattices.

Holds the carrier with its validated partial order and fixed linear extension,
ordered subsets of it, functions on it, meets and joins, the closures
<S> and P_S, the closure predicates and the Möbius function.
"""

import logging
import re
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Any, Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx

from src.errors import (
    CycleError,
    DuplicateElementError,
    EmptySetError,
    InputError,
    MissingValueError,
    NoBoundError,
    UnknownElementError,
    ZeroValueError,
)

logger = logging.getLogger(__name__)

ElementId = Union[str, int]

_INT_TOKEN = re.compile(r"-?(0|[1-9][0-9]*)")


class FinitePoset:
    """Immutable finite partial order whose carrier is listed in a linear extension.

    Elements are addressed by their ids; internally the order is stored as
    reflexive up-sets of carrier indices. Meets, joins and Möbius rows are
    memoized per instance; cache writes are idempotent.
    """

    def __init__(self, carrier: Sequence[ElementId], up_sets: Sequence[Iterable[int]]):
        self._carrier: Tuple[ElementId, ...] = tuple(carrier)
        self._index: Dict[ElementId, int] = {e: i for i, e in enumerate(self._carrier)}
        if len(self._index) != len(self._carrier):
            raise DuplicateElementError("carrier elements must be distinct")
        self._up: Tuple[FrozenSet[int], ...] = tuple(frozenset(u) | {i} for i, u in enumerate(up_sets))
        down: List[set] = [set() for _ in self._carrier]
        for i, ups in enumerate(self._up):
            for j in ups:
                if j < i:
                    raise InputError(
                        f"carrier order is not a linear extension: "
                        f"{self._carrier[i]!r} precedes {self._carrier[j]!r}"
                    )
                down[j].add(i)
        self._down: Tuple[FrozenSet[int], ...] = tuple(frozenset(d) for d in down)
        self._mobius_rows: Dict[int, Dict[int, int]] = {}
        self._join_cache: Dict[Tuple[int, int], int] = {}
        self._meet_cache: Dict[Tuple[int, int], int] = {}

    @classmethod
    def from_order(cls, elements: Sequence[ElementId],
                   leq: Callable[[ElementId, ElementId], bool]) -> "FinitePoset":
        """Build a poset from an order predicate evaluated on all pairs."""
        relations = [(a, b) for a in elements for b in elements if a != b and leq(a, b)]
        return build_poset(elements, relations)

    # Basic access

    @property
    def carrier(self) -> Tuple[ElementId, ...]:
        return self._carrier

    def __len__(self) -> int:
        return len(self._carrier)

    def __iter__(self) -> Iterator[ElementId]:
        return iter(self._carrier)

    def __contains__(self, element: object) -> bool:
        return element in self._index

    def __repr__(self) -> str:
        return f"{type(self).__name__}({list(self._carrier)!r})"

    def index(self, element: ElementId) -> int:
        try:
            return self._index[element]
        except (KeyError, TypeError):
            raise UnknownElementError(f"unknown element {element!r}") from None

    def leq(self, a: ElementId, b: ElementId) -> bool:
        return self.index(b) in self._up[self.index(a)]

    def lt(self, a: ElementId, b: ElementId) -> bool:
        return a != b and self.leq(a, b)

    def up_set(self, a: ElementId) -> Tuple[ElementId, ...]:
        """Elements above a (inclusive), in carrier order."""
        return tuple(self._carrier[j] for j in sorted(self._up[self.index(a)]))

    def down_set(self, a: ElementId) -> Tuple[ElementId, ...]:
        """Elements below a (inclusive), in carrier order."""
        return tuple(self._carrier[j] for j in sorted(self._down[self.index(a)]))

    def interval(self, a: ElementId, b: ElementId) -> Tuple[ElementId, ...]:
        """The closed interval [a, b]; empty when a is not below b."""
        members = self._up[self.index(a)] & self._down[self.index(b)]
        return tuple(self._carrier[j] for j in sorted(members))

    def covers(self) -> List[Tuple[ElementId, ElementId]]:
        """Covering pairs (a, b), a covered by b, sorted by carrier position."""
        graph = self.to_digraph()
        reduced = nx.transitive_reduction(graph)
        return sorted(reduced.edges(), key=lambda edge: (self._index[edge[0]], self._index[edge[1]]))

    def to_digraph(self) -> nx.DiGraph:
        """Strict order relation as a networkx DAG."""
        graph = nx.DiGraph()
        graph.add_nodes_from(self._carrier)
        for i, ups in enumerate(self._up):
            graph.add_edges_from((self._carrier[i], self._carrier[j]) for j in sorted(ups) if j != i)
        return graph

    def subposet(self, elements: Iterable[ElementId]) -> "FinitePoset":
        """Induced subposet; the carrier keeps this poset's linear extension."""
        chosen = sorted({self.index(e) for e in elements})
        position = {j: k for k, j in enumerate(chosen)}
        up = [[position[j] for j in self._up[i] if j in position] for i in chosen]
        return FinitePoset([self._carrier[i] for i in chosen], up)

    # Bounds

    def join(self, a: ElementId, b: ElementId) -> ElementId:
        """Least upper bound of a and b."""
        key = (self.index(a), self.index(b))
        if key not in self._join_cache:
            common = self._up[key[0]] & self._up[key[1]]
            least = [j for j in common if common <= self._up[j]]
            if len(least) != 1:
                raise NoBoundError(f"{a!r} and {b!r} have no join")
            self._join_cache[key] = least[0]
        return self._carrier[self._join_cache[key]]

    def meet(self, a: ElementId, b: ElementId) -> ElementId:
        """Greatest lower bound of a and b."""
        key = (self.index(a), self.index(b))
        if key not in self._meet_cache:
            common = self._down[key[0]] & self._down[key[1]]
            greatest = [j for j in common if common <= self._down[j]]
            if len(greatest) != 1:
                raise NoBoundError(f"{a!r} and {b!r} have no meet")
            self._meet_cache[key] = greatest[0]
        return self._carrier[self._meet_cache[key]]

    def join_all(self, elements: Iterable[ElementId]) -> ElementId:
        items = list(elements)
        if not items:
            raise EmptySetError("join of an empty set")
        result = items[0]
        for element in items[1:]:
            result = self.join(result, element)
        return result

    def meet_all(self, elements: Iterable[ElementId]) -> ElementId:
        items = list(elements)
        if not items:
            raise EmptySetError("meet of an empty set")
        result = items[0]
        for element in items[1:]:
            result = self.meet(result, element)
        return result

    def top(self) -> Optional[ElementId]:
        everything = frozenset(range(len(self)))
        for i, down in enumerate(self._down):
            if down == everything:
                return self._carrier[i]
        return None

    def bottom(self) -> Optional[ElementId]:
        everything = frozenset(range(len(self)))
        for i, up in enumerate(self._up):
            if up == everything:
                return self._carrier[i]
        return None

    def is_lattice(self) -> bool:
        try:
            for a, b in combinations(self._carrier, 2):
                self.join(a, b)
                self.meet(a, b)
        except NoBoundError:
            return False
        return True

    # Möbius function

    def mobius(self, a: ElementId, b: ElementId) -> int:
        """Möbius function mu(a, b) of this poset."""
        row = self._mobius_row(self.index(a))
        return row.get(self.index(b), 0)

    def _mobius_row(self, i: int) -> Dict[int, int]:
        row = self._mobius_rows.get(i)
        if row is None:
            row = {}
            ups = sorted(self._up[i])
            for j in ups:
                if j == i:
                    row[j] = 1
                else:
                    row[j] = -sum(row[z] for z in ups if z != j and z in self._down[j])
            self._mobius_rows[i] = row
        return row


def build_poset(elements: Sequence[ElementId],
                relations: Iterable[Tuple[ElementId, ElementId]]) -> FinitePoset:
    """Poset generated by the relation pairs (reflexive-transitive closure).

    The carrier is reordered into the linear extension obtained by a stable
    topological sort that breaks ties by input order.
    """
    elements = list(elements)
    if not elements:
        raise EmptySetError("a poset needs at least one element")
    position: Dict[ElementId, int] = {}
    for k, element in enumerate(elements):
        if element in position:
            raise DuplicateElementError(f"element {element!r} declared twice")
        position[element] = k

    graph = nx.DiGraph()
    graph.add_nodes_from(elements)
    for a, b in relations:
        for element in (a, b):
            if element not in position:
                raise UnknownElementError(f"relation mentions undeclared element {element!r}")
        if a != b:
            graph.add_edge(a, b)

    if not nx.is_directed_acyclic_graph(graph):
        cycle = nx.find_cycle(graph)
        raise CycleError(f"relations violate antisymmetry along {cycle}")

    order = list(nx.lexicographical_topological_sort(graph, key=position.__getitem__))
    closure = nx.transitive_closure_dag(graph)
    index = {e: i for i, e in enumerate(order)}
    up_sets = [{index[v] for v in closure.successors(e)} for e in order]
    logger.debug("built poset with %d elements and %d strict relations",
                 len(order), closure.number_of_edges())
    return FinitePoset(order, up_sets)


def integer_chain(low: int, high: int) -> FinitePoset:
    """The segment [low, high] of the integers under their natural order."""
    if high < low:
        raise EmptySetError(f"empty integer segment [{low}, {high}]")
    size = high - low + 1
    return FinitePoset(range(low, high + 1), [range(i, size) for i in range(size)])


def linear_extension(poset: FinitePoset, members: Sequence[ElementId]) -> List[ElementId]:
    """Order members compatibly with the poset, keeping input order on ties."""
    position = {e: k for k, e in enumerate(members)}
    graph = nx.DiGraph()
    graph.add_nodes_from(members)
    graph.add_edges_from((a, b) for a in members for b in members if poset.lt(a, b))
    return list(nx.lexicographical_topological_sort(graph, key=position.__getitem__))


@dataclass(frozen=True)
class OrderedSubset:
    """Distinct carrier elements listed so that x_i below x_j implies i <= j."""
    poset: FinitePoset
    members: Tuple[ElementId, ...]

    def __post_init__(self):
        seen = set()
        for element in self.members:
            self.poset.index(element)
            if element in seen:
                raise DuplicateElementError(f"element {element!r} occurs twice in the subset")
            seen.add(element)
        for i, j in combinations(range(len(self.members)), 2):
            if self.poset.lt(self.members[j], self.members[i]):
                raise InputError(
                    f"subset order is not compatible with the poset: "
                    f"{self.members[j]!r} is below {self.members[i]!r}"
                )

    @classmethod
    def of(cls, poset: FinitePoset, members: Iterable[ElementId]) -> "OrderedSubset":
        """Validate members and arrange them in a linear extension."""
        items = list(members)
        if not items:
            raise EmptySetError("subsets must be nonempty")
        seen = set()
        for element in items:
            poset.index(element)
            if element in seen:
                raise DuplicateElementError(f"element {element!r} occurs twice in the subset")
            seen.add(element)
        return cls(poset, tuple(linear_extension(poset, items)))

    @classmethod
    def in_carrier_order(cls, poset: FinitePoset, members: Iterable[ElementId]) -> "OrderedSubset":
        chosen = {poset.index(e) for e in members}
        return cls(poset, tuple(poset.carrier[i] for i in sorted(chosen)))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[ElementId]:
        return iter(self.members)

    def __getitem__(self, k: int) -> ElementId:
        return self.members[k]

    def __contains__(self, element: object) -> bool:
        return element in self.members

    def index(self, element: ElementId) -> int:
        return self.members.index(element)

    def as_poset(self) -> FinitePoset:
        return self.poset.subposet(self.members)

    def same_members(self, other: "OrderedSubset") -> bool:
        return self.poset is other.poset and self.members == other.members


@dataclass(frozen=True)
class ClosureFlags:
    """Closure properties of a subset inside its host poset."""
    is_meet_closed: bool
    is_join_closed: bool
    is_lower_closed: bool
    is_upper_closed: bool
    is_upper_closed_up_to_join: bool


class PosetFunction(Mapping):
    """Total map from carrier elements to exact rationals."""

    def __init__(self, values: Mapping, name: str = "f"):
        self._values: Dict[ElementId, Fraction] = {k: to_fraction(v) for k, v in values.items()}
        self.name = name

    @classmethod
    def from_callable(cls, elements: Iterable[ElementId], fn: Callable[[Any], Any],
                      name: str = "f") -> "PosetFunction":
        return cls({e: fn(e) for e in elements}, name=name)

    def __getitem__(self, element: ElementId) -> Fraction:
        try:
            return self._values[element]
        except KeyError:
            raise MissingValueError(element, self.name) from None

    def __call__(self, element: ElementId) -> Fraction:
        return self[element]

    def __iter__(self) -> Iterator[ElementId]:
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __repr__(self) -> str:
        return f"PosetFunction({self.name!r}, {len(self)} values)"

    def reciprocal(self, elements: Optional[Iterable[ElementId]] = None) -> "PosetFunction":
        """1/f on the given elements.

        Without elements the result is a lazy view that raises ZeroValueError
        only at the zeros a computation actually touches.
        """
        if elements is None:
            return _ReciprocalFunction(self)
        values = {}
        for element in elements:
            value = self[element]
            if value == 0:
                raise ZeroValueError(element)
            values[element] = 1 / value
        return PosetFunction(values, name=f"1/{self.name}")


class _ReciprocalFunction(PosetFunction):
    def __init__(self, base: PosetFunction):
        self._base = base
        self._values = base._values
        self.name = f"1/{base.name}"

    def __getitem__(self, element: ElementId) -> Fraction:
        value = self._base[element]
        if value == 0:
            raise ZeroValueError(element)
        return 1 / value


def to_fraction(value: Any) -> Fraction:
    """Exact rational from an int, Fraction or rational literal; floats are refused."""
    if isinstance(value, float):
        raise InputError(f"floating-point value {value!r} is not accepted; use p/q")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not re.fullmatch(r"-?[0-9]+(/[0-9]+)?", text):
            raise InputError(f"invalid rational literal {value!r}")
        try:
            return Fraction(text)
        except ZeroDivisionError:
            raise InputError(f"zero denominator in {value!r}") from None
    raise InputError(f"cannot interpret {value!r} as a rational")


def _require_integers(poset: FinitePoset) -> None:
    for element in poset:
        if not isinstance(element, int):
            raise InputError(f"built-in functions need integer elements, got {element!r}")


def identity_function(poset: FinitePoset) -> PosetFunction:
    """f = N, f(k) = k."""
    _require_integers(poset)
    return PosetFunction.from_callable(poset, lambda k: k, name="N")


def constant_function(poset: FinitePoset, value: Any) -> PosetFunction:
    c = to_fraction(value)
    return PosetFunction.from_callable(poset, lambda _: c, name=f"const({c})")


def linear_function(poset: FinitePoset, t: Any) -> PosetFunction:
    """f(k) = k + t on an integer carrier."""
    _require_integers(poset)
    shift = to_fraction(t)
    return PosetFunction.from_callable(poset, lambda k: k + shift, name=f"k+{shift}")


# Module-level operations

def meet(poset: FinitePoset, a: ElementId, b: ElementId) -> ElementId:
    return poset.meet(a, b)


def join(poset: FinitePoset, a: ElementId, b: ElementId) -> ElementId:
    return poset.join(a, b)


def mobius(poset: FinitePoset, a: ElementId, b: ElementId) -> int:
    return poset.mobius(a, b)


def join_closure(s: OrderedSubset) -> OrderedSubset:
    """<S>: the smallest superset of S closed under pairwise joins."""
    poset = s.poset
    closed = list(s.members)
    present = set(closed)
    frontier = list(combinations(closed, 2))
    while frontier:
        fresh = []
        for a, b in frontier:
            joined = poset.join(a, b)
            if joined not in present:
                present.add(joined)
                fresh.append(joined)
        frontier = [(a, b) for a in fresh for b in closed] + list(combinations(fresh, 2))
        closed.extend(fresh)
    return OrderedSubset.in_carrier_order(poset, closed)


def upper_part(s: OrderedSubset) -> OrderedSubset:
    """P_S: the union of the intervals [x_i, join of S]."""
    poset = s.poset
    top = poset.join_all(s.members)
    members = [y for y in poset.down_set(top) if any(poset.leq(x, y) for x in s.members)]
    return OrderedSubset.in_carrier_order(poset, members)


def closure_predicates(s: OrderedSubset) -> ClosureFlags:
    poset = s.poset
    present = set(s.members)

    def closed_under(op: Callable[[ElementId, ElementId], ElementId]) -> bool:
        try:
            return all(op(a, b) in present for a, b in combinations(s.members, 2))
        except NoBoundError:
            return False

    lower = all(set(poset.down_set(x)) <= present for x in s.members)
    upper = all(set(poset.up_set(x)) <= present for x in s.members)
    try:
        upper_to_join = set(upper_part(s).members) == present
    except NoBoundError:
        upper_to_join = False
    return ClosureFlags(
        is_meet_closed=closed_under(poset.meet),
        is_join_closed=closed_under(poset.join),
        is_lower_closed=lower,
        is_upper_closed=upper,
        is_upper_closed_up_to_join=upper_to_join,
    )


# Text format

def parse_element_token(token: str) -> ElementId:
    """Canonical decimal integers become ints; any other token stays a string."""
    return int(token) if _INT_TOKEN.fullmatch(token) else token


def parse_poset(text: str) -> FinitePoset:
    """Read the line-oriented poset format (`elem <id>`, `rel <a> <b>`, `#` comments)."""
    elements: List[ElementId] = []
    relations: List[Tuple[ElementId, ElementId]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "elem" and len(parts) == 2:
            elements.append(parse_element_token(parts[1]))
        elif parts[0] == "rel" and len(parts) == 3:
            relations.append((parse_element_token(parts[1]), parse_element_token(parts[2])))
        else:
            raise InputError(f"line {lineno}: cannot parse {raw.strip()!r}")
    return build_poset(elements, relations)


def load_poset(path: Union[str, Path]) -> FinitePoset:
    file_path = Path(path)
    if not file_path.exists():
        raise InputError(f"poset file not found: {file_path}")
    with open(file_path, 'r', encoding='utf-8') as f:
        return parse_poset(f.read())


def dump_poset(poset: FinitePoset) -> str:
    """Serialize as `elem` lines in carrier order followed by covering relations."""
    lines = [f"elem {e}" for e in poset]
    lines.extend(f"rel {a} {b}" for a, b in poset.covers())
    return "\n".join(lines) + "\n"
