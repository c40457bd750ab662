"""
Finite posets and finite windows of the locally finite families Z_+^d,
Young diagrams, chains and antichains.

Element 0 is always the minimum. Ideals are handled internally as int
bitmasks over element ids (bit x set <=> element x in the ideal).
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np

from numsym.errors import (
    CycleError,
    DanglingIdError,
    InputError,
    MinimumError,
    PathSetTooLarge,
)
from numsym.schemas import Family, IdealKind, IdealSpec

logger = logging.getLogger("numsym.poset")


@dataclass(frozen=True)
class Element:
    id: int
    coords: Optional[Tuple[int, ...]] = None


def iter_bits(mask: int) -> Iterator[int]:
    """Yield set bit positions in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(ids: Iterable[int]) -> int:
    mask = 0
    for x in ids:
        mask |= 1 << x
    return mask


class Poset:
    """
    Finite poset on dense ids 0..n-1 with unique minimum 0.

    `covers` is kept exactly as given; the order relation is its
    reflexive-transitive closure, stored as one down-set bitmask per element.
    """

    __slots__ = ("n", "elements", "covers", "_lower", "_down", "_by_coords")

    def __init__(self, elements: Sequence[Element], covers: Iterable[Tuple[int, int]]):
        covers = tuple((int(a), int(b)) for a, b in covers)
        ids = [e.id for e in elements]

        graph = nx.DiGraph()
        graph.add_nodes_from(ids)
        graph.add_edges_from(covers)
        try:
            cycle = nx.find_cycle(graph)
        except nx.NetworkXNoCycle:
            cycle = None
        if cycle:
            raise CycleError(f"cover relation has a cycle: {[edge[0] for edge in cycle]}")

        known = set(ids)
        for a, b in covers:
            if a not in known or b not in known:
                raise DanglingIdError(f"cover {a} < {b} uses an undeclared id")
        if sorted(ids) != list(range(len(ids))):
            raise InputError("element ids must be dense from 0")
        if not ids:
            raise InputError("a poset needs at least the minimum element 0")

        self.n = len(ids)
        self.elements: Tuple[Element, ...] = tuple(sorted(elements, key=lambda e: e.id))
        self.covers = covers

        lower = [0] * self.n
        for a, b in covers:
            lower[b] |= 1 << a
        self._lower = tuple(lower)

        minimal = [x for x in range(self.n) if not lower[x]]
        if minimal != [0]:
            raise MinimumError(f"element 0 must be the unique minimal element, minimal: {minimal}")

        down = [0] * self.n
        for x in nx.topological_sort(graph):
            acc = 1 << x
            for y in iter_bits(lower[x]):
                acc |= down[y]
            down[x] = acc
        self._down = tuple(down)

        self._by_coords: Dict[Tuple[int, ...], int] = {}
        for e in self.elements:
            if e.coords is not None:
                if e.coords in self._by_coords:
                    raise InputError(f"duplicate coordinates {e.coords}")
                self._by_coords[e.coords] = e.id

    # ---- order queries ----

    def leq(self, y: int, x: int) -> bool:
        return bool((self._down[x] >> y) & 1)

    def lt(self, y: int, x: int) -> bool:
        return y != x and self.leq(y, x)

    def comparable(self, x: int, y: int) -> bool:
        return self.leq(x, y) or self.leq(y, x)

    def lower_mask(self, x: int) -> int:
        return self._lower[x]

    def lower_covers(self, x: int) -> List[int]:
        return list(iter_bits(self._lower[x]))

    def incomparable_pairs(self) -> List[Tuple[int, int]]:
        return [(x, y) for x, y in itertools.combinations(range(self.n), 2)
                if not self.comparable(x, y)]

    # ---- ideals ----

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def is_ideal(self, mask: int) -> bool:
        return all(self._lower[x] & ~mask == 0 for x in iter_bits(mask))

    def addable(self, mask: int) -> List[int]:
        """Elements outside the ideal whose lower covers all lie inside it."""
        outside = self.full_mask & ~mask
        return [x for x in iter_bits(outside) if self._lower[x] & ~mask == 0]

    def element_id(self, coords: Tuple[int, ...]) -> int:
        try:
            return self._by_coords[tuple(coords)]
        except KeyError:
            raise InputError(f"no element with coordinates {tuple(coords)}") from None

    def coords_of(self, x: int) -> Optional[Tuple[int, ...]]:
        return self.elements[x].coords

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        return self.elements == other.elements and set(self.covers) == set(other.covers)

    def __hash__(self) -> int:
        return hash((self.elements, frozenset(self.covers)))

    def __repr__(self) -> str:
        return f"Poset(n={self.n}, covers={len(self.covers)})"


@dataclass(frozen=True)
class PosetWindow:
    """A finite, downward closed window of one of the poset families."""
    family: Family
    params: Tuple[int, ...]
    poset: Poset = field(compare=False)
    growable: bool = False

    @property
    def label(self) -> str:
        if self.family == Family.FILE:
            return "file"
        return f"{self.family.value}:" + ",".join(map(str, self.params))

    @property
    def size(self) -> int:
        """Number of non-root elements."""
        return self.poset.n - 1

    def grow(self, depth: int) -> "PosetWindow":
        """Window of the same ambient poset holding every ideal of `depth` non-root elements."""
        if not self.growable:
            raise InputError(f"window {self.label} cannot grow beyond {self.size} elements")
        if self.family == Family.YOUNG:
            rows = max(len(self.params), depth)
            shape = [max(self.params[r] if r < len(self.params) else 0, depth // (r + 1))
                     for r in range(rows)]
            grown = build_young_poset([part for part in shape if part > 0])
        elif self.family == Family.BOX:
            grown = build_box_poset(len(self.params), tuple(max(b, depth + 1) for b in self.params))
        else:
            grown = build_chain(max(self.params[0], depth + 1))
        logger.info(f"🔧 Grew window {self.label} -> {grown.label} for depth {depth}")
        return grown

    def ensure_depth(self, depth: int) -> "PosetWindow":
        if depth <= self.size:
            return self
        return self.grow(depth)


# ================= BUILDERS =================

def build_young_poset(partition: Sequence[int]) -> PosetWindow:
    """Cells of a Young diagram, componentwise order, with the minimum adjoined below (1,1)."""
    partition = [int(p) for p in partition]
    if not partition or any(p < 1 for p in partition):
        raise InputError(f"partition must be nonempty with positive parts, got {partition}")
    if any(a < b for a, b in zip(partition, partition[1:])):
        raise InputError(f"partition must be weakly decreasing, got {partition}")

    elements = [Element(0)]
    index: Dict[Tuple[int, int], int] = {}
    for r, length in enumerate(partition, start=1):
        for c in range(1, length + 1):
            index[(r, c)] = len(elements)
            elements.append(Element(len(elements), (r, c)))

    covers = [(0, index[(1, 1)])]
    for (r, c), x in index.items():
        if (r, c + 1) in index:
            covers.append((x, index[(r, c + 1)]))
        if (r + 1, c) in index:
            covers.append((x, index[(r + 1, c)]))
    return PosetWindow(Family.YOUNG, tuple(partition), Poset(elements, covers), growable=True)


def build_box_poset(d: int, bounds: Sequence[int]) -> PosetWindow:
    """Lattice points of [1, b_1] x ... x [1, b_d]; the all-ones point is the minimum."""
    bounds = tuple(int(b) for b in bounds)
    if d < 1 or len(bounds) != d:
        raise InputError(f"box needs d >= 1 and d bounds, got d={d}, bounds={bounds}")
    if any(b < 1 for b in bounds):
        raise InputError(f"box bounds must be positive, got {bounds}")

    points = list(itertools.product(*(range(1, b + 1) for b in bounds)))
    index = {p: i for i, p in enumerate(points)}
    elements = [Element(i, p) for i, p in enumerate(points)]
    covers = []
    for p, x in index.items():
        for axis in range(d):
            q = p[:axis] + (p[axis] + 1,) + p[axis + 1:]
            if q in index:
                covers.append((x, index[q]))
    return PosetWindow(Family.BOX, bounds, Poset(elements, covers), growable=True)


def build_chain(n: int) -> PosetWindow:
    """Chain 0 < 1 < ... < n-1 (n elements, minimum included)."""
    if n < 1:
        raise InputError("chain needs at least one element")
    elements = [Element(i, (i + 1,)) for i in range(n)]
    covers = [(i, i + 1) for i in range(n - 1)]
    return PosetWindow(Family.CHAIN, (n,), Poset(elements, covers), growable=True)


def build_antichain(n: int) -> PosetWindow:
    """n pairwise incomparable elements above an adjoined minimum."""
    if n < 1:
        raise InputError("antichain needs at least one element")
    elements = [Element(i) for i in range(n + 1)]
    covers = [(0, i) for i in range(1, n + 1)]
    return PosetWindow(Family.ANTICHAIN, (n,), Poset(elements, covers), growable=False)


def build_window(source: str) -> PosetWindow:
    """Builder string such as 'young:2,1', 'box:2,2,2', 'chain:5', 'antichain:3' or 'file:<path>'."""
    head, _, tail = source.partition(":")
    if head == "file":
        with open(tail, "r", encoding="utf-8") as f:
            return parse_poset(f.read())
    try:
        values = [int(v) for v in tail.split(",") if v.strip()]
    except ValueError:
        raise InputError(f"bad poset builder '{source}'") from None
    if head == "young":
        return build_young_poset(values)
    if head == "box":
        return build_box_poset(len(values), values)
    if head in ("chain", "antichain"):
        if len(values) != 1:
            raise InputError(f"{head} takes one size, got '{source}'")
        return build_chain(values[0]) if head == "chain" else build_antichain(values[0])
    raise InputError(f"unknown poset family '{head}'")


# ================= TEXT FORMAT =================

def parse_poset(text: str) -> PosetWindow:
    """Parse 'el <id> [coords...]' / 'cov <lower> <upper>' lines; '#' starts a comment."""
    elements: List[Element] = []
    covers: List[Tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            values = [int(p) for p in parts[1:]]
        except ValueError:
            raise InputError(f"line {lineno}: non-integer field in '{raw}'") from None
        if parts[0] == "el" and values:
            coords = tuple(values[1:]) or None
            elements.append(Element(values[0], coords))
        elif parts[0] == "cov" and len(values) == 2:
            covers.append((values[0], values[1]))
        else:
            raise InputError(f"line {lineno}: cannot parse '{raw}'")

    # Cycles are reported before dangling ids
    graph = nx.DiGraph(covers)
    if covers and not nx.is_directed_acyclic_graph(graph):
        raise CycleError(f"cover relation has a cycle: {nx.find_cycle(graph)}")
    return PosetWindow(Family.FILE, (), Poset(elements, covers), growable=False)


def serialize_poset(window: PosetWindow) -> str:
    poset = window.poset
    lines = [f"# numsym poset {window.label}"]
    for e in poset.elements:
        coords = "" if e.coords is None else " " + " ".join(map(str, e.coords))
        lines.append(f"el {e.id}{coords}")
    for a, b in poset.covers:
        lines.append(f"cov {a} {b}")
    return "\n".join(lines) + "\n"


# ================= IDEALS & NUMBERINGS =================

def addable_elements(poset: Poset, ideal: Iterable[int]) -> List[int]:
    mask = mask_of(ideal)
    if not poset.is_ideal(mask):
        raise InputError(f"{sorted(ideal)} is not downward closed")
    return poset.addable(mask)


@dataclass(frozen=True)
class PathNumbering:
    """
    Monotone numbering prefix phi(0..N-1) with phi(0) = minimum, equivalently
    a root path of length N-1 in the graded ideal graph.
    """
    elements: Tuple[int, ...]
    poset: Poset = field(compare=False, repr=False)

    @classmethod
    def of(cls, poset: Poset, elements: Sequence[int]) -> "PathNumbering":
        elements = tuple(int(x) for x in elements)
        if not elements or elements[0] != 0:
            raise InputError("a numbering starts with the minimum element 0")
        mask = 0
        for position, x in enumerate(elements):
            if not 0 <= x < poset.n:
                raise InputError(f"position {position}: unknown element {x}")
            if (mask >> x) & 1:
                raise InputError(f"position {position}: element {x} repeated")
            if poset.lower_mask(x) & ~mask:
                raise InputError(f"position {position}: prefix is not an ideal at element {x}")
            mask |= 1 << x
        return cls(elements, poset)

    @property
    def length(self) -> int:
        return len(self.elements)

    @property
    def endpoint(self) -> int:
        """Bitmask of the ideal reached by the whole numbering."""
        return mask_of(self.elements)

    def __len__(self) -> int:
        return len(self.elements)


def enumerate_numberings(window: PosetWindow, length: int,
                         limit: Optional[int] = None) -> List[PathNumbering]:
    """All numberings of `length` positions (position 0 included), lexicographic by ids."""
    if length < 1:
        raise InputError("numbering length must be at least 1")
    window = window.ensure_depth(length - 1)
    poset = window.poset
    found: List[Tuple[int, ...]] = []
    prefix = [0]

    def extend(mask: int) -> None:
        if len(prefix) == length:
            found.append(tuple(prefix))
            if limit is not None and len(found) > limit:
                raise PathSetTooLarge(f"more than {limit} numberings of length {length}")
            return
        for x in poset.addable(mask):
            prefix.append(x)
            extend(mask | (1 << x))
            prefix.pop()

    extend(1)
    return [PathNumbering(p, poset) for p in found]


def ideal_member(spec: IdealSpec, element: Element) -> bool:
    if spec.kind == IdealKind.FULL or element.id == 0:
        return True
    if spec.kind == IdealKind.FINITE_SET:
        return element.id in spec.params
    if element.coords is None:
        raise InputError(f"{spec} needs coordinates; element {element.id} has none")
    return bool(ideal_mask(spec, np.asarray([element.coords]))[0])


def ideal_mask(spec: IdealSpec, coords: np.ndarray) -> np.ndarray:
    """Vectorized membership for an (m, d) array of coordinates."""
    coords = np.asarray(coords)
    if spec.kind == IdealKind.FULL:
        return np.ones(len(coords), dtype=bool)
    if spec.kind == IdealKind.FINITE_SET:
        raise InputError(f"{spec} is defined by ids, not coordinates")
    d = spec.dimension
    if coords.ndim != 2 or coords.shape[1] != d:
        raise InputError(f"{spec} needs {d}-dimensional coordinates")
    if spec.kind == IdealKind.HOOK_Z2:
        k, l = spec.params
        return (coords[:, 0] <= k) | (coords[:, 1] <= l)
    # Tube of chains along axis j: every other coordinate bounded by a_j
    member = np.zeros(len(coords), dtype=bool)
    for axis, bound in enumerate(spec.params):
        others = np.delete(coords, axis, axis=1)
        if bound > 0:
            member |= np.all(others <= bound, axis=1)
    return member


def ideal_ids(spec: IdealSpec, poset: Poset) -> Set[int]:
    """Ids of the window elements lying in the ideal."""
    return {e.id for e in poset.elements if ideal_member(spec, e)}


def ideal_width(spec: IdealSpec, window: PosetWindow) -> int:
    """Largest antichain of the ideal inside the window (Dilworth via bipartite matching)."""
    poset = window.poset
    members = sorted(ideal_ids(spec, poset))
    graph = nx.Graph()
    left = [("L", x) for x in members]
    graph.add_nodes_from(left)
    graph.add_nodes_from(("R", x) for x in members)
    for x, y in itertools.permutations(members, 2):
        if poset.lt(x, y):
            graph.add_edge(("L", x), ("R", y))
    matching = nx.bipartite.maximum_matching(graph, top_nodes=left)
    return len(members) - len(matching) // 2
