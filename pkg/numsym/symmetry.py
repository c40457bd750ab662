"""
The involutions s_i on numberings and the permutation group G_P they generate
on an indexed path set.

Permutations are tuples over path indices, p[k] = image of path k;
compose(p, q) applies q first.
"""
import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from sympy.combinatorics import Permutation, PermutationGroup

from numsym.config import get_settings
from numsym.errors import InputError, PropertyViolation
from numsym.poset import (
    PathNumbering,
    PosetWindow,
    build_young_poset,
    enumerate_numberings,
    mask_of,
)
from numsym.schemas import (
    ORBIT_TAGS,
    CayleyStats,
    GroupOrderRow,
    LocalGroupReport,
    OrbitType,
    RelationCheck,
    RelationReport,
)

logger = logging.getLogger("numsym.symmetry")

Perm = Tuple[int, ...]


# ================= INVOLUTIONS =================

def apply_sigma(i: int, phi: PathNumbering) -> PathNumbering:
    """Swap positions i and i+1 unless phi(i) precedes phi(i+1)."""
    if not 1 <= i <= phi.length - 2:
        raise InputError(f"sigma_{i} needs positions {i} and {i + 1} in a numbering of length {phi.length}")
    poset = phi.poset
    a, b = phi.elements[i], phi.elements[i + 1]
    if poset.lt(a, b):
        return phi
    if poset.lower_mask(b) & ~mask_of(phi.elements[:i]):
        raise PropertyViolation(f"sigma_{i} broke the prefix ideal of {phi.elements}")
    swapped = phi.elements[:i] + (b, a) + phi.elements[i + 2:]
    return PathNumbering(swapped, poset)


# ================= PERMUTATION HELPERS =================

def identity(size: int) -> Perm:
    return tuple(range(size))


def compose(p: Perm, q: Perm) -> Perm:
    return tuple(p[x] for x in q)


def power(p: Perm, k: int) -> Perm:
    result = identity(len(p))
    for _ in range(k):
        result = compose(p, result)
    return result


def perm_order(p: Perm) -> int:
    seen = [False] * len(p)
    order = 1
    for start in range(len(p)):
        if seen[start]:
            continue
        length, x = 0, start
        while not seen[x]:
            seen[x] = True
            x = p[x]
            length += 1
        order = order * length // math.gcd(order, length)
    return order


def first_moved(p: Perm) -> Optional[int]:
    return next((k for k, x in enumerate(p) if x != k), None)


def closure(generators: Sequence[Perm], size: int, cap: Optional[int] = None) -> CayleyStats:
    """Breadth-first closure of the group generated by involutions."""
    gens = sorted({g for g in generators if first_moved(g) is not None})
    start = identity(size)
    seen = {start}
    frontier = [start]
    radius = 0
    while frontier:
        following = []
        for element in frontier:
            for g in gens:
                product = compose(g, element)
                if product not in seen:
                    seen.add(product)
                    following.append(product)
                    if cap is not None and len(seen) > cap:
                        return CayleyStats(elements=len(seen), diameter=radius + 1, cap_exceeded=True)
        if following:
            radius += 1
        frontier = following
    return CayleyStats(elements=len(seen), diameter=radius)


def schreier_sims_order(generators: Sequence[Perm], size: int) -> int:
    gens = [Permutation(list(g), size=size) for g in generators if first_moved(g) is not None]
    if not gens:
        return 1
    return int(PermutationGroup(gens).order())


# ================= GROUP HANDLE =================

@dataclass(frozen=True)
class GroupHandle:
    window: PosetWindow
    length: int
    paths: Tuple[PathNumbering, ...]
    generators: Tuple[Perm, ...]  # generators[i - 1] is sigma_i
    order: int
    order_method: str
    cayley: CayleyStats

    def sigma(self, i: int) -> Perm:
        if not 1 <= i <= len(self.generators):
            raise InputError(f"sigma_{i} is not a generator at length {self.length}")
        return self.generators[i - 1]

    @property
    def path_count(self) -> int:
        return len(self.paths)


def generate_group(window: PosetWindow, length: int, cap: Optional[int] = None,
                   path_limit: Optional[int] = None) -> GroupHandle:
    settings = get_settings()
    cap = settings.group_cap if cap is None else cap
    path_limit = settings.path_limit if path_limit is None else path_limit

    window = window.ensure_depth(length - 1)
    paths = tuple(enumerate_numberings(window, length, limit=path_limit))
    index = {p.elements: k for k, p in enumerate(paths)}

    generators = []
    for i in range(1, length - 1):
        perm = tuple(index[apply_sigma(i, p).elements] for p in paths)
        if compose(perm, perm) != identity(len(paths)):
            raise PropertyViolation(f"sigma_{i} is not an involution on the path set")
        generators.append(perm)

    stats = closure(generators, len(paths), cap)
    if stats.cap_exceeded:
        order = schreier_sims_order(generators, len(paths))
        method = "schreier-sims"
        logger.warning(f"⚠️ Group closure for {window.label} at length {length} passed cap {cap}; "
                       f"order {order} from stabilizer chain")
    else:
        order, method = stats.elements, "bfs"
    logger.info(f"✅ G_P for {window.label}, length {length}: {len(paths)} paths, order {order}")
    return GroupHandle(window, length, paths, tuple(generators), order, method, stats)


def orbit(phi: PathNumbering, window: PosetWindow, length: int) -> Set[PathNumbering]:
    if phi.length != length:
        raise InputError(f"numbering has length {phi.length}, expected {length}")
    if phi.poset != window.ensure_depth(length - 1).poset:
        raise InputError(f"numbering does not belong to window {window.label}")
    PathNumbering.of(phi.poset, phi.elements)
    seen = {phi}
    frontier = [phi]
    while frontier:
        following = []
        for psi in frontier:
            for i in range(1, length - 1):
                image = apply_sigma(i, psi)
                if image not in seen:
                    seen.add(image)
                    following.append(image)
        frontier = following
    return seen


# ================= RELATION CHECKS =================

def verify_relations(handle: GroupHandle) -> RelationReport:
    size = handle.path_count
    gens = handle.generators
    checks: List[RelationCheck] = []

    def check(family: str, i: int, j: int, word: Perm) -> None:
        witness = first_moved(word)
        checks.append(RelationCheck(family=family, i=i, j=j, passed=witness is None, witness=witness))

    for i, s in enumerate(gens, start=1):
        check("involution", i, i, compose(s, s))
    for i, s in enumerate(gens, start=1):
        for j in range(i + 2, len(gens) + 1):
            t = gens[j - 1]
            st = compose(s, t)
            check("commutation", i, j, compose(st, st))
    for i in range(1, len(gens)):
        product = compose(gens[i - 1], gens[i])
        check("hexagonal", i, i + 1, power(product, 6))

    report = RelationReport(length=handle.length, path_count=size, checks=checks)
    if report.ok:
        logger.info(f"✅ Relations hold for {handle.window.label} at length {handle.length}")
    else:
        logger.error(f"❌ {len(report.violations)} relation violations for {handle.window.label}")
    return report


def _orbits(perms: Sequence[Perm], size: int) -> List[List[int]]:
    seen = [False] * size
    orbits = []
    for start in range(size):
        if seen[start]:
            continue
        seen[start] = True
        members, stack = [start], [start]
        while stack:
            x = stack.pop()
            for p in perms:
                y = p[x]
                if not seen[y]:
                    seen[y] = True
                    members.append(y)
                    stack.append(y)
        orbits.append(sorted(members))
    return orbits


def _orbit_tag(size: int, order: int) -> str:
    """Action type of <s_i, s_i+1> on one orbit, keyed by (orbit size, restricted order)."""
    if order == 12:
        return "order-6-dihedral-class"
    tags = {
        (1, 1): "trivial",
        (2, 2): "Z2-swap",
        (3, 6): "3-cycle-class",  # natural action on three points
        (6, 6): "S3-class",  # regular action
    }
    return tags.get((size, order), "unclassified")


def classify_local(handle: GroupHandle, i: int) -> LocalGroupReport:
    if i < 1 or i + 1 > len(handle.generators):
        raise InputError(f"local group at i={i} needs sigma_{i + 1} (length {handle.length})")
    a, b = handle.sigma(i), handle.sigma(i + 1)
    size = handle.path_count
    ident = identity(size)

    product_order = perm_order(compose(a, b))
    if product_order not in (1, 2, 3, 6):
        raise PropertyViolation(f"order of sigma_{i} sigma_{i + 1} is {product_order}")
    group_order = closure([a, b], size).elements

    if a == ident and b == ident:
        degeneracy = "trivial-pair"
    elif a == b:
        degeneracy = "coincident"
    elif a == ident or b == ident:
        degeneracy = "single-involution"
    else:
        degeneracy = "dihedral"

    kinds: Counter = Counter()
    for members in _orbits([a, b], size):
        local = {x: k for k, x in enumerate(members)}
        restricted = [tuple(local[p[x]] for x in members) for p in (a, b)]
        order = closure(restricted, len(members)).elements
        kinds[(len(members), _orbit_tag(len(members), order))] += 1

    odd = [size for size, tag in kinds if tag not in ORBIT_TAGS]
    if odd:
        raise PropertyViolation(f"unclassified orbit action of <sigma_{i}, sigma_{i + 1}> on orbits of size {odd}")
    orbit_types = [OrbitType(size=s, tag=t, count=c) for (s, t), c in sorted(kinds.items())]
    return LocalGroupReport(i=i, product_order=product_order, group_order=group_order,
                            degeneracy=degeneracy, orbit_types=orbit_types)


# ================= FIBERS =================

def endpoint_fibers(paths: Iterable[PathNumbering]) -> Dict[int, List[PathNumbering]]:
    fibers: Dict[int, List[PathNumbering]] = defaultdict(list)
    for p in paths:
        fibers[p.endpoint].append(p)
    return dict(fibers)


def fiber_transitivity(window: PosetWindow, length: int) -> List[Tuple[int, ...]]:
    """Paths whose orbit differs from their endpoint fiber (empty when transitive)."""
    window = window.ensure_depth(length - 1)
    fibers = endpoint_fibers(enumerate_numberings(window, length))
    mismatches = []
    for fiber in fibers.values():
        expected = set(fiber)
        for phi in fiber:
            if orbit(phi, window, length) != expected:
                mismatches.append(phi.elements)
    return mismatches


# ================= TABLES =================

def group_order_row(window: PosetWindow, length: int, cap: Optional[int] = None,
                    n: Optional[int] = None) -> GroupOrderRow:
    handle = generate_group(window, length, cap=cap)
    return GroupOrderRow(
        source=window.label,
        length=length,
        path_count=handle.path_count,
        order=handle.order,
        order_method=handle.order_method,
        cap_exceeded=handle.cayley.cap_exceeded,
        symmetric_n=math.factorial(n) if n else None,
        symmetric_n_minus_1=math.factorial(n - 1) if n else None,
    )


def hook_series(ns: Iterable[int], cap: Optional[int] = None) -> List[GroupOrderRow]:
    """G_P for the diagrams (n-1, 1) at full length, next to |S_n| and |S_{n-1}|."""
    rows = []
    for n in ns:
        if n < 3:
            raise InputError(f"(n-1,1) needs n >= 3, got {n}")
        window = build_young_poset([n - 1, 1])
        rows.append(group_order_row(window, window.poset.n, cap=cap, n=n))
    return rows


def depth_table(window: PosetWindow, max_length: int, cap: Optional[int] = None) -> List[GroupOrderRow]:
    """
    Orders of G_P for lengths 3..max_length (finite stages of the inductive limit).
    The window stays as given while it holds length - 1 elements, so a two-row
    diagram such as young:10,10 keeps its rows; growable windows widen only past that.
    """
    rows = []
    for length in range(3, max_length + 1):
        stage = window.ensure_depth(length - 1)
        rows.append(group_order_row(stage, length, cap=cap))
    return rows
