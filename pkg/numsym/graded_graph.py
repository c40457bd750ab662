"""
The graded graph of finite ideals: level k holds the ideals with k non-root
elements, up-edges add one element, dims count root paths exactly.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, NamedTuple, Sequence, Tuple

from numsym.errors import InputError
from numsym.poset import PathNumbering, PosetWindow, iter_bits, mask_of

logger = logging.getLogger("numsym.graded_graph")


class LevelVertex(NamedTuple):
    level: int
    index: int
    ideal: Tuple[int, ...]
    mask: int


@dataclass(frozen=True)
class GradedGraph:
    window: PosetWindow
    depth: int
    levels: Tuple[Tuple[LevelVertex, ...], ...]
    edges_up: Tuple[Tuple[Tuple[Tuple[int, int], ...], ...], ...]  # (element, target index)
    dims: Tuple[Tuple[int, ...], ...]
    _where: Dict[int, Tuple[int, int]] = field(repr=False, compare=False)

    @property
    def root(self) -> LevelVertex:
        return self.levels[0][0]

    def vertex(self, ideal) -> LevelVertex:
        """Vertex by bitmask or by iterable of element ids."""
        mask = ideal if isinstance(ideal, int) else mask_of(ideal)
        try:
            level, index = self._where[mask]
        except KeyError:
            raise InputError(f"ideal {sorted(iter_bits(mask))} is not a vertex of the graph") from None
        return self.levels[level][index]

    def vertex_at(self, level: int, index: int) -> LevelVertex:
        try:
            return self.levels[level][index]
        except IndexError:
            raise InputError(f"no vertex {level}:{index} (depth {self.depth})") from None

    def contains(self, mask: int) -> bool:
        return mask in self._where

    def up_neighbors(self, v: LevelVertex) -> List[Tuple[int, LevelVertex]]:
        if v.level == self.depth:
            return []
        return [(x, self.levels[v.level + 1][j]) for x, j in self.edges_up[v.level][v.index]]

    def vertex_count(self) -> int:
        return sum(len(level) for level in self.levels)


def build_graph(window: PosetWindow, depth: int) -> GradedGraph:
    if depth < 0:
        raise InputError("depth must be non-negative")
    window = window.ensure_depth(depth)
    poset = window.poset

    masks_by_level: List[List[int]] = [[1]]
    for _ in range(depth):
        following = {mask | (1 << x) for mask in masks_by_level[-1] for x in poset.addable(mask)}
        masks_by_level.append(sorted(following, key=lambda m: tuple(iter_bits(m))))

    where = {m: (k, i) for k, masks in enumerate(masks_by_level) for i, m in enumerate(masks)}
    levels = tuple(
        tuple(LevelVertex(k, i, tuple(iter_bits(m)), m) for i, m in enumerate(masks))
        for k, masks in enumerate(masks_by_level)
    )

    edges_up = []
    dims: List[List[int]] = [[1]]
    for k in range(depth):
        upper_dims = [0] * len(masks_by_level[k + 1])
        level_edges = []
        for i, mask in enumerate(masks_by_level[k]):
            out = []
            for x in poset.addable(mask):
                j = where[mask | (1 << x)][1]
                out.append((x, j))
                upper_dims[j] += dims[k][i]
            level_edges.append(tuple(out))
        edges_up.append(tuple(level_edges))
        dims.append(upper_dims)

    logger.info(f"📊 Built graph for {window.label}: depth {depth}, "
                f"{sum(len(m) for m in masks_by_level)} vertices")
    return GradedGraph(window, depth, levels, tuple(edges_up), tuple(tuple(d) for d in dims), where)


def dimension(g: GradedGraph, v: LevelVertex) -> int:
    return g.dims[v.level][v.index]


def up_dimensions(g: GradedGraph, v: LevelVertex, floor: int = 0) -> Dict[int, int]:
    """Number of paths w -> v for every vertex w contained in v, keyed by mask."""
    counts = {v.mask: 1}
    for level in range(v.level - 1, floor - 1, -1):
        for w in g.levels[level]:
            if w.mask & ~v.mask:
                continue
            total = 0
            for x, j in g.edges_up[level][w.index]:
                total += counts.get(g.levels[level + 1][j].mask, 0)
            if total:
                counts[w.mask] = total
    return counts


def up_dimension(g: GradedGraph, u: LevelVertex, v: LevelVertex) -> int:
    if u.level > v.level:
        raise InputError(f"level of u ({u.level}) exceeds level of v ({v.level})")
    if u.mask & ~v.mask:
        return 0
    return up_dimensions(g, v, floor=u.level).get(u.mask, 0)


def path_of(numbering: PathNumbering, g: GradedGraph) -> List[LevelVertex]:
    numbering = PathNumbering.of(g.window.poset, numbering.elements)
    if numbering.length - 1 > g.depth:
        raise InputError(f"numbering of length {numbering.length} exceeds graph depth {g.depth}")
    path, mask = [], 0
    for x in numbering.elements:
        mask |= 1 << x
        path.append(g.vertex(mask))
    return path


def numbering_of(g: GradedGraph, vertices: Sequence[LevelVertex]) -> PathNumbering:
    if not vertices or vertices[0].mask != 1:
        raise InputError("a vertex path starts at the root")
    elements = [0]
    for lower, upper in zip(vertices, vertices[1:]):
        added = upper.mask & ~lower.mask
        if upper.level != lower.level + 1 or lower.mask & ~upper.mask or added & (added - 1):
            raise InputError(f"{lower.ideal} -> {upper.ideal} is not an edge")
        elements.append(added.bit_length() - 1)
    return PathNumbering.of(g.window.poset, elements)


def iter_root_paths(g: GradedGraph, level: int) -> Iterator[PathNumbering]:
    """Root paths reaching `level`, in lexicographic order of element ids."""
    poset = g.window.poset
    prefix = [0]

    def walk(k: int, index: int) -> Iterator[PathNumbering]:
        if k == level:
            yield PathNumbering(tuple(prefix), poset)
            return
        for x, j in g.edges_up[k][index]:
            prefix.append(x)
            yield from walk(k + 1, j)
            prefix.pop()

    return walk(0, 0)


# ================= DUMPS =================

def graph_csv(g: GradedGraph) -> List[str]:
    lines = ["level,index,ideal,dim"]
    for level in g.levels:
        for v in level:
            lines.append(f"{v.level},{v.index},{' '.join(map(str, v.ideal))},{dimension(g, v)}")
    return lines


def path_line(numbering: PathNumbering) -> str:
    return ",".join(map(str, numbering.elements))
