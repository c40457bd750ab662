"""
Monte Carlo side of central measures: Plancherel growth, RSK growth from
i.i.d. letters, walks of exact kernels, and frequency estimates.

Randomness: numpy Generator with the PCG64 bit generator; replica k of a run
with seed s uses seed s + k.
"""
import logging
import math
from bisect import bisect_right
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
from cachetools import LRUCache, cached

from numsym.config import get_settings
from numsym.errors import InputError
from numsym.measures import CentralMeasureSpec, validate_alpha
from numsym.poset import PathNumbering, build_young_poset, ideal_mask, mask_of
from numsym.schemas import ComparisonRow, FrequencyReport, IdealKind, IdealSpec, MeasureVariant
from numsym.young import Shape, add_cell, plancherel_probabilities_float

logger = logging.getLogger("numsym.samplers")


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True, eq=False)
class YoungGrowth:
    """Cells added one at a time, (row, column) 1-based; position 0 (the empty diagram) omitted."""
    cells: np.ndarray

    @property
    def n_steps(self) -> int:
        return len(self.cells)

    @property
    def shape(self) -> Shape:
        rows = np.bincount(self.cells[:, 0], minlength=1)[1:] if len(self.cells) else np.array([], int)
        return tuple(int(r) for r in rows if r > 0)

    def diagrams(self) -> Iterator[Shape]:
        shape: Shape = ()
        yield shape
        for row, _ in self.cells:
            shape = add_cell(shape, int(row) - 1)
            yield shape

    def to_numbering(self) -> PathNumbering:
        """The growth as a numbering of the window spanned by its final diagram."""
        if not len(self.cells):
            raise InputError("an empty growth has no window")
        window = build_young_poset(self.shape)
        ids = [0] + [window.poset.element_id((int(r), int(c))) for r, c in self.cells]
        return PathNumbering.of(window.poset, ids)


def sample_plancherel(n_steps: int, seed: int) -> YoungGrowth:
    if n_steps < 1:
        raise InputError("n_steps must be at least 1")
    uniforms = make_rng(seed).random(n_steps)
    shape: List[int] = []
    cells = np.empty((n_steps, 2), dtype=np.int64)
    for step in range(n_steps):
        rows, p = plancherel_probabilities_float(tuple(shape))
        k = min(int(np.searchsorted(np.cumsum(p), uniforms[step], side="right")), len(rows) - 1)
        row = rows[k]
        if row == len(shape):
            shape.append(1)
        else:
            shape[row] += 1
        cells[step] = (row + 1, shape[row])
    return YoungGrowth(cells)


def sample_rsk_thoma(alpha: Sequence[float], n_steps: int, seed: int) -> YoungGrowth:
    """Row-insert i.i.d. letters drawn from alpha and record where the shape grows."""
    if n_steps < 1:
        raise InputError("n_steps must be at least 1")
    alpha = validate_alpha(alpha)
    letters = make_rng(seed).choice(len(alpha), size=n_steps, p=np.asarray(alpha))
    rows: List[List[int]] = []
    cells = np.empty((n_steps, 2), dtype=np.int64)
    for step, letter in enumerate(letters.tolist()):
        x, r = letter, 0
        while True:
            if r == len(rows):
                rows.append([x])
                break
            row = rows[r]
            pos = bisect_right(row, x)
            if pos == len(row):
                row.append(x)
                break
            x, row[pos] = row[pos], x
            r += 1
        cells[step] = (r + 1, len(rows[r]))
    return YoungGrowth(cells)


def sample_kernel_walk(spec: CentralMeasureSpec, n_steps: int, seed: int) -> List[int]:
    """Element ids added by a walk of an explicit kernel (position 0 omitted)."""
    kernel = spec.kernel
    if n_steps > kernel.depth:
        raise InputError(f"{spec.label} supports at most {kernel.depth} steps")
    uniforms = make_rng(seed).random(n_steps)
    mask, added = 1, []
    for step in range(n_steps):
        row = kernel.row(mask)
        weights = np.cumsum([float(p) for _, p in row])
        k = min(int(np.searchsorted(weights, uniforms[step] * weights[-1], side="right")), len(row) - 1)
        element = row[k][0]
        added.append(element)
        mask |= 1 << element
    return added


# ================= FREQUENCIES =================

def _check_compatible(spec: CentralMeasureSpec, ideal: IdealSpec) -> None:
    if ideal.kind == IdealKind.FULL:
        return
    if spec.variant in (MeasureVariant.PLANCHEREL, MeasureVariant.RSK_THOMA):
        if ideal.kind == IdealKind.FINITE_SET or ideal.dimension != 2:
            raise InputError(f"{ideal} does not apply to Young-graph sampler {spec.label}")
        return
    if ideal.kind == IdealKind.FINITE_SET:
        poset = spec.window.poset
        if any(x >= poset.n for x in ideal.params) or not poset.is_ideal(mask_of(ideal.params)):
            raise InputError(f"{ideal} is not an ideal of {spec.window.label}")
        return
    coords = [e.coords for e in spec.window.poset.elements[1:]]
    if any(c is None or len(c) != ideal.dimension for c in coords):
        raise InputError(f"{ideal} needs {ideal.dimension}-dimensional coordinates on {spec.window.label}")


@cached(cache=LRUCache(maxsize=256),
        key=lambda spec, n_steps, seed: (spec.sample_key, n_steps, seed))
def _growth(spec: CentralMeasureSpec, n_steps: int, seed: int):
    if spec.variant == MeasureVariant.PLANCHEREL:
        return sample_plancherel(n_steps, seed).cells
    if spec.variant == MeasureVariant.RSK_THOMA:
        return sample_rsk_thoma(spec.alpha, n_steps, seed).cells
    return np.asarray(sample_kernel_walk(spec, n_steps, seed), dtype=np.int64)


def replica_statistic(spec: CentralMeasureSpec, ideal: IdealSpec, n_steps: int, seed: int) -> float:
    """n^{-1} #{1 <= i <= n : phi(i) in I} for one sampled numbering."""
    sample = _growth(spec, n_steps, seed)
    if ideal.kind == IdealKind.FULL:
        return 1.0
    if spec.variant in (MeasureVariant.PLANCHEREL, MeasureVariant.RSK_THOMA):
        member = ideal_mask(ideal, sample)
    elif ideal.kind == IdealKind.FINITE_SET:
        member = np.isin(sample, np.asarray(ideal.params))
    else:
        elements = spec.window.poset.elements
        member = ideal_mask(ideal, np.asarray([elements[x].coords for x in sample]))
    return int(member.sum()) / n_steps


def estimate_frequency(spec: CentralMeasureSpec, ideal: IdealSpec, n_steps: int, replicas: int,
                       seed: int, workers: Optional[int] = None) -> FrequencyReport:
    if n_steps < 1 or replicas < 1:
        raise InputError("n_steps and replicas must be positive")
    _check_compatible(spec, ideal)
    workers = get_settings().workers if workers is None else workers

    seeds = [seed + k for k in range(replicas)]
    if ideal.kind == IdealKind.FULL:
        values = [1.0] * replicas
    elif workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(replica_statistic, [spec] * replicas, [ideal] * replicas,
                                   [n_steps] * replicas, seeds))
    else:
        values = [replica_statistic(spec, ideal, n_steps, s) for s in seeds]

    stats = np.asarray(values)
    estimate = float(stats.mean())
    stderr = float(stats.std(ddof=1) / math.sqrt(replicas)) if replicas > 1 else 0.0
    logger.info(f"📈 {spec.label} on {ideal}: {estimate:.4f} ± {stderr:.4f} (n={n_steps}, {replicas} replicas)")
    return FrequencyReport(sampler=spec.label, ideal=ideal, n_steps=n_steps, replicas=replicas,
                           estimate=estimate, stderr=stderr, seed=seed,
                           flags=spec.flags)


def compare_frequency_profiles(samplers: Sequence[CentralMeasureSpec], ideals: Sequence[IdealSpec],
                               n_steps: int, replicas: int, seed: int,
                               sigmas: Optional[float] = None
                               ) -> Tuple[List[List[FrequencyReport]], List[ComparisonRow]]:
    """
    Frequency matrix (sampler x ideal) and pairwise verdicts. Sampler s runs
    replicas with seeds seed + s * replicas + k, so equal specs get independent draws.
    """
    if len(samplers) < 2:
        raise InputError("comparison needs at least two samplers")
    families = {s.family for s in samplers}
    if len(families) > 1:
        raise InputError(f"mixed poset families: {sorted(families)}")
    sigmas = get_settings().distinguish_sigmas if sigmas is None else sigmas

    matrix = [[estimate_frequency(spec, ideal, n_steps, replicas, seed + s * replicas)
               for ideal in ideals]
              for s, spec in enumerate(samplers)]

    rows = []
    for a, b in combinations(range(len(samplers)), 2):
        separations = []
        for ra, rb in zip(matrix[a], matrix[b]):
            spread = math.hypot(ra.stderr, rb.stderr)
            gap = abs(ra.estimate - rb.estimate)
            separations.append(gap / spread if spread > 0 else (0.0 if gap == 0 else math.inf))
        rows.append(ComparisonRow(first=samplers[a].label, second=samplers[b].label,
                                  distinguishable=any(s > sigmas for s in separations),
                                  separations=separations))
    return matrix, rows
