"""
Central measures on finite truncations: Markov kernels over the graded graph,
endpoint-conditioned uniform measures, path measures and centrality checks.

Finite-truncation measures use exact Fractions; floats only appear in
Monte Carlo sampling or in explicitly decimal kernel files.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number
from typing import Dict, List, Mapping, Optional, Tuple

from numsym.errors import InputError, PropertyViolation
from numsym.graded_graph import (
    GradedGraph,
    LevelVertex,
    build_graph,
    dimension,
    iter_root_paths,
    up_dimensions,
)
from numsym.poset import PathNumbering, PosetWindow, build_window, iter_bits, mask_of
from numsym.schemas import CentralityReport, Exactness, Family, MeasureVariant
from numsym.symmetry import apply_sigma, endpoint_fibers

logger = logging.getLogger("numsym.measures")

FLOAT_ROW_TOLERANCE = 1e-12

PathMeasure = Dict[Tuple[int, ...], Number]


@dataclass(frozen=True)
class MarkovKernel:
    """Transition rows keyed by ideal bitmask: ((added element, probability), ...)."""
    rows: Dict[int, Tuple[Tuple[int, Number], ...]]
    exact: bool

    def row(self, mask: int) -> Tuple[Tuple[int, Number], ...]:
        try:
            return self.rows[mask]
        except KeyError:
            raise InputError(f"kernel has no row for ideal {list(iter_bits(mask))}") from None

    @property
    def depth(self) -> int:
        """Number of steps the kernel can take from the root."""
        steps, mask = 0, 1
        while mask in self.rows and self.rows[mask]:
            element, _ = self.rows[mask][0]
            mask |= 1 << element
            steps += 1
        return steps


def validate_kernel(kernel: MarkovKernel, window: PosetWindow) -> None:
    poset = window.poset
    for mask, row in kernel.rows.items():
        if not poset.is_ideal(mask):
            raise InputError(f"kernel row {list(iter_bits(mask))} is not an ideal")
        addable = set(poset.addable(mask))
        total = 0
        for element, p in row:
            if element not in addable:
                raise InputError(f"element {element} cannot be added to {list(iter_bits(mask))}")
            if p < 0:
                raise InputError(f"negative transition probability {p}")
            total += p
        if kernel.exact and total != 1:
            raise InputError(f"row {list(iter_bits(mask))} sums to {total}, not 1")
        if not kernel.exact and abs(total - 1) > FLOAT_ROW_TOLERANCE:
            raise InputError(f"row {list(iter_bits(mask))} sums to {total}, not 1")


@dataclass(frozen=True)
class CentralMeasureSpec:
    """A sampler or exact kernel for a central measure."""
    variant: MeasureVariant
    exactness: Exactness
    label: str
    alpha: Tuple[float, ...] = ()
    window: Optional[PosetWindow] = None
    kernel: Optional[MarkovKernel] = None

    @property
    def family(self) -> str:
        if self.variant in (MeasureVariant.PLANCHEREL, MeasureVariant.RSK_THOMA):
            return Family.YOUNG.value
        return self.window.family.value

    @property
    def sample_key(self) -> tuple:
        """Identity of the sampled law: equal keys draw identical paths from equal seeds."""
        rows = None if self.kernel is None else tuple(sorted(self.kernel.rows.items()))
        poset = None if self.window is None else self.window.poset
        return self.variant, self.alpha, poset, rows

    @property
    def flags(self) -> List[str]:
        if self.variant == MeasureVariant.RSK_THOMA and len(set(self.alpha)) < len(self.alpha):
            return ["tied-alpha"]
        return []


def plancherel_spec() -> CentralMeasureSpec:
    return CentralMeasureSpec(variant=MeasureVariant.PLANCHEREL, exactness=Exactness.SAMPLED,
                              label="plancherel")


def validate_alpha(alpha) -> Tuple[float, ...]:
    alpha = tuple(float(a) for a in alpha)
    if not alpha or any(a <= 0 for a in alpha) or abs(sum(alpha) - 1.0) > 1e-9:
        raise InputError(f"alpha must be positive and sum to 1, got {alpha}")
    return alpha


def rsk_thoma_spec(alpha) -> CentralMeasureSpec:
    alpha = validate_alpha(alpha)
    spec = CentralMeasureSpec(variant=MeasureVariant.RSK_THOMA, exactness=Exactness.SAMPLED,
                              label="rsk:" + ",".join(f"{a:g}" for a in alpha), alpha=alpha)
    if spec.flags:
        logger.warning(f"⚠️ Tied alpha entries in {spec.label}; row frequencies are ambiguous")
    return spec


# ================= EXACT MEASURES =================

def endpoint_measure(g: GradedGraph, v: LevelVertex) -> CentralMeasureSpec:
    """Kernel p(u -> w) = up_dim(w, v) / up_dim(u, v): uniform on root paths to v."""
    counts = up_dimensions(g, v)
    if counts.get(g.root.mask, 0) < 1:
        raise InputError(f"vertex {v.level}:{v.index} is unreachable")

    rows: Dict[int, Tuple[Tuple[int, Fraction], ...]] = {}
    for mask, through in counts.items():
        if mask == v.mask:
            continue
        u = g.vertex(mask)
        row = tuple((x, Fraction(counts[w.mask], through))
                    for x, w in g.up_neighbors(u) if w.mask in counts)
        if sum(p for _, p in row) != 1:
            raise PropertyViolation(f"endpoint kernel row {u.ideal} does not sum to 1")
        rows[mask] = row

    spec = CentralMeasureSpec(
        variant=MeasureVariant.ENDPOINT_UNIFORM,
        exactness=Exactness.EXACT,
        label=f"endpoint:{v.level}:{v.index}",
        window=g.window,
        kernel=MarkovKernel(rows, exact=True),
    )
    expected = Fraction(1, dimension(g, v))
    measure = path_measure(g, spec.kernel, v.level + 1)
    if set(measure.values()) != {expected} or len(measure) != dimension(g, v):
        raise PropertyViolation(f"endpoint measure for {v.ideal} is not uniform on its paths")
    return spec


def path_measure(g: GradedGraph, kernel: MarkovKernel, length: int) -> PathMeasure:
    """Probabilities of all numberings of `length` positions with positive mass."""
    poset = g.window.poset
    measure: PathMeasure = {}
    prefix = [0]

    def walk(mask: int, mass) -> None:
        if len(prefix) == length:
            measure[tuple(prefix)] = mass
            return
        for element, p in kernel.row(mask):
            if p:
                prefix.append(element)
                walk(mask | (1 << element), mass * p)
                prefix.pop()

    walk(1, Fraction(1) if kernel.exact else 1.0)
    for path in measure:
        PathNumbering.of(poset, path)
    return measure


def uniform_level_measure(g: GradedGraph, length: int) -> PathMeasure:
    paths = [p.elements for p in iter_root_paths(g, length - 1)]
    mass = Fraction(1, len(paths))
    return {p: mass for p in paths}


def perturb_measure(measure: PathMeasure, epsilon) -> PathMeasure:
    """
    Move `epsilon` mass onto the first path of the first endpoint fiber holding two paths.
    The mass comes from the second path when it holds at least `epsilon`, otherwise from
    the rest of the fiber in proportion to its masses.
    """
    fibers: Dict[int, List[Tuple[int, ...]]] = {}
    for path in sorted(measure):
        fibers.setdefault(mask_of(path), []).append(path)
    for paths in fibers.values():
        if len(paths) < 2:
            continue
        if isinstance(measure[paths[0]], Fraction):
            epsilon = Fraction(str(epsilon))
        shifted = dict(measure)
        target, donors = paths[0], paths[1:]
        if measure[donors[0]] >= epsilon:
            shifted[target] += epsilon
            shifted[donors[0]] -= epsilon
            return shifted
        pool = sum(measure[p] for p in donors)
        if pool < epsilon:
            continue
        shifted[target] += epsilon
        for p in donors:
            shifted[p] -= epsilon * measure[p] / pool
        return shifted
    raise InputError(f"no endpoint fiber with two paths can give up mass {epsilon}")


# ================= CENTRALITY =================

def is_central(g: GradedGraph, measure: Mapping[Tuple[int, ...], Number],
               tol: float = 1e-12) -> CentralityReport:
    """
    (a) invariance under every sigma_i, and (b) uniformity on every endpoint fiber.
    Comparisons are exact when every probability is an int or Fraction.
    """
    if not measure:
        raise InputError("empty measure")
    exact = all(isinstance(p, (int, Fraction)) for p in measure.values())
    lengths = {len(path) for path in measure}
    if len(lengths) != 1:
        raise InputError("measure mixes numberings of different lengths")
    length = lengths.pop()
    if length - 1 > g.depth:
        raise InputError(f"numberings of length {length} exceed graph depth {g.depth}")
    total = sum(measure.values())
    if any(p < (0 if exact else -tol) for p in measure.values()):
        raise InputError("measure has negative mass")
    if (exact and total != 1) or (not exact and abs(total - 1) > tol):
        raise InputError(f"measure sums to {total}, not 1")

    def same(a, b) -> bool:
        return a == b if exact else abs(a - b) <= tol

    poset = g.window.poset
    invariant, witness_generator, witness_path = True, None, None
    for i in range(1, length - 1):
        for path in sorted(measure):
            image = apply_sigma(i, PathNumbering.of(poset, path)).elements
            if not same(measure.get(image, 0), measure[path]):
                invariant, witness_generator, witness_path = False, i, path
                break
        if not invariant:
            break

    fiber_uniform, witness_fiber = True, None
    fibers = endpoint_fibers(iter_root_paths(g, length - 1))
    for mask in sorted(fibers):
        masses = [measure.get(p.elements, 0) for p in fibers[mask]]
        if not all(same(m, masses[0]) for m in masses):
            fiber_uniform, witness_fiber = False, tuple(iter_bits(mask))
            break

    report = CentralityReport(exact=exact, invariant=invariant, witness_generator=witness_generator,
                              witness_path=witness_path, fiber_uniform=fiber_uniform,
                              witness_fiber=witness_fiber)
    if not report.central:
        logger.info(f"🔍 Not central: witness sigma_{witness_generator}, fiber {witness_fiber}")
    return report


# ================= PARSING =================

def _probability(token: str):
    if "." in token or "e" in token.lower():
        return float(token)
    return Fraction(token)


def parse_markov(text: str, label: str = "markov") -> CentralMeasureSpec:
    """
    'window <builder>' followed by rows
    'row <ideal ids> | <element>=<p> <element>=<p> ...'
    """
    window: Optional[PosetWindow] = None
    rows: Dict[int, Tuple[Tuple[int, Number], ...]] = {}
    decimal = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        try:
            if head == "window":
                window = build_window(rest.strip())
            elif head == "row":
                ideal_part, _, choice_part = rest.partition("|")
                mask = mask_of(int(x) for x in ideal_part.split())
                row = []
                for token in choice_part.split():
                    element, _, p = token.partition("=")
                    value = _probability(p)
                    decimal = decimal or isinstance(value, float)
                    row.append((int(element), value))
                rows[mask] = tuple(row)
            else:
                raise InputError(f"line {lineno}: cannot parse '{raw}'")
        except (ValueError, ZeroDivisionError) as e:
            raise InputError(f"line {lineno}: {e}") from None
    if window is None:
        raise InputError("markov file needs a 'window <builder>' line")

    if decimal:
        rows = {m: tuple((x, float(p)) for x, p in row) for m, row in rows.items()}
    kernel = MarkovKernel(rows, exact=not decimal)
    validate_kernel(kernel, window)
    return CentralMeasureSpec(
        variant=MeasureVariant.EXPLICIT_MARKOV,
        exactness=Exactness.EXACT if kernel.exact else Exactness.SAMPLED,
        label=label,
        window=window,
        kernel=kernel,
    )


def parse_measure(text: str, window: Optional[PosetWindow] = None) -> CentralMeasureSpec:
    """CLI syntax: endpoint:<level>:<index> | plancherel | rsk:0.7,0.3 | markov:<file>"""
    text = text.strip()
    head, _, tail = text.partition(":")
    if head == "plancherel" and not tail:
        return plancherel_spec()
    if head == "rsk":
        try:
            return rsk_thoma_spec(float(a) for a in tail.split(","))
        except ValueError:
            raise InputError(f"bad alpha in '{text}'") from None
    if head == "markov":
        with open(tail, "r", encoding="utf-8") as f:
            return parse_markov(f.read(), label=text)
    if head == "endpoint":
        if window is None:
            raise InputError("endpoint measures need a poset window")
        try:
            level, index = (int(v) for v in tail.split(":"))
        except ValueError:
            raise InputError(f"endpoint needs <level>:<index>, got '{text}'") from None
        g = build_graph(window, max(level, 0))
        return endpoint_measure(g, g.vertex_at(level, index))
    raise InputError(f"unknown measure '{text}'")
