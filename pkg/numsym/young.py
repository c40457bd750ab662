"""Young diagrams as weakly decreasing tuples of row lengths; () is the empty diagram."""
import math
from fractions import Fraction
from typing import Iterator, List, Sequence, Tuple

import numpy as np
from cachetools import LRUCache, cached

from numsym.errors import InputError

Shape = Tuple[int, ...]


def check_shape(shape: Sequence[int]) -> Shape:
    shape = tuple(int(p) for p in shape)
    if any(p < 1 for p in shape) or any(a < b for a, b in zip(shape, shape[1:])):
        raise InputError(f"{shape} is not a Young diagram")
    return shape


def partitions_of(n: int) -> Iterator[Shape]:
    """All partitions of n, largest first part first."""
    def rec(remaining: int, cap: int) -> Iterator[Shape]:
        if remaining == 0:
            yield ()
            return
        for part in range(min(remaining, cap), 0, -1):
            for rest in rec(remaining - part, part):
                yield (part,) + rest
    return rec(n, n)


def addable_rows(shape: Shape) -> List[int]:
    """0-based rows where a cell can be added (the last one opens a new row)."""
    return [r for r in range(len(shape) + 1)
            if r == 0 or (shape[r] if r < len(shape) else 0) < shape[r - 1]]


def add_cell(shape: Shape, row: int) -> Shape:
    if row == len(shape):
        return shape + (1,)
    return shape[:row] + (shape[row] + 1,) + shape[row + 1:]


def removable_rows(shape: Shape) -> List[int]:
    return [r for r in range(len(shape))
            if r == len(shape) - 1 or shape[r + 1] < shape[r]]


def remove_cell(shape: Shape, row: int) -> Shape:
    if shape[row] == 1:
        return shape[:row]
    return shape[:row] + (shape[row] - 1,) + shape[row + 1:]


def conjugate(shape: Shape) -> Shape:
    return tuple(sum(1 for p in shape if p > c) for c in range(shape[0])) if shape else ()


@cached(cache=LRUCache(maxsize=65536))
def young_dimension(shape: Shape) -> int:
    """Number of standard tableaux of the shape: dim = sum over removable corners."""
    if not shape:
        return 1
    return sum(young_dimension(remove_cell(shape, r)) for r in removable_rows(shape))


def hook_length_dimension(shape: Shape) -> int:
    n = sum(shape)
    columns = conjugate(shape)
    hooks = 1
    for r, length in enumerate(shape):
        for c in range(length):
            hooks *= (length - c - 1) + (columns[c] - r - 1) + 1
    return math.factorial(n) // hooks


def plancherel_probabilities_exact(shape: Shape) -> List[Tuple[Shape, Fraction]]:
    n = sum(shape)
    denominator = (n + 1) * young_dimension(shape)
    return [(add_cell(shape, r), Fraction(young_dimension(add_cell(shape, r)), denominator))
            for r in addable_rows(shape)]


def plancherel_probabilities_float(shape: Shape) -> Tuple[List[int], np.ndarray]:
    """
    Transition weights from the contents of addable (x_k) and removable (y_i) cells:
    p_k = prod_i (x_k - y_i) / prod_{j != k} (x_k - x_j), evaluated in log space.
    """
    rows = addable_rows(shape)
    x = np.array([(shape[r] if r < len(shape) else 0) - r for r in rows], dtype=float)
    y = np.array([shape[r] - 1 - r for r in removable_rows(shape)], dtype=float)

    num = np.abs(x[:, None] - y[None, :])
    den = np.abs(x[:, None] - x[None, :])
    np.fill_diagonal(den, 1.0)
    log_p = np.log(num).sum(axis=1) - np.log(den).sum(axis=1)
    p = np.exp(log_p)
    return rows, p / p.sum()


def plancherel_transition(shape: Shape, arithmetic: str = "exact") -> List[Tuple[Shape, object]]:
    """Successors of `shape` with their Plancherel probabilities, as Fractions or floats."""
    shape = check_shape(shape)
    if arithmetic == "exact":
        return plancherel_probabilities_exact(shape)
    if arithmetic == "float":
        rows, p = plancherel_probabilities_float(shape)
        return [(add_cell(shape, r), float(q)) for r, q in zip(rows, p)]
    raise InputError(f"unknown arithmetic '{arithmetic}', expected exact or float")
