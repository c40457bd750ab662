# schemas.py
import csv
import io
from enum import Enum
from typing import ClassVar, Iterable, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from numsym.errors import InputError


# ================= ENUMS =================

class Family(str, Enum):
    YOUNG = "young"
    BOX = "box"
    CHAIN = "chain"
    ANTICHAIN = "antichain"
    FILE = "file"


class IdealKind(str, Enum):
    FINITE_SET = "set"
    HOOK_Z2 = "hook"
    AXIS_RAYS = "rays"
    FULL = "full"


class MeasureVariant(str, Enum):
    ENDPOINT_UNIFORM = "endpoint"
    PLANCHEREL = "plancherel"
    RSK_THOMA = "rsk"
    EXPLICIT_MARKOV = "markov"


class Exactness(str, Enum):
    EXACT = "exact"
    SAMPLED = "sampled"


class OutputFormat(str, Enum):
    TEXT = "text"
    CSV = "csv"


def csv_line(values: Iterable) -> str:
    """One CSV record; labels such as 'rsk:0.7,0.3' get quoted."""
    buffer = io.StringIO()
    csv.writer(buffer, lineterminator="").writerow(values)
    return buffer.getvalue()


# Allowed per-orbit action types of a local group <s_i, s_{i+1}>
ORBIT_TAGS = ("trivial", "Z2-swap", "3-cycle-class", "S3-class", "order-6-dihedral-class")


# ================= IDEALS =================

class IdealSpec(BaseModel):
    """
    Finitely parametrized ideal. `params` holds (k, l) for a hook,
    (a_1, ..., a_d) for axis rays, and element ids for a finite set.
    """
    model_config = ConfigDict(frozen=True)

    kind: IdealKind
    params: Tuple[int, ...] = ()
    name: str = ""

    @field_validator("params")
    @classmethod
    def _non_negative(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        if any(p < 0 for p in value):
            raise ValueError("ideal parameters must be non-negative")
        return value

    @classmethod
    def full(cls) -> "IdealSpec":
        return cls(kind=IdealKind.FULL, name="full")

    @classmethod
    def hook(cls, k: int, l: int) -> "IdealSpec":
        if k + l == 0:
            raise InputError("hook:0,0 is the empty ideal")
        return cls(kind=IdealKind.HOOK_Z2, params=(k, l), name=f"hook:{k},{l}")

    @classmethod
    def rays(cls, *counts: int) -> "IdealSpec":
        if not counts or not any(counts):
            raise InputError("rays: needs at least one positive count")
        return cls(kind=IdealKind.AXIS_RAYS, params=tuple(counts),
                   name="rays:" + ",".join(map(str, counts)))

    @classmethod
    def finite(cls, ids) -> "IdealSpec":
        ids = tuple(sorted(set(ids) | {0}))
        return cls(kind=IdealKind.FINITE_SET, params=ids,
                   name="set:" + ",".join(map(str, ids)))

    @classmethod
    def parse(cls, text: str) -> "IdealSpec":
        """Parse the CLI syntax: full | set:1,5,9 | hook:k,l | rays:a1,...,ad"""
        text = text.strip()
        if text == "full":
            return cls.full()
        head, _, tail = text.partition(":")
        try:
            values = [int(v) for v in tail.split(",") if v.strip()]
        except ValueError:
            raise InputError(f"bad ideal spec '{text}'") from None
        if head == "set":
            return cls.finite(values)
        if head == "hook":
            if len(values) != 2:
                raise InputError(f"hook needs two parameters, got '{text}'")
            return cls.hook(*values)
        if head == "rays":
            return cls.rays(*values)
        raise InputError(f"unknown ideal kind in '{text}'")

    @property
    def dimension(self) -> Optional[int]:
        """Coordinate dimension the spec needs, None when coordinates are not used."""
        if self.kind == IdealKind.HOOK_Z2:
            return 2
        if self.kind == IdealKind.AXIS_RAYS:
            return len(self.params)
        return None

    def __str__(self) -> str:
        return self.name or self.kind.value


# ================= GROUP REPORTS =================

class RelationCheck(BaseModel):
    family: str  # involution | commutation | hexagonal
    i: int
    j: int
    passed: bool
    witness: Optional[int] = None  # path index moved by the offending word


class RelationReport(BaseModel):
    length: int
    path_count: int
    checks: List[RelationCheck] = []

    @property
    def violations(self) -> List[RelationCheck]:
        return [c for c in self.checks if not c.passed]

    @property
    def ok(self) -> bool:
        return not self.violations


class OrbitType(BaseModel):
    size: int
    tag: str
    count: int = 1


class LocalGroupReport(BaseModel):
    i: int
    product_order: int
    group_order: int
    degeneracy: str  # dihedral | single-involution | coincident | trivial-pair
    orbit_types: List[OrbitType] = []


class CayleyStats(BaseModel):
    elements: int
    diameter: int
    cap_exceeded: bool = False


# ================= MEASURE REPORTS =================

class CentralityReport(BaseModel):
    exact: bool
    invariant: bool
    witness_generator: Optional[int] = None
    witness_path: Optional[Tuple[int, ...]] = None
    fiber_uniform: bool
    witness_fiber: Optional[Tuple[int, ...]] = None

    @property
    def central(self) -> bool:
        return self.invariant and self.fiber_uniform


class FrequencyReport(BaseModel):
    sampler: str
    ideal: IdealSpec
    n_steps: int
    replicas: int
    estimate: float = Field(ge=0.0, le=1.0)
    stderr: float = Field(ge=0.0)
    seed: int
    flags: List[str] = []

    CSV_HEADER: ClassVar[str] = "sampler,ideal,n,replicas,estimate,stderr,seed"

    def csv_row(self) -> str:
        return csv_line([self.sampler, self.ideal, self.n_steps, self.replicas,
                         f"{self.estimate:.6f}", f"{self.stderr:.6f}", self.seed])


class ComparisonRow(BaseModel):
    first: str
    second: str
    distinguishable: bool
    separations: List[float] = []  # |difference| / combined stderr, per ideal

    @property
    def verdict(self) -> str:
        return "distinguished" if self.distinguishable else "indistinguishable"


# ================= RUN CONFIG =================

class RunConfig(BaseModel):
    """Fully resolved invocation; echoed in every output header"""
    subcommand: str
    source: str
    depth: Optional[int] = None
    seed: Optional[int] = None
    replicas: Optional[int] = None
    output_format: OutputFormat = OutputFormat.TEXT
    path_limit: int
    group_cap: int
    extra: List[Tuple[str, str]] = []

    def header_lines(self) -> List[str]:
        lines = [f"# numsym {self.subcommand}", f"# source: {self.source}"]
        for key in ("depth", "seed", "replicas"):
            value = getattr(self, key)
            if value is not None:
                lines.append(f"# {key}: {value}")
        lines.append(f"# format: {self.output_format.value}")
        lines.append(f"# path_limit: {self.path_limit}")
        lines.append(f"# group_cap: {self.group_cap}")
        for key, value in self.extra:
            lines.append(f"# {key}: {value}")
        return lines


# ================= GROUP TABLES =================

class GroupOrderRow(BaseModel):
    """One line of a hook-series or increasing-depth table."""
    source: str
    length: int
    path_count: int
    order: int
    order_method: str
    cap_exceeded: bool = False
    symmetric_n: Optional[int] = None  # |S_n| for young [n-1,1]
    symmetric_n_minus_1: Optional[int] = None

    @property
    def matches(self) -> str:
        if self.order == self.symmetric_n:
            return "S_n"
        if self.order == self.symmetric_n_minus_1:
            return "S_{n-1}"
        return "-"
