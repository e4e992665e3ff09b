"""Data models for the Gaussian summation library."""

import math
from enum import Enum
from pathlib import Path
from typing import Callable, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Side(str, Enum):
    """Which part of the integer lattice a summand is summed over."""

    POSITIVE_HALF = "positive_half"
    TWO_SIDED = "two_sided_nonzero"


class ConvergenceStatus(str, Enum):
    """Why adaptive summation stopped."""

    CONVERGED = "converged"
    HIT_N_MAX = "hit_n_max"
    STAGNATED = "stagnated_at_machine_eps"


class OutputFormat(str, Enum):
    """Output formats supported by the command line."""

    CSV = "csv"
    JSON = "json"


class Command(str, Enum):
    """Command line actions."""

    RULE = "rule"
    SUM = "sum"
    BENCH_HL = "bench_hl"
    BENCH_COTH = "bench_coth"
    BENCH_RICHARDSON = "bench_richardson"
    BENCH_GAUTSCHI = "bench_gautschi"
    ZEROS = "zeros"


class RecurrenceCoefficients(BaseModel):
    """Three-term recursion data of the monic orthogonal polynomials."""

    model_config = ConfigDict(frozen=True)

    a: Tuple[float, ...] = Field(..., description="Diagonal coefficients a_0..a_{n-1}")
    b: Tuple[float, ...] = Field(
        ..., description="Coefficients b_0..b_{n-1}; b_0 holds the zeroth moment"
    )

    @model_validator(mode="after")
    def _check_lengths(self) -> "RecurrenceCoefficients":
        if len(self.a) != len(self.b):
            raise ValueError("a and b must have the same length")
        if any(v <= 0.0 for v in self.b):
            raise ValueError("all b_k must be positive")
        return self

    @property
    def size(self) -> int:
        return len(self.a)


class JacobiMatrix(BaseModel):
    """Symmetric tridiagonal matrix stored as diagonal and off-diagonal."""

    model_config = ConfigDict(frozen=True)

    diag: Tuple[float, ...] = Field(..., min_length=1)
    offdiag: Tuple[float, ...] = Field(default=())

    @model_validator(mode="after")
    def _check_shape(self) -> "JacobiMatrix":
        if len(self.offdiag) != len(self.diag) - 1:
            raise ValueError("offdiag must have exactly len(diag) - 1 entries")
        return self

    @property
    def order(self) -> int:
        return len(self.diag)


class SummationRule(BaseModel):
    """An n-point Gaussian summation rule: nodes z_k and weights w_k."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1, description="Number of nodes")
    nodes: Tuple[float, ...] = Field(..., description="Ascending nodes in z")
    weights: Tuple[float, ...] = Field(..., description="Positive weights")

    @model_validator(mode="after")
    def _check_invariants(self) -> "SummationRule":
        if len(self.nodes) != self.n or len(self.weights) != self.n:
            raise ValueError(f"expected {self.n} nodes and weights")
        for value in self.nodes + self.weights:
            if not math.isfinite(value):
                raise ValueError("nodes and weights must be finite")
        if self.nodes[0] <= 0.0:
            raise ValueError("nodes must be strictly positive")
        for left, right in zip(self.nodes, self.nodes[1:]):
            if not left < right:
                raise ValueError("nodes must be strictly increasing")
        if any(w <= 0.0 for w in self.weights):
            raise ValueError("weights must be strictly positive")
        return self

    @property
    def pseudo_indices(self) -> Tuple[float, ...]:
        """Real-valued indices k = 1/sqrt(z) at which summands are sampled."""
        return tuple(1.0 / math.sqrt(z) for z in self.nodes)


class Summand(BaseModel):
    """A user term g(k) together with the lattice it is summed over."""

    model_config = ConfigDict(frozen=True)

    g: Callable[[float], float]
    side: Side = Side.TWO_SIDED
    description: str = ""


class ConvergenceReport(BaseModel):
    """Outcome of adaptive summation over increasing rule sizes."""

    model_config = ConfigDict(frozen=True)

    n_start: int = Field(default=2, description="Rule size of values[0]")
    values: Tuple[float, ...]
    deltas: Tuple[float, ...] = Field(
        ..., description="deltas[i] = values[i + 1] - values[i]"
    )
    n_used: int
    status: ConvergenceStatus

    @property
    def value(self) -> float:
        """Rule value at n_used; values[-1] is the last rule evaluated."""
        return self.values[self.n_used - self.n_start]


class PolyEvalPoint(BaseModel):
    """Paired arguments x (of S_n, R_n) and z (of s_n and the Weyl function)."""

    model_config = ConfigDict(frozen=True)

    x: float = Field(..., gt=0)
    z: float = Field(..., gt=0)

    @model_validator(mode="after")
    def _check_relation(self) -> "PolyEvalPoint":
        if not math.isclose(self.z, (math.pi / self.x) ** 2, rel_tol=1e-12):
            raise ValueError("x and z must satisfy z = (pi/x)^2")
        return self

    @classmethod
    def from_z(cls, z: float) -> "PolyEvalPoint":
        return cls(x=math.pi / math.sqrt(z), z=z)

    @classmethod
    def from_x(cls, x: float) -> "PolyEvalPoint":
        return cls(x=x, z=(math.pi / x) ** 2)


class ContinuedFractionCoeffs(BaseModel):
    """Coefficients c_0..c_n of the continued fraction of x cot x."""

    model_config = ConfigDict(frozen=True)

    c: Tuple[float, ...] = Field(..., min_length=1)


class PartialSumSequence(BaseModel):
    """Partial sums of a series sampled at selected term counts."""

    model_config = ConfigDict(frozen=True)

    parameter: float = Field(..., description="Series parameter (a or x)")
    n_values: Tuple[int, ...] = Field(..., description="Number of terms of each value")
    values: Tuple[float, ...]
    count: int = Field(..., ge=0)

    @model_validator(mode="after")
    def _check_values(self) -> "PartialSumSequence":
        if self.count != len(self.values) or self.count != len(self.n_values):
            raise ValueError("count must match the number of values")
        if not all(math.isfinite(v) for v in self.values):
            raise ValueError("partial sums must be finite")
        return self

    def at(self, n: int) -> Optional[float]:
        """Partial sum with n terms, or None when it was not sampled."""
        try:
            return self.values[self.n_values.index(n)]
        except ValueError:
            return None


class ZeroSet(BaseModel):
    """Positive zeros of the odd-index Pade denominator in the x-variable."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1)
    nu: float
    x: Tuple[float, ...]
    tau: Tuple[float, ...]
    sigma: Tuple[float, ...]

    @field_validator("x")
    @classmethod
    def _check_ascending(cls, x: Tuple[float, ...]) -> Tuple[float, ...]:
        for left, right in zip(x, x[1:]):
            if not left < right:
                raise ValueError("zeros must be strictly increasing")
        return x


class DensityPoint(BaseModel):
    """One sample of the zero density 1/(x_{j+1} - x_j)."""

    model_config = ConfigDict(frozen=True)

    j: int
    sigma: float = Field(..., description="j / nu, half-range convention")
    sigma_full: float = Field(..., description="2 j / nu, full-range convention")
    tau: float
    density: float
    sigma_asymptotic: float


class RunConfig(BaseModel):
    """Validated settings for one command line run."""

    command: Command
    n: int = Field(default=8, ge=1, le=256)
    n_max: int = Field(default=64, ge=2, le=256)
    n_min: int = Field(default=1, ge=1, description="First rule size or start index")
    n_step: int = Field(default=1, ge=1)
    sequence_max: int = Field(
        default=16000, ge=1, description="Largest Richardson start index"
    )
    tolerance: float = Field(default=1e-12, gt=0)
    a_values: Tuple[float, ...] = ()
    x_values: Tuple[float, ...] = ()
    richardson_orders: Tuple[int, ...] = (4,)
    expr: Optional[str] = None
    side: Side = Side.TWO_SIDED
    output_format: OutputFormat = OutputFormat.CSV
    cache_dir: Optional[Path] = None
    use_cache: bool = True
    max_workers: int = Field(default=4, ge=1)
    out: Optional[Path] = None

    @field_validator("a_values", "x_values")
    @classmethod
    def _check_positive(cls, values: Tuple[float, ...]) -> Tuple[float, ...]:
        if any(not (v > 0.0 and math.isfinite(v)) for v in values):
            raise ValueError("parameters must be positive and finite")
        return values

    @field_validator("richardson_orders")
    @classmethod
    def _check_orders(cls, values: Tuple[int, ...]) -> Tuple[int, ...]:
        if any(v < 1 for v in values):
            raise ValueError("Richardson orders must be positive")
        return values
