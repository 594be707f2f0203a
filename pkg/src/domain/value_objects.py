import math
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import (BaseModel, BeforeValidator, Field, PlainSerializer,
                      PrivateAttr, model_validator)

from src.domain.models import INF, Infinity, is_finite


def _parse_extended(value: Any):
    if isinstance(value, Infinity):
        return value
    if isinstance(value, str) and value.strip().lower() in ("inf", "infinity"):
        return INF
    if isinstance(value, float) and math.isinf(value):
        return INF
    return int(value)


def _dump_extended(value: Any):
    return str(value) if isinstance(value, Infinity) else value


ExtendedInt = Annotated[
    Any,
    BeforeValidator(_parse_extended),
    PlainSerializer(_dump_extended, return_type=Any),
]


class ErrorDetail(BaseModel):
    message: str = Field(..., examples=["Invalid graph supplied"])
    details: Optional[str] = Field(None, examples=["line 3: self-loop at vertex 2"])
    code: Optional[str] = Field(None, examples=["INVALID_GRAPH"])


# Graph Value Objects
class EdgeGirth(BaseModel):
    u: int
    v: int
    girth: ExtendedInt


class GirthReport(BaseModel):
    girth: ExtendedInt = Field(..., description="Global girth gir(G)")
    vertex_girth: List[ExtendedInt] = Field(..., description="gir_x indexed by vertex")
    edge_girth: List[EdgeGirth] = Field(..., description="gir_e per edge, sorted")

    _by_edge: Dict[Tuple[int, int], Any] = PrivateAttr(default_factory=dict)

    def model_post_init(self, __context) -> None:
        self._by_edge = {(e.u, e.v): e.girth for e in self.edge_girth}

    def for_edge(self, u: int, v: int):
        return self._by_edge[(u, v) if u < v else (v, u)]


class PawfulCheck(BaseModel):
    pawful: bool
    diameter_witness: Optional[Tuple[int, int]] = None
    triple_witness: Optional[Tuple[int, int, int]] = None


# Linear algebra Value Objects
class SmithForm(BaseModel):
    factors: List[int] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_chain(self) -> "SmithForm":
        for a, b in zip(self.factors, self.factors[1:]):
            if a <= 0 or b % a != 0:
                raise ValueError(f"invariant factors {self.factors} do not form a chain")
        if self.factors and self.factors[0] <= 0:
            raise ValueError("invariant factors must be positive")
        return self

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def torsion(self) -> List[int]:
        return [f for f in self.factors if f > 1]


# Homology Value Objects
class HomologyEntry(BaseModel):
    k: int
    length: int
    rank: int
    torsion: List[int] = Field(default_factory=list)


class VertexHomologyEntry(BaseModel):
    vertex: int
    k: int
    length: int
    rank: int


class HomologyTable(BaseModel):
    """Ranks and torsion of MH_{k,l} for 0 <= k <= l <= lmax."""

    lmax: int
    entries: List[HomologyEntry]
    per_vertex: Optional[List[VertexHomologyEntry]] = None
    torsion_computed: bool = False
    incomplete_lengths: List[int] = Field(default_factory=list)

    _index: Dict[Tuple[int, int], HomologyEntry] = PrivateAttr(default_factory=dict)
    _vertex_index: Dict[Tuple[int, int, int], int] = PrivateAttr(default_factory=dict)

    def model_post_init(self, __context) -> None:
        self._index = {(e.k, e.length): e for e in self.entries}
        if self.per_vertex is not None:
            self._vertex_index = {
                (e.vertex, e.k, e.length): e.rank for e in self.per_vertex
            }

    def is_complete(self, length: int) -> bool:
        return 0 <= length <= self.lmax and length not in self.incomplete_lengths

    def rank(self, k: int, length: int) -> int:
        entry = self._index.get((k, length))
        return entry.rank if entry is not None else 0

    def torsion(self, k: int, length: int) -> List[int]:
        entry = self._index.get((k, length))
        return list(entry.torsion) if entry is not None else []

    def vertex_rank(self, x: int, k: int, length: int) -> int:
        if self.per_vertex is None:
            raise ValueError("table was computed without a per-vertex breakdown")
        return self._vertex_index.get((x, k, length), 0)

    def off_diagonal(self) -> Optional[HomologyEntry]:
        """First computed entry with k != l and nonzero rank or torsion."""
        for e in self.entries:
            if e.k != e.length and (e.rank > 0 or e.torsion):
                return e
        return None

    @property
    def diagonal_up_to(self) -> int:
        """Largest l such that every length <= l was computed."""
        missing = [length for length in self.incomplete_lengths if length <= self.lmax]
        return min(missing) - 1 if missing else self.lmax


class Certificate(BaseModel):
    kind: Literal[
        "AllComponentsForest",
        "Tree",
        "UnicyclicShortCycles",
        "CompleteGraph",
        "Pawful",
        "GirthWitness",
        "OffDiagonalRank",
        "ExhaustedToLmax",
    ]
    component: Optional[int] = None
    edge: Optional[Tuple[int, int]] = None
    edge_girth: Optional[ExtendedInt] = None
    bidegree: Optional[Tuple[int, int]] = None
    rank: Optional[int] = None
    torsion: Optional[List[int]] = None
    cycle_length: Optional[int] = None

    @model_validator(mode="after")
    def check_witness(self) -> "Certificate":
        if self.kind == "GirthWitness":
            if self.edge is None or self.edge_girth is None or self.bidegree is None:
                raise ValueError("GirthWitness needs edge, girth and bidegree")
            if not is_finite(self.edge_girth) or self.edge_girth < 5:
                raise ValueError(f"GirthWitness girth {self.edge_girth} is not in [5, inf)")
        if self.kind == "OffDiagonalRank":
            if self.bidegree is None or self.bidegree[0] == self.bidegree[1]:
                raise ValueError("OffDiagonalRank needs an off-diagonal bidegree")
            if not (self.rank or self.torsion):
                raise ValueError("OffDiagonalRank needs nonzero rank or torsion")
        return self

    def describe(self) -> str:
        if self.kind == "GirthWitness":
            u, v = self.edge
            k, length = self.bidegree
            return f"GirthWitness(edge={u}-{v}, gir_e={self.edge_girth}, bidegree=({k},{length}))"
        if self.kind == "OffDiagonalRank":
            k, length = self.bidegree
            extra = f", torsion={self.torsion}" if self.torsion else ""
            return f"OffDiagonalRank(({k},{length}), rank={self.rank}{extra})"
        if self.kind == "UnicyclicShortCycles" and self.cycle_length is not None:
            return f"UnicyclicShortCycles(cycle={self.cycle_length})"
        return self.kind


VerdictKind = Literal["Diagonal", "NonDiagonal", "DiagonalUpTo"]


class ComponentVerdict(BaseModel):
    component: int
    verdict: VerdictKind
    upto: Optional[int] = None
    certificate: Certificate


class DiagonalityVerdict(BaseModel):
    verdict: VerdictKind
    upto: Optional[int] = None
    certificate: Certificate
    components: List[ComponentVerdict] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_upto(self) -> "DiagonalityVerdict":
        if self.verdict == "DiagonalUpTo" and self.upto is None:
            raise ValueError("DiagonalUpTo needs the length it was checked to")
        return self

    @property
    def label(self) -> str:
        if self.verdict == "DiagonalUpTo":
            return f"DiagonalUpTo({self.upto})"
        return self.verdict

    @property
    def exit_code(self) -> int:
        return {"Diagonal": 0, "NonDiagonal": 1, "DiagonalUpTo": 2}[self.verdict]


class MagnitudeSeries(BaseModel):
    coefficients: List[int]

    @property
    def lmax(self) -> int:
        return len(self.coefficients) - 1


class TheoremInstance(BaseModel):
    theorem: Literal["lpart", "otherpart", "corollary", "nondiag", "euler", "rank_bound"]
    locus: str
    k: int
    length: int
    expected: str
    observed: str
    passed: bool


class TheoremReport(BaseModel):
    lmax: int
    instances: List[TheoremInstance] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(i.passed for i in self.instances)

    def failures(self) -> List[TheoremInstance]:
        return [i for i in self.instances if not i.passed]


# Experiment Value Objects
class ErConfig(BaseModel):
    n: int = Field(..., ge=1)
    p: Optional[float] = Field(None, ge=0.0, le=1.0)
    c: Optional[float] = Field(None, ge=0.0)
    trials: int = Field(1, ge=1)
    seed: int = Field(0, ge=0, lt=2**64)
    lmax: int = Field(5, ge=2)
    max_cycle_length: int = Field(8, ge=3)

    @model_validator(mode="after")
    def check_probability(self) -> "ErConfig":
        if (self.p is None) == (self.c is None):
            raise ValueError("exactly one of p and c must be given")
        if self.c is not None and self.c / self.n > 1.0:
            raise ValueError(f"c={self.c} gives p > 1 at n={self.n}")
        return self

    @property
    def edge_probability(self) -> float:
        return self.p if self.p is not None else self.c / self.n

    @property
    def mean_degree(self) -> float:
        return self.c if self.c is not None else self.p * self.n


class TrialRecord(BaseModel):
    trial: int
    n: int
    verdict: Optional[str] = None
    certificate: Optional[str] = None
    cycle_counts: Dict[int, int] = Field(default_factory=dict)
    edge_count: int
    components: int
    circuit_rank: int
    tree_vertices: int
    ranks: Dict[str, int] = Field(default_factory=dict)
    magnitude: Optional[List[int]] = None
    pawful: Optional[bool] = None

    @model_validator(mode="after")
    def check_circuit_rank(self) -> "TrialRecord":
        if self.circuit_rank != self.edge_count - self.n + self.components:
            raise ValueError("circuit rank disagrees with #E - n + xi")
        if not 0 <= self.tree_vertices <= self.n:
            raise ValueError("tree vertex count out of range")
        return self


class SummaryStats(BaseModel):
    metric: str
    count: int
    mean: float
    variance: float
    ci_low: Optional[float] = None
    ci_high: Optional[float] = None
    level: float = 0.95
    is_frequency: bool = False

    @model_validator(mode="after")
    def check_interval(self) -> "SummaryStats":
        if self.is_frequency and not 0.0 <= self.mean <= 1.0:
            raise ValueError(f"frequency {self.mean} outside [0, 1]")
        if self.ci_low is not None and self.ci_high is not None:
            if not self.ci_low - 1e-12 <= self.mean <= self.ci_high + 1e-12:
                raise ValueError("confidence interval does not contain the estimate")
        return self

    @property
    def standard_error(self) -> float:
        return math.sqrt(self.variance / self.count) if self.count > 0 else 0.0


class DiagonalityCurveRow(BaseModel):
    n: int
    c: float
    trials: int
    nondiagonal: int
    unresolved: int
    empirical: float
    ci_low: float
    ci_high: float
    limit_formula: float
    unresolved_fraction: float
    subcritical_bound: Optional[float] = None
    xi_over_n: float
    u_of_c: float
    r_over_n: float
    r_limit: float


class CycleRow(BaseModel):
    n: int
    c: float
    i: int
    mean: float
    standard_error: float
    poisson_mean: float
    finite_n_mean: float


class CycleZeroRow(BaseModel):
    n: int
    c: float
    lengths: str
    frequency: float
    standard_error: float
    poisson_prediction: float


class WllnRow(BaseModel):
    n: int
    c: float
    statistic: str
    mean: float
    standard_error: float
    ci_low: float
    ci_high: float
    limit: float


class PawfulRow(BaseModel):
    n: int
    p: float
    trials: int
    pawful: int
    frequency: float
    ci_low: float
    ci_high: float


class CliConfig(BaseModel):
    subcommand: Literal["compute", "girth", "diagonal", "magnitude", "er", "verify"]
    mode: Optional[Literal["sim", "cycles", "wlln", "pawful"]] = None
    graph: Optional[str] = None
    lmax: int = Field(5, ge=0)
    output_format: Literal["csv", "json"] = "csv"
    seed: int = Field(0, ge=0, lt=2**64)
    trials: int = Field(1, ge=1)
    n_grid: Optional[List[Annotated[int, Field(ge=1)]]] = None
    c_grid: Optional[List[float]] = None
    p_grid: Optional[List[float]] = None
    workers: int = Field(1, ge=1)

    @model_validator(mode="after")
    def check_grids(self) -> "CliConfig":
        if self.c_grid is not None and self.p_grid is not None:
            raise ValueError("--c and --p are mutually exclusive")
        if (self.subcommand == "er") != (self.mode is not None):
            raise ValueError("an experiment mode goes with the er subcommand only")
        return self


ExperimentRow = Union[DiagonalityCurveRow, CycleRow, CycleZeroRow, WllnRow, PawfulRow]


class ExperimentResult(BaseModel):
    summaries: List[SummaryStats] = Field(default_factory=list)
    rows: List[ExperimentRow] = Field(default_factory=list)
    trials: List[TrialRecord] = Field(default_factory=list)
