from typing import Dict, List, Optional, Tuple, FrozenSet, TYPE_CHECKING
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
import pandera.pandas as pa
from pandera.typing import Series

from .exceptions import require_hyperbolic

if TYPE_CHECKING:
    from .tiling import TilingGraph


Word = Tuple[int, ...]


@dataclass(frozen=True)
class TilingParams:
    """Parameters of a regular (p,q)-tiling of the hyperbolic plane"""
    p: int
    q: int

    def __post_init__(self) -> None:
        require_hyperbolic(self.p, self.q)

    @property
    def q_even(self) -> bool:
        return self.q % 2 == 0

    def __str__(self) -> str:
        return f"({self.p},{self.q})"


class Rule(Enum):
    """Forbidden-subword rule families for billiard words"""
    E = "e"
    O_UPPER = "o-upper"
    O_LOWER = "o-lower"

    @property
    def needs_even_q(self) -> bool:
        return self is Rule.E


@dataclass(frozen=True)
class Frame:
    """
    Reflection frame of a tile: the edge in tile slot s carries label
    ((offset + sign * s) mod p) + 1
    """
    offset: int
    sign: int

    def label(self, slot: int, p: int) -> int:
        return (self.offset + self.sign * slot) % p + 1

    def slot_of(self, label: int, p: int) -> int:
        return (self.sign * (label - 1 - self.offset)) % p

    def reflect(self, slot: int, neighbor_slot: int, p: int) -> "Frame":
        """Frame of the neighbor reached through `slot`, entered at `neighbor_slot`"""
        return Frame(
            (self.offset + self.sign * (slot + neighbor_slot)) % p, -self.sign
        )


@dataclass(frozen=True)
class RationalSeries:
    """Power series given as numerator / denominator with integer coefficients"""
    numerator: Tuple[int, ...]
    denominator: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.denominator or self.denominator[0] != 1:
            raise ValueError("denominator must have constant term 1")


@dataclass(frozen=True)
class GrowthRate:
    alpha: float
    precision: float


@dataclass(frozen=True)
class Violation:
    rule: str
    position: int
    length: int


@dataclass(frozen=True)
class Verdict:
    """Outcome of an admissibility check; positions are 1-based"""
    admissible: bool
    violation: Optional[Violation] = None


@dataclass(frozen=True)
class WordClass:
    members: FrozenSet[Word]
    canonical: Word
    class_admissible: bool

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, word: object) -> bool:
        return word in self.members


@dataclass(frozen=True)
class ClassEnumeration:
    count: int
    representatives: Tuple[Word, ...]


@dataclass(frozen=True)
class TilingPath:
    """Sequence of edge-adjacent tiles together with the crossed edges"""
    tiles: Tuple[int, ...]
    edges: Tuple[int, ...]
    graph: "TilingGraph" = field(compare=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.edges) != len(self.tiles) - 1:
            raise ValueError("a path over n+1 tiles crosses exactly n edges")

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def start(self) -> int:
        return self.tiles[0]

    @property
    def end(self) -> int:
        return self.tiles[-1]


@dataclass(frozen=True)
class CrossingProfile:
    per_class: Dict[int, int]

    @property
    def doubled(self) -> List[int]:
        return sorted(c for c, n in self.per_class.items() if n > 1)


@dataclass
class MinimalityReport:
    minimal: bool
    length: int
    distance: int
    doubled_class: Optional[int] = None
    shortcut: Optional[TilingPath] = None

    @property
    def witness_kind(self) -> Optional[str]:
        if self.minimal:
            return None
        return "doubled-class" if self.doubled_class is not None else "shortcut"


@dataclass(frozen=True)
class BoundsReport:
    """Growth-rate bounds; for even q only alpha is set and equals h_top"""
    p: int
    q: int
    alpha: float
    ell: Optional[float] = None
    alpha_pow: Optional[float] = None
    u: Optional[float] = None

    @property
    def h_top(self) -> Optional[float]:
        return self.alpha if self.q % 2 == 0 else None


@dataclass(frozen=True)
class ComplexityRange:
    """Range of the billiard language growth rate; exact (lower == upper) for even q"""
    p: int
    q: int
    lower: float
    lower_from_language: bool
    upper: float


@dataclass(frozen=True)
class GeodesicSegment:
    """Segment between two disk points; vertex ids are set when endpoints are tiling vertices"""
    start: complex
    end: complex
    start_vertex: Optional[int] = None
    end_vertex: Optional[int] = None

    def __post_init__(self) -> None:
        if abs(self.start - self.end) == 0:
            raise ValueError("segment endpoints must be distinct")


@dataclass
class DiagonalCensus:
    p: int
    q: int
    k_max: int
    n_cl: Dict[int, int]
    n_cl_prim: Dict[int, int]
    gd: Dict[int, Fraction]
    excluded: int = 0
    edges_skipped: int = 0


@dataclass
class ProcessingResult:
    """Result of a storage or validation operation"""
    success: bool
    message: str
    record_count: int = 0
    errors: List[str] = None

    def __post_init__(self):
        if self.errors is None:
            self.errors = []


class GrowthRateSchema(pa.DataFrameModel):
    """Exact billiard language complexity for even q"""
    p: Series[int] = pa.Field(ge=3, description="Sides per tile")
    q: Series[int] = pa.Field(ge=4, description="Tiles per vertex")
    alpha: Series[float] = pa.Field(gt=1.0, description="Tiling growth rate")

    class Config:
        strict = True
        coerce = True

    @pa.check("q")
    def q_is_even(cls, series):
        return series % 2 == 0


class LanguageBoundsSchema(pa.DataFrameModel):
    """Lower and upper language growth-rate bounds for odd q"""
    p: Series[int] = pa.Field(ge=3)
    q: Series[int] = pa.Field(ge=3)
    ell: Series[float] = pa.Field(ge=1.0, description="Lower-language growth rate")
    alpha_pow: Series[float] = pa.Field(gt=1.0, description="alpha^((q-1)/(q+1))")
    alpha: Series[float] = pa.Field(gt=1.0)
    u: Series[float] = pa.Field(gt=1.0, description="Upper-language growth rate")

    class Config:
        strict = True
        coerce = True

    @pa.check("q")
    def q_is_odd(cls, series):
        return series % 2 == 1

    @pa.dataframe_check
    def bounds_are_ordered(cls, df):
        return (df["ell"] <= df["alpha"] + 1e-9) & (df["alpha"] <= df["u"] + 1e-9)


class ComplexityRangeSchema(pa.DataFrameModel):
    p: Series[int] = pa.Field(ge=3)
    q: Series[int] = pa.Field(ge=3)
    lower: Series[float] = pa.Field(ge=1.0)
    lower_from_language: Series[bool]
    upper: Series[float] = pa.Field(gt=1.0)

    class Config:
        strict = True
        coerce = True


class GrowthSeriesSchema(pa.DataFrameModel):
    """Tile counts by tiling distance"""
    n: Series[int] = pa.Field(ge=0)
    tiles: Series[int] = pa.Field(ge=1, description="N_td(n)")

    class Config:
        strict = True
        coerce = True


class CensusSchema(pa.DataFrameModel):
    k: Series[int] = pa.Field(ge=0)
    n_cl: Series[int] = pa.Field(ge=0)
    n_cl_prim: Series[int] = pa.Field(ge=0)
    gd: Series[float] = pa.Field(ge=0)

    class Config:
        strict = True
        coerce = True

    @pa.dataframe_check
    def primitive_within_total(cls, df):
        return df["n_cl_prim"] <= df["n_cl"]
