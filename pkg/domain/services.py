from typing import Optional, Sequence, Tuple, Type

import pandas as pd
import pandera.pandas as pa

from .growth import growth_series, series_coefficients, tiling_growth_rate
from .langrate import (
    DEFAULT_POWER_ITER_CAP,
    DEFAULT_TOLERANCE,
    TABLE1_PARAMS,
    TABLE3_PARAMS,
    complexity_range,
    complexity_report,
)
from .models import (
    CensusSchema,
    ComplexityRangeSchema,
    DiagonalCensus,
    GrowthRateSchema,
    GrowthSeriesSchema,
    LanguageBoundsSchema,
    ProcessingResult,
    TilingParams,
)
from .repositories import GraphRepository
from .tiling import Layering, TilingGraph, build_tiling


class ValidationService:
    """Service for result-table validation using Pandera schemas"""

    @staticmethod
    def _validate(schema: Type[pa.DataFrameModel], df: pd.DataFrame, name: str) -> ProcessingResult:
        try:
            validated_df = schema.validate(df)
            return ProcessingResult(
                success=True,
                message=f"{name} validation successful",
                record_count=len(validated_df)
            )
        except (pa.errors.SchemaError, pa.errors.SchemaErrors) as e:
            return ProcessingResult(
                success=False,
                message=f"{name} schema validation failed",
                record_count=len(df),
                errors=[str(e)]
            )
        except Exception as e:
            return ProcessingResult(
                success=False,
                message="Validation error occurred",
                record_count=len(df) if df is not None else 0,
                errors=[f"Unexpected error: {str(e)}"]
            )

    @staticmethod
    def validate_growth_rates(df: pd.DataFrame) -> ProcessingResult:
        """
        Validate an even-q growth-rate table

        Args:
            df: DataFrame with p, q, alpha columns

        Returns:
            ProcessingResult with validation outcome
        """
        return ValidationService._validate(GrowthRateSchema, df, "Growth rate table")

    @staticmethod
    def validate_language_bounds(df: pd.DataFrame) -> ProcessingResult:
        return ValidationService._validate(LanguageBoundsSchema, df, "Language bounds table")

    @staticmethod
    def validate_complexity_ranges(df: pd.DataFrame) -> ProcessingResult:
        return ValidationService._validate(ComplexityRangeSchema, df, "Complexity range table")

    @staticmethod
    def validate_growth_series(df: pd.DataFrame) -> ProcessingResult:
        return ValidationService._validate(GrowthSeriesSchema, df, "Growth series table")

    @staticmethod
    def validate_census(df: pd.DataFrame) -> ProcessingResult:
        return ValidationService._validate(CensusSchema, df, "Diagonal census")



class TableService:
    """Builds the published result tables as pandas frames"""

    def __init__(self, tolerance: float = DEFAULT_TOLERANCE, power_iter_cap: int = DEFAULT_POWER_ITER_CAP):
        self.tolerance = tolerance
        self.power_iter_cap = power_iter_cap

    def table1_frame(self, params: Sequence[Tuple[int, int]] = TABLE1_PARAMS) -> pd.DataFrame:
        """Exact complexity growth rate alpha for even q"""
        rows = []
        for p, q in params:
            alpha = tiling_growth_rate(TilingParams(p, q), self.tolerance).alpha
            rows.append({"p": p, "q": q, "alpha": alpha})
        return pd.DataFrame(rows, columns=["p", "q", "alpha"])

    def table3_frame(self, params: Sequence[Tuple[int, int]] = TABLE3_PARAMS) -> pd.DataFrame:
        """ell, alpha^((q-1)/(q+1)), alpha and u for odd q"""
        rows = []
        for p, q in params:
            report = complexity_report(TilingParams(p, q), self.tolerance, self.power_iter_cap)
            rows.append({
                "p": p, "q": q, "ell": report.ell, "alpha_pow": report.alpha_pow,
                "alpha": report.alpha, "u": report.u,
            })
        return pd.DataFrame(rows, columns=["p", "q", "ell", "alpha_pow", "alpha", "u"])

    def table2_frame(
        self,
        params: Optional[Sequence[Tuple[int, int]]] = None,
        bounds: Optional[pd.DataFrame] = None,
    ) -> pd.DataFrame:
        """
        Complexity range per parameter pair.

        Args:
            params: (p, q) pairs to report; defaults to the rows of bounds,
                or to the odd-q parameter set when bounds is not given
            bounds: Optional table3_frame output to reuse instead of recomputing

        Returns:
            DataFrame with p, q, lower, lower_from_language, upper
        """
        rows = []
        known = {}
        if bounds is not None:
            for rec in bounds.to_dict("records"):
                known[(int(rec["p"]), int(rec["q"]))] = rec
        if params is None:
            params = list(known) if bounds is not None else TABLE3_PARAMS
        for p, q in params:
            tp = TilingParams(p, q)
            rec = known.get((p, q))
            if rec is not None:
                from_language = rec["ell"] > rec["alpha_pow"]
                lower = rec["ell"] if from_language else rec["alpha_pow"]
                rows.append({
                    "p": p, "q": q, "lower": lower,
                    "lower_from_language": bool(from_language), "upper": rec["alpha"],
                })
                continue
            report = complexity_report(tp, self.tolerance, self.power_iter_cap)
            rng = complexity_range(tp, self.tolerance, report)
            rows.append({
                "p": p, "q": q, "lower": rng.lower,
                "lower_from_language": rng.lower_from_language, "upper": rng.upper,
            })
        return pd.DataFrame(rows, columns=["p", "q", "lower", "lower_from_language", "upper"])

    @staticmethod
    def growth_series_frame(params: TilingParams, n: int) -> pd.DataFrame:
        coeffs = series_coefficients(growth_series(params), n)
        return pd.DataFrame({"n": list(range(n + 1)), "tiles": coeffs})

    @staticmethod
    def census_frame(census: DiagonalCensus) -> pd.DataFrame:
        """One row per combinatorial length, k = 0 carrying gd(0) = p"""
        rows = [{"k": 0, "n_cl": 0, "n_cl_prim": 0, "gd": float(census.gd[0])}]
        for k in range(1, census.k_max + 1):
            rows.append({
                "k": k,
                "n_cl": census.n_cl[k],
                "n_cl_prim": census.n_cl_prim[k],
                "gd": float(census.gd[k]),
            })
        return pd.DataFrame(rows, columns=["k", "n_cl", "n_cl_prim", "gd"])


class TilingService:
    """Builds tilings and hands them to a repository"""

    def __init__(self, repository: GraphRepository):
        self.repository = repository

    def build(
        self,
        params: TilingParams,
        depth: int,
        layering: Layering = Layering.TILES,
        seed: Optional[int] = None,
    ) -> TilingGraph:
        return build_tiling(params, depth, layering=layering, seed=seed)

    def build_and_save(
        self,
        params: TilingParams,
        depth: int,
        destination: str,
        layering: Layering = Layering.TILES,
        seed: Optional[int] = None,
    ) -> Tuple[TilingGraph, ProcessingResult]:
        graph = self.build(params, depth, layering, seed)
        return graph, self.repository.save_graph(graph, destination)

    def load(self, source: str) -> TilingGraph:
        return self.repository.load_graph(source)
