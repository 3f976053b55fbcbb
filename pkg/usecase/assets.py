import os
import pandas as pd
from datetime import datetime
from typing import Optional
from dagster import asset, AssetExecutionContext, MetadataValue
from dotenv import load_dotenv

from domain.geometry import census_depth, diagonal_census, realize
from domain.models import ProcessingResult, TilingParams
from domain.services import TableService, ValidationService
from domain.tiling import build_tiling
from infrastructure.config import Settings
from infrastructure.storage import StorageFactory, TableExporter

# Load environment variables
load_dotenv()


def _preview(df: pd.DataFrame) -> MetadataValue:
    return MetadataValue.md(df.head(3).to_markdown(index=False) if not df.empty else "No data")


def _require_valid(context: AssetExecutionContext, name: str, result: ProcessingResult) -> None:
    if not result.success:
        error_msg = f"Data validation failed: {result.message}"
        context.log.error(f"{name}: 検証失敗 {error_msg}")
        for error in result.errors:
            context.log.error(f"Validation error: {error}")
        raise ValueError(error_msg)


def _store(
    context: AssetExecutionContext,
    name: str,
    df: pd.DataFrame,
    filename: str,
    table: Optional[str] = None,
) -> str:
    """CSV export shared by the store_* assets; returns the written path"""
    context.log.info(f"{name}: 開始")
    settings = Settings.from_env()

    storage_adapter = StorageFactory.create_adapter("csv", settings.output_dir)
    exporter = TableExporter(storage_adapter)
    result = exporter.export_table(df, filename, table=table)

    if not result.success:
        error_msg = f"Export failed: {result.message}"
        context.log.error(f"{name}: エクスポート失敗 {error_msg}")
        for error in result.errors:
            context.log.error(f"Export error: {error}")
        raise RuntimeError(error_msg)

    output_path = os.path.join(settings.output_dir, filename)
    resolved_path = os.path.abspath(output_path)
    context.add_output_metadata({
        "output_path": MetadataValue.path(resolved_path),
        "record_count": len(df),
        "file_size_bytes": os.path.getsize(resolved_path) if os.path.exists(resolved_path) else 0,
        "exported_at": datetime.now().isoformat(),
    })

    context.log.info(f"{name}: 完了 rows={len(df)} path={resolved_path}")

    return output_path


@asset(
    description="偶数qのタイリング成長率α（ビリヤード言語の複雑度）の表を計算する",
    group_name="billiard_tables",
)
def growth_rate_table(context: AssetExecutionContext) -> pd.DataFrame:
    """偶数qの各(p,q)について成長級数の分母多項式の最大実根αを求める。

    Args:
        context: Dagsterアセット実行コンテキスト

    Returns:
        pd.DataFrame: p, q, alphaカラムを含むDataFrame

    Raises:
        ValueError: スキーマ検証が失敗した場合
    """
    context.log.info("growth_rate_table: 開始")

    settings = Settings.from_env()
    df = TableService(settings.tolerance, settings.power_iter_cap).table1_frame()
    _require_valid(context, "growth_rate_table", ValidationService.validate_growth_rates(df))

    context.add_output_metadata({
        "row_count": len(df),
        "preview": _preview(df),
        "tolerance": settings.tolerance,
    })

    context.log.info(f"growth_rate_table: 完了 rows={len(df)}")

    return df


@asset(
    description="奇数qの言語成長率の下界・上界（ℓ, α^((q-1)/(q+1)), α, u）を計算する",
    group_name="billiard_tables",
)
def language_bounds_table(context: AssetExecutionContext) -> pd.DataFrame:
    """禁止語集合のde Bruijnグラフのペロン根から下界言語と上界言語の成長率を求める。

    Args:
        context: Dagsterアセット実行コンテキスト

    Returns:
        pd.DataFrame: p, q, ell, alpha_pow, alpha, uカラムを含むDataFrame
    """
    context.log.info("language_bounds_table: 開始")

    settings = Settings.from_env()
    df = TableService(settings.tolerance, settings.power_iter_cap).table3_frame()
    _require_valid(context, "language_bounds_table", ValidationService.validate_language_bounds(df))

    context.add_output_metadata({
        "row_count": len(df),
        "preview": _preview(df),
        "power_iter_cap": settings.power_iter_cap,
    })

    context.log.info(f"language_bounds_table: 完了 rows={len(df)}")

    return df


@asset(
    description="言語成長率の範囲（下界はℓとα^((q-1)/(q+1))の大きい方、上界はα）をまとめる",
    group_name="billiard_tables",
)
def complexity_range_table(
    context: AssetExecutionContext, language_bounds_table: pd.DataFrame
) -> pd.DataFrame:
    """language_bounds_tableから複雑度の範囲を組み立て、ℓ由来の下界に印を付ける。

    Args:
        context: Dagsterアセット実行コンテキスト
        language_bounds_table: 奇数qの成長率の表

    Returns:
        pd.DataFrame: p, q, lower, lower_from_language, upperカラムを含むDataFrame
    """
    context.log.info("complexity_range_table: 開始")

    settings = Settings.from_env()
    service = TableService(settings.tolerance, settings.power_iter_cap)
    df = service.table2_frame(bounds=language_bounds_table)
    _require_valid(context, "complexity_range_table", ValidationService.validate_complexity_ranges(df))

    starred = int(df["lower_from_language"].sum())
    context.add_output_metadata({
        "row_count": len(df),
        "preview": _preview(df),
        "lower_from_language": starred,
    })

    context.log.info(f"complexity_range_table: 完了 rows={len(df)} starred={starred}")

    return df


@asset(
    description="設定された(p,q)の成長級数の係数N_td(0..n)を計算する",
    group_name="tiling_growth",
)
def growth_series_table(context: AssetExecutionContext) -> pd.DataFrame:
    """HYPBILL_P, HYPBILL_Q, HYPBILL_TERMSで指定された成長級数の係数を展開する。

    Args:
        context: Dagsterアセット実行コンテキスト

    Returns:
        pd.DataFrame: n, tilesカラムを含むDataFrame
    """
    context.log.info("growth_series_table: 開始")

    settings = Settings.from_env()
    params = TilingParams(settings.p, settings.q)
    df = TableService.growth_series_frame(params, settings.terms)
    _require_valid(context, "growth_series_table", ValidationService.validate_growth_series(df))

    context.add_output_metadata({
        "row_count": len(df),
        "preview": _preview(df),
        "params": str(params),
    })

    context.log.info(f"growth_series_table: 完了 rows={len(df)} params={params}")

    return df


@asset(
    description="ポアンカレ円板上で頂点間線分を組合せ長さ別に数え、一般化対角線数gd(k)を求める",
    group_name="disk_geometry",
)
def diagonal_census_table(context: AssetExecutionContext) -> pd.DataFrame:
    """タイリングを実現し、基点頂点から各頂点への測地線分を追跡して数え上げる。

    Args:
        context: Dagsterアセット実行コンテキスト

    Returns:
        pd.DataFrame: k, n_cl, n_cl_prim, gdカラムを含むDataFrame
    """
    context.log.info("diagonal_census_table: 開始")

    settings = Settings.from_env()
    params = TilingParams(settings.p, settings.q)
    depth = census_depth(params.q, settings.census_kmax)
    graph = build_tiling(params, depth)
    realization = realize(graph, depth)
    census = diagonal_census(realization, settings.census_kmax)
    df = TableService.census_frame(census)
    _require_valid(context, "diagonal_census_table", ValidationService.validate_census(df))

    if census.excluded:
        context.log.warning(f"diagonal_census_table: 判定不能な線分 {census.excluded} 件を除外")

    context.add_output_metadata({
        "row_count": len(df),
        "preview": _preview(df),
        "params": str(params),
        "depth": depth,
        "realized_tiles": len(realization.tiles),
        "excluded": census.excluded,
    })

    context.log.info(f"diagonal_census_table: 完了 rows={len(df)} tiles={len(realization.tiles)}")

    return df


@asset(
    description="成長率の表を公表時の列名でCSVに出力する",
    group_name="billiard_tables",
)
def store_growth_rate_table(context: AssetExecutionContext, growth_rate_table: pd.DataFrame) -> str:
    return _store(context, "store_growth_rate_table", growth_rate_table, "table1.csv", "table1")


@asset(
    description="言語成長率の上下界の表をCSVに出力する",
    group_name="billiard_tables",
)
def store_language_bounds_table(context: AssetExecutionContext, language_bounds_table: pd.DataFrame) -> str:
    return _store(context, "store_language_bounds_table", language_bounds_table, "table3.csv", "table3")


@asset(
    description="複雑度の範囲の表をCSVに出力する（ℓ由来の下界は*付き）",
    group_name="billiard_tables",
)
def store_complexity_range_table(context: AssetExecutionContext, complexity_range_table: pd.DataFrame) -> str:
    return _store(context, "store_complexity_range_table", complexity_range_table, "table2.csv", "table2")


@asset(
    description="成長級数の係数をCSVに出力する",
    group_name="tiling_growth",
)
def store_growth_series_table(context: AssetExecutionContext, growth_series_table: pd.DataFrame) -> str:
    return _store(context, "store_growth_series_table", growth_series_table, "growth_series.csv")


@asset(
    description="一般化対角線の集計をCSVに出力する",
    group_name="disk_geometry",
)
def store_diagonal_census_table(context: AssetExecutionContext, diagonal_census_table: pd.DataFrame) -> str:
    return _store(context, "store_diagonal_census_table", diagonal_census_table, "diagonal_census.csv")
