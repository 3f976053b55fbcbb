from dagster import define_asset_job
from .assets import (
    growth_rate_table,
    language_bounds_table,
    complexity_range_table,
    growth_series_table,
    diagonal_census_table,
    store_growth_rate_table,
    store_language_bounds_table,
    store_complexity_range_table,
    store_growth_series_table,
    store_diagonal_census_table,
)

TABLE_ASSETS = [
    growth_rate_table,
    store_growth_rate_table,
    language_bounds_table,
    store_language_bounds_table,
    complexity_range_table,
    store_complexity_range_table,
]

GROWTH_ASSETS = [
    growth_series_table,
    store_growth_series_table,
]

CENSUS_ASSETS = [
    diagonal_census_table,
    store_diagonal_census_table,
]


# Published growth-rate and complexity tables
tables_job = define_asset_job(
    name="tables_job",
    description="Growth rates for even q, language bounds and complexity ranges for odd q",
    selection=TABLE_ASSETS
)


# Growth series of the configured tiling
growth_job = define_asset_job(
    name="growth_job",
    description="Tile counts by tiling distance for HYPBILL_P, HYPBILL_Q",
    selection=GROWTH_ASSETS
)


# Generalized-diagonal census in the Poincare disk
census_job = define_asset_job(
    name="census_job",
    description="Vertex-to-vertex segment counts by combinatorial length",
    selection=CENSUS_ASSETS
)


# Everything
full_pipeline_job = define_asset_job(
    name="full_pipeline_job",
    description="All tables, the growth series and the diagonal census",
    selection=TABLE_ASSETS + GROWTH_ASSETS + CENSUS_ASSETS
)

# Assets materialized per job when run from the command line
JOB_ASSETS = {
    "tables_job": TABLE_ASSETS,
    "growth_job": GROWTH_ASSETS,
    "census_job": CENSUS_ASSETS,
    "full_pipeline_job": TABLE_ASSETS + GROWTH_ASSETS + CENSUS_ASSETS,
}
