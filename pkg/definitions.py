from dagster import Definitions

from usecase.assets import (
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

from usecase.jobs import (
    tables_job,
    growth_job,
    census_job,
    full_pipeline_job,
)


# Define all assets
assets = [
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
]

# Define all jobs
jobs = [
    tables_job,
    growth_job,
    census_job,
    full_pipeline_job,
]

# Create Dagster definitions
defs = Definitions(
    assets=assets,
    jobs=jobs
)
