import pytest
import pandas as pd
import os
import shutil
import tempfile

from domain.models import TilingParams
from domain.tiling import build_tiling


@pytest.fixture(scope="session")
def tiling_46():
    """(4,6)-tiling; trusted up to tile distance 3"""
    return build_tiling(TilingParams(4, 6), 7)


@pytest.fixture(scope="session")
def tiling_48():
    """(4,8)-tiling, used for word paths and edge labels"""
    return build_tiling(TilingParams(4, 8), 5)


@pytest.fixture(scope="session")
def tiling_45():
    """(4,5)-tiling; odd q, trusted up to tile distance 3"""
    return build_tiling(TilingParams(4, 5), 7)


@pytest.fixture(scope="session")
def tiling_54():
    """(5,4)-tiling; odd p, even q"""
    return build_tiling(TilingParams(5, 4), 6)


@pytest.fixture
def growth_rate_frame():
    """Two rows of the even-q growth-rate table"""
    return pd.DataFrame({
        "p": [4, 5],
        "q": [6, 4],
        "alpha": [2.61803398874989, 2.61803398874989],
    })


@pytest.fixture
def language_bounds_frame():
    """Two rows of the odd-q language bounds table"""
    return pd.DataFrame({
        "p": [3, 4],
        "q": [7, 7],
        "ell": [1.0, 2.41421356237309],
        "alpha_pow": [1.39320015609277, 2.17799288640350],
        "alpha": [1.55603019132268, 2.82320193241387],
        "u": [1.83928675521416, 2.94771158684464],
    })


@pytest.fixture
def empty_dataframe():
    """A table with no rows"""
    return pd.DataFrame()


@pytest.fixture
def invalid_dataframe():
    """Rate rows keyed by Schlaefli symbol instead of p and q"""
    return pd.DataFrame({
        "symbol": ["{4,6}", "{5,4}", "{8,8}"],
        "rate": ["2.618", "2.618", "6.980"],
    })


@pytest.fixture
def temp_directory():
    temp_dir = tempfile.mkdtemp()
    yield temp_dir
    shutil.rmtree(temp_dir)


@pytest.fixture(autouse=True)
def setup_environment(tmp_path):
    """Isolate HYPBILL_* settings and send outputs to a temporary directory"""
    saved = {k: v for k, v in os.environ.items() if k.startswith("HYPBILL_")}
    for key in saved:
        del os.environ[key]
    os.environ["HYPBILL_OUTPUT_DIR"] = str(tmp_path / "data")

    yield

    # Cleanup
    for key in [k for k in os.environ if k.startswith("HYPBILL_")]:
        del os.environ[key]
    os.environ.update(saved)

