import json
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, Optional

import pandas as pd
from dagster import get_dagster_logger

from domain.models import ProcessingResult
from domain.repositories import GraphRepository
from domain.tiling import TilingGraph

RESULT_SCHEMA_VERSION = 1
# digits after the decimal point, as in the published tables
FLOAT_DECIMALS = 14

# Column headers of the published tables
PUBLISHED_HEADERS: Dict[str, Dict[str, str]] = {
    "table1": {"p": "p", "q": "q", "alpha": "Billiard Language Complexity"},
    "table2": {"p": "p", "q": "q", "lower": "Lower Bound", "upper": "Upper Bound"},
    "table3": {
        "p": "p", "q": "q", "ell": "ell", "alpha_pow": "alpha^((q-1)/(q+1))",
        "alpha": "alpha", "u": "u",
    },
}


def format_float(x: float) -> str:
    return f"{x:.{FLOAT_DECIMALS}f}"


class StorageAdapter(ABC):
    """Where result tables are written to and read back from"""

    @abstractmethod
    def save_data(self, df: pd.DataFrame, destination: str, **kwargs) -> ProcessingResult:
        pass

    @abstractmethod
    def load_data(self, source: str, **kwargs) -> pd.DataFrame:
        pass


class FileStorageAdapter(StorageAdapter):
    """
    Result tables stored as files under a base directory

    Subclasses only encode and decode; path handling, the empty-table
    refusal and ProcessingResult reporting live here.
    """

    kind = "file"

    def __init__(self, base_path: Optional[str] = None):
        self.base_path = Path(base_path or "data")
        self.base_path.mkdir(parents=True, exist_ok=True)

    def _existing(self, source: str) -> Path:
        path = self.base_path / source
        if not path.exists():
            raise FileNotFoundError(f"File not found: {path}")
        return path

    @abstractmethod
    def _write(self, df: pd.DataFrame, path: Path, **kwargs) -> None:
        pass

    @abstractmethod
    def _read(self, path: Path, **kwargs) -> pd.DataFrame:
        pass

    def save_data(self, df: pd.DataFrame, destination: str, **kwargs) -> ProcessingResult:
        if df.empty:
            return ProcessingResult(
                success=False,
                message=f"Refusing to write an empty DataFrame to {destination}",
                record_count=0,
                errors=["no rows"]
            )
        path = self.base_path / destination
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            self._write(df, path, **kwargs)
        except (OSError, TypeError, ValueError) as e:
            return ProcessingResult(
                success=False,
                message=f"Writing {self.kind} table {path} failed",
                record_count=len(df),
                errors=[f"Error: {e}"]
            )
        return ProcessingResult(
            success=True,
            message=f"{len(df)} rows saved to {path}",
            record_count=len(df)
        )

    def load_data(self, source: str, **kwargs) -> pd.DataFrame:
        """Raises FileNotFoundError for a missing file"""
        return self._read(self._existing(source), **kwargs)


class CsvStorageAdapter(FileStorageAdapter):
    """CSV tables with fixed 14-decimal floats"""

    kind = "csv"

    def _write(self, df: pd.DataFrame, path: Path, **kwargs) -> None:
        df.to_csv(
            path,
            index=False,
            float_format=f"%.{FLOAT_DECIMALS}f",
            lineterminator="\n",
            **kwargs
        )

    def _read(self, path: Path, **kwargs) -> pd.DataFrame:
        return pd.read_csv(path, **kwargs)


class JsonStorageAdapter(FileStorageAdapter):
    """Versioned {"schema", "columns", "rows"} documents; extra kwargs become top-level fields"""

    kind = "json"

    @staticmethod
    def to_document(df: pd.DataFrame) -> Dict[str, Any]:
        rows = json.loads(df.to_json(orient="records", double_precision=FLOAT_DECIMALS))
        return {"schema": RESULT_SCHEMA_VERSION, "columns": list(df.columns), "rows": rows}

    def _write(self, df: pd.DataFrame, path: Path, **kwargs) -> None:
        path.write_text(
            json.dumps({**self.to_document(df), **kwargs}, indent=2, sort_keys=True) + "\n",
            encoding="utf-8"
        )

    def _read(self, path: Path, **kwargs) -> pd.DataFrame:
        document = json.loads(path.read_text(encoding="utf-8"))
        if document.get("schema") != RESULT_SCHEMA_VERSION:
            raise ValueError(f"Unsupported result schema: {document.get('schema')}")
        return pd.DataFrame(document["rows"], columns=document.get("columns"))


class StorageFactory:
    """Maps a --format / OUTPUT kind onto an adapter"""

    ADAPTERS = {"csv": CsvStorageAdapter, "json": JsonStorageAdapter}

    @classmethod
    def create_adapter(cls, adapter_type: str, base_path: Optional[str] = None) -> StorageAdapter:
        adapter = cls.ADAPTERS.get(adapter_type.lower())
        if adapter is None:
            raise ValueError(f"Unsupported storage adapter type: {adapter_type}")
        return adapter(base_path)


class TableExporter:
    """Writes result tables, optionally under their published column headers"""

    def __init__(self, storage_adapter: StorageAdapter):
        self.storage_adapter = storage_adapter

    @staticmethod
    def publish(df: pd.DataFrame, table: str) -> pd.DataFrame:
        """
        Rename columns to the published headers and render floats as fixed text

        Args:
            df: Frame produced by TableService
            table: One of "table1", "table2", "table3"

        Returns:
            DataFrame of strings; table2 marks language-derived lower bounds with "*"

        Raises:
            ValueError: If the table name is unknown
        """
        if table not in PUBLISHED_HEADERS:
            raise ValueError(f"Unknown table: {table}")
        out = df.copy()
        if table == "table2":
            out["lower"] = [
                format_float(x) + ("*" if starred else "")
                for x, starred in zip(out["lower"], out["lower_from_language"])
            ]
            out = out.drop(columns=["lower_from_language"])
        for column in out.columns:
            if pd.api.types.is_float_dtype(out[column]):
                out[column] = out[column].map(format_float)
        return out.rename(columns=PUBLISHED_HEADERS[table])

    def export_table(self,
                     df: pd.DataFrame,
                     destination: str,
                     table: Optional[str] = None) -> ProcessingResult:
        """
        Export a result table

        Args:
            df: DataFrame to export
            destination: Destination path
            table: Published table name, to apply its headers

        Returns:
            ProcessingResult with export outcome
        """
        try:
            export_df = self.publish(df, table) if table else df
            return self.storage_adapter.save_data(export_df, destination)

        except Exception as e:
            return ProcessingResult(
                success=False,
                message="Export failed",
                record_count=len(df) if df is not None else 0,
                errors=[f"Error: {str(e)}"]
            )


class JsonGraphRepository(GraphRepository):
    """Stores tilings as versioned JSON graph documents"""

    def __init__(self, base_path: Optional[str] = None):
        self.base_path = Path(base_path) if base_path else Path("data")
        self.base_path.mkdir(parents=True, exist_ok=True)

    def save_graph(self, graph: TilingGraph, destination: str) -> ProcessingResult:
        try:
            file_path = self.base_path / destination
            file_path.parent.mkdir(parents=True, exist_ok=True)
            with open(file_path, "w", encoding="utf-8") as f:
                json.dump(graph.to_document(), f, sort_keys=True)
            get_dagster_logger().info(
                f"graph ({graph.p},{graph.q}) depth={graph.depth} tiles={graph.num_tiles} -> {file_path}"
            )
            return ProcessingResult(
                success=True,
                message=f"Graph saved to {file_path}",
                record_count=graph.num_tiles
            )
        except Exception as e:
            return ProcessingResult(
                success=False,
                message="Failed to save graph",
                errors=[f"Error: {str(e)}"]
            )

    def load_graph(self, source: str) -> TilingGraph:
        file_path = self.base_path / source
        if not file_path.exists():
            raise FileNotFoundError(f"File not found: {file_path}")
        with open(file_path, encoding="utf-8") as f:
            return TilingGraph.from_document(json.load(f))
