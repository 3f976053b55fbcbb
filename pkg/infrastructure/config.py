import os
from dataclasses import dataclass, fields, replace
from typing import Any, Callable, Dict, Optional

from dotenv import load_dotenv

from domain.exceptions import ParameterError

ENV_PREFIX = "HYPBILL_"


@dataclass(frozen=True)
class Settings:
    """Run settings; HYPBILL_* environment variables override the defaults"""
    tolerance: float = 1e-12
    class_cap: int = 100000
    enum_budget: int = 2000000
    power_iter_cap: int = 1000000
    output_dir: str = "data"
    geometry_depth: int = 5
    seed: int = 0
    p: int = 4
    q: int = 6
    terms: int = 10
    census_kmax: int = 3

    def __post_init__(self) -> None:
        if not self.tolerance > 0:
            raise ParameterError(f"tolerance must be positive, got {self.tolerance}")
        for name in ("class_cap", "enum_budget", "power_iter_cap"):
            if getattr(self, name) < 1:
                raise ParameterError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.terms < 0 or self.census_kmax < 1:
            raise ParameterError("terms must be >= 0 and census_kmax >= 1")
        if self.geometry_depth < 0:
            raise ParameterError(f"geometry_depth must be >= 0, got {self.geometry_depth}")

    @classmethod
    def from_env(cls, env_file: Optional[str] = None) -> "Settings":
        """
        Read settings from the environment, after loading a .env file

        Args:
            env_file: Path of the .env file; python-dotenv searches for one if omitted

        Raises:
            ParameterError: If a HYPBILL_* value cannot be parsed
        """
        if env_file:
            load_dotenv(env_file)
        else:
            load_dotenv()
        values: Dict[str, Any] = {}
        for f in fields(cls):
            raw = os.getenv(ENV_PREFIX + f.name.upper())
            if raw is None or raw.strip() == "":
                continue
            parse: Callable[[str], Any] = {"float": float, "int": int}.get(
                f.type if isinstance(f.type, str) else f.type.__name__, str
            )
            try:
                values[f.name] = parse(raw.strip())
            except ValueError as e:
                raise ParameterError(
                    f"{ENV_PREFIX}{f.name.upper()}={raw!r} is not a valid {parse.__name__}"
                ) from e
        return cls(**values)

    def with_overrides(self, **overrides: Any) -> "Settings":
        """Apply command-line values; None leaves a setting unchanged"""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


OUTPUT_FORMATS = ("text", "csv", "json", "svg")


@dataclass(frozen=True)
class RunConfig:
    """One command-line invocation after parsing and environment merging"""
    subcommand: str
    settings: Settings
    p: Optional[int] = None
    q: Optional[int] = None
    depth: Optional[int] = None
    terms: Optional[int] = None
    output_format: str = "text"
    output_path: Optional[str] = None

    def __post_init__(self) -> None:
        if self.output_format not in OUTPUT_FORMATS:
            raise ParameterError(
                f"--format must be one of {', '.join(OUTPUT_FORMATS)}, got {self.output_format!r}"
            )
        if (self.p is None) != (self.q is None):
            raise ParameterError("--p and --q must be given together")
        if self.depth is not None and self.depth < 0:
            raise ParameterError(f"--depth must be >= 0, got {self.depth}")
        if self.terms is not None and self.terms < 0:
            raise ParameterError(f"--terms must be >= 0, got {self.terms}")
        if self.output_format == "svg" and not self.output_path:
            raise ParameterError("svg output needs an output path")
