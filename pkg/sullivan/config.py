"""
Runtime configuration.

Settings come from the environment (a ``.env`` file is honoured) and can be
overridden per run by the command line through ``RunSpec``.
"""

import logging
import os
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, validator

from .models import Flavor

logger = logging.getLogger(__name__)

load_dotenv()

DEFAULT_CACHE_DIR = os.path.join("~", ".cache", "sullivan")
DEFAULT_THREADS = os.cpu_count() or 1
OUTPUT_FORMATS = ("csv", "json")
COMMANDS = ("homology", "verify", "classes", "cache")


def _env_bool(name: str, default: bool = False) -> bool:
    value = os.environ.get(name)
    if value is None:
        return default
    return value.strip().lower() in ("1", "true", "yes", "on")


class Settings(BaseModel):
    """Library-wide limits and locations."""

    cache_dir: str = Field(DEFAULT_CACHE_DIR, description="Directory of the complex cache")
    budget_cells: int = Field(2_000_000, description="Maximum number of cells per component")
    max_complexity: int = Field(6, description="Maximum 2g+m of a component")
    threads: int = Field(DEFAULT_THREADS, description="Worker threads for enumeration and reduction")
    max_orbit_leaves: int = Field(8, description="Largest leaf count for brute-force orbit minimization")
    progress: bool = Field(False, description="Show progress bars while enumerating")

    @validator("budget_cells", "max_complexity", "threads", "max_orbit_leaves")
    def _positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be positive")
        return v

    @classmethod
    def from_env(cls) -> "Settings":
        """Read ``SULLIVAN_*`` environment variables."""
        return cls(
            cache_dir=os.environ.get("SULLIVAN_CACHE_DIR", DEFAULT_CACHE_DIR),
            budget_cells=int(os.environ.get("SULLIVAN_BUDGET_CELLS", "2000000")),
            max_complexity=int(os.environ.get("SULLIVAN_MAX_COMPLEXITY", "6")),
            threads=int(os.environ.get("SULLIVAN_THREADS", str(DEFAULT_THREADS))),
            max_orbit_leaves=int(os.environ.get("SULLIVAN_MAX_ORBIT_LEAVES", "8")),
            progress=_env_bool("SULLIVAN_PROGRESS"),
        )


class RunSpec(BaseModel):
    """One command line run."""

    command: str
    flavor: Flavor = Flavor.UNPAR_UNEN
    g: int = 0
    m: int = 1
    min_degree: Optional[int] = None
    max_degree: Optional[int] = None
    format: str = "csv"
    cache_dir: Optional[str] = None
    threads: Optional[int] = None
    budget_cells: Optional[int] = None
    check: Optional[str] = None
    argument: Optional[str] = None
    use_morse: bool = False

    @validator("command")
    def _known_command(cls, v: str) -> str:
        if v not in COMMANDS:
            raise ValueError(f"unknown command '{v}'")
        return v

    @validator("g")
    def _genus(cls, v: int) -> int:
        if v < 0:
            raise ValueError("genus must be non-negative")
        return v

    @validator("m")
    def _boundaries(cls, v: int) -> int:
        if v < 1:
            raise ValueError("m must be at least 1")
        return v

    @validator("format")
    def _format(cls, v: str) -> str:
        if v not in OUTPUT_FORMATS:
            raise ValueError(f"format must be one of {', '.join(OUTPUT_FORMATS)}")
        return v

    def settings(self, base: Optional[Settings] = None) -> Settings:
        """Environment settings with this run's overrides applied."""
        base = base or Settings.from_env()
        overrides = {
            key: value
            for key, value in (
                ("cache_dir", self.cache_dir),
                ("threads", self.threads),
                ("budget_cells", self.budget_cells),
            )
            if value is not None
        }
        return base.copy(update=overrides)
