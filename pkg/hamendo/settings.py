import tomlkit

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

from hamendo._version import __version__
from hamendo.error import InvalidParamsError
from hamendo.limits import Limits


class Property:
    def __init__(self, name: str, value: Any) -> None:
        self.name = name
        self.value = value


class GraphFamilies:
    HAMMING = Property("HAMMING", "hamming")
    DISTANCE_RANGE = Property("DISTANCE_RANGE", "distance_range")
    CATEGORICAL = Property("CATEGORICAL", "categorical")
    COMPLEMENT_HAMMING = Property("COMPLEMENT_HAMMING", "complement_hamming")
    COMPLEMENT_CATEGORICAL = Property("COMPLEMENT_CATEGORICAL", "complement_categorical")
    CUBOID = Property("CUBOID", "cuboid")


DEFAULT_REPORTING_MODULES = {
    "console": "hamendo.reports.ConsoleReport",
    "json": "hamendo.reports.JSONReport",
}

DEFAULT_SETTINGS_FILE = "hamendo-settings.toml"

DEFAULT_SETTINGS: Dict[str, Any] = {
    "hamendo_version": __version__,
    # 0 disables max_results, max_nodes and budget_seconds
    "limits": {
        "max_vertices": 10_000,
        "max_search_vertices": 100,
        "max_results": 0,
        "max_nodes": 0,
        "budget_seconds": 0,
    },
    "jobs": 1,
    "seed": 0,
    "canonical": True,
    "sample_size": 1000,
    "crosscheck": {
        "max_exhaustive": 10_000_000,
    },
    "verifiers": {
        "hamendo.verifiers.HammingVerifier": {
            "enabled": True,
            "cap": 0,
            "decompose": True,
        },
        "hamendo.verifiers.DistanceRangeVerifier": {
            "enabled": True,
            "cap": 100_000,
        },
        "hamendo.verifiers.CategoricalProductVerifier": {
            "enabled": True,
            "cap": 100_000,
        },
        "hamendo.verifiers.ComplementHammingVerifier": {
            "enabled": True,
            "cap": 100_000,
            "samples": 0,
        },
        "hamendo.verifiers.ComplementCategoricalVerifier": {
            "enabled": True,
            "cap": 100_000,
            "samples": 0,
        },
        "hamendo.verifiers.CuboidVerifier": {
            "enabled": True,
            "cap": 0,
        },
    },
    "middlewares": {
        "hamendo.middlewares.FamilyViaDistanceSetMiddleware": {
            "families": [
                GraphFamilies.HAMMING.value,
                GraphFamilies.DISTANCE_RANGE.value,
                GraphFamilies.CATEGORICAL.value,
                GraphFamilies.COMPLEMENT_HAMMING.value,
                GraphFamilies.COMPLEMENT_CATEGORICAL.value,
                GraphFamilies.CUBOID.value,
            ],
        },
        "hamendo.middlewares.InformationalOrderMiddleware": {
            "min_order": 3,
        },
    },
    "reporting": {
        "module": "hamendo.reports.ConsoleReport",
        "settings": {},
    },  # JSON reporting can be configured by changing "module" to "hamendo.reports.JSONReport" and adding an optional "output_file" field
    "literature": {
        "source": "published counts of Latin hypercubes of class 1",
        "lhc": {
            "3": {"1": 6, "2": 12, "3": 24, "4": 48},
            "4": {"1": 24, "2": 576, "3": 55296},
            "5": {"1": 120, "2": 161280},
        },
    },
}


class SettingsUtils:
    @staticmethod
    def get_default_settings_as_toml() -> Any:
        toml_settings = tomlkit.dumps(DEFAULT_SETTINGS)

        # Add settings file header
        toml_settings = f"# hamendo settings file\n\n{toml_settings}"

        return toml_settings

    @staticmethod
    def load(path: Path) -> Dict[str, Any]:
        with open(path, encoding="utf-8") as sf:
            settings: Dict[str, Any] = tomlkit.parse(sf.read()).unwrap()
        return settings


def literature_cube_counts(settings: Dict[str, Any], n: int) -> Dict[int, int]:
    """#LHC(d, n) from the documented literature table, keyed by d."""
    table = settings.get("literature", {}).get("lhc", {}).get(str(n))
    if table is None:
        raise InvalidParamsError(f"no literature cube counts for order {n}")
    return {int(d): int(count) for d, count in table.items()}


@dataclass(frozen=True)
class RunConfig:
    """Everything a run depends on; assembled once from settings and command line flags."""

    limits: Limits = field(default_factory=Limits)
    jobs: int = 1
    seed: int = 0
    canonical: bool = True
    sample_size: int = 0
    max_exhaustive: int = 10_000_000
    out: Optional[str] = None

    def __post_init__(self) -> None:
        if self.jobs < 1:
            raise InvalidParamsError(f"jobs must be at least 1, got {self.jobs}")
        if self.sample_size < 0:
            raise InvalidParamsError(f"sample size must not be negative, got {self.sample_size}")

    @staticmethod
    def from_settings(settings: Dict[str, Any], **overrides: Any) -> "RunConfig":
        limits = dict(settings.get("limits", {}))
        for name in ("max_nodes", "budget_seconds", "max_results"):
            if overrides.get(name) is not None:
                limits[name] = overrides[name]
        values = {
            "jobs": settings.get("jobs", 1),
            "seed": settings.get("seed", 0),
            "canonical": settings.get("canonical", True),
            "sample_size": settings.get("sample_size", 0),
            "max_exhaustive": settings.get("crosscheck", {}).get("max_exhaustive", 10_000_000),
        }
        for name in ("jobs", "seed", "canonical", "sample_size", "out"):
            if overrides.get(name) is not None:
                values[name] = overrides[name]
        return RunConfig(limits=Limits.from_settings(limits), **values)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "limits": self.limits.to_dict(),
            "jobs": self.jobs,
            "seed": self.seed,
            "canonical": self.canonical,
            "sample_size": self.sample_size,
        }
