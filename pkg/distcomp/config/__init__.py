"""Configuration settings for distcomp."""

import logging
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from rich.console import Console
from rich.logging import RichHandler

from ..errors import ConfigError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# Curvatures of the curvature-scale figure, largest first.
FIGURE_KS: Tuple[float, ...] = (6, 5, 4, 3, 2, 1, 0, -1, -2, -3, -4, -5, -6, -100, -4000)


@dataclass(frozen=True)
class Settings:
    """Numerical defaults; command-line flags override them."""

    slope_tol: float = 1e-9
    gap_tol: float = 1e-8
    grid_rtol: float = 1e-9
    pairs: int = 200
    seed: int = 0
    samples: int = 1001
    oracle_max_pairs: int = 100_000
    k_tol: float = 1e-4
    figure_ks: Tuple[float, ...] = FIGURE_KS
    figure_n: int = 1001


def _coerce(name: str, expected: Any, value: Any) -> Any:
    """Check one config value against the type of its default."""
    if isinstance(expected, tuple):
        if not isinstance(value, list) or not all(
            isinstance(item, (int, float)) and not isinstance(item, bool) for item in value
        ):
            raise ConfigError(f"'{name}' must be a list of numbers")
        return tuple(float(item) for item in value)
    if isinstance(expected, bool) or isinstance(value, bool):
        raise ConfigError(f"'{name}' must be a number, got {value!r}")
    if isinstance(expected, int):
        if not isinstance(value, int):
            raise ConfigError(f"'{name}' must be an integer, got {value!r}")
        return value
    if not isinstance(value, (int, float)):
        raise ConfigError(f"'{name}' must be a number, got {value!r}")
    return float(value)


def load_settings(path: Optional[Path] = None) -> Settings:
    """Load settings from the ``[distcomp]`` table of a TOML file.

    Without a path the built-in defaults apply.
    """
    settings = Settings()
    if path is None:
        return settings

    try:
        with open(path, "rb") as f:
            document = tomllib.load(f)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigError(f"cannot read config file {path}: {e}")
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"config file {path} is not valid TOML: {e}")

    table: Dict[str, Any] = document.get("distcomp", {})
    if not isinstance(table, dict):
        raise ConfigError("[distcomp] must be a table")
    defaults = {f.name: getattr(settings, f.name) for f in fields(Settings)}
    unknown = sorted(set(table) - set(defaults))
    if unknown:
        raise ConfigError(f"unknown settings in {path}: {', '.join(unknown)}")

    overrides = {name: _coerce(name, defaults[name], value) for name, value in table.items()}
    logger.debug(f"Loaded settings from {path}: {overrides}")
    return replace(settings, **overrides)


def setup_logging(verbose: bool = False, log_file: Optional[Path] = None) -> None:
    """Setup logging: DEBUG to a file when one is given, otherwise rich on stderr."""
    if log_file is not None:
        logging.basicConfig(
            filename=log_file,
            level=logging.DEBUG,
            filemode="w",
            format=LOG_FORMAT,
            force=True,
        )
    else:
        logging.basicConfig(
            level=logging.INFO if verbose else logging.WARNING,
            format="%(message)s",
            handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
            force=True,
        )
