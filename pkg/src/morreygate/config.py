from __future__ import annotations

import json
import os
import sys
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from morreygate.constants import DEFAULT_SETTINGS, ENV_OUT_DIR, ENV_THREADS, SETTINGS_FILE
from morreygate.errors import ConfigError
from morreygate.fs import sha256_of
from morreygate.models import SuiteConfig

if sys.version_info >= (3, 11):
    import tomllib
else:
    try:
        import tomli as tomllib  # pyright: ignore[reportMissingImports]
    except ImportError:
        tomllib = None  # type: ignore[assignment]


def load_settings(cwd: Path | None = None) -> dict:
    cwd = cwd or Path.cwd()

    # Try morreygate.toml first
    settings_toml = cwd / SETTINGS_FILE
    if settings_toml.exists():
        return _merge_settings(_load_toml(settings_toml), source=str(settings_toml))

    # Try pyproject.toml [tool.morreygate]
    pyproject = cwd / "pyproject.toml"
    if pyproject.exists():
        full = _load_toml(pyproject)
        user_settings = full.get("tool", {}).get("morreygate", {})
        if user_settings:
            return _merge_settings(user_settings, source=str(pyproject))

    return _defaults()


def _load_toml(path: Path) -> dict:
    if tomllib is None:
        raise ImportError(
            f"Cannot parse {path}: tomli package required on Python < 3.11. Install it with: pip install tomli"
        )
    with open(path, "rb") as f:
        return tomllib.load(f)


def _defaults() -> dict:
    return {**DEFAULT_SETTINGS, "source": "defaults"}


def _merge_settings(user: dict, *, source: str) -> dict:
    unknown = sorted(set(user) - set(DEFAULT_SETTINGS))
    if unknown:
        raise ConfigError(f"unknown settings key(s) in {source}: {', '.join(unknown)}")
    merged = {**DEFAULT_SETTINGS, **user, "source": source}
    merged["threads"] = _positive_int(merged["threads"], origin=source)
    return merged


def load_suite_config(path: Path) -> SuiteConfig:
    """Read a JSON suite config; unknown keys and malformed values raise ConfigError."""
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_suite_config(data, origin=str(path))


def parse_suite_config(data: Any, *, origin: str = "<config>") -> SuiteConfig:
    if not isinstance(data, dict):
        raise ConfigError(f"{origin}: config must be a JSON object")
    try:
        return SuiteConfig.model_validate(data)
    except ValidationError as exc:
        problems = []
        for err in exc.errors():
            loc = ".".join(str(part) for part in err["loc"])
            if err["type"] == "extra_forbidden":
                problems.append(f"unknown key '{loc}'")
            else:
                problems.append(f"{loc}: {err['msg']}")
        raise ConfigError(f"{origin}: " + "; ".join(problems)) from exc


def resolve_run_options(
    config: SuiteConfig,
    *,
    settings: dict,
    out_dir: str | None = None,
    threads: int | None = None,
) -> SuiteConfig:
    """Fill out_dir and threads: CLI flag > environment > config file > project settings > defaults."""
    env_out = os.environ.get(ENV_OUT_DIR)
    env_threads = os.environ.get(ENV_THREADS)

    resolved_out = out_dir or env_out
    if resolved_out is None:
        resolved_out = config.out_dir if "out_dir" in config.model_fields_set else settings["out_dir"]

    if threads is not None:
        resolved_threads = _positive_int(threads, origin="--threads")
    elif env_threads is not None:
        resolved_threads = _positive_int(env_threads, origin=ENV_THREADS)
    elif "threads" in config.model_fields_set:
        resolved_threads = _positive_int(config.threads, origin="config")
    else:
        resolved_threads = _positive_int(settings["threads"], origin=settings.get("source", "settings"))

    return config.model_copy(update={"out_dir": resolved_out, "threads": resolved_threads})


def config_hash(config: SuiteConfig) -> str:
    payload = config.model_dump(mode="json")
    payload.pop("out_dir", None)
    return sha256_of(payload)


def _positive_int(value: Any, *, origin: str) -> int:
    try:
        number = int(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{origin}: thread count must be an integer, got {value!r}") from exc
    if number < 1:
        raise ConfigError(f"{origin}: thread count must be >= 1, got {number}")
    return number
