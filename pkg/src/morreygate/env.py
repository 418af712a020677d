from __future__ import annotations

import importlib.metadata
import os
import sys

from morreygate.models import EnvironmentInfo

TRACKED_PACKAGES = ("numpy", "scipy", "pydantic", "morreygate")

# complex128 working arrays per refined run, in bytes, above which we warn
REFINE_MEMORY_WARN_BYTES = 2 * 1024**3


def check_environment(
    *,
    command: str,
    threads: int | None = None,
    refine: bool = False,
    grid_points: int = 0,
) -> list[str]:
    warnings: list[str] = []
    cpus = os.cpu_count()
    if threads is not None and cpus is not None and threads > cpus:
        warnings.append(f"requested {threads} threads but only {cpus} CPUs are available")
    if command == "run" and refine and grid_points:
        # a handful of complex128 working copies are live per case
        estimate = grid_points * 16 * 8
        if estimate > REFINE_MEMORY_WARN_BYTES:
            warnings.append(f"refined run needs roughly {estimate / 1024**3:.1f} GiB of working memory")
    return warnings


def capture_environment() -> EnvironmentInfo:
    python_version = f"{sys.version_info.major}.{sys.version_info.minor}.{sys.version_info.micro}"
    return EnvironmentInfo(
        python_version=python_version,
        platform=sys.platform,
        cpu_count=os.cpu_count(),
        packages=_get_installed_packages(),
    )


def _get_installed_packages() -> dict[str, str]:
    versions: dict[str, str] = {}
    for name in TRACKED_PACKAGES:
        try:
            versions[name] = importlib.metadata.version(name)
        except importlib.metadata.PackageNotFoundError:
            continue
    return versions
