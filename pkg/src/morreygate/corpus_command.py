from __future__ import annotations

from pathlib import Path

from morreygate.fs import write_json
from morreygate.run_command import DEFAULT_CONFIG_NAME, resolve_config
from morreygate.testfns import build_corpus


def execute_corpus(
    *,
    suite_id: str,
    manifest: str,
    config_arg: str = DEFAULT_CONFIG_NAME,
    cwd: Path | None = None,
) -> dict:
    """Write the descriptors of the suite's corpus as a JSON list."""
    cwd = cwd or Path.cwd()
    config, source = resolve_config(suite_id, config_arg, cwd)
    corpus = build_corpus(config.corpus)

    path = Path(manifest)
    if not path.is_absolute():
        path = cwd / path
    write_json(path, [f.descriptor() for f in corpus])

    return {
        "suite": suite_id,
        "config_source": source,
        "function_count": len(corpus),
        "manifest_path": str(path),
    }
