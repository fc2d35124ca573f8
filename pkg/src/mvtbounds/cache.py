"""On-disk JSON cache for exponent tables."""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

from . import __version__
from .exponents import (
    CATALOG_SCHEMA_VERSION,
    ExponentTable,
    Source,
    build_catalog,
    parity_label,
    parse_parity_mode,
)

ENV_VAR = "MVTBOUNDS_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "mvtbounds"


def fingerprint(k: int, parity_mode) -> str:
    """Key covering schema, code version, source families and parity flags."""
    mode = parse_parity_mode(parity_mode)
    blob = json.dumps(
        {
            "schema": CATALOG_SCHEMA_VERSION,
            "version": __version__,
            "sources": list(Source.KINDS),
            "parity": parity_label(mode),
            "k": k,
        },
        sort_keys=True,
    )
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def cache_path(cache_dir: Path, k: int, parity_mode) -> Path:
    mode = parse_parity_mode(parity_mode)
    tag = parity_label(mode).replace(",", "+")
    return Path(cache_dir) / f"catalog-k{k}-{tag}-{fingerprint(k, mode)}.json"


def load_or_build(k: int, parity_mode=None, cache_dir: Path | None = None) -> ExponentTable:
    """Read the table from the cache when present, otherwise build and store it.

    ``cache_dir=None`` disables the cache entirely.
    """
    if cache_dir is None:
        return build_catalog(k, parity_mode)
    path = cache_path(cache_dir, k, parity_mode)
    if path.exists():
        try:
            return ExponentTable.from_json(path.read_text())
        except (ValueError, KeyError, json.JSONDecodeError):
            pass  # stale or damaged, rebuild
    table = build_catalog(k, parity_mode)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(table.to_json())
    tmp.replace(path)
    return table
