"""Content-addressed cache for computed tables.

Keys hash the canonical presentation text, the computation bounds, and an
engine version string, so format drift invalidates old entries silently.
Writes go through a temp file and an atomic rename, safe under concurrent
batch runs.  Payloads are serialized BigradedTables; a cache hit therefore
re-renders to output byte-identical with recomputation.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile

from .tables import BigradedTable, SubquotientPresentation

ENGINE_VERSION = "hhalg-0.1.0"
DEFAULT_DIR = ".hhalg-cache"


def resolve_cache_dir(flag=None) -> str:
    """--cache-dir beats HHALG_CACHE_DIR beats the default."""
    if flag:
        return flag
    return os.environ.get("HHALG_CACHE_DIR") or DEFAULT_DIR


def cache_key(*parts) -> str:
    doc = json.dumps([ENGINE_VERSION, *parts], sort_keys=True)
    return hashlib.sha256(doc.encode()).hexdigest()


def _path(cache_dir, key):
    return os.path.join(cache_dir, key + ".json")


def serialize_table(table: BigradedTable) -> str:
    return json.dumps({
        "rows": [[s, t, fr, list(tors)] for s, t, fr, tors in table.rows()],
        "window": list(table.window) if table.window else None,
        "notes": list(table.notes),
    }, sort_keys=True)


def deserialize_table(text: str) -> BigradedTable:
    doc = json.loads(text)
    table = BigradedTable(
        window=tuple(doc["window"]) if doc["window"] else None,
        notes=tuple(doc["notes"]),
    )
    for s, t, fr, tors in doc["rows"]:
        table.set(s, t, SubquotientPresentation(fr, tuple(tors)))
    return table


def load(cache_dir, key):
    try:
        with open(_path(cache_dir, key)) as fh:
            return fh.read()
    except OSError:
        return None


def store(cache_dir, key, text: str):
    os.makedirs(cache_dir, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, _path(cache_dir, key))
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cached_table(cache_dir, key, compute) -> BigradedTable:
    """Look up a table; on miss, compute, store, and return it."""
    hit = load(cache_dir, key)
    if hit is not None:
        return deserialize_table(hit)
    table = compute()
    store(cache_dir, key, serialize_table(table))
    return table
