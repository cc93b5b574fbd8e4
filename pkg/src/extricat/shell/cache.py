"""On-disk cache of computed catalogs.

Entries are keyed by the algebra digest, the dimension bounds, the
enumeration strategy and the tool version.  Writes go to a temporary file in
the cache directory followed by an atomic rename, so concurrent readers see
either the old entry or the new one, never a partial file.  Reads take no
locks.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Callable, Optional

from .. import __version__
from ..algebra import Algebra
from ..repcat.catalog import Catalog
from ..verdict import Caps

ENV_VAR = "EXTRICAT_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "extricat"


def cache_key(algebra: Algebra, bounds, strategy: str, extra: str = "") -> str:
    text = "|".join([__version__, algebra.digest, ",".join(map(str, bounds)), strategy, extra])
    return hashlib.sha256(text.encode()).hexdigest()[:24]


def atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=str(path.parent))
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


class CatalogCache:
    """Load-or-compute access to catalogs; ``enabled=False`` always recomputes."""

    def __init__(self, directory: Optional[Path] = None, enabled: bool = True):
        self.directory = Path(directory) if directory is not None else default_cache_dir()
        self.enabled = enabled
        self.hits = 0
        self.misses = 0

    def path_for(self, key: str) -> Path:
        return self.directory / f"catalog-{key}.json"

    def load(self, algebra: Algebra, key: str, caps: Caps) -> Optional[Catalog]:
        if not self.enabled:
            return None
        path = self.path_for(key)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
            return Catalog.from_json(algebra, data, caps)
        except (OSError, ValueError, KeyError):
            # missing, unreadable or stale entries are simply recomputed
            return None

    def store(self, key: str, catalog: Catalog) -> None:
        if not self.enabled:
            return
        data = catalog.to_json(tables=False)
        data["aliases"] = {}
        try:
            atomic_write_text(self.path_for(key), json.dumps(data, sort_keys=True))
        except OSError:
            pass    # a read-only cache directory only costs recomputation

    def get(self, algebra: Algebra, key: str, caps: Caps,
            compute: Callable[[], Catalog]) -> Catalog:
        hit = self.load(algebra, key, caps)
        if hit is not None:
            self.hits += 1
            return hit
        self.misses += 1
        cat = compute()
        self.store(key, cat)
        return cat
