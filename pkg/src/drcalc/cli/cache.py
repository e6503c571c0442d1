"""Content-addressed on-disk store for graph invariants."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from ..exactmath import MultiPoly

SCHEMA = 1


class DiskCache:
    """One JSON file per (method, canonical multigraph key); writes are atomic renames."""

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)

    @staticmethod
    def digest(key) -> str:
        return hashlib.sha256(repr(key).encode()).hexdigest()[:32]

    def path(self, key) -> Path:
        return self.root / f"{self.digest(key)}.json"

    def load(self, key) -> MultiPoly | None:
        p = self.path(key)
        try:
            data = json.loads(p.read_text())
        except (OSError, ValueError):
            return None
        if data.get("schema") != SCHEMA or data.get("key") != repr(key):
            return None
        return MultiPoly.from_json(data["value"])

    def store(self, key, value: MultiPoly) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        kind = key[0] if isinstance(key, tuple) and key else None
        body = json.dumps({"schema": SCHEMA, "key": repr(key), "method": kind, "value": value.to_json()}, sort_keys=True)
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(body)
            os.replace(tmp, self.path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def entries(self) -> list[Path]:
        if not self.root.is_dir():
            return []
        return sorted(self.root.glob("*.json"))

    def info(self) -> dict:
        files = self.entries()
        methods: dict[str, int] = {}
        for f in files:
            try:
                m = json.loads(f.read_text()).get("method") or "unknown"
            except (OSError, ValueError):
                m = "unreadable"
            methods[m] = methods.get(m, 0) + 1
        return {
            "schema": SCHEMA,
            "path": str(self.root),
            "entries": len(files),
            "bytes": sum(f.stat().st_size for f in files),
            "methods": dict(sorted(methods.items())),
        }

    def clear(self) -> int:
        files = self.entries()
        for f in files:
            f.unlink()
        return len(files)
