"""Run configuration: defaults, then a JSON config file, then env vars, then flags."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path


@dataclass
class Config:
    cache_dir: str = ".drcalc-cache"  # on-disk invariant cache
    jobs: int = 1  # worker processes for tables and check suites
    strict: bool = False  # extra oracle validation points; strict zeta substitution
    oracle_checks: int = 3  # validation charge tuples beyond the interpolation grid
    table_budget: int = 50_000  # max decorated graphs enumerated per table
    scalar_order: int = 20  # series order for the scalar identity suite

    @classmethod
    def load(cls, path: str | None = None, env: dict | None = None, **overrides) -> "Config":
        cfg = cls()
        if path:
            data = json.loads(Path(path).read_text())
            known = {f.name for f in fields(cls)}
            unknown = set(data) - known - {"schema"}
            if unknown:
                raise ValueError(f"unknown config keys: {sorted(unknown)}")
            for k, v in data.items():
                if k in known:
                    setattr(cfg, k, v)
        env = os.environ if env is None else env
        if env.get("DRCALC_CACHE_DIR"):
            cfg.cache_dir = env["DRCALC_CACHE_DIR"]
        if env.get("DRCALC_JOBS"):
            cfg.jobs = int(env["DRCALC_JOBS"])
        for k, v in overrides.items():
            if v is not None:
                setattr(cfg, k, v)
        if cfg.strict:
            cfg.oracle_checks = max(cfg.oracle_checks, 6)
        if cfg.jobs < 1:
            raise ValueError("jobs must be positive")
        return cfg

    def to_json(self) -> dict:
        return {"schema": 1, **asdict(self)}
