"""Optional disk cache for factorizations of p^k - 1.

Activated by the PRIMPAIR_CACHE_DIR environment variable; one JSON file per
(p, k).  An in-process dict always sits in front of the disk layer.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from .arith import Factorization

_memory: dict[tuple[int, int], Factorization] = {}


def cache_dir() -> Path | None:
    d = os.environ.get("PRIMPAIR_CACHE_DIR")
    return Path(d) if d else None


def _path(p: int, k: int) -> Path | None:
    d = cache_dir()
    return d / f"factor_p{p}_k{k}.json" if d else None


def load_factorization(p: int, k: int) -> Factorization | None:
    hit = _memory.get((p, k))
    if hit is not None:
        return hit
    path = _path(p, k)
    if path is not None and path.is_file():
        try:
            fact = Factorization.from_json(json.loads(path.read_text()))
        except (ValueError, KeyError, json.JSONDecodeError):
            return None
        if fact.value == p**k - 1:
            _memory[(p, k)] = fact
            return fact
    return None


def store_factorization(p: int, k: int, fact: Factorization) -> None:
    _memory[(p, k)] = fact
    path = _path(p, k)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(fact.to_json(), sort_keys=True))


def clear_memory() -> None:
    _memory.clear()
