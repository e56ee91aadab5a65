"""Enumeration caps.

Defaults can be overridden with the ``ARROWKIT_CAPS`` environment variable,
a comma separated list of ``key=value`` pairs, e.g.
``ARROWKIT_CAPS="subset=18,value_set=22"``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

ENV_VAR = "ARROWKIT_CAPS"


@dataclass(frozen=True)
class Caps:
    subset: int = 16  # |A| bound for checks quantifying over all subsets of A
    value_set: int = 20  # |Im(->)| bound for the a combinator
    carrier: int = 4096  # carrier bound for power algebras and downset algebras
    per_points: int = 3  # |P| bound for PER algebras
    pair_threshold: int = 10**6  # exhaustive vs sampled predicate pairs
    sample_pairs: int = 10**4
    sample_seed: int = 20240611
    search_poset: int = 2  # poset size bound for search-aprime enumeration


def _parse(spec: str) -> dict[str, int]:
    known = {f.name for f in fields(Caps)}
    out: dict[str, int] = {}
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in known:
            raise ValueError(f"unknown cap {key!r} in {ENV_VAR}")
        out[key] = int(value)
    return out


def caps() -> Caps:
    """Current caps, re-read from the environment on every call."""
    spec = os.environ.get(ENV_VAR, "")
    if not spec:
        return Caps()
    return replace(Caps(), **_parse(spec))
