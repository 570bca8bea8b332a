"""Enumeration caps.

Defaults keep every exhaustive check at desk scale.  ``ULTRAPOSET_CAPS`` can
raise them, e.g. ``ULTRAPOSET_CAPS="additive2=9,dm=14"``; raised caps may be
slow.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

from .errors import CapExceeded, UsageError

ENV_VAR = "ULTRAPOSET_CAPS"

# masks are int64 lanes
_HARD_MASK_LIMIT = 62


@dataclass(frozen=True)
class Caps:
    additive1: int = 12
    additive2: int = 8
    additive3: int = 5
    dm: int = 12
    product: int = 4096
    iso: int = 64
    complex: int = 6
    table: int = 1 << 24

    def additive(self, arity: int) -> int:
        if arity == 1:
            return self.additive1
        if arity == 2:
            return self.additive2
        if arity == 3:
            return self.additive3
        return 0


def current_caps() -> Caps:
    raw = os.environ.get(ENV_VAR, "").strip()
    if not raw:
        return Caps()
    known = {f.name for f in fields(Caps)}
    updates = {}
    for item in raw.split(","):
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in known or not value.strip().isdigit():
            raise UsageError(f"bad {ENV_VAR} entry {item!r}")
        updates[key] = int(value)
    caps = replace(Caps(), **updates)
    for name in ("additive1", "additive2", "additive3", "dm", "complex"):
        if getattr(caps, name) > _HARD_MASK_LIMIT:
            raise UsageError(f"{name} cap cannot exceed {_HARD_MASK_LIMIT}")
    return caps


def require(value: int, cap: int, what: str) -> None:
    if value > cap:
        raise CapExceeded(f"{what}: {value} exceeds cap {cap} (raise via {ENV_VAR})")
