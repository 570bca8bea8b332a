"""Tarskian satisfaction over finite structures."""
from __future__ import annotations

from typing import Mapping

from ..errors import SignatureMismatch, UnboundName
from ..structure import Structure
from .syntax import (
    And, Eq, Exists, Forall, Formula, Implies, Not, Or, Rel, Signature, Term, Var,
    check_signature, free_names, symbols,
)

Assignment = Mapping[str, int]


def _term(m: Structure, t: Term, env: dict[str, int]) -> int:
    if isinstance(t, Var):
        return env[t.name]
    args = tuple(_term(m, a, env) for a in t.args)
    return int(m.operations[t.op].table[args])


def _holds(m: Structure, phi: Formula, env: dict[str, int]) -> bool:
    if isinstance(phi, Rel):
        return bool(m.relation(phi.name)[tuple(_term(m, a, env) for a in phi.args)])
    if isinstance(phi, Eq):
        return _term(m, phi.left, env) == _term(m, phi.right, env)
    if isinstance(phi, Not):
        return not _holds(m, phi.body, env)
    if isinstance(phi, And):
        return _holds(m, phi.left, env) and _holds(m, phi.right, env)
    if isinstance(phi, Or):
        return _holds(m, phi.left, env) or _holds(m, phi.right, env)
    if isinstance(phi, Implies):
        return (not _holds(m, phi.left, env)) or _holds(m, phi.right, env)
    if isinstance(phi, Forall):
        saved = env.get(phi.var)
        try:
            for e in range(m.size):
                env[phi.var] = e
                if not _holds(m, phi.body, env):
                    return False
            return True
        finally:
            _restore(env, phi.var, saved)
    if isinstance(phi, Exists):
        saved = env.get(phi.var)
        try:
            for e in range(m.size):
                env[phi.var] = e
                if _holds(m, phi.body, env):
                    return True
            return False
        finally:
            _restore(env, phi.var, saved)
    raise TypeError(f"not a formula: {phi!r}")


def _restore(env, var, saved):
    if saved is None:
        env.pop(var, None)
    else:
        env[var] = saved


def evaluate(m: Structure, phi: Formula, a: Assignment | None = None) -> bool:
    """Whether ``m`` satisfies ``phi`` under assignment ``a``.

    Quantifiers range over the whole carrier.
    """
    a = dict(a or {})
    if m.order is None and any(name == "leq" for name, _ in symbols(phi)[0]):
        raise SignatureMismatch("formula uses <= but the structure has no order")
    check_signature(phi, Signature.of(m))
    missing = free_names(phi) - a.keys()
    if missing:
        raise UnboundName(f"unassigned free names: {sorted(missing)}")
    for name, v in a.items():
        if not 0 <= v < m.size:
            raise UnboundName(f"{name} is assigned {v!r}, outside the carrier")
    return _holds(m, phi, {k: int(v) for k, v in a.items()})

