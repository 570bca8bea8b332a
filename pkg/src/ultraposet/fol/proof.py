"""The supremum-transfer formulas and a step-by-step replay of the unary case.

For a unary operation ``f`` the three formulas are

* ``alpha(x, s, y)``: ``x <= s & f(x) <= y``
* ``sigma(s, y)``: ``forall z. (forall x. alpha -> x <= z) -> s <= z``
* ``phi(s, y)``: ``forall z. (forall x. alpha -> f(x) <= z) -> f(s) <= z``

``sigma`` leaves out the conjunct ``forall x. alpha -> x <= s`` because it
follows from ``alpha``; :attr:`PaperFormulas.sigma_full` puts it back.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from ..errors import PreconditionFailed, SignatureMismatch
from ..order import (
    OperationTable, Poset, SupResult, bits, is_completely_additive, is_quasi_complete, sup,
)
from ..structure import Structure
from .semantics import evaluate
from .syntax import And, App, Forall, Formula, Implies, Signature, Var, leq


@dataclass(frozen=True)
class PaperFormulas:
    alpha: Formula
    sigma: Formula
    phi: Formula
    sigma_full: Formula


def build_paper_formulas(sig: Signature | None = None, op: str = "f") -> PaperFormulas:
    sig = sig if sig is not None else Signature.standard(op)
    if sig.relations.get("leq") != 2 or sig.operations.get(op) != 1:
        raise SignatureMismatch(f"signature needs leq/2 and {op}/1")
    x, s, y, z = Var("x"), Var("s"), Var("y"), Var("z")

    def f(t):
        return App(op, (t,))

    alpha = And(leq(x, s), leq(f(x), y))
    sigma = Forall("z", Implies(Forall("x", Implies(alpha, leq(x, z))), leq(s, z)))
    phi = Forall("z", Implies(Forall("x", Implies(alpha, leq(f(x), z))), leq(f(s), z)))
    sigma_full = And(sigma, Forall("x", Implies(alpha, leq(x, s))))
    return PaperFormulas(alpha, sigma, phi, sigma_full)


@dataclass(frozen=True)
class ProofReport:
    s: int
    y: int
    A: frozenset[int]
    X_subset_A: bool
    sup_A: SupResult
    eq1: bool  # s = sup A
    sigma_holds: bool
    image_sup_A: SupResult
    eq3: bool  # f(s) = sup f(A)
    phi_holds: bool
    conclusion: bool  # f(s) <= y
    overall: bool  # f(s) = sup f(X)
    cross_checks: bool  # evaluator and order computations agree

    @property
    def all_steps(self) -> bool:
        return all((self.X_subset_A, self.eq1, self.sigma_holds, self.eq3,
                    self.phi_holds, self.conclusion, self.overall, self.cross_checks))


class ProofReplayer:
    """Replays the unary supremum-transfer argument on one ``(p, f)``.

    The additivity precondition is checked once; formula verdicts for each
    ``(s, y)`` are cached since they do not depend on ``X``.
    """

    def __init__(self, p: Poset, f: OperationTable, op: str = "f", *, quasi: bool = False):
        if f.arity != 1:
            raise PreconditionFailed("replay needs a unary operation")
        self.p, self.f, self.quasi = p, f, quasi
        check = is_quasi_complete if quasi else is_completely_additive
        if not check(p, f):
            kind = "quasi-complete" if quasi else "completely additive"
            raise PreconditionFailed(f"operation {op!r} is not {kind}")
        self.structure = Structure.from_poset(p, {op: f})
        self.formulas = build_paper_formulas(Signature.of(self.structure), op)
        self._cache: dict[tuple[int, int], tuple] = {}

    def _step(self, s: int, y: int):
        hit = self._cache.get((s, y))
        if hit is not None:
            return hit
        p, f, m, fm = self.p, self.f, self.structure, self.formulas
        A = frozenset(x for x in range(p.size) if p.le(x, s) and p.le(f(x), y))
        A_eval = frozenset(x for x in range(p.size) if evaluate(m, fm.alpha, {"x": x, "s": s, "y": y}))
        sup_A = sup(p, A)
        eq1 = sup_A.exists and sup_A.id == s
        sigma_holds = evaluate(m, fm.sigma, {"s": s, "y": y})
        image = {f(x) for x in A}
        image_sup = sup(p, image)
        eq3 = image_sup.exists and image_sup.id == f(s)
        phi_holds = evaluate(m, fm.phi, {"s": s, "y": y})
        below_all_ubs = all(p.le(f(s), u) for u in bits(p.upper_bounds(image)))
        cross = A == A_eval and sigma_holds == eq1 and phi_holds == below_all_ubs
        out = (A, sup_A, eq1, sigma_holds, image_sup, eq3, phi_holds, cross)
        self._cache[(s, y)] = out
        return out

    def replay(self, X: Iterable[int], y: int) -> ProofReport:
        p, f = self.p, self.f
        X = frozenset(X)
        if self.quasi and not X:
            raise PreconditionFailed("X must be nonempty for the quasi-complete variant")
        sX = sup(p, X)
        if not sX.exists:
            raise PreconditionFailed(f"sup X does not exist ({sX.reason})")
        if not 0 <= y < p.size:
            raise PreconditionFailed(f"y={y!r} is not an element")
        if not all(p.le(f(x), y) for x in X):
            raise PreconditionFailed("y is not an upper bound of f(X)")
        s = sX.id
        A, sup_A, eq1, sigma_holds, image_sup, eq3, phi_holds, cross = self._step(s, y)
        fX = sup(p, {f(x) for x in X})
        return ProofReport(
            s=s, y=y, A=A, X_subset_A=X <= A, sup_A=sup_A, eq1=eq1, sigma_holds=sigma_holds,
            image_sup_A=image_sup, eq3=eq3, phi_holds=phi_holds,
            conclusion=p.le(f(s), y), overall=fX.exists and fX.id == f(s), cross_checks=cross,
        )


def replay_proof(p: Poset, f: OperationTable, X: Iterable[int], y: int, op: str = "f",
                 *, quasi: bool = False) -> ProofReport:
    """Replay the unary argument for ``s = sup X`` and an upper bound ``y`` of ``f(X)``."""
    return ProofReplayer(p, f, op, quasi=quasi).replay(X, y)


def upper_bound_choices(p: Poset, f: OperationTable, X: Iterable[int]) -> list[int]:
    return list(bits(p.upper_bounds({f(x) for x in X})))


__all__ = [
    "PaperFormulas", "ProofReplayer", "ProofReport", "build_paper_formulas", "replay_proof",
    "upper_bound_choices",
]
