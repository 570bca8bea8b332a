"""Property campaigns over seeded random instances.

Each trial derives its own seed from the master seed, the property name and
the trial index, so trials are independent and reports reproduce exactly.
"""
from __future__ import annotations

import hashlib
import random
import time
from dataclasses import dataclass, field

from .complex import givant_check
from .errors import ConfigOutOfRange, UltraposetError
from .fol.corpus import formula_corpus
from .fol.syntax import free_names
from .gen import (
    gen_additive_op, gen_downset_lattice, gen_monotone_op, gen_poset, gen_quasi_op, random_table,
)
from .order import check_lemma_equivalence
from .product import Family, los_check, make_filter, theorem1_check
from .structure import Structure

PROPERTIES = ("theorem1", "lemma1", "quasi", "los", "givant")


@dataclass(frozen=True)
class CampaignConfig:
    master_seed: int
    trials: int
    max_carrier: int = 8
    max_index: int = 4
    max_arity: int = 2
    properties: tuple[str, ...] = ("theorem1",)

    def validate(self) -> None:
        if self.trials < 0:
            raise ConfigOutOfRange("trials must be >= 0")
        if not 1 <= self.max_carrier <= 8:
            raise ConfigOutOfRange("max_carrier must be in 1..8")
        if not 1 <= self.max_index <= 4:
            raise ConfigOutOfRange("max_index must be in 1..4")
        if not 1 <= self.max_arity <= 2:
            raise ConfigOutOfRange("max_arity must be in 1..2")
        unknown = set(self.properties) - set(PROPERTIES)
        if unknown:
            raise ConfigOutOfRange(f"unknown properties {sorted(unknown)}")
        if not 0 <= self.master_seed < 1 << 64:
            raise ConfigOutOfRange("master seed must be a 64-bit unsigned integer")


@dataclass
class PropertyResult:
    trials: int = 0
    passes: int = 0
    failures: list[dict] = field(default_factory=list)
    digest: str = ""


@dataclass
class CampaignReport:
    config: CampaignConfig
    per_property: dict[str, PropertyResult]
    wall_time: float

    @property
    def ok(self) -> bool:
        return all(not r.failures for r in self.per_property.values())

    def lines(self) -> list[str]:
        """Machine-readable report lines; independent of wall time."""
        c = self.config
        out = [f"#? campaign seed={c.master_seed} trials={c.trials} max_carrier={c.max_carrier} "
               f"max_index={c.max_index} max_arity={c.max_arity} props={','.join(c.properties)}"]
        for name, r in self.per_property.items():
            out.append(f"#? property={name} trials={r.trials} passes={r.passes} "
                       f"failures={len(r.failures)} digest={r.digest}")
            for f in r.failures:
                out.append(f"#? failure property={name} trial={f['trial']} seed={f['seed']} detail={f['detail']}")
        out.append(f"#? verdict={'pass' if self.ok else 'fail'}")
        return out


def trial_seed(master: int, prop: str, index: int) -> int:
    h = hashlib.blake2b(f"{master}/{prop}/{index}".encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big")


def _lattice(rng: random.Random, max_carrier: int):
    while True:
        L = gen_downset_lattice(rng.getrandbits(64), rng.randint(1, 4))
        if L.size <= max_carrier:
            return L


def _ordered_family(rng, cfg, make_op):
    m = rng.randint(1, cfg.max_index)
    arity = rng.randint(1, cfg.max_arity)
    members = []
    for _ in range(m):
        L = _lattice(rng, cfg.max_carrier)
        members.append(Structure.from_poset(L, {"f": make_op(rng.getrandbits(64), L, arity)}))
    fam = Family.of(members)
    fs = make_filter(fam.index, [rng.randrange(m)])
    desc = f"sizes={','.join(str(s) for s in fam.sizes)} arity={arity} J={min(fs.generator)}"
    return fam, fs, desc


def _trial_theorem1(rng, cfg):
    fam, fs, desc = _ordered_family(rng, cfg, gen_additive_op)
    rep = theorem1_check(fam, fs)
    return rep.passed, desc


def _trial_quasi(rng, cfg):
    fam, fs, desc = _ordered_family(rng, cfg, gen_quasi_op)
    rep = theorem1_check(fam, fs, mode="quasi")
    return rep.passed, desc


def _trial_lemma1(rng, cfg):
    n = rng.randint(1, min(cfg.max_carrier, 8))
    p = gen_poset(rng.getrandbits(64), n)
    if rng.random() < 0.75:
        f = gen_monotone_op(rng.getrandbits(64), p, 2)
    else:
        f = random_table(rng.getrandbits(64), n, 2)
    rep = check_lemma_equivalence(p, f)
    return rep.agree, f"n={n} joint={rep.joint.holds} instances={rep.all_instances}"


_CORPUS = None


def _trial_los(rng, cfg):
    global _CORPUS
    if _CORPUS is None:
        _CORPUS = formula_corpus()
    m = rng.randint(1, cfg.max_index)
    members = []
    for _ in range(m):
        p = gen_poset(rng.getrandbits(64), rng.randint(1, min(4, cfg.max_carrier)))
        if rng.random() < 0.5:
            f = gen_monotone_op(rng.getrandbits(64), p, 1)
        else:
            f = random_table(rng.getrandbits(64), p.size, 1)
        members.append(Structure.from_poset(p, {"f": f}))
    fam = Family.of(members)
    if m > 1 and rng.random() < 0.5:
        J = [i for i in range(m) if rng.random() < 0.5] or [0, m - 1]
        J = sorted(set(J))
        quotient = 1
        for j in J:
            quotient *= fam.sizes[j]
        if quotient > 16:
            J = [J[0]]
    else:
        J = [rng.randrange(m)]
    fs = make_filter(fam.index, J)
    name, phi = rng.choice(_CORPUS)
    names = sorted(free_names(phi))
    assignments = [{v: rng.randrange(mem.size) for v in names} for mem in members]
    rep = los_check(fam, fs, phi, assignments)
    ok = rep.agree or not fs.is_ultra
    return ok, f"formula={name} J={','.join(map(str, J))} agree={rep.agree}"


def _trial_givant(rng, cfg):
    m = rng.randint(1, min(3, cfg.max_index))
    members = []
    for _ in range(m):
        n = rng.randint(1, 3)
        density = rng.choice((0.2, 0.5, 0.8))
        tuples = {(a, b) for a in range(n) for b in range(n) if rng.random() < density}
        members.append(Structure.from_tuples([f"e{i}" for i in range(n)], {"R": (2, tuples)}))
    fam = Family.of(members)
    fs = make_filter(fam.index, [rng.randrange(m)])
    rep = givant_check(fam, fs)
    return rep.is_iso, f"sizes={','.join(str(s) for s in fam.sizes)} J={min(fs.generator)}"


_TRIALS = {
    "theorem1": _trial_theorem1,
    "lemma1": _trial_lemma1,
    "quasi": _trial_quasi,
    "los": _trial_los,
    "givant": _trial_givant,
}


def run_campaign(cfg: CampaignConfig) -> CampaignReport:
    cfg.validate()
    start = time.perf_counter()
    results = {}
    for prop in cfg.properties:
        r = PropertyResult()
        h = hashlib.sha256()
        for i in range(cfg.trials):
            seed = trial_seed(cfg.master_seed, prop, i)
            try:
                ok, desc = _TRIALS[prop](random.Random(seed), cfg)
            except UltraposetError as exc:
                ok, desc = False, f"{type(exc).__name__}: {exc}"
            r.trials += 1
            h.update(f"{i}:{ok}:{desc}\n".encode())
            if ok:
                r.passes += 1
            else:
                r.failures.append({"trial": i, "seed": seed, "detail": desc})
        r.digest = h.hexdigest()[:16]
        results[prop] = r
    return CampaignReport(cfg, results, time.perf_counter() - start)
