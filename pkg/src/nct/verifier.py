"""Verification suites over corpora and windows, with JSON/text reports.

Each suite is a pure function of its :class:`SuiteConfig`.  A suite returns a
:class:`VerificationReport` whose failures carry serializable witnesses.  Each
suite also has one fault switch that must flip it to fail; this guards against
checks that pass vacuously.
"""
from __future__ import annotations

import json
import random
import time
from dataclasses import asdict, dataclass, field
from itertools import product as iproduct
from typing import Callable, Dict, List, Optional, Tuple

from . import config
from .colimits import SpanDiagram, glue, k_diagram, pushout, verify_cocone_universal
from .errors import InputError
from .kernel import (FiniteStrictNCat, FunctorMap, boundary, cell, coproduct, decompose_cell_pullback,
                     fiber_product, fun_enum, is_gaunt, is_iso, opposite_r, poset, product,
                     sigma_iso, simplex, suspension, validate, walking_iso)
from .kernel.functors import iter_functors
from .presheaf import (DELTA, THETA, CellularPresheaf, Indexing, TabulatedPresheaf, Window,
                       build_s00, build_s0_window, delta_compatibility, eval_bijective, is_local,
                       nerve, recognize_gaunt_nerve, segal_theta_retract)
from .symmetry import (autos_of_globular, natural_endo_probe, retracts_of, upsilon_window,
                       verify_rI_group)
from .theta import (MultiIndex, ThetaMor, delta_n, grid_retract, realize, theta_enumerate_objects,
                    theta_hom, theta_identity)

SUITES = ("kernel-laws", "pushout-calculus", "fiber-decomposition", "s00-iso",
          "gaunt-locality", "nerve-recognition", "grids-retracts", "autos",
          "upsilon-closure", "delta-restriction")

# the one fault switch understood by each suite
FAULTS = {
    "kernel-laws": "break-comp",
    "pushout-calculus": "unglued",
    "fiber-decomposition": "drop-glue",
    "s00-iso": "drop-glue",
    "gaunt-locality": "include-E",
    "nerve-recognition": "segal-fault",
    "grids-retracts": "bad-section",
    "autos": "drop-flip",
    "upsilon-closure": "skip-retracts",
    "delta-restriction": "shift-grid",
}

# one-line statement of what each suite establishes
CLAIMS = {
    "kernel-laws": "constructor outputs are strict n-categories; corrupted tables are caught",
    "pushout-calculus": "C_{k-1} glued to itself along its boundary is the boundary of C_k; "
                        "the K-diagram pushout is the walking isomorphism",
    "fiber-decomposition": "fiber products of cells over cells are built from cells by "
                           "pushouts, and the type-(c) comparison is bijective on the window",
    "s00-iso": "type-(a) and type-(c) generators are evaluation-bijective on the window",
    "gaunt-locality": "nerves of gaunt n-categories are local for the windowed S0 generators",
    "nerve-recognition": "local presheaves are exactly the nerves of gaunt n-categories",
    "grids-retracts": "every Theta object is a retract of a grid",
    "autos": "the globular category has exactly 2^n automorphisms, the flips r_I",
    "upsilon-closure": "the cells generate the simplices under fiber products and retracts",
    "delta-restriction": "the Delta^n nerve is the restriction of the Theta_n nerve along delta_n",
}


@dataclass
class SuiteConfig:
    suite: str
    n: int = 2
    window: Optional[int] = None   # suite-specific size bound; None picks the default
    budget: Optional[int] = None   # functor-search node budget
    seed: int = 0
    fault: Optional[str] = None
    timing: bool = False

    def __post_init__(self):
        if self.suite not in SUITES:
            raise InputError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES)}")
        if self.n < 1:
            raise InputError("n must be >= 1")
        if self.window is not None and self.window < 1:
            raise InputError("window bound must be positive")
        if self.budget is not None and self.budget < 1:
            raise InputError("budget must be positive")
        if self.fault is not None and self.fault != FAULTS[self.suite]:
            raise InputError(f"suite {self.suite} understands only --fault {FAULTS[self.suite]}")


@dataclass
class VerificationReport:
    suite: str
    claim: str
    config: Dict
    window: Dict
    passed: bool
    checks: int = 0
    failures: List[Dict] = field(default_factory=list)
    details: Dict = field(default_factory=dict)
    timing: Optional[Dict] = None

    def to_dict(self) -> dict:
        d = asdict(self)
        if d["timing"] is None:
            del d["timing"]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        return cls(**d)


class _Run:
    """Accumulates checks for one suite."""

    def __init__(self):
        self.checks = 0
        self.failures: List[Dict] = []
        self.details: Dict = {}

    def check(self, ok: bool, name: str, witness=None) -> bool:
        self.checks += 1
        if not ok:
            self.failures.append({"check": name, "witness": witness})
        return ok


# ---------------------------------------------------------------------------
# corpus


@dataclass
class Corpus:
    n: int
    seed: int
    entries: List[Tuple[str, FiniteStrictNCat]]

    def names(self) -> List[str]:
        return [nm for nm, _ in self.entries]

    def objects(self) -> List[FiniteStrictNCat]:
        return [X for _, X in self.entries]

    def gaunt(self) -> List[Tuple[str, FiniteStrictNCat]]:
        return [(nm, X) for nm, X in self.entries if is_gaunt(X).gaunt]

    def __getitem__(self, name: str) -> FiniteStrictNCat:
        for nm, X in self.entries:
            if nm == name:
                return X
        raise KeyError(name)


def random_poset(rng: random.Random, size: int, n: int) -> FiniteStrictNCat:
    rel = [(a, b) for a in range(size) for b in range(a + 1, size) if rng.random() < 0.5]
    return poset(size, rel, n)


def corpus_generate(n: int, seed: int = 0, randoms: int = 3, theta_bound: int = 3) -> Corpus:
    """A deterministic corpus of small valid n-categories, deduplicated up to iso."""
    if n < 1:
        raise InputError("n must be >= 1")
    items: List[Tuple[str, FiniteStrictNCat]] = []
    items += [(f"C{k}", cell(k, n)) for k in range(n + 1)]
    items += [(f"dC{k}", boundary(k, n)) for k in range(1, n + 1)]
    items.append(("E", walking_iso(n)))
    for k in range(1, n):
        items.append(("s" * k + "E", sigma_iso(k, n)))
    items += [("D2", simplex(2, n)), ("D3", simplex(3, n))]
    items.append(("C1xC1", product(cell(1, n), cell(1, n))[0]))
    D2 = simplex(2, n)
    C1 = cell(1, n)
    lo = _on_objects(D2, C1, [0, 1, 1])
    hi = _on_objects(D2, C1, [0, 0, 1])
    items.append(("D2xC1D2", fiber_product(lo, hi)[0]))
    if n >= 2:
        items.append(("sD2", suspension(simplex(2, n - 1))))
    for o in theta_enumerate_objects(n, theta_bound):
        items.append((f"T{o}", realize(o, n)))
    rng = random.Random(seed)
    for r in range(randoms):
        items.append((f"P{seed}.{r}", random_poset(rng, rng.choice((3, 4)), n)))
    out: List[Tuple[str, FiniteStrictNCat]] = []
    for nm, X in items:
        if not validate(X, limit=1).valid:
            continue
        if any(is_iso(X, Y) for _, Y in out):
            continue
        out.append((nm, X))
    return Corpus(n, seed, out)


def _on_objects(A: FiniteStrictNCat, B: FiniteStrictNCat, objs: List[int]) -> FunctorMap:
    """The functor ``A -> B`` sending the i-th object of A to the ``objs[i]``-th
    object of B; unique when A is a poset."""
    fixed = {a: B.objects[o] for a, o in zip(A.objects, objs)}
    f = next(iter_functors(A, B, fixed=fixed), None)
    if f is None:
        raise InputError("no functor with the requested object map")
    return FunctorMap(A, B, f)


# ---------------------------------------------------------------------------
# suites


def _kernel_laws(cfg: SuiteConfig, run: _Run) -> Dict:
    fault = cfg.fault == "break-comp"
    total = 0
    for n in range(1, cfg.n + 1):
        corpus = corpus_generate(n, cfg.seed)
        derived = []
        for nm, X in corpus.entries:
            derived.append((nm, X))
            derived.append((f"σ{nm}", suspension(X)))
            for I in iproduct((0, 1), repeat=n):
                if any(I):
                    derived.append((f"r{''.join(map(str, I))}{nm}", opposite_r(X, I)))
        objs = corpus.objects()
        for a in range(min(4, len(objs))):
            for b in range(a, min(4, len(objs))):
                derived.append((f"{corpus.names()[a]}x{corpus.names()[b]}",
                                product(objs[a], objs[b])[0]))
        for nm, X in derived:
            if fault and nm == "C1xC1":
                X = _corrupt_comp(X)[0]
            rep = validate(X, limit=1)
            total += 1
            run.check(rep.valid, f"validate n={n} {nm}",
                      None if rep.valid else rep.violations[0].as_dict())
        # corrupted variants must be rejected, naming the corrupted pair
        for nm, X in corpus.entries:
            bad = _corrupt_comp(X)
            if bad is None:
                continue
            Y, (lvl, x, y) = bad
            rep = validate(Y)
            hit = any(v.levels[:1] == (lvl,) and x in v.witness and y in v.witness
                      for v in rep.violations)
            run.check(not rep.valid and hit, f"corrupt comp n={n} {nm}",
                      {"level": lvl, "pair": [x, y]})
            Z = _corrupt_src(X)
            if Z is not None:
                Zc, (lvl, x) = Z
                rep = validate(Zc)
                run.check(not rep.valid and any(x in v.witness for v in rep.violations),
                          f"corrupt src n={n} {nm}", {"level": lvl, "cell": x})
    return {"validated": total}


def _corrupt_comp(X: FiniteStrictNCat):
    """Redirect one non-unit composite to a cell with a different boundary."""
    for k in range(X.n):
        for (x, y), z in sorted(X.comp[k].items()):
            if x == z or y == z:
                continue
            for w in range(len(X.cells)):
                if X.src[k][w] != X.src[k][z] or X.tgt[k][w] != X.tgt[k][z]:
                    comp = [dict(c) for c in X.comp]
                    comp[k][(x, y)] = w
                    Y = FiniteStrictNCat(X.n, X.cells, X.src, X.tgt, comp)
                    return Y, (k + 1, X.cells[x], X.cells[y])
    return None


def _corrupt_src(X: FiniteStrictNCat):
    """Point the level-1 source of a 1-cell at a non-object."""
    for x in range(len(X.cells)):
        if X.src[0][x] != x:
            for w in range(len(X.cells)):
                if X.src[0][w] != w and w != x:
                    src = [list(s) for s in X.src]
                    src[0][x] = w
                    Y = FiniteStrictNCat(X.n, X.cells, src, X.tgt, X.comp)
                    return Y, (1, X.cells[x])
    return None


def _pushout_calculus(cfg: SuiteConfig, run: _Run) -> Dict:
    n = cfg.n
    unglued = cfg.fault == "unglued"
    tests = [cell(k, n) for k in range(n + 1)]
    out = {}
    for k in range(1, n + 1):
        C, B = cell(k - 1, n), boundary(k - 1, n)
        inc = FunctorMap.from_dict(B, C, {c: c for c in B.cells})
        d = SpanDiagram(inc, inc)
        if unglued:
            P, l, r = coproduct(C, C)
        else:
            po = pushout(d)
            P, l, r = po.obj, po.left, po.right
        iso = is_iso(P, boundary(k, n))
        run.check(iso, f"C{k - 1} ∪ C{k - 1} ≅ ∂C{k}", {"cells": len(P.cells),
                                                       "expected": len(boundary(k, n).cells)})
        cc = verify_cocone_universal(P, l, r, d, tests)
        run.check(cc.ok, f"universal C{k - 1} ∪ C{k - 1}", cc.witness)
        out[f"boundary{k}"] = len(P.cells)
    d = k_diagram(1)
    if unglued:
        P, l, r = coproduct(d.left.target, d.right.target)
    else:
        po = pushout(d)
        P, l, r = po.obj, po.left, po.right
    run.check(is_iso(P, walking_iso(1)), "K pushout ≅ E", {"cells": len(P.cells)})
    cc = verify_cocone_universal(P, l, r, d, [cell(k, 1) for k in range(2)] + [walking_iso(1)])
    run.check(cc.ok, "universal K pushout", cc.witness)
    out["K"] = len(P.cells)
    return out


def _theta_window(n: int, bound: Optional[int]) -> Window:
    return Window.build(Indexing(THETA, n), bound)


def _fiber_decomposition(cfg: SuiteConfig, run: _Run) -> Dict:
    fault = "drop-glue" if cfg.fault == "drop-glue" else None
    per_n = {}
    for n in range(1, cfg.n + 1):
        win = _theta_window(n, cfg.window)
        s00 = build_s00(n, win.indexing, fault=fault)
        cnt = 0
        for g in s00.by_tag("c"):
            p = g.params
            T = g.map.target.category
            src_obj = _glued_source(g.map.source)
            run.check(src_obj is not None and is_iso(src_obj, T), f"pushout ≅ fiber product {g.describe()}",
                      {"params": p})
            ok, wit = eval_bijective(g.map, win)
            run.check(ok, f"bijective on window {g.describe()}", wit)
            cnt += 1
        cases: Dict[str, int] = {}
        for a, b, c in iproduct(range(n + 1), repeat=3):
            Ca, Cb, Cc = cell(a, n), cell(b, n), cell(c, n)
            for f in fun_enum(Ca, Cb):
                for g in fun_enum(Cc, Cb):
                    if f.assignment > g.assignment and a == c:
                        continue
                    res = decompose_cell_pullback(f, g)
                    cases[res.case] = cases.get(res.case, 0) + 1
                    run.check(res.verified, f"cell pullback C{a}->C{b}<-C{c}",
                              {"phi": list(f.assignment), "psi": list(g.assignment), "case": res.case})
        per_n[str(n)] = {"window": len(win), "type_c": cnt, "cases": dict(sorted(cases.items()))}
    return per_n


def _glued_source(U: CellularPresheaf) -> Optional[FiniteStrictNCat]:
    """The pushout in n-categories of a span presheaf (three atoms, two edges)."""
    if len(U.atoms) != 3 or len(U.edges) != 2:
        return None
    e1, e2 = U.edges
    return glue(e1.map, e2.map).obj


def _s00_iso(cfg: SuiteConfig, run: _Run) -> Dict:
    n = cfg.n
    win = _theta_window(n, cfg.window)
    gens = build_s00(n, win.indexing, fault="drop-glue" if cfg.fault else None)
    bij = {"a": 0, "b": 0, "c": 0, "d": 0}
    for g in gens:
        ok, wit = eval_bijective(g.map, win)
        if g.tag in ("a", "c"):
            run.check(ok, f"bijective {g.describe()}", wit)
        bij[g.tag] += int(ok)
    return {"generators": len(gens), "bijective_by_tag": bij}


def _gaunt_locality(cfg: SuiteConfig, run: _Run) -> Dict:
    n = cfg.n
    corpus = corpus_generate(n, cfg.seed)
    ix = Indexing(THETA, n)
    win = _theta_window(n, cfg.window)
    gens = build_s0_window(n, ix)
    for nm, X in corpus.entries:
        rep = is_gaunt(X)
        run.check(rep.agrees, f"gaunt criteria agree {nm}", {"locality": rep.gaunt})
    members = corpus.gaunt()
    if cfg.fault == "include-E":
        members.append(("E", corpus["E"]))
    for nm, X in members:
        N = nerve(X, ix)
        for g in gens:
            r = is_local(N, g.map, win, mode="nerve")
            if not run.check(r.local, f"{nm} local for {g.describe()}",
                             {"object": nm, "generator": g.describe(), "params": _jsonable(g.params),
                              "hom_target": r.hom_target, "hom_source": r.hom_source,
                              "detail": r.witness}):
                break
    nonbij = {}
    for tag in ("b", "d"):
        found = None
        for g in gens.by_tag(tag):
            ok, wit = eval_bijective(g.map, win)
            if not ok:
                found = {"generator": g.describe(), "witness": wit}
                break
        run.check(found is not None, f"some type-({tag}) generator is not evaluation-bijective")
        nonbij[tag] = found
    return {"corpus": [nm for nm, _ in members], "generators": len(gens),
            "by_tag": {t: len(gens.by_tag(t)) for t in "abcd"}, "non_bijective": nonbij}


def _jsonable(d):
    return {k: (v if isinstance(v, (int, str, bool)) or v is None else str(v)) for k, v in d.items()}


def _nerve_recognition(cfg: SuiteConfig, run: _Run) -> Dict:
    n = cfg.n
    corpus = corpus_generate(n, cfg.seed)
    members = corpus.gaunt()
    out = {}
    for kind in (THETA, DELTA):
        ix = Indexing(kind, n)
        win = Window.build(ix, cfg.window)
        accepted = 0
        for nm, X in members:
            P = nerve(X, ix)
            if cfg.fault == "segal-fault" and nm == "C1":
                P = _segal_fault(P, ix)
            r = recognize_gaunt_nerve(P, win)
            ok = r.accepted and is_iso(r.category, X)
            run.check(ok, f"{kind} accepts {nm}", {"failing": r.failing, "witness": r.witness})
            accepted += int(ok)
        rejects = {}
        for nm, P in (("E", nerve(corpus["E"], ix)),
                      ("segal-fault", _segal_fault(nerve(cell(1, n), ix), ix))):
            r = recognize_gaunt_nerve(P, win)
            want = "comp" if nm == "E" else "segal"
            ok = not r.accepted and (r.failing or "").startswith(want)
            run.check(ok, f"{kind} rejects {nm}", {"failing": r.failing})
            rejects[nm] = r.failing
        out[kind] = {"window": len(win), "accepted": accepted, "rejected": rejects}
    out["corpus"] = [nm for nm, _ in members]
    return out


def _segal_fault(P: CellularPresheaf, ix: Indexing):
    """Duplicate one element over the composition shape of level 1."""
    o = ix.comp_shape(1)[0]
    return TabulatedPresheaf(P, o, P.elements(o)[0])


def _grids_retracts(cfg: SuiteConfig, run: _Run) -> Dict:
    bad = cfg.fault == "bad-section"
    sizes = {}
    for n in range(1, cfg.n + 1):
        bound = cfg.window if cfg.window is not None else (6 if n <= 2 else 5)
        objs = theta_enumerate_objects(n, bound)
        for o in objs:
            gr = grid_retract(o)
            if bad and o.m == 2:
                gr.section = _other_section(gr.section)
            run.check(gr.verify(), f"grid retract {o}", {"object": str(o), "grid": str(gr.grid)})
            if o.m >= 2:
                sr = segal_theta_retract(o)
                run.check(sr.ok, f"spine retract {o}", {"object": str(o)})
        sizes[str(n)] = len(objs)
    n = cfg.n
    D2 = simplex(2, n)
    rs = retracts_of(product(cell(1, n), cell(1, n))[0])
    run.check(any(is_iso(c.splitting, D2) for c in rs), "Δ² is a retract of C1×C1",
              {"retract_sizes": sorted(len(c.splitting.cells) for c in rs)})
    r0 = retracts_of(cell(0, n))
    run.check(len(r0) == 1 and is_iso(r0[0].splitting, cell(0, n)), "retracts of C0")
    for k in range(1, n + 1):
        rk = retracts_of(cell(k, n))
        run.check(any(is_iso(c.splitting, cell(k - 1, n)) for c in rk), f"C{k - 1} retract of C{k}")
        run.check(all(c.verify() for c in rk), f"certificates for C{k}")
    return {"theta_objects": sizes, "retracts_C1xC1": len(rs)}


def _other_section(s: ThetaMor) -> ThetaMor:
    for u in theta_hom(s.source, s.target):
        if u != s:
            return u
    return s


def _autos(cfg: SuiteConfig, run: _Run) -> Dict:
    counts = {}
    for n in range(1, cfg.n + 1):
        autos = autos_of_globular(n)
        if cfg.fault == "drop-flip" and n == cfg.n:
            autos[-1].flip = None
        flips = [A.flip for A in autos]
        run.check(len(autos) == 2 ** n, f"2^{n} automorphisms", {"found": len(autos)})
        run.check(all(f is not None for f in flips) and len(set(flips)) == len(flips),
                  f"automorphisms are the flips, n={n}",
                  {"unmatched": sum(f is None for f in flips)})
        run.check(all(A.objects == tuple(range(n + 1)) for A in autos), f"cells fixed, n={n}")
        counts[str(n)] = len(autos)
    corpus = corpus_generate(cfg.n, cfg.seed)
    rep = verify_rI_group(cfg.n, corpus.objects())
    run.check(rep.ok, "r_I group law", rep.failures[:3])
    cells = [cell(k, cfg.n) for k in range(cfg.n + 1)]
    fams = natural_endo_probe(cells)
    run.check(len(fams) == 1, "identity is the only natural endo-family on cells",
              {"families": len(fams)})
    n = cfg.n
    if n >= 2:
        X = realize(delta_n(MultiIndex((1,) * (n - 2) + (2, 1))), n)
        I10 = (0,) * (n - 2) + (1, 0)
        I01 = (0,) * (n - 2) + (0, 1)
        run.check(opposite_r(X, I10) != opposite_r(X, I01), "r_(1,0) differs from r_(0,1)")
    return {"autos": counts, "group_checks": rep.checks}


UPSILON_FIXED_POINT_BOUND = 9
UPSILON_CHAIN_BOUND = 15


def _upsilon_closure(cfg: SuiteConfig, run: _Run) -> Dict:
    skip = cfg.fault == "skip-retracts"
    fp_bound = cfg.window if cfg.window is not None else UPSILON_FIXED_POINT_BOUND
    F = _without_retracts(1, fp_bound) if skip else upsilon_window(1, fp_bound, rounds=None)
    run.check(F.fixed_point, "closure reaches a fixed point",
              {"bound": fp_bound, "per_round": F.per_round, "skipped": F.skipped})
    for k in range(2):
        run.check(F.contains(cell(k, 1)), f"C{k} in window")
    for m in range(2, 5):
        D = simplex(m, 1)
        if len(D.cells) <= fp_bound:
            run.check(F.contains(D), f"Δ^{m} in window", {"bound": fp_bound, "objects": len(F.objects)})
    run.check(all(is_gaunt(X).gaunt for X in F.objects), "window members are gaunt")
    steps = _simplex_derivation(UPSILON_CHAIN_BOUND, use_retracts=not skip)
    for st in steps:
        run.check(st["ok"], f"derive {st['name']}", st)
    return {"fixed_point": {"bound": fp_bound, "rounds": F.rounds, "objects": len(F.objects),
                            "per_round": F.per_round, "skipped": F.skipped},
            "derivation": {"bound": UPSILON_CHAIN_BOUND,
                           "steps": [{k: v for k, v in st.items() if k != "ok"} for st in steps]}}


def _without_retracts(n: int, bound: int):
    from .symmetry import UpsilonWindow, _Closure

    class NoRetracts(_Closure):
        def _retracts(self, X):
            return []

    cl = NoRetracts(n, bound, 0)
    new, per = list(cl.seen.items), []
    while new:
        new = cl.step(new, cl.seen)
        per.append(len(new))
    return UpsilonWindow(n, bound, list(cl.seen.items), len(per), True, per)


def _simplex_derivation(bound: int, use_retracts: bool = True) -> List[Dict]:
    """Derive ``Δ^m`` (m <= 4) from the cells by window operations only:
    ``C1 ×_C0 C1``, the retract ``Δ^2`` of it, then ``[m+1] = [m] ×_[1] [2]``.
    Each step records its operands, which must have been derived earlier."""
    C0, C1 = cell(0, 1), cell(1, 1)
    have = {"C0": C0, "C1": C1}
    steps: List[Dict] = []

    def record(name, op, operands, X, expect):
        ok = all(o in have for o in operands) and X is not None and \
            len(X.cells) <= bound and is_iso(X, expect)
        steps.append({"name": name, "op": op, "operands": list(operands),
                      "cells": None if X is None else len(X.cells), "ok": bool(ok)})
        if ok:
            have[name] = X

    sq = fiber_product(FunctorMap.constant(C1, C0, "*"), FunctorMap.constant(C1, C0, "*"))[0]
    record("C1xC1", "fiber product over C0", ("C1", "C1"), sq, product(C1, C1)[0])
    D2 = simplex(2, 1)
    got = None
    if use_retracts and "C1xC1" in have:
        got = next((c.splitting for c in retracts_of(have["C1xC1"]) if c.verify()
                    and is_iso(c.splitting, D2)), None)
    record("D2", "retract", ("C1xC1",), got, D2)
    for m in range(2, 4):
        prev, name = f"D{m}", f"D{m + 1}"
        X = None
        if prev in have and "D2" in have:
            X = _simplex_step(have[prev], have["D2"], m)
        record(name, "fiber product over C1", (prev, "D2"), X, simplex(m + 1, 1))
    return steps


def _simplex_step(X: FiniteStrictNCat, D2: FiniteStrictNCat, m: int) -> FiniteStrictNCat:
    """``[m] ×_[1] [2]``: [m] -> [1] hits 1 only at its last vertex, [2] -> [1]
    hits 1 at its last two."""
    C1 = cell(1, 1)
    f = _on_objects(X, C1, [0] * m + [1])
    g = _on_objects(D2, C1, [0, 1, 1])
    return fiber_product(f, g)[0]


def _delta_restriction(cfg: SuiteConfig, run: _Run) -> Dict:
    n = cfg.n
    corpus = corpus_generate(n, cfg.seed)
    win = Window.build(Indexing(DELTA, n), cfg.window)
    to_theta = _shifted if cfg.fault == "shift-grid" else None
    for nm, X in corpus.entries:
        w = delta_compatibility(X, n, win, to_theta=to_theta)
        run.check(w is None, f"δ-restriction {nm}", w)
    return {"objects": len(corpus.entries), "window": len(win)}


def _shifted(m: MultiIndex):
    return delta_n(MultiIndex(tuple(reversed(m.ms))))


_RUNNERS: Dict[str, Callable[[SuiteConfig, _Run], Dict]] = {
    "kernel-laws": _kernel_laws,
    "pushout-calculus": _pushout_calculus,
    "fiber-decomposition": _fiber_decomposition,
    "s00-iso": _s00_iso,
    "gaunt-locality": _gaunt_locality,
    "nerve-recognition": _nerve_recognition,
    "grids-retracts": _grids_retracts,
    "autos": _autos,
    "upsilon-closure": _upsilon_closure,
    "delta-restriction": _delta_restriction,
}


def _window_of(cfg: SuiteConfig) -> Dict:
    s, n = cfg.suite, cfg.n
    if s in ("s00-iso", "gaunt-locality"):
        return _theta_window(n, cfg.window).describe()
    if s == "fiber-decomposition":
        return {"indexing": THETA, "n": list(range(1, n + 1)),
                "bound": [cfg.window or (6 if k <= 2 else 5) for k in range(1, n + 1)]}
    if s == "nerve-recognition":
        return {"theta": Window.build(Indexing(THETA, n), cfg.window).describe(),
                "delta": Window.build(Indexing(DELTA, n), cfg.window).describe()}
    if s == "delta-restriction":
        return Window.build(Indexing(DELTA, n), cfg.window).describe()
    if s == "grids-retracts":
        return {"theta_size_bound": [cfg.window or (6 if k <= 2 else 5) for k in range(1, n + 1)]}
    if s == "upsilon-closure":
        return {"n": 1, "fixed_point_bound": cfg.window or UPSILON_FIXED_POINT_BOUND,
                "derivation_bound": UPSILON_CHAIN_BOUND}
    if s == "autos":
        return {"globular": list(range(1, n + 1)), "corpus_seed": cfg.seed}
    if s == "kernel-laws":
        return {"corpus_n": list(range(1, n + 1)), "corpus_seed": cfg.seed}
    return {"tests": [f"C{k}" for k in range(n + 1)]}


def run_suite(cfg: SuiteConfig) -> VerificationReport:
    start = time.perf_counter()
    run = _Run()
    changes = {"max_nodes": cfg.budget} if cfg.budget is not None else {}
    with config.budget(**changes):
        details = _RUNNERS[cfg.suite](cfg, run)
        window = _window_of(cfg)
    rep = VerificationReport(
        suite=cfg.suite, claim=CLAIMS[cfg.suite],
        config={"n": cfg.n, "window": cfg.window, "budget": cfg.budget, "seed": cfg.seed,
                "fault": cfg.fault},
        window=window, passed=not run.failures, checks=run.checks,
        failures=run.failures, details=details)
    if cfg.timing:
        rep.timing = {"seconds": round(time.perf_counter() - start, 3)}
    return rep


def report_render(report: VerificationReport, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if fmt != "text":
        raise InputError(f"unknown format {fmt!r}")
    lines = [f"suite:  {report.suite}",
             f"claim:  {report.claim}",
             f"result: {'PASS' if report.passed else 'FAIL'} ({report.checks} checks, "
             f"{len(report.failures)} failed)",
             f"window: {json.dumps(report.window, sort_keys=True, ensure_ascii=False)}"]
    for f in report.failures:
        lines.append(f"  FAIL {f['check']}: {json.dumps(f['witness'], sort_keys=True, ensure_ascii=False)}")
    if report.timing is not None:
        lines.append(f"time:   {report.timing['seconds']:.3f}s")
    return "\n".join(lines) + "\n"
