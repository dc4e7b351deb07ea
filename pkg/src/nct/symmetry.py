"""Automorphisms of the globular category, the flips r_I, retracts, and
bounded closure windows of cells under fiber products and retracts."""
from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from itertools import permutations, product as iproduct
from typing import Dict, List, Optional, Sequence, Tuple

from . import config
from .errors import BudgetExceeded, InputError
from .kernel.cells import collapse, face
from .kernel.constructions import cell, fiber_product, induced_sub, opposite_r
from .kernel.functors import (FunctorMap, find_iso, functor_assignments, invariant, is_iso,
                              iter_functors)
from .kernel.gaunt import is_gaunt
from .kernel.ncat import FiniteStrictNCat

Assignment = Tuple[int, ...]


def _compose(g: Assignment, f: Assignment) -> Assignment:
    return tuple(g[v] for v in f)


# ---------------------------------------------------------------------------
# the globular category


@dataclass
class GlobularWindow:
    """Cells ``C_0..C_n`` with every functor between them."""

    n: int
    objects: List[FiniteStrictNCat]
    homs: Dict[Tuple[int, int], Tuple[Assignment, ...]]
    generators: Dict[str, Tuple[int, int, Assignment]]

    @classmethod
    def build(cls, n: int) -> "GlobularWindow":
        objs = [cell(k, n) for k in range(n + 1)]
        homs = {(j, k): functor_assignments(objs[j], objs[k])
                for j in range(n + 1) for k in range(n + 1)}
        gens = {}
        for k in range(n):
            gens[f"s{k}"] = (k, k + 1, face(k, k + 1, "s", n).assignment)
            gens[f"t{k}"] = (k, k + 1, face(k, k + 1, "t", n).assignment)
            gens[f"d{k}"] = (k + 1, k, collapse(k + 1, k, n).assignment)
        return cls(n, objs, homs, gens)

    def closed_under_composition(self) -> bool:
        N = self.n + 1
        for a, b, c in iproduct(range(N), repeat=3):
            hs = set(self.homs[(a, c)])
            for f in self.homs[(a, b)]:
                for g in self.homs[(b, c)]:
                    if _compose(g, f) not in hs:
                        return False
        return True


@dataclass
class AutoEquivalence:
    objects: Tuple[int, ...]
    generators: Dict[str, Assignment]
    action: Dict[Tuple[int, int], Dict[Assignment, Assignment]] = field(repr=False)
    flip: Optional[Tuple[int, ...]] = None

    def __call__(self, j: int, k: int, f: Assignment) -> Assignment:
        return self.action[(j, k)][f]


def _extend(G: GlobularWindow, perm, images: Dict[str, Assignment], upto: int):
    """Extend generator images to every morphism between objects <= upto by
    post-composition; None on an inconsistency."""
    gens = [(name, a, b, f) for name, (a, b, f) in G.generators.items()
            if name in images and a <= upto and b <= upto]
    action: Dict[Tuple[int, int], Dict[Assignment, Assignment]] = {}
    queue = deque()
    for j in range(upto + 1):
        ident = tuple(range(len(G.objects[j].cells)))
        pid = tuple(range(len(G.objects[perm[j]].cells)))
        action.setdefault((j, j), {})[ident] = pid
        queue.append((j, j, ident))
    while queue:
        j, k, m = queue.popleft()
        img = action[(j, k)][m]
        for name, a, b, g in gens:
            if a != k:
                continue
            new, new_img = _compose(g, m), _compose(images[name], img)
            slot = action.setdefault((j, b), {})
            if new in slot:
                if slot[new] != new_img:
                    return None
                continue
            slot[new] = new_img
            queue.append((j, b, new))
    return action


def _bijective(G: GlobularWindow, perm, action, upto: int) -> bool:
    for j in range(upto + 1):
        for k in range(upto + 1):
            dom = G.homs[(j, k)]
            act = action.get((j, k), {})
            if len(act) != len(dom):
                return False
            if sorted(act.values()) != sorted(G.homs[(perm[j], perm[k])]):
                return False
    return True


def autos_of_globular(n: int) -> List[AutoEquivalence]:
    """All automorphisms of the globular window, each matched to an ``r_I``."""
    G = GlobularWindow.build(n)
    N = n + 1
    sizes = {(j, k): len(G.homs[(j, k)]) for j in range(N) for k in range(N)}
    out = []
    for perm in permutations(range(N)):
        if any(sizes[(j, k)] != sizes[(perm[j], perm[k])] for j in range(N) for k in range(N)):
            continue
        found: List[Dict[str, Assignment]] = [{}]
        for k in range(n):
            nxt = []
            cands = {nm: G.homs[(perm[a], perm[b])]
                     for nm, (a, b, _) in G.generators.items() if nm[1:] == str(k)}
            names = sorted(cands)
            for partial in found:
                for pick in iproduct(*[cands[nm] for nm in names]):
                    images = dict(partial)
                    images.update(zip(names, pick))
                    act = _extend(G, perm, images, k + 1)
                    if act is not None and _bijective(G, perm, act, k + 1):
                        nxt.append(images)
            found = nxt
        for images in found:
            act = _extend(G, perm, images, n)
            out.append(AutoEquivalence(perm, images, act))
    flips = {I: flip_action(G, I) for I in iproduct((0, 1), repeat=n)}
    for A in out:
        for I, imgs in flips.items():
            if A.objects == tuple(range(N)) and imgs == A.generators:
                A.flip = I
                break
    return out


def flip_action(G: GlobularWindow, I: Sequence[int]) -> Dict[str, Assignment]:
    """``r_I`` on the generators, transported along the unique isos ``r_I C_k ≅ C_k``."""
    isos = []
    for C in G.objects:
        iso = find_iso(opposite_r(C, I), C)
        if iso is None:
            raise InputError("flipped cell is not a cell")
        isos.append(iso.assignment)
    inv = []
    for a in isos:
        r = [0] * len(a)
        for x, y in enumerate(a):
            r[y] = x
        inv.append(tuple(r))
    out = {}
    for name, (j, k, f) in G.generators.items():
        out[name] = _compose(isos[k], _compose(f, inv[j]))
    return out


def r_I(X: FiniteStrictNCat, I: Sequence[int]) -> FiniteStrictNCat:
    return opposite_r(X, I)


@dataclass
class GroupReport:
    ok: bool
    checks: int
    failures: List[dict] = field(default_factory=list)


def verify_rI_group(n: int, corpus: Sequence[FiniteStrictNCat]) -> GroupReport:
    """``r_I r_J = r_{I⊕J}`` on the nose, and each ``r_I`` preserves gauntness."""
    flips = list(iproduct((0, 1), repeat=n))
    rep = GroupReport(True, 0)
    for idx, X in enumerate(corpus):
        X = X.lift(n) if X.n < n else X
        g = is_gaunt(X).gaunt
        for I in flips:
            XI = r_I(X, I)
            rep.checks += 1
            if is_gaunt(XI).gaunt != g:
                rep.ok = False
                rep.failures.append({"object": idx, "I": list(I), "law": "gaunt"})
            for J in flips:
                IJ = tuple(a ^ b for a, b in zip(I, J))
                rep.checks += 1
                if r_I(XI, J) != r_I(X, IJ):
                    rep.ok = False
                    rep.failures.append({"object": idx, "I": list(I), "J": list(J),
                                         "law": "composition"})
    return rep


# ---------------------------------------------------------------------------
# retracts


@dataclass
class RetractCertificate:
    ambient: FiniteStrictNCat
    idempotent: FunctorMap
    splitting: FiniteStrictNCat
    section: FunctorMap      # splitting -> ambient
    retraction: FunctorMap   # ambient -> splitting

    def verify(self) -> bool:
        ident = tuple(range(len(self.splitting.cells)))
        return (self.section.then(self.retraction).assignment == ident and
                self.retraction.then(self.section).assignment == self.idempotent.assignment)


def split(X: FiniteStrictNCat, e: Assignment) -> RetractCertificate:
    fixed = [x for x in range(len(X.cells)) if e[x] == x]
    sub, incl = induced_sub(X, fixed)
    pos = {x: i for i, x in enumerate(fixed)}
    ret = FunctorMap(X, sub, [pos[e[x]] for x in range(len(X.cells))])
    return RetractCertificate(X, FunctorMap(X, X, e), sub, incl, ret)


def retracts_by_idempotents(X: FiniteStrictNCat) -> List[RetractCertificate]:
    """Split every idempotent endofunctor; one certificate per iso class."""
    out: List[RetractCertificate] = []
    for e in functor_assignments(X, X):
        if _compose(e, e) != e:
            continue
        cert = split(X, e)
        if not any(is_iso(cert.splitting, c.splitting) for c in out):
            out.append(cert)
    return out


def sub_categories(X: FiniteStrictNCat):
    """Cell subsets closed under sources, targets and composition."""
    size = len(X.cells)
    dims = X.dims
    bounds = [{X.src[k][z] for k in range(X.n)} | {X.tgt[k][z] for k in range(X.n)}
              for z in range(size)]
    for z in range(size):
        bounds[z].discard(z)
    factors: Dict[int, List[Tuple[int, int]]] = {}
    for k in range(X.n):
        for (x, y), z in X.comp[k].items():
            if z not in (x, y):
                factors.setdefault(z, []).append((x, y))
    # composites after their factors, so closure is decided when z is reached
    height = [0] * size
    changed = True
    while changed:
        changed = False
        for z, fs in factors.items():
            h = 1 + max(max(height[x], height[y]) for x, y in fs)
            if h > height[z] and h <= size:
                height[z], changed = h, True
    order = sorted(range(size), key=lambda z: (dims[z], height[z], z))
    chosen = [False] * size

    def rec(p):
        if p == size:
            yield [z for z in range(size) if chosen[z]]
            return
        z = order[p]
        forced = any(chosen[x] and chosen[y] for x, y in factors.get(z, ()))
        if not forced:
            yield from rec(p + 1)
        if all(chosen[b] for b in bounds[z]):
            chosen[z] = True
            yield from rec(p + 1)
            chosen[z] = False

    yield from rec(0)


def is_thin(X: FiniteStrictNCat) -> bool:
    """No two distinct parallel cells."""
    dims = X.dims
    seen = set()
    for x in range(len(X.cells)):
        d = dims[x]
        if d == 0:
            continue
        key = (d, X.src[d - 1][x], X.tgt[d - 1][x])
        if key in seen:
            return False
        seen.add(key)
    return True


def _thin_images(X: FiniteStrictNCat):
    """For thin X an idempotent fixes every cell whose boundary it fixes, so
    its image is determined by its objects."""
    dims = X.dims
    objs = list(X.objects)
    order = sorted(range(len(X.cells)), key=lambda z: (dims[z], z))
    for mask in range(1, 1 << len(objs)):
        keep = set(o for i, o in enumerate(objs) if mask >> i & 1)
        for z in order:
            d = dims[z]
            if d and X.src[d - 1][z] in keep and X.tgt[d - 1][z] in keep:
                keep.add(z)
        yield sorted(keep)


def retracts_of(X: FiniteStrictNCat) -> List[RetractCertificate]:
    """One splitting per iso class of retract.

    Searches images rather than idempotents: for each candidate image S (up
    to iso among those already found) look for one retraction ``X -> S``
    fixing S.
    """
    out: List[RetractCertificate] = []
    found: Dict = {}
    if not X.cells:
        return [RetractCertificate(X, FunctorMap.identity(X), X, FunctorMap.identity(X),
                                   FunctorMap.identity(X))]
    images = _thin_images(X) if is_thin(X) else sub_categories(X)
    for keep in images:
        if not keep:
            continue
        S, incl = induced_sub(X, keep)
        bucket = found.setdefault((len(keep), S.dim_counts), [])
        if any(is_iso(S, T) for T in bucket):
            continue
        pos = {x: i for i, x in enumerate(keep)}
        for r in iter_functors(X, S, fixed={x: pos[x] for x in keep}):
            ret = FunctorMap(X, S, r)
            out.append(RetractCertificate(X, ret.then(incl), S, incl, ret))
            bucket.append(S)
            break
    return out


# ---------------------------------------------------------------------------
# bounded Υ windows


class _IsoSet:
    """Objects deduplicated by isomorphism, in insertion order."""

    def __init__(self):
        self.items: List[FiniteStrictNCat] = []
        self._buckets: Dict = {}

    def add(self, X: FiniteStrictNCat) -> bool:
        key = invariant(X)
        bucket = self._buckets.setdefault(key, [])
        if any(is_iso(X, Y) for Y in bucket):
            return False
        bucket.append(X)
        self.items.append(X)
        return True

    def __contains__(self, X):
        return any(is_iso(X, Y) for Y in self._buckets.get(invariant(X), ()))

    def __len__(self):
        return len(self.items)


@dataclass
class UpsilonWindow:
    n: int
    size_bound: int
    objects: List[FiniteStrictNCat]
    rounds: int
    fixed_point: bool
    per_round: List[int] = field(default_factory=list)
    skipped: List[int] = field(default_factory=list)   # indices whose retracts hit the budget
    seconds: float = 0.0

    def contains(self, X: FiniteStrictNCat) -> bool:
        X = X.lift(self.n) if X.n < self.n else X
        return any(is_iso(X, Y) for Y in self.objects)


def _fp_size(f: Assignment, g: Assignment) -> int:
    cnt: Dict[int, int] = {}
    for v in f:
        cnt[v] = cnt.get(v, 0) + 1
    return sum(cnt.get(v, 0) for v in g)


class _Closure:
    """Semi-naive closure state: only pairs touching a new object are formed."""

    def __init__(self, n: int, bound: int, retract_nodes: int):
        self.n, self.bound, self.retract_nodes = n, bound, retract_nodes
        self.cells = [cell(k, n) for k in range(n + 1)]
        self.seen = _IsoSet()
        self.maps: Dict[int, List] = {}
        self.skipped: List[int] = []
        for C in self.cells:
            self.seen.add(C)

    def _maps(self, X):
        if id(X) not in self.maps:
            self.maps[id(X)] = [functor_assignments(X, C) for C in self.cells]
        return self.maps[id(X)]

    def _retracts(self, X):
        try:
            with config.budget(max_nodes=self.retract_nodes):
                return [c.splitting for c in retracts_of(X)]
        except BudgetExceeded:
            self.skipped.append(self.seen.items.index(X))
            return []

    def step(self, new: List[FiniteStrictNCat], seen: _IsoSet) -> List[FiniteStrictNCat]:
        fresh: List[FiniteStrictNCat] = []
        objs = list(seen.items)
        is_new = {id(X) for X in new}
        for a, X in enumerate(objs):
            for Y in objs[a:]:
                if id(X) not in is_new and id(Y) not in is_new:
                    continue
                mx, my = self._maps(X), self._maps(Y)
                for k, C in enumerate(self.cells):
                    for f in mx[k]:
                        for g in my[k]:
                            if _fp_size(f, g) > self.bound:
                                continue
                            P = fiber_product(FunctorMap(X, C, f), FunctorMap(Y, C, g))[0]
                            if seen.add(P):
                                fresh.append(P)
        for X in new + fresh:
            for R in self._retracts(X):
                if len(R.cells) <= self.bound and seen.add(R):
                    fresh.append(R)
        return fresh


def upsilon_window(n: int, size_bound: int, rounds: Optional[int] = None,
                   retract_nodes: int = 200_000) -> UpsilonWindow:
    """Close the cells under fiber products over cells and retracts, keeping
    objects with at most ``size_bound`` cells.

    ``rounds=None`` runs to saturation.  Retract search per object is capped
    at ``retract_nodes`` search nodes; objects over the cap are listed in
    ``skipped`` and the window then never claims a fixed point.
    """
    start = time.perf_counter()
    cl = _Closure(n, size_bound, retract_nodes)
    new = list(cl.seen.items)
    per_round: List[int] = []
    while rounds is None or len(per_round) < rounds:
        new = cl.step(new, cl.seen)
        per_round.append(len(new))
        if not new:
            break
    if new:
        # one probing round on a copy decides whether the last round saturated
        extra = cl.step(new, _copy(cl.seen))
    else:
        extra = []
    fixed = not extra and not cl.skipped
    return UpsilonWindow(n, size_bound, list(cl.seen.items), len(per_round), fixed,
                         per_round, sorted(set(cl.skipped)), time.perf_counter() - start)


def _copy(s: _IsoSet) -> _IsoSet:
    c = _IsoSet()
    for X in s.items:
        c.items.append(X)
        c._buckets.setdefault(invariant(X), []).append(X)
    return c


# ---------------------------------------------------------------------------
# natural endo-transformations of the identity


def natural_endo_probe(corpus: Sequence[FiniteStrictNCat],
                       family: Optional[Sequence[Tuple[int, int, Assignment]]] = None
                       ) -> List[Tuple[Assignment, ...]]:
    """Families ``η_X ∈ End(X)`` with ``F η_X = η_Y F`` for every ``F: X -> Y``
    in ``family`` (default: all functors between corpus members)."""
    objs = list(corpus)
    if family is None:
        family = [(a, b, F) for a, X in enumerate(objs) for b, Y in enumerate(objs)
                  for F in functor_assignments(X, Y)]
    # C_0-like objects first: their endomorphisms are the most constrained
    order = sorted(range(len(objs)), key=lambda i: (len(objs[i].cells), i))
    rank = {i: r for r, i in enumerate(order)}
    cons: Dict[int, List] = {i: [] for i in order}
    for a, b, F in family:
        cons[order[max(rank[a], rank[b])]].append((a, b, F))
    ends = {i: functor_assignments(objs[i], objs[i]) for i in order}
    out = []
    eta: Dict[int, Assignment] = {}

    def rec(r):
        if r == len(order):
            out.append(tuple(eta[i] for i in range(len(objs))))
            return
        i = order[r]
        for e in ends[i]:
            eta[i] = e
            if all(_compose(F, eta[a]) == _compose(eta[b], F) for a, b, F in cons[i]):
                rec(r + 1)
            del eta[i]

    rec(0)
    return out
