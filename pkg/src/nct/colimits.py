"""Pushouts of finite strict n-categories.

The pushout is computed as a quotient of the disjoint union followed by a
bounded free-composition closure:

1. glue ``X ⊔ Y`` along the apex with a union-find;
2. close under the equational theory (boundaries, units, globularity,
   associativity, interchange, functoriality of src/tgt) by merging classes;
3. fill composable pairs by the unit law, and adjoin a formal composite for
   every pair still lacking one;
4. repeat until nothing is missing, or fail once the round/cell bound is hit.

Every formal cell remembers its defining pair, so maps out of the pushout
can be induced from a compatible pair of maps.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import config
from .errors import CompletionBoundExceeded, InputError, InternalError
from .kernel.constructions import coproduct, simplex
from .kernel.functors import FunctorMap, common_dim, fun_enum
from .kernel.ncat import FiniteStrictNCat, discrete, validate


@dataclass(frozen=True)
class SpanDiagram:
    """``X <- A -> Y``."""

    left: FunctorMap
    right: FunctorMap

    def __post_init__(self):
        if self.left.source.cells != self.right.source.cells:
            raise InputError("span legs must share their apex")

    @property
    def apex(self) -> FiniteStrictNCat:
        return self.left.source


@dataclass
class CompletionTrace:
    rounds: int = 0
    added_cells: List[str] = field(default_factory=list)
    bound: int = 0
    merges: int = 0


@dataclass
class Pushout:
    obj: FiniteStrictNCat
    left: FunctorMap   # X -> P
    right: FunctorMap  # Y -> P
    trace: CompletionTrace
    diagram: SpanDiagram
    # origin of each representative: ("L", x) / ("R", y) / ("comp", k, a, b)
    _origins: Tuple = ()
    _classes: Tuple = ()

    def induced(self, u: FunctorMap, v: FunctorMap) -> FunctorMap:
        """The unique map ``P -> T`` restricting to ``u`` on X and ``v`` on Y."""
        T = u.target
        if v.target.cells != T.cells:
            raise InputError("maps must share a codomain")
        if self.diagram.left.then(u).assignment != self.diagram.right.then(v).assignment:
            raise InputError("maps are not compatible on the apex")
        Tn = T.lift(max(T.n, self.obj.n))
        val: List[int] = []
        for org in self._origins:
            if org[0] == "L":
                val.append(u.assignment[org[1]])
            elif org[0] == "R":
                val.append(v.assignment[org[1]])
            else:
                _, k, a, b = org
                r = Tn.comp[k].get((val[a], val[b]))
                if r is None:
                    raise InputError("maps do not extend over a formal composite")
                val.append(r)
        out = []
        for members in self._classes:
            vals = {val[m] for m in members}
            if len(vals) != 1:
                raise InputError("maps do not respect the pushout relations")
            out.append(vals.pop())
        return FunctorMap(self.obj, T, out)


class _Builder:
    """Mutable cell store with union-find, used only inside :func:`pushout`."""

    def __init__(self, n: int):
        self.n = n
        self.parent: List[int] = []
        self.names: List[str] = []
        self.origin: List[Tuple] = []
        self.src: List[List[int]] = [[] for _ in range(n)]
        self.tgt: List[List[int]] = [[] for _ in range(n)]
        self.comp: List[Dict[Tuple[int, int], int]] = [{} for _ in range(n)]
        self.merges = 0

    def add(self, name, origin) -> int:
        i = len(self.parent)
        self.parent.append(i)
        self.names.append(name)
        self.origin.append(origin)
        for k in range(self.n):
            self.src[k].append(i)
            self.tgt[k].append(i)
        return i

    def find(self, i: int) -> int:
        p = self.parent
        root = i
        while p[root] != root:
            root = p[root]
        while p[i] != root:
            p[i], i = root, p[i]
        return root

    def union(self, a: int, b: int) -> bool:
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        if b < a:
            a, b = b, a
        self.parent[b] = a
        self.merges += 1
        return True

    # -- canonical view --------------------------------------------------------

    def view(self):
        """Canonical tables on representatives, merging any conflicts found.
        Returns None if merges happened (caller should retry)."""
        f = self.find
        changed = False
        size = len(self.parent)
        S = [dict() for _ in range(self.n)]
        T = [dict() for _ in range(self.n)]
        for k in range(self.n):
            for tab, out in ((self.src[k], S[k]), (self.tgt[k], T[k])):
                for i in range(size):
                    r, v = f(i), f(tab[i])
                    w = out.get(r)
                    if w is None:
                        out[r] = v
                    elif w != v:
                        changed |= self.union(w, v)
        C = [dict() for _ in range(self.n)]
        for k in range(self.n):
            for (a, b), z in self.comp[k].items():
                key, z = (f(a), f(b)), f(z)
                w = C[k].get(key)
                if w is None:
                    C[k][key] = z
                elif w != z:
                    changed |= self.union(w, z)
        if changed:
            return None
        reps = sorted(S[0]) if self.n else sorted({f(i) for i in range(size)})
        return reps, S, T, C

    def axioms(self, reps, S, T, C) -> bool:
        """One pass of equational merges; True if anything merged."""
        u = self.union
        ch = False
        n = self.n
        for k in range(n):
            Sk, Tk = S[k], T[k]
            for r in reps:
                s, t = Sk[r], Tk[r]
                ch |= u(Sk[s], s) | u(Tk[s], s) | u(Tk[t], t) | u(Sk[t], t)
                for j in range(n):
                    if j < k:
                        ch |= u(S[j][s], S[j][r]) | u(T[j][s], T[j][r])
                        ch |= u(S[j][t], S[j][r]) | u(T[j][t], T[j][r])
                    elif j > k:
                        ch |= u(S[j][s], s) | u(T[j][s], s) | u(S[j][t], t) | u(T[j][t], t)
            for (x, y), z in C[k].items():
                ch |= u(Sk[z], Sk[y]) | u(Tk[z], Tk[x])
                if Sk[x] == x:
                    ch |= u(z, y)
                if Sk[y] == y:
                    ch |= u(z, x)
                for j in range(n):
                    if j < k:
                        ch |= u(S[j][z], S[j][x]) | u(T[j][z], T[j][x])
                        ch |= u(S[j][y], S[j][x])
                    elif j > k:
                        for M in (S[j], T[j]):
                            w = C[k].get((M[x], M[y]))
                            if w is not None:
                                ch |= u(M[z], w)
            if ch:
                return True
            # associativity
            by_left: Dict[int, List[Tuple[int, int]]] = {}
            for (y, w), yw in C[k].items():
                by_left.setdefault(y, []).append((w, yw))
            for (x, y), xy in C[k].items():
                for w, yw in by_left.get(y, ()):
                    a = C[k].get((xy, w))
                    b = C[k].get((x, yw))
                    if a is not None and b is not None:
                        ch |= u(a, b)
        if ch:
            return True
        # interchange
        for i in range(n):
            Si, Ti, Ci = S[i], T[i], C[i]
            into: Dict[int, List[int]] = {}
            for r in reps:
                into.setdefault(Ti[r], []).append(r)
            for j in range(i + 1, n):
                Cj = C[j]
                for (x, xp), top in list(Cj.items()):
                    for y in into.get(Si[x], ()):
                        xy = Ci.get((x, y))
                        if xy is None:
                            continue
                        for yp in into.get(Si[xp], ()):
                            yyp = Cj.get((y, yp))
                            if yyp is None:
                                continue
                            xyp = Ci.get((xp, yp))
                            if xyp is None:
                                continue
                            lhs = Cj.get((xy, xyp))
                            rhs = Ci.get((top, yyp))
                            if lhs is not None and rhs is not None:
                                ch |= u(lhs, rhs)
        return ch

    def close(self):
        while True:
            v = self.view()
            if v is None:
                continue
            if not self.axioms(*v):
                return v


def _dim(r, S, n):
    for level in range(n, 0, -1):
        if S[level - 1][r] != r:
            return level
    return 0


def _complete(b: _Builder, trace: CompletionTrace, budget: config.Budget):
    while True:
        reps, S, T, C = b.close()
        n = b.n
        missing: List[Tuple[int, int, int, int]] = []
        filled = False
        for k in range(n):
            into: Dict[int, List[int]] = {}
            for r in reps:
                into.setdefault(T[k][r], []).append(r)
            for x in reps:
                for y in into.get(S[k][x], ()):
                    if (x, y) in C[k]:
                        continue
                    if S[k][x] == x:
                        b.comp[k][(x, y)] = y
                        filled = True
                    elif S[k][y] == y:
                        b.comp[k][(x, y)] = x
                        filled = True
                    else:
                        d = max(_dim(x, S, n), _dim(y, S, n))
                        missing.append((d, k, x, y))
        if filled:
            continue
        if not missing:
            return reps, S, T, C
        trace.rounds += 1
        if trace.rounds > budget.completion_rounds:
            raise CompletionBoundExceeded(
                f"pushout did not close within {budget.completion_rounds} rounds",
                bound=budget.completion_rounds, trace=trace)
        created: Dict[Tuple[int, int, int], int] = {}

        def make(k, x, y):
            got = C[k].get((x, y))
            if got is None:
                got = created.get((k, x, y))
            if got is not None:
                return got
            if S[k][x] == x:
                return y
            if S[k][y] == y:
                return x
            d = max(_dim(x, S, n), _dim(y, S, n))
            bounds = {}
            for j in range(k + 1, d):
                bounds[j] = (make(k, S[j][x], S[j][y]), make(k, T[j][x], T[j][y]))
            name = f"({b.names[x]}*{k + 1}{b.names[y]})"
            z = b.add(name, ("comp", k, x, y))
            trace.added_cells.append(name)
            b.comp[k][(x, y)] = z
            created[(k, x, y)] = z
            for j in range(n):
                if j < k:
                    b.src[j][z], b.tgt[j][z] = S[j][x], T[j][x]
                elif j == k:
                    b.src[j][z], b.tgt[j][z] = S[k][y], T[k][x]
                elif j < d:
                    b.src[j][z], b.tgt[j][z] = bounds[j]
            return z

        for _, k, x, y in sorted(missing):
            make(k, x, y)
        if len(b.parent) > budget.max_cells:
            raise CompletionBoundExceeded(
                f"pushout exceeded {budget.max_cells} cells", bound=budget.max_cells, trace=trace)


def pushout(d: SpanDiagram) -> Pushout:
    """The pushout ``X ∪^A Y`` with its cocone and completion trace."""
    f, g = d.left, d.right
    n = max(f.source.n, f.target.n, g.target.n)
    X, Y = f.target.lift(n), g.target.lift(n)
    budget = config.current()
    b = _Builder(n)
    for x, c in enumerate(X.cells):
        b.add(c, ("L", x))
    m = len(X.cells)
    taken = set(X.cells)
    for y, c in enumerate(Y.cells):
        while c in taken:
            c += "'"
        taken.add(c)
        b.add(c, ("R", y))
    for k in range(n):
        for x in range(m):
            b.src[k][x], b.tgt[k][x] = X.src[k][x], X.tgt[k][x]
        for y in range(len(Y.cells)):
            b.src[k][m + y], b.tgt[k][m + y] = m + Y.src[k][y], m + Y.tgt[k][y]
        b.comp[k].update(X.comp[k])
        b.comp[k].update({(m + p, m + q): m + r for (p, q), r in Y.comp[k].items()})
    for a in range(len(f.source.cells)):
        b.union(f.assignment[a], m + g.assignment[a])
    trace = CompletionTrace(bound=budget.completion_rounds)
    reps, S, T, C = _complete(b, trace, budget)
    trace.merges = b.merges

    pos = {r: i for i, r in enumerate(reps)}
    names, used = [], set()
    for r in reps:
        nm = b.names[r]
        while nm in used:
            nm += "'"
        used.add(nm)
        names.append(nm)
    src = [[pos[S[k][r]] for r in reps] for k in range(n)]
    tgt = [[pos[T[k][r]] for r in reps] for k in range(n)]
    comp = [{(pos[x], pos[y]): pos[z] for (x, y), z in C[k].items()} for k in range(n)]
    P = FiniteStrictNCat(n, names, src, tgt, comp)
    rep = validate(P, limit=1)
    if not rep.valid:
        v = rep.violations[0]
        raise InternalError(f"pushout failed {v.axiom} at {v.levels}: {v.witness}")
    left = FunctorMap(f.target, P, [pos[b.find(x)] for x in range(m)])
    right = FunctorMap(g.target, P, [pos[b.find(m + y)] for y in range(len(Y.cells))])
    classes: List[List[int]] = [[] for _ in reps]
    for i in range(len(b.parent)):
        classes[pos[b.find(i)]].append(i)
    return Pushout(P, left, right, trace, d, tuple(b.origin), tuple(tuple(c) for c in classes))


def glue(f: FunctorMap, g: FunctorMap) -> Pushout:
    return pushout(SpanDiagram(f, g))


# ---------------------------------------------------------------------------
# wedges


def final_object(X: FiniteStrictNCat) -> int:
    """The unique object receiving a 1-cell from every object."""
    return _extremal(X, final=True)


def initial_object(X: FiniteStrictNCat) -> int:
    return _extremal(X, final=False)


def _extremal(X, final):
    objs = X.objects
    if X.n == 0:
        if len(objs) == 1:
            return objs[0]
        raise InputError("no designated endpoint object")
    reach = {(X.src[0][c], X.tgt[0][c]) for c in range(len(X.cells))}
    hits = [o for o in objs
            if all(((a, o) if final else (o, a)) in reach for a in objs)]
    if len(hits) != 1:
        raise InputError("no designated endpoint object")
    return hits[0]


def point_at(X: FiniteStrictNCat, obj: int) -> FunctorMap:
    return FunctorMap(discrete(X.n, ["*"]), X, [obj])


def wedge_at_endpoints(X: FiniteStrictNCat, Y: FiniteStrictNCat) -> Pushout:
    """``X ∪^{C_0} Y``: the final object of X glued to the initial object of Y."""
    X, Y = common_dim(X, Y)
    return glue(point_at(X, final_object(X)), point_at(Y, initial_object(Y)))


def wedge_many(parts: Sequence[FiniteStrictNCat]) -> FiniteStrictNCat:
    if not parts:
        raise InputError("nothing to wedge")
    out = parts[0]
    for p in parts[1:]:
        out = wedge_at_endpoints(out, p).obj
    return out


# ---------------------------------------------------------------------------
# the K diagram


def k_diagram(n: int = 1) -> SpanDiagram:
    """``Δ^[3] <- Δ^1 ⊔ Δ^1 -> Δ^0 ⊔ Δ^0`` contracting the edges {0,2} and {1,3}."""
    D3 = simplex(3, n)
    e1 = simplex(["a", "b"], n)
    e2 = simplex(["c", "d"], n)
    two, i1, i2 = coproduct(e1, e2)
    left = FunctorMap.from_dict(two, D3, {"a": "0", "b": "2", "a>b": "0>2",
                                          "c": "1", "d": "3", "c>d": "1>3"})
    pts = discrete(n, ["p", "q"])
    right = FunctorMap.from_dict(two, pts, {"a": "p", "b": "p", "a>b": "p",
                                            "c": "q", "d": "q", "c>d": "q"})
    return SpanDiagram(left, right)


# ---------------------------------------------------------------------------
# universality against a finite test family


@dataclass
class CoconeCheck:
    ok: bool
    witness: Optional[dict] = None


def verify_cocone_universal(Z: FiniteStrictNCat, left: FunctorMap, right: FunctorMap,
                            diagram: SpanDiagram, tests: Sequence[FiniteStrictNCat]) -> CoconeCheck:
    """For each test T, precomposition with the cocone must be a bijection from
    Fun(Z, T) onto the compatible pairs in Fun(X, T) x_{Fun(A, T)} Fun(Y, T)."""
    rep = validate(Z, limit=1)
    if not rep.valid:
        return CoconeCheck(False, {"T": None, "reason": "apex is not a strict n-category",
                                   "axiom": rep.violations[0].axiom})
    if diagram.left.then(left).assignment != diagram.right.then(right).assignment:
        return CoconeCheck(False, {"T": None, "reason": "square does not commute"})
    X, Y = diagram.left.target, diagram.right.target
    fa, ga = diagram.left.assignment, diagram.right.assignment
    for idx, T in enumerate(tests):
        us = fun_enum(X, T)
        vs = fun_enum(Y, T)
        by_apex: Dict[tuple, List[tuple]] = {}
        for v in vs:
            by_apex.setdefault(tuple(v.assignment[a] for a in ga), []).append(v.assignment)
        pairs = set()
        for u in us:
            for v in by_apex.get(tuple(u.assignment[a] for a in fa), ()):
                pairs.add((u.assignment, v))
        seen = set()
        for h in fun_enum(Z, T):
            key = (tuple(h.assignment[x] for x in left.assignment),
                   tuple(h.assignment[y] for y in right.assignment))
            if key in seen or key not in pairs:
                return CoconeCheck(False, {"T": idx, "reason": "not injective" if key in seen
                                           else "restriction is not compatible",
                                           "fun_Z": len(fun_enum(Z, T)), "pairs": len(pairs)})
            seen.add(key)
        if len(seen) != len(pairs):
            return CoconeCheck(False, {"T": idx, "reason": "not surjective",
                                       "fun_Z": len(seen), "pairs": len(pairs)})
    return CoconeCheck(True)
