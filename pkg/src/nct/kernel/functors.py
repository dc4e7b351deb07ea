"""Functors between finite strict n-categories and their enumeration.

Functors are found by backtracking.  Cells of the source are visited in an
order that grows from already placed cells; a cell that is a composite of
already-assigned cells is forced, every other cell branches over target
cells with matching boundary.  After each assignment only the constraints that just became
fully determined are checked.
"""
from __future__ import annotations

import sys
from functools import lru_cache
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .. import config
from ..errors import BudgetExceeded, InputError
from .ncat import FiniteStrictNCat


def common_dim(A: FiniteStrictNCat, X: FiniteStrictNCat):
    """Lift both objects to a shared ambient dimension."""
    n = max(A.n, X.n)
    return A.lift(n), X.lift(n)


class FunctorMap:
    """A map of cell sets respecting every structure.

    ``assignment[k]`` is the index in ``target`` of the image of source cell
    ``k``.  Construction does not check functoriality; see
    :meth:`is_functor`.
    """

    __slots__ = ("source", "target", "assignment", "_hash")

    def __init__(self, source: FiniteStrictNCat, target: FiniteStrictNCat, assignment):
        self.source = source
        self.target = target
        self.assignment = tuple(assignment)
        if len(self.assignment) != len(source.cells):
            raise InputError("assignment must cover every source cell")
        if any(not 0 <= v < len(target.cells) for v in self.assignment):
            raise InputError("assignment references an unknown target cell")
        self._hash = None

    @classmethod
    def from_dict(cls, source, target, mapping: Mapping[str, str]) -> "FunctorMap":
        try:
            return cls(source, target, [target.index[mapping[c]] for c in source.cells])
        except KeyError as exc:
            raise InputError(f"functor map undefined or unknown at {exc}") from None

    @classmethod
    def identity(cls, X: FiniteStrictNCat) -> "FunctorMap":
        return cls(X, X, range(len(X.cells)))

    @classmethod
    def constant(cls, source, target, cell: str) -> "FunctorMap":
        return cls(source, target, [target.index[cell]] * len(source.cells))

    def __call__(self, name: str) -> str:
        return self.target.cells[self.assignment[self.source.index[name]]]

    def as_dict(self) -> Dict[str, str]:
        t = self.target.cells
        return {c: t[v] for c, v in zip(self.source.cells, self.assignment)}

    def then(self, other: "FunctorMap") -> "FunctorMap":
        """Diagrammatic composite: first ``self`` then ``other``."""
        if len(self.target.cells) != len(other.source.cells) or \
                self.target.cells != other.source.cells:
            raise InputError("functor maps are not composable")
        a = other.assignment
        return FunctorMap(self.source, other.target, [a[v] for v in self.assignment])

    def __mul__(self, other: "FunctorMap") -> "FunctorMap":
        # g * f = g after f
        return other.then(self)

    def __eq__(self, other):
        if not isinstance(other, FunctorMap):
            return NotImplemented
        return (self.assignment == other.assignment and self.source == other.source
                and self.target == other.target)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.assignment, self.source, self.target))
        return self._hash

    def __repr__(self):
        return f"FunctorMap({self.as_dict()})"

    def is_injective(self) -> bool:
        return len(set(self.assignment)) == len(self.assignment)

    def is_bijective(self) -> bool:
        return self.is_injective() and len(self.assignment) == len(self.target.cells)

    def image(self) -> List[str]:
        seen = sorted(set(self.assignment))
        return [self.target.cells[v] for v in seen]

    def is_functor(self) -> bool:
        A, X = common_dim(self.source, self.target)
        F = self.assignment
        for k in range(A.n):
            sa, ta, ca = A.src[k], A.tgt[k], A.comp[k]
            sx, tx, cx = X.src[k], X.tgt[k], X.comp[k]
            for a in range(len(F)):
                if F[sa[a]] != sx[F[a]] or F[ta[a]] != tx[F[a]]:
                    return False
            for (x, y), z in ca.items():
                if cx.get((F[x], F[y])) != F[z]:
                    return False
        return True

    def inverse(self) -> "FunctorMap":
        if not self.is_bijective():
            raise InputError("map is not invertible")
        inv = [0] * len(self.assignment)
        for k, v in enumerate(self.assignment):
            inv[v] = k
        return FunctorMap(self.target, self.source, inv)

    def to_json_dict(self):
        return self.as_dict()


# ---------------------------------------------------------------------------
# search plan for a source category


class _Plan:
    __slots__ = ("order", "forced", "checks", "dims")

    def __init__(self, order, forced, checks, dims):
        self.order = order
        self.forced = forced
        self.checks = checks
        self.dims = dims


def _connected_order(A: FiniteStrictNCat, dims, depth, decomps) -> List[int]:
    """Visit order growing from placed cells: each free pick is the generator
    with fewest unplaced boundary cells, and composites follow as soon as a
    decomposition and their boundary are placed.  Placing objects one by one
    next to their 1-cells lets the search prune before all objects are fixed."""
    size = len(A.cells)
    bnd = []
    for z in range(size):
        b = set()
        for k in range(A.n):
            b.add(A.src[k][z])
            b.add(A.tgt[k][z])
        b.discard(z)
        bnd.append(sorted(b, key=lambda x: (dims[x], x)))
    users: List[List[int]] = [[] for _ in range(size)]
    for z in range(size):
        for _, x, y in decomps[z]:
            users[x].append(z)
            users[y].append(z)
        for b in bnd[z]:
            users[b].append(z)
    placed = [False] * size
    order: List[int] = []

    def forced_ready(z):
        return (not placed[z] and all(placed[b] for b in bnd[z])
                and any(placed[x] and placed[y] for _, x, y in decomps[z]))

    def place(z):
        if placed[z]:
            return
        for b in bnd[z]:
            place(b)
        placed[z] = True
        order.append(z)
        work = [z]
        while work:
            w = work.pop()
            for u in sorted(set(users[w])):
                if forced_ready(u):
                    placed[u] = True
                    order.append(u)
                    work.append(u)

    gens = sorted((z for z in range(size) if depth[z] == 0), key=lambda z: (dims[z], z))
    while len(order) < size:
        best, key = None, None
        for z in gens:
            if placed[z] or dims[z] == 0:
                continue
            missing = sum(1 for b in bnd[z] if not placed[b])
            k = (missing, dims[z], z)
            if key is None or k < key:
                best, key = z, k
        if best is None:
            best = next(z for z in sorted(range(size), key=lambda z: (dims[z], depth[z], z))
                        if not placed[z])
        place(best)
    return order


@lru_cache(maxsize=4096)
def _plan(A: FiniteStrictNCat) -> _Plan:
    size = len(A.cells)
    dims = A.dims
    # composite depth: 0 for cells with no decomposition into other cells
    decomps: List[List[Tuple[int, int, int]]] = [[] for _ in range(size)]
    for k in range(A.n):
        for (x, y), z in A.comp[k].items():
            if x != z and y != z:
                decomps[z].append((k, x, y))
    INF = 10 ** 9
    depth = [0 if not decomps[z] else INF for z in range(size)]
    changed = True
    while changed:
        changed = False
        for z in range(size):
            for _, x, y in decomps[z]:
                if dims[x] <= dims[z] and dims[y] <= dims[z]:
                    d = 1 + max(depth[x], depth[y])
                    if d < depth[z]:
                        depth[z] = d
                        changed = True
    depth = [0 if d == INF else d for d in depth]
    order = _connected_order(A, dims, depth, decomps)
    pos = [0] * size
    for p, z in enumerate(order):
        pos[z] = p

    forced: List[Optional[Tuple[int, int, int]]] = []
    for z in order:
        f = None
        for k, x, y in decomps[z]:
            if pos[x] < pos[z] and pos[y] < pos[z]:
                f = (k, x, y)
                break
        forced.append(f)

    checks: List[List[Tuple]] = [[] for _ in range(size)]
    for z in range(size):
        for k in range(A.n):
            checks[pos[z]].append(("s", k, z, A.src[k][z]))
            checks[pos[z]].append(("t", k, z, A.tgt[k][z]))
    for k in range(A.n):
        for (x, y), z in A.comp[k].items():
            last = max(pos[x], pos[y], pos[z])
            checks[last].append(("c", k, x, y, z))
    for k in range(A.n):
        for z in range(size):
            s, t = A.src[k][z], A.tgt[k][z]
            if pos[s] > pos[z] or pos[t] > pos[z]:
                raise InputError("source is not a valid strict n-category")
    return _Plan(tuple(order), tuple(forced), tuple(tuple(c) for c in checks), dims)


@lru_cache(maxsize=4096)
def _candidates(X: FiniteStrictNCat):
    """Index target cells by (d, src_d, tgt_d) for d >= 1, and objects for d = 0."""
    dims = X.dims
    index: Dict[Tuple[int, int, int], List[int]] = {}
    for d in range(1, X.n + 1):
        s, t = X.src[d - 1], X.tgt[d - 1]
        for x in range(len(X.cells)):
            if dims[x] <= d:
                index.setdefault((d, s[x], t[x]), []).append(x)
    return tuple(X.objects), index


def iter_functors(A: FiniteStrictNCat, X: FiniteStrictNCat, *, injective=False,
                  dim_preserving=False, fixed: Optional[Dict[int, int]] = None,
                  max_nodes: Optional[int] = None,
                  colors: Optional[Tuple[Sequence, Sequence]] = None) -> Iterator[Tuple[int, ...]]:
    """Yield assignments (tuples of target indices) of all functors A -> X.

    ``colors=(cA, cX)`` restricts every cell to targets of the same color."""
    A, X = common_dim(A, X)
    plan = _plan(A)
    objects, index = _candidates(X)
    size = len(A.cells)
    order, forced, checks = plan.order, plan.forced, plan.checks
    dimsA, dimsX = A.dims, X.dims
    xs, xt, xc = X.src, X.tgt, X.comp
    F = [-1] * size
    used = set()
    budget = max_nodes if max_nodes is not None else config.current().max_nodes
    nodes = 0

    def ok(p):
        for chk in checks[p]:
            if chk[0] == "c":
                _, k, x, y, z = chk
                if xc[k].get((F[x], F[y])) != F[z]:
                    return False
            elif chk[0] == "s":
                _, k, z, s = chk
                if xs[k][F[z]] != F[s]:
                    return False
            else:
                _, k, z, t = chk
                if xt[k][F[z]] != F[t]:
                    return False
        return True

    def rec(p):
        nonlocal nodes
        if p == size:
            yield tuple(F)
            return
        z = order[p]
        f = forced[p]
        if fixed is not None and z in fixed:
            cands = (fixed[z],)
        elif f is not None:
            k, x, y = f
            v = xc[k].get((F[x], F[y]))
            cands = () if v is None else (v,)
        else:
            d = dimsA[z]
            if d == 0:
                cands = objects
            else:
                cands = index.get((d, F[A.src[d - 1][z]], F[A.tgt[d - 1][z]]), ())
        for v in cands:
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(
                    f"functor search exceeded {budget} nodes "
                    f"({len(A.cells)} -> {len(X.cells)} cells)", bound=budget)
            if injective and v in used:
                continue
            if dim_preserving and dimsX[v] != dimsA[z]:
                continue
            if colors is not None and colors[0][z] != colors[1][v]:
                continue
            F[z] = v
            if ok(p):
                if injective:
                    used.add(v)
                yield from rec(p + 1)
                if injective:
                    used.discard(v)
            F[z] = -1

    # one generator frame per assigned cell
    if sys.getrecursionlimit() < 3 * size + 1000:
        sys.setrecursionlimit(3 * size + 1000)
    yield from rec(0)


@lru_cache(maxsize=8192)
def _fun_enum_cached(A: FiniteStrictNCat, X: FiniteStrictNCat, max_nodes: int):
    return tuple(iter_functors(A, X, max_nodes=max_nodes))


def functor_assignments(A: FiniteStrictNCat, X: FiniteStrictNCat) -> Tuple[Tuple[int, ...], ...]:
    """All functors A -> X as assignment tuples (memoized, deterministic order)."""
    return _fun_enum_cached(A, X, config.current().max_nodes)


def fun_enum(A: FiniteStrictNCat, X: FiniteStrictNCat) -> List[FunctorMap]:
    """The complete list of functors ``A -> X``."""
    return [FunctorMap(A, X, a) for a in functor_assignments(A, X)]


def count_functors(A: FiniteStrictNCat, X: FiniteStrictNCat) -> int:
    return len(functor_assignments(A, X))


# ---------------------------------------------------------------------------
# isomorphism


def _profile(X: FiniteStrictNCat):
    """Isomorphism invariant: per-dimension counts and boundary degree profiles."""
    prof = [X.n, X.dim_counts]
    for k in range(X.n):
        deg = [0] * len(X.cells)
        for x in range(len(X.cells)):
            if X.src[k][x] != x:
                deg[X.src[k][x]] += 1
        outdeg = sorted(zip(X.dims, deg))
        deg = [0] * len(X.cells)
        for x in range(len(X.cells)):
            if X.tgt[k][x] != x:
                deg[X.tgt[k][x]] += 1
        prof.append((tuple(outdeg), tuple(sorted(zip(X.dims, deg))), len(X.comp[k])))
    return tuple(prof)


@lru_cache(maxsize=4096)
def _refined(X: FiniteStrictNCat, rounds: int = 6) -> Tuple:
    """Color refinement of cells by their src/tgt/comp neighbourhoods.

    Colors are canonical strings, so equal multisets of final colors are an
    isomorphism invariant and isos must preserve colors."""
    size = len(X.cells)
    nbrs: List[List[Tuple]] = [[] for _ in range(size)]
    for k in range(X.n):
        for x in range(size):
            nbrs[x].append(("s", k, X.src[k][x]))
            nbrs[x].append(("t", k, X.tgt[k][x]))
            nbrs[X.src[k][x]].append(("S", k, x))
            nbrs[X.tgt[k][x]].append(("T", k, x))
        for (x, y), z in X.comp[k].items():
            nbrs[z].append(("=", k, x, y))
            nbrs[x].append(("L", k, y, z))
            nbrs[y].append(("R", k, x, z))
    col = [repr(d) for d in X.dims]
    for _ in range(rounds):
        new = [repr((col[x], sorted((e[0], e[1]) + tuple(col[v] for v in e[2:])
                                    for e in nbrs[x]))) for x in range(size)]
        palette = {c: f"{i}" for i, c in enumerate(sorted(set(new)))}
        new = [palette[c] for c in new]
        # stop once the partition is stable
        if len(set(new)) == len(set(col)):
            col = new
            break
        col = new
    # palette indices are only meaningful together with the class structure
    key = tuple(sorted(col))
    return tuple(col), key


def invariant(X: FiniteStrictNCat):
    return (_profile(X), _refined(X)[1])


def find_iso(A: FiniteStrictNCat, B: FiniteStrictNCat) -> Optional[FunctorMap]:
    """An invertible functor A -> B, or None."""
    n = max(A.n, B.n)
    A2, B2 = A.lift(n), B.lift(n)
    if len(A2.cells) != len(B2.cells) or _profile(A2) != _profile(B2):
        return None
    ca, cb = _refined(A2), _refined(B2)
    if ca[1] != cb[1]:
        return None
    for a in iter_functors(A2, B2, injective=True, dim_preserving=True,
                           colors=(ca[0], cb[0])):
        return FunctorMap(A, B, a)
    return None


def is_iso(A: FiniteStrictNCat, B: FiniteStrictNCat) -> bool:
    return find_iso(A, B) is not None
