"""Constructions on finite strict n-categories: suspension, cells, limits,
opposites, maximal sub-k-categories and hom-categories."""
from __future__ import annotations

from itertools import product as iproduct
from typing import Iterable, Optional, Sequence, Tuple

from ..errors import DimensionError, InputError
from .functors import FunctorMap, common_dim
from .ncat import FiniteStrictNCat, discrete, empty

TOP, BOT = "⊤", "⊥"


def _fresh(base: str, taken) -> str:
    if base not in taken:
        return base
    k = 1
    while f"{base}{k}" in taken:
        k += 1
    return f"{base}{k}"


def suspension(X: FiniteStrictNCat) -> FiniteStrictNCat:
    """``σX``: two new objects ⊤, ⊥ with every old cell going from ⊤ to ⊥.

    The result has ambient dimension ``X.n + 1``.
    """
    taken = set(X.cells)
    top = _fresh(TOP, taken)
    bot = _fresh(BOT, taken | {top})
    m = len(X.cells)
    T, B = m, m + 1
    cells = X.cells + (top, bot)
    src = [[T] * m + [T, B]]
    tgt = [[B] * m + [T, B]]
    comp = [{(T, T): T, (B, B): B}]
    for x in range(m):
        comp[0][(x, T)] = x
        comp[0][(B, x)] = x
    for k in range(X.n):
        src.append(list(X.src[k]) + [T, B])
        tgt.append(list(X.tgt[k]) + [T, B])
        c = dict(X.comp[k])
        c[(T, T)] = T
        c[(B, B)] = B
        comp.append(c)
    return FiniteStrictNCat(X.n + 1, cells, src, tgt, comp)


def suspend_map(f: FunctorMap, times: int = 1) -> FunctorMap:
    """σ on functors: ⊤ ↦ ⊤, ⊥ ↦ ⊥, old cells as before."""
    for _ in range(times):
        S, T = suspension(f.source), suspension(f.target)
        m = len(f.target.cells)
        f = FunctorMap(S, T, list(f.assignment) + [m, m + 1])
    return f


def cell(k: int, n: Optional[int] = None) -> FiniteStrictNCat:
    """The k-cell ``C_k = σ^k(C_0)`` in ambient dimension ``n`` (default k)."""
    n = k if n is None else n
    if k > n:
        raise DimensionError(f"C_{k} does not fit in dimension {n}")
    X = discrete(n - k, ["*"])
    for _ in range(k):
        X = suspension(X)
    return X


def boundary(k: int, n: Optional[int] = None) -> FiniteStrictNCat:
    """``∂C_k = σ^k(∅)``: two parallel (k-1)-cells; ``∂C_0`` is empty."""
    n = k if n is None else n
    if k > n:
        raise DimensionError(f"∂C_{k} does not fit in dimension {n}")
    X = empty(n - k)
    for _ in range(k):
        X = suspension(X)
    return X


def walking_iso(n: int = 1) -> FiniteStrictNCat:
    """E: objects x, y and mutually inverse f: x -> y, g: y -> x."""
    if n < 1:
        raise DimensionError("E needs ambient dimension >= 1")
    x, y, f, g = 0, 1, 2, 3
    src = [x, y, x, y]
    tgt = [x, y, y, x]
    comp = {(x, x): x, (y, y): y, (f, x): f, (y, f): f, (g, y): g, (x, g): g,
            (g, f): x, (f, g): y}
    E = FiniteStrictNCat(1, ["x", "y", "f", "g"], [src], [tgt], [comp])
    return E.lift(n)


def simplex(S, n: int = 1) -> FiniteStrictNCat:
    """``Δ^S`` for a finite ordinal: an int m gives [m] = {0..m}; a sequence is
    taken as an ordered list of labels."""
    if n < 1:
        raise DimensionError("Δ^S needs ambient dimension >= 1")
    labels = [str(v) for v in (range(S + 1) if isinstance(S, int) else S)]
    pts = range(len(labels))
    pairs = [(a, b) for a in pts for b in pts if a <= b]
    idx = {p: k for k, p in enumerate(pairs)}
    names = [labels[a] if a == b else f"{labels[a]}>{labels[b]}" for a, b in pairs]
    src = [idx[(a, a)] for a, b in pairs]
    tgt = [idx[(b, b)] for a, b in pairs]
    comp = {}
    for (b, c) in pairs:
        for (a, b2) in pairs:
            if b2 == b:
                comp[(idx[(b, c)], idx[(a, b)])] = idx[(a, c)]
    return FiniteStrictNCat(1, names, [src], [tgt], [comp]).lift(n)


def poset(size: int, relations, n: int = 1) -> FiniteStrictNCat:
    """The poset on ``0..size-1`` generated by ``relations`` (pairs a < b),
    as a 1-category lifted to dimension n."""
    if n < 1:
        raise DimensionError("a poset needs ambient dimension >= 1")
    le = [[a == b for b in range(size)] for a in range(size)]
    for a, b in relations:
        le[a][b] = True
    for m in range(size):
        for a in range(size):
            if le[a][m]:
                for b in range(size):
                    if le[m][b]:
                        le[a][b] = True
    if any(le[a][b] and le[b][a] for a in range(size) for b in range(size) if a != b):
        raise InputError("relations contain a cycle")
    pairs = [(a, b) for a in range(size) for b in range(size) if le[a][b]]
    idx = {p: k for k, p in enumerate(pairs)}
    names = [str(a) if a == b else f"{a}>{b}" for a, b in pairs]
    src = [idx[(a, a)] for a, b in pairs]
    tgt = [idx[(b, b)] for a, b in pairs]
    comp = {(idx[(b, c)], idx[(a, b)]): idx[(a, c)]
            for (b, c) in pairs for (a, b2) in pairs if b2 == b}
    return FiniteStrictNCat(1, names, [src], [tgt], [comp]).lift(n)


def standard_object(kind: str, n: int, k: Optional[int] = None, S=None) -> FiniteStrictNCat:
    """Named objects: ``cell``, ``boundary``, ``walking_iso``, ``simplex``,
    ``empty`` and ``K`` (the categorical realization of the contracted
    3-simplex, computed as a pushout)."""
    if kind == "cell":
        return cell(_need(k), n)
    if kind == "boundary":
        return boundary(_need(k), n)
    if kind in ("walking_iso", "E"):
        return walking_iso(n)
    if kind == "simplex":
        return simplex(S if S is not None else _need(k), n)
    if kind == "empty":
        return empty(n)
    if kind == "K":
        if n < 1:
            raise DimensionError("K needs ambient dimension >= 1")
        from ..colimits import k_diagram, pushout
        return pushout(k_diagram(n)).obj
    raise InputError(f"unknown standard object {kind!r}")


def _need(k):
    if k is None:
        raise InputError("parameter k is required")
    return k


# ---------------------------------------------------------------------------
# limits


def product(X: FiniteStrictNCat, Y: FiniteStrictNCat):
    """Cellwise product; returns ``(X × Y, pr_X, pr_Y)``."""
    X, Y = common_dim(X, Y)
    pairs = list(iproduct(range(len(X.cells)), range(len(Y.cells))))
    return _on_pairs(X, Y, pairs)


def fiber_product(f: FunctorMap, g: FunctorMap):
    """``X ×_Z Y`` for ``f: X -> Z``, ``g: Y -> Z``; returns object and projections."""
    if f.target.cells != g.target.cells:
        raise InputError("fiber product needs a common codomain")
    X, Y = common_dim(f.source, g.source)
    fa, ga = f.assignment, g.assignment
    pairs = [(x, y) for x in range(len(X.cells)) for y in range(len(Y.cells)) if fa[x] == ga[y]]
    return _on_pairs(X, Y, pairs)


def _on_pairs(X, Y, pairs):
    idx = {p: k for k, p in enumerate(pairs)}
    names = [f"({X.cells[x]},{Y.cells[y]})" for x, y in pairs]
    src, tgt, comp = [], [], []
    for k in range(X.n):
        xs, ys, xt, yt = X.src[k], Y.src[k], X.tgt[k], Y.tgt[k]
        src.append([idx[(xs[x], ys[y])] for x, y in pairs])
        tgt.append([idx[(xt[x], yt[y])] for x, y in pairs])
        cx, cy = X.comp[k], Y.comp[k]
        # composable pairs: index by (tgt_x, tgt_y)
        by_t = {}
        for p in pairs:
            by_t.setdefault((xt[p[0]], yt[p[1]]), []).append(p)
        c = {}
        for a in pairs:
            for b in by_t.get((xs[a[0]], ys[a[1]]), ()):
                c[(idx[a], idx[b])] = idx[(cx[(a[0], b[0])], cy[(a[1], b[1])])]
        comp.append(c)
    P = FiniteStrictNCat(X.n, names, src, tgt, comp)
    pr1 = FunctorMap(P, X, [x for x, _ in pairs])
    pr2 = FunctorMap(P, Y, [y for _, y in pairs])
    return P, pr1, pr2


def pair_map(f: FunctorMap, g: FunctorMap, P: FiniteStrictNCat, pr1: FunctorMap,
             pr2: FunctorMap) -> FunctorMap:
    """The map into a (fiber) product induced by ``f`` and ``g``."""
    lookup = {(a, b): k for k, (a, b) in enumerate(zip(pr1.assignment, pr2.assignment))}
    try:
        return FunctorMap(f.source, P, [lookup[(a, b)] for a, b in zip(f.assignment, g.assignment)])
    except KeyError:
        raise InputError("maps do not land in the fiber product") from None


def coproduct(X: FiniteStrictNCat, Y: FiniteStrictNCat):
    """Disjoint union with its two inclusions."""
    X, Y = common_dim(X, Y)
    m = len(X.cells)
    taken = set(X.cells)
    names = list(X.cells)
    for c in Y.cells:
        nm = c
        while nm in taken:
            nm = nm + "'"
        taken.add(nm)
        names.append(nm)
    src = [list(X.src[k]) + [v + m for v in Y.src[k]] for k in range(X.n)]
    tgt = [list(X.tgt[k]) + [v + m for v in Y.tgt[k]] for k in range(X.n)]
    comp = []
    for k in range(X.n):
        c = dict(X.comp[k])
        c.update({(a + m, b + m): v + m for (a, b), v in Y.comp[k].items()})
        comp.append(c)
    S = FiniteStrictNCat(X.n, names, src, tgt, comp)
    return (S, FunctorMap(X, S, range(m)),
            FunctorMap(Y, S, range(m, m + len(Y.cells))))


# ---------------------------------------------------------------------------
# sub-objects and opposites


def induced_sub(X: FiniteStrictNCat, keep: Iterable[int]) -> Tuple[FiniteStrictNCat, FunctorMap]:
    """The substructure on a set of cell indices closed under src/tgt/comp."""
    keep = sorted(set(keep))
    new = {x: k for k, x in enumerate(keep)}
    src, tgt, comp = [], [], []
    for k in range(X.n):
        try:
            src.append([new[X.src[k][x]] for x in keep])
            tgt.append([new[X.tgt[k][x]] for x in keep])
            comp.append({(new[a], new[b]): new[z] for (a, b), z in X.comp[k].items()
                         if a in new and b in new})
        except KeyError:
            raise InputError("cell subset is not closed under source/target") from None
        if any(z not in new for (a, b), z in X.comp[k].items() if a in new and b in new):
            raise InputError("cell subset is not closed under composition")
    sub = FiniteStrictNCat(X.n, [X.cells[x] for x in keep], src, tgt, comp)
    return sub, FunctorMap(sub, X, keep)


def max_sub_k(X: FiniteStrictNCat, k: int) -> FiniteStrictNCat:
    """``j_k X``: the full substructure on cells of dimension <= k."""
    if k < 0:
        raise InputError("k must be nonnegative")
    return induced_sub(X, [x for x, d in enumerate(X.dims) if d <= k])[0]


def opposite_r(X: FiniteStrictNCat, I: Sequence[int]) -> FiniteStrictNCat:
    """``r_I X``: reverse the structures at the levels where ``I`` has a 1."""
    I = tuple(I)
    if len(I) != X.n:
        raise InputError(f"flip vector must have length {X.n}")
    src, tgt, comp = [], [], []
    for k in range(X.n):
        if I[k]:
            src.append(X.tgt[k])
            tgt.append(X.src[k])
            comp.append({(y, x): z for (x, y), z in X.comp[k].items()})
        else:
            src.append(X.src[k])
            tgt.append(X.tgt[k])
            comp.append(X.comp[k])
    return FiniteStrictNCat(X.n, X.cells, src, tgt, comp)


def hom_category(X: FiniteStrictNCat, a: str, b: str) -> FiniteStrictNCat:
    """``hom(a, b)`` as an (n-1)-category: cells from a to b at level 1,
    carrying structures 2..n."""
    if X.n < 1:
        raise DimensionError("hom-categories need n >= 1")
    ia, ib = X.index[a], X.index[b]
    keep = [x for x in range(len(X.cells)) if X.src[0][x] == ia and X.tgt[0][x] == ib]
    new = {x: k for k, x in enumerate(keep)}
    src = [[new[X.src[k][x]] for x in keep] for k in range(1, X.n)]
    tgt = [[new[X.tgt[k][x]] for x in keep] for k in range(1, X.n)]
    comp = [{(new[p], new[q]): new[z] for (p, q), z in X.comp[k].items() if p in new}
            for k in range(1, X.n)]
    return FiniteStrictNCat(X.n - 1, [X.cells[x] for x in keep], src, tgt, comp)


def desuspend(X: FiniteStrictNCat):
    """If ``X ≅ σY`` return ``(Y, top, bottom, indices of Y's cells in X)``,
    else None.  Requires exactly two objects and all other cells from top to
    bottom."""
    if X.n < 1:
        return None
    objs = X.objects
    if len(objs) != 2:
        return None
    rest = [x for x in range(len(X.cells)) if x not in objs]
    if not rest:
        # ∂C_1 = σ(∅); orientation is not determined, take index order
        top, bot = objs
    else:
        top, bot = X.src[0][rest[0]], X.tgt[0][rest[0]]
        if top == bot:
            return None
    if any(X.src[0][x] != top or X.tgt[0][x] != bot for x in rest):
        return None
    if (bot, top) in X.comp[0] or any(X.src[0][x] == bot and X.tgt[0][x] == top for x in rest):
        return None
    Y = hom_category(X, X.cells[top], X.cells[bot])
    return Y, top, bot, rest
