"""Maps between cells, and fiber products of cells as iterated pushouts.

A map of cells ``C_a -> C_b`` either factors through ``C_0`` or is a
suspension.  Peeling common suspensions off a cospan of cells leaves a pair
in which one leg hits a single object; the fiber of the other leg over that
object is empty, a point, or a cell, and the pullback is assembled from it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..errors import InputError
from .constructions import (cell, desuspend, fiber_product, induced_sub, pair_map, product,
                            suspend_map, suspension)
from .functors import FunctorMap, is_iso
from .ncat import FiniteStrictNCat, empty


def endpoints(C: FiniteStrictNCat):
    """Outer source and target objects of a cell ``C_k`` (k >= 1), by index."""
    return len(C.cells) - 2, len(C.cells) - 1


def cell_dim(C: FiniteStrictNCat) -> Optional[int]:
    """k if ``C ≅ C_k``, else None."""
    if not C.cells:
        return None
    k = max(C.dims)
    if len(C.cells) != 2 * k + 1:
        return None
    return k if is_iso(C, cell(k, C.n)) else None


def face(i: int, j: int, side: str, n: int) -> FunctorMap:
    """The inclusion ``C_i -> C_j`` of the source (``side='s'``) or target
    (``'t'``) i-face, for i < j <= n."""
    if not 0 <= i < j <= n:
        raise InputError("need 0 <= i < j <= n")
    inner = cell(j - i, n - i)
    top, bot = endpoints(inner)
    f = FunctorMap(cell(0, n - i), inner, [top if side == "s" else bot])
    return suspend_map(f, i)


def collapse(j: int, i: int, n: int) -> FunctorMap:
    """The nondegenerate map ``σ^i(C_{j-i} -> C_0): C_j -> C_i``."""
    if not 0 <= i <= j <= n:
        raise InputError("need 0 <= i <= j <= n")
    f = FunctorMap.constant(cell(j - i, n - i), cell(0, n - i), "*")
    return suspend_map(f, i)


def desuspend_map(f: FunctorMap) -> Optional[FunctorMap]:
    """``g`` with ``f = σ(g)``, or None if ``f`` is not a suspension."""
    ds, dt = desuspend(f.source), desuspend(f.target)
    if ds is None or dt is None:
        return None
    Ys, ts, bs, rest_s = ds
    Yt, tt, bt, rest_t = dt
    a = f.assignment
    if a[ts] != tt or a[bs] != bt:
        return None
    pos = {x: p for p, x in enumerate(rest_t)}
    try:
        return FunctorMap(Ys, Yt, [pos[a[x]] for x in rest_s])
    except KeyError:
        return None


# ---------------------------------------------------------------------------
# the product of two cells as a pushout of wedges


@dataclass
class ProductDecomposition:
    """``C_a × C_b ≅ (C_a ∪^{C_0} C_b) ∪^{σ(C_{a-1} × C_{b-1})} (C_b ∪^{C_0} C_a)``."""

    a: int
    b: int
    w1: object            # Pushout C_a ∪ C_b
    w2: object            # Pushout C_b ∪ C_a
    glue1: FunctorMap     # σ(C_{a-1} × C_{b-1}) -> W1
    glue2: FunctorMap     # σ(C_{a-1} × C_{b-1}) -> W2
    product: FiniteStrictNCat
    to_product1: FunctorMap  # W1 -> C_a × C_b
    to_product2: FunctorMap  # W2 -> C_a × C_b
    total: object = None     # Pushout W1 ∪^G W2, filled by assemble()
    comparison: Optional[FunctorMap] = None

    def assemble(self):
        from ..colimits import glue
        self.total = glue(self.glue1, self.glue2)
        self.comparison = self.total.induced(self.to_product1, self.to_product2)
        return self

    def verified(self) -> bool:
        if self.total is None:
            self.assemble()
        return self.comparison.is_bijective() and is_iso(self.total.obj, self.product)


def product_decomposition(a: int, b: int, n: int) -> ProductDecomposition:
    from ..colimits import wedge_at_endpoints
    if not (1 <= a <= n and 1 <= b <= n):
        raise InputError("need 1 <= a, b <= n")
    Ca, Cb = cell(a, n), cell(b, n)
    w1 = wedge_at_endpoints(Ca, Cb)
    w2 = wedge_at_endpoints(Cb, Ca)
    P0, pr1, pr2 = product(cell(a - 1, n - 1), cell(b - 1, n - 1))
    G = suspension(P0)
    gt, gb = len(G.cells) - 2, len(G.cells) - 1
    ta, ba = endpoints(Ca)
    tb, bb = endpoints(Cb)

    def leg(W, first, second, firsts, seconds):
        # p -> comp_1(second(σ seconds(p)), first(σ firsts(p)))
        out = []
        c1 = W.obj.comp[0]
        for p in range(len(P0.cells)):
            x = first.assignment[firsts.assignment[p]]
            y = second.assignment[seconds.assignment[p]]
            out.append(c1[(y, x)])
        fa, fb = first.assignment, second.assignment
        out.append(fa[endpoints(first.source)[0]])
        out.append(fb[endpoints(second.source)[1]])
        return FunctorMap(G, W.obj, out)

    g1 = leg(w1, w1.left, w1.right, pr1, pr2)
    g2 = leg(w2, w2.left, w2.right, pr2, pr1)
    P, q1, q2 = product(Ca, Cb)

    def const(X, Y, idx):
        return FunctorMap(X, Y, [idx] * len(X.cells))

    idA, idB = FunctorMap.identity(Ca), FunctorMap.identity(Cb)
    u1 = pair_map(idA, const(Ca, Cb, tb), P, q1, q2)
    v1 = pair_map(const(Cb, Ca, ba), idB, P, q1, q2)
    u2 = pair_map(const(Cb, Ca, ta), idB, P, q1, q2)
    v2 = pair_map(idA, const(Ca, Cb, bb), P, q1, q2)
    phi1 = w1.induced(u1, v1)
    phi2 = w2.induced(u2, v2)
    return ProductDecomposition(a, b, w1, w2, g1, g2, P, phi1, phi2)


# ---------------------------------------------------------------------------
# pullbacks of cells


@dataclass
class CellPullback:
    m: int                      # common suspension depth
    fiber: FiniteStrictNCat
    fiber_dim: Optional[int]    # None when the fiber is empty
    case: str                   # disjoint / point / degenerate / genuine
    pullback: FiniteStrictNCat
    recipe: FiniteStrictNCat
    verified: bool
    swapped: bool = False


def decompose_cell_pullback(phi: FunctorMap, psi: FunctorMap) -> CellPullback:
    """Classify ``C_i ×_{C_j} C_k`` and rebuild it from cells and pushouts."""
    for f in (phi, psi):
        if cell_dim(f.source) is None or cell_dim(f.target) is None:
            raise InputError("decompose_cell_pullback needs maps between cells")
    if phi.target != psi.target:
        raise InputError("maps must share their codomain")
    actual = fiber_product(phi, psi)[0]
    f, g, m = phi, psi, 0
    while True:
        df, dg = desuspend_map(f), desuspend_map(g)
        if df is None or dg is None:
            break
        f, g, m = df, dg, m + 1
    swapped = False
    if len(set(f.assignment)) != 1:
        f, g, swapped = g, f, True
    if len(set(f.assignment)) != 1:
        raise InputError("neither leg factors through C_0 after desuspension")
    o = f.assignment[0]
    keep = [x for x, v in enumerate(g.assignment) if v == o]
    F = induced_sub(g.source, keep)[0] if keep else empty(g.source.n)
    a = cell_dim(f.source)
    ell = cell_dim(F) if keep else None
    if not keep:
        case, core = "disjoint", empty(f.source.n)
    elif ell == 0:
        case, core = "point", f.source
    elif a == 0:
        case, core = "degenerate", F
    else:
        case = "genuine"
        dec = product_decomposition(a, ell, f.source.n).assemble()
        core = dec.total.obj
    recipe = core
    for _ in range(m):
        recipe = suspension(recipe)
    return CellPullback(m, F, ell, case, actual, recipe, is_iso(recipe, actual), swapped)
