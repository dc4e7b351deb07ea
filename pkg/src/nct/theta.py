"""Θ_n as an iterated wreath product of Δ, and the grid functor δ_n from Δ^×n.

Objects are trees ``([m]; o_1, ..., o_m)``; a level-1 object is a simplex
``[m]`` whose parts are implicit points.  Morphisms ``(φ; φ_ij)`` carry a
monotone map and one lower-level component for each ``0 < i <= m`` and
``φ(i-1) < j <= φ(i)``.

Realization builds the strict n-category directly: objects ``0..m`` and,
for ``a < b``, the hom-category ``R(o_{a+1}) × ... × R(o_b)``, composed by
concatenation.  :func:`realize_by_wedges` builds the same object from
suspensions and endpoint wedges and serves as an independent check.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement, product as iproduct
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .errors import InputError
from .kernel.functors import FunctorMap, fun_enum
from .kernel.ncat import FiniteStrictNCat, discrete


@dataclass(frozen=True, order=True)
class ThetaObj:
    level: int
    m: int
    parts: Tuple["ThetaObj", ...] = ()

    def __post_init__(self):
        if self.level < 1 or self.m < 0:
            raise InputError("invalid Θ object")
        if self.level == 1:
            if self.parts:
                raise InputError("level-1 objects have no parts")
        elif len(self.parts) != self.m or any(p.level != self.level - 1 for p in self.parts):
            raise InputError(f"[{self.m}] needs {self.m} parts of level {self.level - 1}")

    def __str__(self):
        if self.level == 1 or self.m == 0:
            return f"[{self.m}]"
        return f"[{self.m}; " + ", ".join(str(p) for p in self.parts) + "]"

    __repr__ = __str__

    @property
    def size(self) -> int:
        """Bracket-node count; a level-1 ``[m]`` counts its m+1 vertices."""
        if self.level == 1:
            return self.m + 1
        return 1 + sum(p.size for p in self.parts)

    def part(self, i: int) -> Optional["ThetaObj"]:
        """``o_i`` for ``1 <= i <= m`` (None at level 1)."""
        return None if self.level == 1 else self.parts[i - 1]


def theta(level: int, m: int, *parts: ThetaObj) -> ThetaObj:
    if level > 1 and not parts and m > 0:
        return iota_obj(m, level)
    return ThetaObj(level, m, tuple(parts))


def point(level: int) -> ThetaObj:
    return ThetaObj(level, 0, ())


_TOKEN = re.compile(r"\s*(\[|\]|;|,|\d+)")


def parse_theta(text: str, level: int) -> ThetaObj:
    """Parse ``[m]`` / ``[m; o_1, ..., o_m]``; whitespace is ignored.  A bare
    ``[m]`` above level 1 means ``([m]; [0], ..., [0])``."""
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt:
            raise InputError(f"bad Θ syntax at {text[pos:]!r}")
        toks.append(mt.group(1))
        pos = mt.end()
    toks.append(None)
    at = 0

    def expect(t):
        nonlocal at
        if toks[at] != t:
            raise InputError(f"expected {t!r} in {text!r}")
        at += 1

    def obj(lv):
        nonlocal at
        expect("[")
        if toks[at] is None or not toks[at].isdigit():
            raise InputError(f"expected an integer in {text!r}")
        m = int(toks[at])
        at += 1
        parts = []
        if toks[at] == ";":
            if lv == 1:
                raise InputError("level-1 objects have no parts")
            at += 1
            parts.append(obj(lv - 1))
            while toks[at] == ",":
                at += 1
                parts.append(obj(lv - 1))
        expect("]")
        if lv > 1 and not parts:
            return iota_obj(m, lv)
        return ThetaObj(lv, m, tuple(parts))

    o = obj(level)
    if toks[at] is not None:
        raise InputError(f"trailing input in {text!r}")
    return o


# ---------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True)
class ThetaMor:
    source: ThetaObj
    target: ThetaObj
    phi: Tuple[int, ...]
    comps: Tuple[Tuple[Tuple[int, int], "ThetaMor"], ...] = ()

    def comp(self, i: int, j: int) -> "ThetaMor":
        return dict(self.comps)[(i, j)]

    def check(self) -> "ThetaMor":
        a, b = self.source, self.target
        if a.level != b.level or len(self.phi) != a.m + 1:
            raise InputError("ill-typed Θ morphism")
        if any(not 0 <= v <= b.m for v in self.phi) or list(self.phi) != sorted(self.phi):
            raise InputError("φ is not a monotone map")
        if a.level > 1:
            want = [(i, j) for i in range(1, a.m + 1)
                    for j in range(self.phi[i - 1] + 1, self.phi[i] + 1)]
            if [k for k, _ in self.comps] != want:
                raise InputError("component set does not match φ")
            for (i, j), c in self.comps:
                if c.source != a.part(i) or c.target != b.part(j):
                    raise InputError("component has the wrong type")
                c.check()
        return self

    def to_json(self):
        return {"phi": list(self.phi),
                "components": [[i, j, c.to_json()] for (i, j), c in self.comps]}

    def __str__(self):
        if not self.comps:
            return "<" + ",".join(map(str, self.phi)) + ">"
        inner = " ".join(f"{i}{j}:{c}" for (i, j), c in self.comps)
        return "<" + ",".join(map(str, self.phi)) + " | " + inner + ">"

    __repr__ = __str__


def theta_identity(o: ThetaObj) -> ThetaMor:
    phi = tuple(range(o.m + 1))
    comps = ()
    if o.level > 1:
        comps = tuple(((i, i), theta_identity(o.part(i))) for i in range(1, o.m + 1))
    return ThetaMor(o, o, phi, comps)


def theta_compose(g: ThetaMor, f: ThetaMor) -> ThetaMor:
    """``g ∘ f``."""
    if f.target != g.source:
        raise InputError("morphisms are not composable")
    phi = tuple(g.phi[v] for v in f.phi)
    a = f.source
    comps = []
    if a.level > 1:
        fc, gc = dict(f.comps), dict(g.comps)
        for i in range(1, a.m + 1):
            for j in range(f.phi[i - 1] + 1, f.phi[i] + 1):
                for l in range(g.phi[j - 1] + 1, g.phi[j] + 1):
                    comps.append(((i, l), theta_compose(gc[(j, l)], fc[(i, j)])))
        comps.sort(key=lambda e: e[0])
    return ThetaMor(a, g.target, phi, tuple(comps))


def monotone_maps(m: int, k: int) -> List[Tuple[int, ...]]:
    """All monotone maps ``[m] -> [k]`` in lexicographic order."""
    return [tuple(c) for c in combinations_with_replacement(range(k + 1), m + 1)]


@lru_cache(maxsize=None)
def theta_hom(a: ThetaObj, b: ThetaObj) -> Tuple[ThetaMor, ...]:
    if a.level != b.level:
        raise InputError("objects live at different levels")
    out = []
    for phi in monotone_maps(a.m, b.m):
        if a.level == 1:
            out.append(ThetaMor(a, b, phi))
            continue
        slots = [(i, j) for i in range(1, a.m + 1) for j in range(phi[i - 1] + 1, phi[i] + 1)]
        choices = [theta_hom(a.part(i), b.part(j)) for i, j in slots]
        for pick in iproduct(*choices):
            out.append(ThetaMor(a, b, phi, tuple(zip(slots, pick))))
    return tuple(out)


# ---------------------------------------------------------------------------
# enumeration, suspension, ι, δ


def theta_enumerate_objects(n: int, size_bound: int) -> List[ThetaObj]:
    """All level-n objects of size at most ``size_bound``, sorted by (size, text)."""
    out = list(_objects_upto(n, size_bound))
    return sorted(out, key=lambda o: (o.size, str(o)))


@lru_cache(maxsize=None)
def _objects_upto(n: int, bound: int) -> Tuple[ThetaObj, ...]:
    if bound < 1:
        return ()
    if n == 1:
        return tuple(ThetaObj(1, m) for m in range(bound))
    lower = _objects_upto(n - 1, bound - 1)
    out = []

    def grow(budget, acc):
        out.append(ThetaObj(n, len(acc), tuple(acc)))
        for o in lower:
            if o.size <= budget:
                grow(budget - o.size, acc + [o])

    grow(bound - 1, [])
    return tuple(out)


def sigma_obj(o: ThetaObj) -> ThetaObj:
    """``σ(o) = ([1]; o)``."""
    return ThetaObj(o.level + 1, 1, (o,))


def iota_obj(m: int, level: int) -> ThetaObj:
    """``ι([m]) = ([m]; [0], ..., [0])``."""
    if level == 1:
        return ThetaObj(1, m)
    return ThetaObj(level, m, tuple(point(level - 1) for _ in range(m)))


@dataclass(frozen=True, order=True)
class MultiIndex:
    """An object ``[m_1] × ... × [m_n]`` of Δ^×n."""

    ms: Tuple[int, ...]

    def __post_init__(self):
        if not self.ms or any(v < 0 for v in self.ms):
            raise InputError("multi-index entries must be nonnegative")

    @property
    def n(self):
        return len(self.ms)

    def __str__(self):
        return "×".join(f"[{v}]" for v in self.ms)

    __repr__ = __str__


def mi(*ms: int) -> MultiIndex:
    return MultiIndex(tuple(ms))


@dataclass(frozen=True)
class DeltaMor:
    """A morphism of Δ^×n: one monotone map per coordinate."""

    source: MultiIndex
    target: MultiIndex
    maps: Tuple[Tuple[int, ...], ...]


def delta_hom(a: MultiIndex, b: MultiIndex) -> List[DeltaMor]:
    return [DeltaMor(a, b, maps) for maps in
            iproduct(*[monotone_maps(x, y) for x, y in zip(a.ms, b.ms)])]


def delta_compose(g: DeltaMor, f: DeltaMor) -> DeltaMor:
    return DeltaMor(f.source, g.target,
                    tuple(tuple(gm[v] for v in fm) for gm, fm in zip(g.maps, f.maps)))


def delta_window(n: int, total: int) -> List[MultiIndex]:
    """Multi-indices with coordinate sum at most ``total``."""
    out = [MultiIndex(ms) for ms in iproduct(range(total + 1), repeat=n) if sum(ms) <= total]
    return sorted(out, key=lambda m: (sum(m.ms), m.ms))


def delta_n(m: MultiIndex) -> ThetaObj:
    """``δ_n([k_1] × ... × [k_n]) = ([k_n]; g, ..., g)`` with
    ``g = δ_{n-1}([k_1] × ... × [k_{n-1}])`` repeated k_n times."""
    ks = m.ms
    if len(ks) == 1:
        return ThetaObj(1, ks[0])
    g = delta_n(MultiIndex(ks[:-1]))
    return ThetaObj(len(ks), ks[-1], (g,) * ks[-1])


def delta_n_mor(f: DeltaMor) -> ThetaMor:
    a, b = delta_n(f.source), delta_n(f.target)
    phi = f.maps[-1]
    if len(f.maps) == 1:
        return ThetaMor(a, b, phi)
    inner = delta_n_mor(DeltaMor(MultiIndex(f.source.ms[:-1]), MultiIndex(f.target.ms[:-1]),
                                 f.maps[:-1]))
    comps = tuple(((i, j), inner) for i in range(1, a.m + 1)
                  for j in range(phi[i - 1] + 1, phi[i] + 1))
    return ThetaMor(a, b, phi, comps)


# ---------------------------------------------------------------------------
# realization


@dataclass
class _Real:
    """Realization as nested data: objects 0..m, and for a<b the hom product."""

    cat: FiniteStrictNCat
    # cell index by key: ("o", a) or ("c", a, b, inner indices tuple)
    key_index: Dict[tuple, int] = field(default_factory=dict)


@lru_cache(maxsize=None)
def _realize(o: Optional[ThetaObj], n: int) -> _Real:
    """Realize in ambient dimension n; ``None`` is the level-0 point."""
    if o is None:
        X = discrete(n, ["*"])
        return _Real(X, {("pt",): 0})
    parts = [_realize(o.part(i), n - 1) if o.level > 1 else _realize(None, n - 1)
             for i in range(1, o.m + 1)]
    keys: List[tuple] = [("o", a) for a in range(o.m + 1)]
    names = [str(a) for a in range(o.m + 1)]
    flat = o.level == 1
    for a in range(o.m + 1):
        for b in range(a + 1, o.m + 1):
            homs = [parts[i - 1].cat for i in range(a + 1, b + 1)]
            for t in iproduct(*[range(len(h.cells)) for h in homs]):
                keys.append(("c", a, b, t))
                if flat:
                    names.append(f"{a}>{b}")
                else:
                    names.append(f"{a}>{b}(" + ",".join(h.cells[x] for h, x in zip(homs, t)) + ")")
    index = {k: i for i, k in enumerate(keys)}
    size = len(keys)
    src = [[0] * size for _ in range(n)]
    tgt = [[0] * size for _ in range(n)]
    comp = [dict() for _ in range(n)]
    for idx, k in enumerate(keys):
        if k[0] == "o":
            for lv in range(n):
                src[lv][idx] = tgt[lv][idx] = idx
            for lv in range(n):
                comp[lv][(idx, idx)] = idx
            continue
        _, a, b, t = k
        src[0][idx], tgt[0][idx] = index[("o", a)], index[("o", b)]
        homs = [parts[i - 1].cat for i in range(a + 1, b + 1)]
        for lv in range(1, n):
            src[lv][idx] = index[("c", a, b, tuple(h.src[lv - 1][x] for h, x in zip(homs, t)))]
            tgt[lv][idx] = index[("c", a, b, tuple(h.tgt[lv - 1][x] for h, x in zip(homs, t)))]
        # level 1: units and concatenation
        comp[0][(index[("o", b)], idx)] = idx
        comp[0][(idx, index[("o", a)])] = idx
    for k1 in keys:
        if k1[0] != "c":
            continue
        _, b, c, t2 = k1
        for k0 in keys:
            if k0[0] == "c" and k0[2] == b:
                _, a, _, t1 = k0
                comp[0][(index[k1], index[k0])] = index[("c", a, c, t1 + t2)]
    # higher levels act componentwise inside each hom
    for a in range(o.m + 1):
        for b in range(a + 1, o.m + 1):
            homs = [parts[i - 1].cat for i in range(a + 1, b + 1)]
            for lv in range(1, n):
                tabs = [h.comp[lv - 1] for h in homs]
                pairs = [list(tab.items()) for tab in tabs]
                for combo in iproduct(*pairs):
                    x = tuple(e[0][0] for e in combo)
                    y = tuple(e[0][1] for e in combo)
                    z = tuple(e[1] for e in combo)
                    comp[lv][(index[("c", a, b, x)], index[("c", a, b, y)])] = index[("c", a, b, z)]
    X = FiniteStrictNCat(n, names, src, tgt, comp)
    return _Real(X, index)


def realize(o: ThetaObj, n: Optional[int] = None) -> FiniteStrictNCat:
    """The gaunt n-category ``i(o)``; ambient dimension defaults to ``o.level``."""
    n = o.level if n is None else n
    if n < o.level:
        raise InputError("ambient dimension below the object's level")
    return _realize(o, n).cat


def realize_mor(f: ThetaMor, n: Optional[int] = None) -> FunctorMap:
    """The functor ``i(f): i(a) -> i(b)``."""
    n = f.source.level if n is None else n
    return FunctorMap(realize(f.source, n), realize(f.target, n), _realize_mor(f, n))


@lru_cache(maxsize=None)
def _realize_mor(f: Optional[ThetaMor], n: int) -> Tuple[int, ...]:
    a, b = f.source, f.target
    ra, rb = _realize(a, n), _realize(b, n)
    phi = f.phi
    inner = {}
    if a.level > 1:
        inner = {ij: _realize_mor(c, n - 1) for ij, c in f.comps}
    out = [0] * len(ra.cat.cells)
    for k, idx in ra.key_index.items():
        if k[0] == "o":
            out[idx] = rb.key_index[("o", phi[k[1]])]
            continue
        _, p, q, t = k
        if phi[p] == phi[q]:
            out[idx] = rb.key_index[("o", phi[p])]
            continue
        comps = []
        for j in range(phi[p] + 1, phi[q] + 1):
            i = next(i for i in range(p + 1, q + 1) if phi[i - 1] < j <= phi[i])
            x = t[i - p - 1]
            comps.append(inner[(i, j)][x] if a.level > 1 else 0)
        out[idx] = rb.key_index[("c", phi[p], phi[q], tuple(comps))]
    return tuple(out)


def realize_by_wedges(o: ThetaObj, n: Optional[int] = None) -> FiniteStrictNCat:
    """``σ(i(o_1)) ∪^{C_0} ... ∪^{C_0} σ(i(o_m))`` computed with the pushout engine."""
    from .colimits import wedge_many
    from .kernel.constructions import suspension
    n = o.level if n is None else n
    if o.m == 0:
        return discrete(n, ["0"])
    pieces = []
    for i in range(1, o.m + 1):
        inner = realize_by_wedges(o.part(i), n - 1) if o.level > 1 else discrete(n - 1, ["*"])
        pieces.append(suspension(inner))
    return wedge_many(pieces)


def realize_delta(m: MultiIndex, n: Optional[int] = None) -> FiniteStrictNCat:
    return realize(delta_n(m), n)


# ---------------------------------------------------------------------------
# maps to cells


@dataclass
class CellMapClass:
    degenerate: bool
    through: Optional[int] = None          # j of the witnessing C_j
    inclusion: Optional[FunctorMap] = None


def _cell_index(Ck: FiniteStrictNCat) -> Optional[int]:
    from .kernel.constructions import cell
    from .kernel.functors import is_iso
    top = max(Ck.dims) if Ck.cells else -1
    if top < 0 or len(Ck.cells) != 2 * top + 1:
        return None
    return top if is_iso(Ck, cell(top, Ck.n)) else None


def classify_map_to_cell(f) -> CellMapClass:
    """Degenerate iff ``f`` factors through an inclusion ``C_j -> C_k`` with j < k."""
    if isinstance(f, ThetaMor):
        f = realize_mor(f)
    from .kernel.constructions import cell
    k = _cell_index(f.target)
    if k is None:
        raise InputError("codomain is not a cell")
    image = set(f.assignment)
    for j in range(k):
        for inc in fun_enum(cell(j, f.target.n), f.target):
            if inc.is_injective() and image <= set(inc.assignment):
                return CellMapClass(True, j, inc)
    return CellMapClass(False)


# ---------------------------------------------------------------------------
# grids


@dataclass
class GridRetract:
    grid: MultiIndex
    section: ThetaMor      # o -> δ_n(grid)
    retraction: ThetaMor   # δ_n(grid) -> o

    def verify(self) -> bool:
        o = self.section.source
        return theta_compose(self.retraction, self.section) == theta_identity(o)


def _grid_pair(src: MultiIndex, dst: MultiIndex) -> Tuple[ThetaMor, ThetaMor]:
    """δ_n of the coordinatewise inclusion/collapse pair ``src ⇄ dst``."""
    inc = tuple(tuple(range(a + 1)) for a in src.ms)
    col = tuple(tuple(min(i, a) for i in range(b + 1)) for a, b in zip(src.ms, dst.ms))
    return (delta_n_mor(DeltaMor(src, dst, inc)), delta_n_mor(DeltaMor(dst, src, col)))


def grid_retract(o: ThetaObj) -> GridRetract:
    """Exhibit ``o`` as a retract of a grid ``δ_n(k)``."""
    if o.level == 1:
        ident = theta_identity(o)
        return GridRetract(MultiIndex((o.m,)), ident, ident)
    subs = [grid_retract(p) for p in o.parts]
    width = o.level - 1
    k = tuple(max((s.grid.ms[c] for s in subs), default=0) for c in range(width))
    K = MultiIndex(k)
    g = delta_n(K)
    grid = MultiIndex(k + (o.m,))
    big = delta_n(grid)
    assert all(p == g for p in big.parts)
    sec, ret = [], []
    for i, s in enumerate(subs, start=1):
        up, down = _grid_pair(s.grid, K)
        sec.append(((i, i), theta_compose(up, s.section)))
        ret.append(((i, i), theta_compose(s.retraction, down)))
    phi = tuple(range(o.m + 1))
    return GridRetract(grid, ThetaMor(o, big, phi, tuple(sec)), ThetaMor(big, o, phi, tuple(ret)))


# ---------------------------------------------------------------------------
# grids built from wedges, with their maps


@dataclass
class _Grid:
    cat: FiniteStrictNCat
    inner: Optional["_Grid"]
    legs: Tuple[FunctorMap, ...]      # piece t -> cat, t = 1..k
    vertices: Tuple[int, ...]         # object index of vertex 0..k
    stages: Tuple = ()                # successive wedge pushouts


@lru_cache(maxsize=None)
def _grid(ms: Tuple[int, ...], n: int) -> _Grid:
    from .colimits import wedge_at_endpoints
    from .kernel.constructions import suspension
    if not ms:
        return _Grid(discrete(n, ["*"]), None, (), (0,))
    inner = _grid(ms[:-1], n - 1)
    k = ms[-1]
    if k == 0:
        return _Grid(discrete(n, ["0"]), inner, (), (0,))
    piece = suspension(inner.cat)
    top, bot = len(piece.cells) - 2, len(piece.cells) - 1
    cat, legs, stages = piece, [FunctorMap.identity(piece)], []
    for _ in range(k - 1):
        po = wedge_at_endpoints(cat, piece)
        legs = [l.then(po.left) for l in legs] + [po.right]
        stages.append(po)
        cat = po.obj
    verts = [legs[0].assignment[top]] + [l.assignment[bot] for l in legs]
    return _Grid(cat, inner, tuple(legs), tuple(verts), tuple(stages))


def grid_by_wedges(m: MultiIndex, n: Optional[int] = None) -> FiniteStrictNCat:
    """``δ_n(m)`` assembled from suspensions and endpoint wedges."""
    return _grid(m.ms, m.n if n is None else n).cat


@lru_cache(maxsize=None)
def _grid_mor(maps: Tuple[Tuple[int, ...], ...], src: Tuple[int, ...], dst: Tuple[int, ...],
              n: int) -> Tuple[int, ...]:
    from .kernel.constructions import suspend_map
    A, B = _grid(src, n), _grid(dst, n)
    if not src:
        return (0,)
    phi = maps[-1]
    if src[-1] == 0:
        return (B.vertices[phi[0]],)
    g = FunctorMap(A.inner.cat, B.inner.cat, _grid_mor(maps[:-1], src[:-1], dst[:-1], n - 1))
    sg = suspend_map(g).assignment
    piece = A.legs[0].source
    top, bot = len(piece.cells) - 2, len(piece.cells) - 1
    c1 = B.cat.comp[0] if B.cat.n else {}

    def on_piece(t):
        lo, hi = phi[t - 1], phi[t]
        out = []
        for x in range(len(piece.cells)):
            if x == top:
                out.append(B.vertices[lo])
            elif x == bot or lo == hi:
                out.append(B.vertices[hi])
            else:
                v = B.legs[lo].assignment[sg[x]]
                for j in range(lo + 2, hi + 1):
                    v = c1[(B.legs[j - 1].assignment[sg[x]], v)]
                out.append(v)
        return FunctorMap(piece, B.cat, out)

    u = on_piece(1)
    for t, po in enumerate(A.stages, start=2):
        u = po.induced(u, on_piece(t))
    return u.assignment


def grid_mor_by_wedges(f: DeltaMor, n: Optional[int] = None) -> FunctorMap:
    """The map of wedge-built grids induced through the pushouts' universal property."""
    n = f.source.n if n is None else n
    return FunctorMap(grid_by_wedges(f.source, n), grid_by_wedges(f.target, n),
                      _grid_mor(f.maps, f.source.ms, f.target.ms, n))
