"""Set-valued presheaves on Θ_n and Δ^×n as formal colimits of nerves.

A :class:`CellularPresheaf` is a finite diagram of gaunt n-categories
("atoms") and functors between them; its value at a test object ``o`` is
the colimit of the sets ``Fun(R(o), A_i)``, computed with a union-find over
the zig-zag relation.  Atoms may carry an index-object label (the atom is
then a representable), which is what lets hom-sets into presheaves that are
not nerves be computed by the Yoneda lemma.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as iproduct
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import IndeterminacyError, InputError
from .kernel.constructions import (boundary, cell, fiber_product, pair_map, suspend_map,
                                   suspension)
from .kernel.cells import collapse, face, product_decomposition
from .kernel.functors import FunctorMap, functor_assignments, iter_functors
from .kernel.ncat import FiniteStrictNCat, empty, validate
from .theta import (DeltaMor, MultiIndex, ThetaMor, ThetaObj, delta_compose, delta_hom,
                    delta_n, delta_n_mor, delta_window, grid_by_wedges, grid_mor_by_wedges,
                    iota_obj, parse_theta, point, realize, realize_mor, sigma_obj,
                    theta_compose, theta_enumerate_objects, theta_hom, theta_identity)

TestObj = Union[ThetaObj, MultiIndex]
IndexMor = Union[ThetaMor, DeltaMor]


# ---------------------------------------------------------------------------
# index categories


@dataclass(frozen=True)
class Indexing:
    """Θ_n (``kind='theta'``) or Δ^×n (``kind='delta'``).

    Δ^×n objects are realized through δ_n; ``realizer='wedges'`` swaps in the
    independent wedge construction of grids.
    """

    kind: str
    n: int
    realizer: str = "direct"

    def __post_init__(self):
        if self.kind not in ("theta", "delta"):
            raise InputError(f"unknown indexing {self.kind!r}")
        if self.n < 1:
            raise InputError("n must be positive")
        if self.realizer not in ("direct", "wedges") or \
                (self.realizer == "wedges" and self.kind != "delta"):
            raise InputError("the wedge realizer only applies to Δ^×n")

    def realize(self, o: TestObj) -> FiniteStrictNCat:
        if self.kind == "theta":
            return realize(o, self.n)
        if self.realizer == "wedges":
            return grid_by_wedges(o, self.n)
        return realize(delta_n(o), self.n)

    def realize_mor(self, u: IndexMor) -> FunctorMap:
        return _realize_mor_cached(self, u)

    def _realize_mor(self, u: IndexMor) -> FunctorMap:
        if self.kind == "theta":
            return realize_mor(u, self.n)
        if self.realizer == "wedges":
            return grid_mor_by_wedges(u, self.n)
        return realize_mor(delta_n_mor(u), self.n)

    def hom(self, a: TestObj, b: TestObj) -> Sequence[IndexMor]:
        return theta_hom(a, b) if self.kind == "theta" else delta_hom(a, b)

    def compose(self, g: IndexMor, f: IndexMor) -> IndexMor:
        return theta_compose(g, f) if self.kind == "theta" else delta_compose(g, f)

    def identity(self, o: TestObj) -> IndexMor:
        if self.kind == "theta":
            return theta_identity(o)
        return DeltaMor(o, o, tuple(tuple(range(v + 1)) for v in o.ms))

    def from_delta(self, f: DeltaMor) -> IndexMor:
        return delta_n_mor(f) if self.kind == "theta" else f

    def from_delta_obj(self, m: MultiIndex) -> TestObj:
        return delta_n(m) if self.kind == "theta" else m

    def cell_obj(self, k: int) -> TestObj:
        """The index object realizing to ``C_k``."""
        return self.from_delta_obj(_cell_mi(k, self.n))

    def comp_shape(self, i: int):
        """``(P_i, piece1, piece2, μ)``: the shape of a level-i composite, the
        inclusions of its first and second factor, and the composite cell."""
        n = self.n
        c = n - i  # 0-based coordinate
        ones = (1,) * n
        P = MultiIndex(ones[:c] + (2,) + ones[c + 1:])
        Cn = MultiIndex(ones)

        def along(v):
            maps = tuple(v if t == c else (0, 1) for t in range(n))
            return self.from_delta(DeltaMor(Cn, P, maps))

        return (self.from_delta_obj(P), along((0, 1)), along((1, 2)), along((0, 2)))

    def face_endo(self, i: int, side: str) -> IndexMor:
        """``C_n -> C_{i-1} -> C_n``: collapse, then the source/target (i-1)-face."""
        n = self.n
        Cn, Ci = MultiIndex((1,) * n), _cell_mi(i - 1, n)
        v = 0 if side == "s" else 1
        col = DeltaMor(Cn, Ci, tuple((0, 0) if Ci.ms[t] == 0 else (0, 1) for t in range(n)))
        inc = DeltaMor(Ci, Cn, tuple((v,) if Ci.ms[t] == 0 else (0, 1) for t in range(n)))
        return self.from_delta(delta_compose(inc, col))

    def collapse_from_top(self, k: int) -> IndexMor:
        """``C_n -> C_k`` collapsing the top n-k directions."""
        n = self.n
        Cn, Ck = MultiIndex((1,) * n), _cell_mi(k, n)
        return self.from_delta(DeltaMor(Cn, Ck, tuple((0, 0) if Ck.ms[t] == 0 else (0, 1)
                                                      for t in range(n))))

    def parse(self, text: str) -> TestObj:
        if self.kind == "theta":
            return parse_theta(text, self.n)
        parts = [p.strip().strip("[]") for p in text.replace("x", "×").split("×")]
        return MultiIndex(tuple(int(p) for p in parts))


@lru_cache(maxsize=200_000)
def _realize_mor_cached(ix: Indexing, u: IndexMor) -> FunctorMap:
    return ix._realize_mor(u)


def _cell_mi(k: int, n: int) -> MultiIndex:
    return MultiIndex((0,) * (n - k) + (1,) * k)


THETA = "theta"
DELTA = "delta"


@dataclass(frozen=True)
class Window:
    """A finite set of test objects standing in for the whole index category."""

    indexing: Indexing
    objects: Tuple[TestObj, ...]

    def __post_init__(self):
        if not self.objects:
            raise InputError("window must be nonempty")

    @classmethod
    def build(cls, indexing: Indexing, bound: Optional[int] = None) -> "Window":
        """All objects up to ``bound`` (Θ: size; Δ: coordinate sum), plus the
        cells and composition shapes."""
        n = indexing.n
        if indexing.kind == THETA:
            bound = bound if bound is not None else (6 if n <= 2 else 5)
            objs = list(theta_enumerate_objects(n, bound))
        else:
            bound = bound if bound is not None else (n + 2 if n <= 2 else n + 1)
            objs = list(delta_window(n, bound))
        extra = [indexing.cell_obj(k) for k in range(n + 1)]
        extra += [indexing.comp_shape(i)[0] for i in range(1, n + 1)]
        for o in extra:
            if o not in objs:
                objs.append(o)
        return cls(indexing, tuple(objs))

    def describe(self) -> dict:
        return {"indexing": self.indexing.kind, "n": self.indexing.n,
                "objects": [str(o) for o in self.objects]}

    def __iter__(self):
        return iter(self.objects)

    def __len__(self):
        return len(self.objects)


# ---------------------------------------------------------------------------
# presheaves


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    map: FunctorMap
    mor: Optional[IndexMor] = None  # label(src) -> label(dst), when atoms are labelled


class _UF:
    def __init__(self):
        self.parent: Dict = {}

    def find(self, x):
        p = self.parent
        p.setdefault(x, x)
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            if b < a:
                a, b = b, a
            self.parent[b] = a


@dataclass
class Evaluation:
    """``P(o)``: canonical elements and the class of every diagram element."""

    obj: TestObj
    elements: Tuple
    canon: Dict

    def __len__(self):
        return len(self.elements)


class CellularPresheaf:
    """The colimit of the nerves of a finite diagram of gaunt atoms."""

    def __init__(self, indexing: Indexing, atoms: Sequence[FiniteStrictNCat],
                 edges: Sequence[Edge] = (), labels: Optional[Sequence[TestObj]] = None,
                 name: str = ""):
        self.indexing = indexing
        self.atoms = list(atoms)
        self.edges = list(edges)
        self.labels = list(labels) if labels is not None else None
        self.name = name
        for e in self.edges:
            if not (0 <= e.src < len(self.atoms) and 0 <= e.dst < len(self.atoms)):
                raise InputError("edge refers to a missing atom")
            if e.map.source.cells != self.atoms[e.src].cells or \
                    e.map.target.cells != self.atoms[e.dst].cells:
                raise InputError("edge map does not match its atoms")
        self._memo: Dict = {}

    @property
    def n(self):
        return self.indexing.n

    @property
    def category(self) -> Optional[FiniteStrictNCat]:
        """The atom, when this is the nerve of a single category."""
        if len(self.atoms) == 1 and not self.edges:
            return self.atoms[0]
        return None

    @property
    def labelled(self) -> bool:
        return self.labels is not None and all(
            e.mor is not None for e in self.edges)

    def evaluate(self, o: TestObj) -> Evaluation:
        if o in self._memo:
            return self._memo[o]
        R = self.indexing.realize(o)
        uf = _UF()
        per_atom = [functor_assignments(R, A) for A in self.atoms]
        for i, fs in enumerate(per_atom):
            for a in fs:
                uf.find((i, a))
        for e in self.edges:
            m = e.map.assignment
            for a in per_atom[e.src]:
                uf.union((e.src, a), (e.dst, tuple(m[v] for v in a)))
        canon = {x: uf.find(x) for x in uf.parent}
        ev = Evaluation(o, tuple(sorted(set(canon.values()))), canon)
        self._memo[o] = ev
        return ev

    def elements(self, o: TestObj) -> Tuple:
        return self.evaluate(o).elements

    def restrict(self, u: IndexMor, x):
        """``P(u)(x)`` for ``u: a -> b`` and ``x ∈ P(b)``."""
        i, a = x
        r = self.indexing.realize_mor(u).assignment
        return self.evaluate(u.source).canon[(i, tuple(a[v] for v in r))]

    # JSON ----------------------------------------------------------------

    def to_json_dict(self) -> dict:
        d = {"indexing": self.indexing.kind, "n": self.n,
             "atoms": [A.to_json_dict() for A in self.atoms],
             "edges": [{"from": e.src, "to": e.dst, "map": e.map.as_dict()}
                       for e in self.edges]}
        if self.labels is not None:
            d["labels"] = [str(o) for o in self.labels]
        return d

    @classmethod
    def from_json_dict(cls, data: dict) -> "CellularPresheaf":
        try:
            ix = Indexing(data["indexing"], int(data["n"]))
            atoms = [FiniteStrictNCat.from_json_dict(a) for a in data["atoms"]]
            labels = [ix.parse(s) for s in data["labels"]] if "labels" in data else None
            edges = []
            for e in data.get("edges", []):
                s, t = int(e["from"]), int(e["to"])
                F = FunctorMap.from_dict(atoms[s], atoms[t], e["map"])
                mor = _find_mor(ix, labels[s], labels[t], F) if labels else None
                edges.append(Edge(s, t, F, mor))
        except (KeyError, TypeError, IndexError) as exc:
            raise InputError(f"malformed presheaf JSON: {exc}") from None
        return cls(ix, atoms, edges, labels)

    def __repr__(self):
        return f"CellularPresheaf({self.name or len(self.atoms)} atoms, {self.indexing.kind}{self.n})"


def _find_mor(ix: Indexing, a: TestObj, b: TestObj, F: FunctorMap) -> IndexMor:
    for u in ix.hom(a, b):
        if ix.realize_mor(u).assignment == F.assignment:
            return u
    raise InputError("edge map is not the realization of an index morphism")


def nerve(X: FiniteStrictNCat, indexing: Indexing) -> CellularPresheaf:
    return CellularPresheaf(indexing, [X], name="ν")


def representable(o: TestObj, indexing: Indexing) -> CellularPresheaf:
    return CellularPresheaf(indexing, [indexing.realize(o)], labels=[o], name=f"j{o}")


def evaluate(P, o: TestObj):
    """The finite set ``P(o)``."""
    return P.elements(o)


class TabulatedPresheaf:
    """A presheaf given by a base presheaf with one element of ``P(o)`` doubled.

    The copy restricts like the original along every non-identity morphism.
    Used to inject Segal faults.
    """

    DUP = "dup"

    def __init__(self, base, at: TestObj, element=None):
        self.base = base
        self.indexing = base.indexing
        self.at = at
        elems = base.elements(at)
        if not elems:
            raise InputError("cannot duplicate an element of an empty set")
        self.original = elems[0] if element is None else element
        self.labels = None

    @property
    def n(self):
        return self.indexing.n

    category = None

    def elements(self, o):
        base = self.base.elements(o)
        return base + ((self.DUP,),) if o == self.at else base

    def restrict(self, u, x):
        if x == (self.DUP,):
            if u.source == self.at and u == self.indexing.identity(self.at):
                return x
            return self.base.restrict(u, self.original)
        return self.base.restrict(u, x)


# ---------------------------------------------------------------------------
# maps of presheaves


@dataclass(frozen=True)
class Leg:
    atom: int          # target atom
    map: FunctorMap    # source atom -> target atom
    mor: Optional[IndexMor] = None


@dataclass
class PresheafMap:
    source: CellularPresheaf
    target: CellularPresheaf
    legs: List[Leg]

    def check(self) -> "PresheafMap":
        if len(self.legs) != len(self.source.atoms):
            raise InputError("one leg per source atom is required")
        for i, leg in enumerate(self.legs):
            if leg.map.source.cells != self.source.atoms[i].cells or \
                    leg.map.target.cells != self.target.atoms[leg.atom].cells:
                raise InputError("leg does not match its atoms")
        # commutes with edges, up to the target's colimit relation on top cells
        for e in self.source.edges:
            a, b = self.legs[e.src], self.legs[e.dst]
            lhs = FunctorMap(e.map.source, self.target.atoms[b.atom],
                             [b.map.assignment[v] for v in e.map.assignment])
            if a.atom == b.atom and lhs.assignment != a.map.assignment:
                raise InputError("presheaf map does not commute with an edge")
        return self

    def at(self, o: TestObj) -> Dict:
        """The component ``U(o) -> V(o)``."""
        U, V = self.source.evaluate(o), self.target.evaluate(o)
        out = {}
        for (i, a), c in U.canon.items():
            if c in out:
                continue
            leg = self.legs[i]
            m = leg.map.assignment
            out[c] = V.canon[(leg.atom, tuple(m[v] for v in a))]
        return out

    @property
    def labelled(self) -> bool:
        return self.source.labelled and self.target.labelled and all(
            l.mor is not None for l in self.legs)


def eval_bijective(g: PresheafMap, window: Iterable[TestObj]):
    """``(True, None)`` if every component on the window is a bijection, else a witness."""
    for o in window:
        comp = g.at(o)
        V = g.target.evaluate(o)
        img = list(comp.values())
        if len(set(img)) != len(img) or len(img) != len(V.elements):
            return False, {"object": str(o), "source_size": len(comp),
                           "target_size": len(V.elements), "image_size": len(set(img))}
    return True, None


# ---------------------------------------------------------------------------
# hom-sets and locality


def _order(P: CellularPresheaf):
    """Atoms so that every atom comes after all atoms it maps to."""
    out_edges = {i: [] for i in range(len(P.atoms))}
    for e in P.edges:
        out_edges[e.src].append(e)
    order, state = [], {}

    def visit(i):
        if state.get(i) == 1:
            raise InputError("atom diagram has a cycle")
        if state.get(i) == 2:
            return
        state[i] = 1
        for e in out_edges[i]:
            visit(e.dst)
        state[i] = 2
        order.append(i)

    for i in range(len(P.atoms)):
        visit(i)
    return order, out_edges


def hom(V: CellularPresheaf, X, mode: Optional[str] = None) -> List[Tuple]:
    """``Hom(V, X)`` as tuples of per-atom values.

    ``mode='nerve'`` needs ``X`` to be a nerve and uses ``Fun(A_i, Y)``;
    ``mode='yoneda'`` needs labelled atoms and uses ``X(label_i)``.
    """
    mode = mode or ("nerve" if X.category is not None else "yoneda")
    order, out_edges = _order(V)
    if mode == "nerve":
        Y = X.category
        if Y is None:
            raise InputError("nerve mode needs a nerve")
        values = [None] * len(V.atoms)

        def cands(i):
            return functor_assignments(V.atoms[i], Y)

        def pull(e, val):
            m = e.map.assignment
            return tuple(val[v] for v in m)
    else:
        if not V.labelled:
            raise InputError("yoneda mode needs labelled atoms")

        def cands(i):
            return X.elements(V.labels[i])

        def pull(e, val):
            return X.restrict(e.mor, val)

    sinks = [i for i in order if not out_edges[i]]
    rest = [i for i in order if out_edges[i]]
    out = []
    for pick in iproduct(*[cands(i) for i in sinks]):
        val = dict(zip(sinks, pick))
        ok = True
        for i in rest:
            es = out_edges[i]
            v = pull(es[0], val[es[0].dst])
            if any(pull(e, val[e.dst]) != v for e in es[1:]):
                ok = False
                break
            val[i] = v
        if ok:
            out.append(tuple(val[i] for i in range(len(V.atoms))))
    return out


@dataclass
class LocalityResult:
    local: bool
    hom_target: int
    hom_source: int
    witness: Optional[dict] = None

    def __bool__(self):
        return self.local


def is_local(X, g: PresheafMap, window: Optional[Window] = None,
             mode: Optional[str] = None) -> LocalityResult:
    """Is ``g^*: Hom(V, X) -> Hom(U, X)`` a bijection?

    ``window`` is accepted for interface symmetry; hom-sets out of finite
    cellular presheaves are computed exactly.
    """
    mode = mode or ("nerve" if X.category is not None else "yoneda")
    if mode == "yoneda" and not g.labelled:
        if X.category is None:
            raise InputError("map is unlabelled and X is not a nerve")
        mode = "nerve"
    HV = hom(g.target, X, mode)
    HU = hom(g.source, X, mode)
    seen: Dict = {}
    for h in HV:
        img = []
        for i, leg in enumerate(g.legs):
            val = h[leg.atom]
            if mode == "nerve":
                img.append(tuple(val[v] for v in leg.map.assignment))
            else:
                img.append(X.restrict(leg.mor, val))
        img = tuple(img)
        if img in seen:
            return LocalityResult(False, len(HV), len(HU),
                                  {"reason": "not unique", "element": _show(img),
                                   "lifts": [_show(seen[img]), _show(h)]})
        seen[img] = h
    for u in HU:
        if u not in seen:
            return LocalityResult(False, len(HV), len(HU),
                                  {"reason": "not lifted", "element": _show(u)})
    return LocalityResult(True, len(HV), len(HU))


def _show(x):
    if isinstance(x, tuple):
        return [_show(v) for v in x]
    return x


# ---------------------------------------------------------------------------
# generators


@dataclass
class Generator:
    map: PresheafMap
    tag: str
    params: Dict = field(default_factory=dict)

    def describe(self) -> str:
        ps = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.tag}({ps})"


@dataclass
class GeneratorSet:
    label: str
    n: int
    generators: List[Generator]

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def by_tag(self, tag: str) -> List[Generator]:
        return [g for g in self.generators if g.tag == tag]


LABELS = ("Segal_Δ×n", "Glob_Δ×n", "Comp_Δ×n", "Segal_Θn", "Comp_Θn", "S00", "S0-window")


def _labelled_map(ix: Indexing, U_labels, U_edges, V_label, leg_mors, name="") -> PresheafMap:
    """A map of labelled presheaves into a representable."""
    atoms = [ix.realize(o) for o in U_labels]
    edges = [Edge(s, t, ix.realize_mor(u), u) for s, t, u in U_edges]
    U = CellularPresheaf(ix, atoms, edges, U_labels, name=name)
    V = representable(V_label, ix)
    legs = [Leg(0, ix.realize_mor(u), u) for u in leg_mors]
    return PresheafMap(U, V, legs)


def _replace(m: MultiIndex, c: int, v: int) -> MultiIndex:
    return MultiIndex(m.ms[:c] + (v,) + m.ms[c + 1:])


def _coord_mor(src: MultiIndex, dst: MultiIndex, c: int, f: Tuple[int, ...]) -> DeltaMor:
    maps = tuple(f if t == c else tuple(range(src.ms[t] + 1)) for t in range(src.n))
    return DeltaMor(src, dst, maps)


def _spine_delta(ix: Indexing, m: MultiIndex, c: int) -> PresheafMap:
    k = m.ms[c]
    edge, vert = _replace(m, c, 1), _replace(m, c, 0)
    labels = [edge] * k + [vert] * (k - 1)
    U_edges = []
    for t in range(1, k):
        v = k + t - 1
        U_edges.append((v, t - 1, _coord_mor(vert, edge, c, (1,))))
        U_edges.append((v, t, _coord_mor(vert, edge, c, (0,))))
    legs = [_coord_mor(edge, m, c, (t - 1, t)) for t in range(1, k + 1)]
    legs += [_coord_mor(vert, m, c, (t,)) for t in range(1, k)]
    return _labelled_map(ix, labels, U_edges, m, legs, name=f"spine{m}@{c}")


def glob_hat(m: MultiIndex) -> MultiIndex:
    """Collapse every coordinate at or inside a zero coordinate."""
    ms = list(m.ms)
    for j in range(len(ms)):
        if any(ms[i] == 0 for i in range(j, len(ms))):
            ms[j] = 0
    return MultiIndex(tuple(ms))


def _k_map(ix: Indexing, base: MultiIndex, c: int) -> PresheafMap:
    D3, e, p = _replace(base, c, 3), _replace(base, c, 1), _replace(base, c, 0)
    labels = [D3, e, e, p, p]
    U_edges = [(1, 0, _coord_mor(e, D3, c, (0, 2))), (2, 0, _coord_mor(e, D3, c, (1, 3))),
               (1, 3, _coord_mor(e, p, c, (0, 0))), (2, 4, _coord_mor(e, p, c, (0, 0)))]
    legs = [_coord_mor(D3, p, c, (0,) * 4), _coord_mor(e, p, c, (0, 0)),
            _coord_mor(e, p, c, (0, 0)), _coord_mor(p, p, c, (0,)), _coord_mor(p, p, c, (0,))]
    return _labelled_map(ix, labels, U_edges, p, legs, name=f"K{base}@{c}")


def segal_delta(n: int, bound: int) -> GeneratorSet:
    ix = Indexing(DELTA, n)
    gens = []
    for m in delta_window(n, bound):
        for c in range(n):
            if m.ms[c] >= 2:
                gens.append(Generator(_spine_delta(ix, m, c), "segal",
                                      {"m": str(m), "coord": c + 1}))
    return GeneratorSet("Segal_Δ×n", n, gens)


def glob_delta(n: int, bound: int) -> GeneratorSet:
    ix = Indexing(DELTA, n)
    gens = []
    for m in delta_window(n, bound):
        h = glob_hat(m)
        if h != m:
            u = DeltaMor(m, h, tuple(tuple(range(a + 1)) if b == a else (0,) * (a + 1)
                                     for a, b in zip(m.ms, h.ms)))
            gens.append(Generator(_labelled_map(ix, [m], [], h, [u], name=f"glob{m}"),
                                  "glob", {"m": str(m), "hat": str(h)}))
    return GeneratorSet("Glob_Δ×n", n, gens)


def comp_delta(n: int, bound: int) -> GeneratorSet:
    """K in coordinate c, zero inside it, outer coordinates of sum <= bound."""
    ix = Indexing(DELTA, n)
    gens = []
    for c in range(n):
        outer = n - c - 1
        for tail in delta_window(outer, bound) if outer else [MultiIndex((0,))]:
            ms = (0,) * (c + 1) + (tail.ms if outer else ())
            base = MultiIndex(ms)
            gens.append(Generator(_k_map(ix, base, c), "comp",
                                  {"coord": c + 1, "base": str(base)}))
    return GeneratorSet("Comp_Δ×n", n, gens)


# Θ_n ------------------------------------------------------------------------


def _sigma_mor(u: ThetaMor) -> ThetaMor:
    return ThetaMor(sigma_obj(u.source), sigma_obj(u.target), (0, 1), (((1, 1), u),))


def _theta_spine(o: ThetaObj):
    """Labels, edges and legs of ``([1];o_1) ∪ ... ∪ ([1];o_m) -> o``."""
    L = o.level
    pieces = [ThetaObj(L, 1, (o.part(t),)) if L > 1 else ThetaObj(1, 1)
              for t in range(1, o.m + 1)]
    pt = point(L)
    labels = pieces + [pt] * (o.m - 1)

    def ends(piece, v):
        return ThetaMor(pt, piece, (v,))

    def into(piece, t):
        comps = (((1, t), theta_identity(o.part(t))),) if L > 1 else ()
        return ThetaMor(piece, o, (t - 1, t), comps)

    edges = []
    for t in range(1, o.m):
        v = o.m + t - 1
        edges.append((v, t - 1, ends(pieces[t - 1], 1)))
        edges.append((v, t, ends(pieces[t], 0)))
    legs = [into(pieces[t - 1], t) for t in range(1, o.m + 1)]
    legs += [ThetaMor(pt, o, (t,)) for t in range(1, o.m)]
    return labels, edges, legs


def _theta_segal_data(level: int, bound: int):
    out = []
    for o in theta_enumerate_objects(level, bound):
        if o.m >= 2:
            out.append((_theta_spine(o), o, 0))
    if level > 1:
        for (labels, edges, legs), o, depth in _theta_segal_data(level - 1, bound - 1):
            out.append((([sigma_obj(x) for x in labels],
                          [(s, t, _sigma_mor(u)) for s, t, u in edges],
                          [_sigma_mor(u) for u in legs]), sigma_obj(o), depth + 1))
    return out


def _theta_segal_at(o: ThetaObj):
    """Spine data for ``o`` itself, or for its single part when ``o = [1; o_1]``."""
    if o.m >= 2:
        return [(_theta_spine(o), o, 0)]
    if o.m == 1 and o.level > 1:
        return [(([sigma_obj(x) for x in labels], [(s, t, _sigma_mor(u)) for s, t, u in edges],
                  [_sigma_mor(u) for u in legs]), sigma_obj(inner), depth + 1)
                for (labels, edges, legs), inner, depth in _theta_segal_at(o.part(1))]
    return []


def segal_theta(n: int, bound: int, extra: Sequence[ThetaObj] = ()) -> GeneratorSet:
    """Spine inclusions up to ``bound``, plus those needed at each object of ``extra``."""
    ix = Indexing(THETA, n)
    gens = []
    data = _theta_segal_data(n, bound)
    have = {str(o) for _, o, _ in data}
    for o in extra:
        for item in _theta_segal_at(o):
            if str(item[1]) not in have:
                have.add(str(item[1]))
                data.append(item)
    for (labels, edges, legs), o, depth in data:
        gens.append(Generator(_labelled_map(ix, labels, edges, o, legs, name=f"spine{o}"),
                              "segal", {"o": str(o), "suspensions": depth}))
    return GeneratorSet("Segal_Θn", n, gens)


def _iota_mor(f: Tuple[int, ...], a: ThetaObj, b: ThetaObj) -> ThetaMor:
    if a.level == 1:
        return ThetaMor(a, b, f)
    pt = point(a.level - 1)
    comps = tuple(((i, j), theta_identity(pt)) for i in range(1, a.m + 1)
                  for j in range(f[i - 1] + 1, f[i] + 1))
    return ThetaMor(a, b, f, comps)


def comp_theta(n: int) -> GeneratorSet:
    ix = Indexing(THETA, n)
    gens = []
    for k in range(n):
        L = n - k
        D3, e, p = iota_obj(3, L), iota_obj(1, L), iota_obj(0, L)
        labels = [D3, e, e, p, p]
        edges = [(1, 0, _iota_mor((0, 2), e, D3)), (2, 0, _iota_mor((1, 3), e, D3)),
                 (1, 3, _iota_mor((0, 0), e, p)), (2, 4, _iota_mor((0, 0), e, p))]
        legs = [_iota_mor((0,) * 4, D3, p), _iota_mor((0, 0), e, p), _iota_mor((0, 0), e, p),
                _iota_mor((0,), p, p), _iota_mor((0,), p, p)]
        for _ in range(k):
            labels = [sigma_obj(x) for x in labels]
            edges = [(s, t, _sigma_mor(u)) for s, t, u in edges]
            legs = [_sigma_mor(u) for u in legs]
            p = sigma_obj(p)
        gens.append(Generator(_labelled_map(ix, labels, edges, p, legs, name=f"σ^{k}ιK"),
                              "comp", {"k": k}))
    return GeneratorSet("Comp_Θn", n, gens)


# S00 ------------------------------------------------------------------------


def _span_presheaf(ix: Indexing, left: FunctorMap, right: FunctorMap, name: str):
    """The presheaf pushout ``νX ∪^{νA} νY`` (atoms X, A, Y)."""
    return CellularPresheaf(ix, [left.target, left.source, right.target],
                            [Edge(1, 0, left), Edge(1, 2, right)], name=name)


def _from_pushout(ix: Indexing, left: FunctorMap, right: FunctorMap, name: str) -> PresheafMap:
    from .colimits import glue
    po = glue(left, right)
    U = _span_presheaf(ix, left, right, name)
    V = nerve(po.obj, ix)
    apex = left.then(po.left)
    return PresheafMap(U, V, [Leg(0, po.left), Leg(0, apex), Leg(0, po.right)])


def _inclusion(A: FiniteStrictNCat, B: FiniteStrictNCat) -> FunctorMap:
    """The inclusion ``∂C_i -> C_i``; both are suspensions, so names agree."""
    return FunctorMap.from_dict(A, B, {c: c for c in A.cells})


def s00_a(ix: Indexing, i: int) -> Generator:
    n = ix.n
    C, B = cell(i, n), boundary(i, n)
    inc = _inclusion(B, C)
    return Generator(_from_pushout(ix, inc, inc, f"C{i}∪∂C{i}"), "a", {"i": i})


def s00_empty(ix: Indexing) -> Generator:
    U = CellularPresheaf(ix, [], name="∅")
    V = nerve(empty(ix.n), ix)
    return Generator(PresheafMap(U, V, []), "a", {"i": "empty"})


def s00_b(ix: Indexing, i: int, j: int) -> Generator:
    n = ix.n
    first, second = face(i, j, "t", n), face(i, j, "s", n)
    return Generator(_from_pushout(ix, first, second, f"C{j}∪C{i}C{j}"), "b", {"i": i, "j": j})


def s00_c(ix: Indexing, i: int, j: int, k: int, drop_glue: bool = False) -> Generator:
    n = ix.n
    dec = product_decomposition(j, k, n - i)
    W1, W2 = dec.w1.obj, dec.w2.obj
    g1, g2 = suspend_map(dec.glue1, i), suspend_map(dec.glue2, i)
    p1, p2 = suspend_map(dec.to_product1, i), suspend_map(dec.to_product2, i)
    P = p1.target
    _, q1, q2 = _product_projections(j, k, n - i)
    FP, f1, f2 = fiber_product(collapse(i + j, i, n), collapse(i + k, i, n))
    iso = pair_map(suspend_map(q1, i), suspend_map(q2, i), FP, f1, f2)
    if drop_glue:
        U = CellularPresheaf(ix, [g1.target, g2.target], [], name="W1⊔W2")
        legs = [Leg(0, p1.then(iso)), Leg(0, p2.then(iso))]
    else:
        U = CellularPresheaf(ix, [g1.target, g1.source, g2.target],
                             [Edge(1, 0, g1), Edge(1, 2, g2)], name="W1∪W2")
        legs = [Leg(0, p1.then(iso)), Leg(0, g1.then(p1).then(iso)), Leg(0, p2.then(iso))]
    assert P.cells == iso.source.cells
    return Generator(PresheafMap(U, nerve(FP, ix), legs), "c", {"i": i, "j": j, "k": k})


@lru_cache(maxsize=None)
def _product_projections(a, b, n):
    from .kernel.constructions import product
    return product(cell(a, n), cell(b, n))


def s00_d(ix: Indexing, k: int) -> Generator:
    from .colimits import k_diagram
    n = ix.n
    amb = max(n, k + 1)
    d = k_diagram(1)
    D3, two, pts = d.left.target, d.left.source, d.right.target
    # split the coproducts into single atoms
    e1 = _sub_by_prefix(two, ("a", "b", "a>b"))
    e2 = _sub_by_prefix(two, ("c", "d", "c>d"))
    p = _sub_by_prefix(pts, ("p",))
    q = _sub_by_prefix(pts, ("q",))
    atoms = [D3, e1[0], e2[0], p[0], q[0]]
    edges = [(1, 0, e1[1].then(d.left)), (2, 0, e2[1].then(d.left)),
             (1, 3, _restrict_codomain(e1[1].then(d.right), p[1])),
             (2, 4, _restrict_codomain(e2[1].then(d.right), q[1]))]
    s_atoms = [_susp(A.lift(amb - k), k) for A in atoms]
    s_edges = [Edge(s, t, suspend_map(_lift_map(F, amb - k), k)) for s, t, F in edges]
    U = CellularPresheaf(ix, s_atoms, s_edges, name=f"σ^{k}K")
    Ck = cell(k, amb)
    legs = [Leg(0, suspend_map(FunctorMap.constant(A.lift(amb - k), cell(0, amb - k), "*"), k))
            for A in atoms]
    assert all(l.map.target.cells == Ck.cells for l in legs)
    return Generator(PresheafMap(U, nerve(Ck, ix), legs), "d", {"k": k})


def _susp(X, k):
    for _ in range(k):
        X = suspension(X)
    return X


def _lift_map(F: FunctorMap, n: int) -> FunctorMap:
    return FunctorMap(F.source.lift(n), F.target.lift(n), F.assignment)


def _sub_by_prefix(X: FiniteStrictNCat, names):
    from .kernel.constructions import induced_sub
    keep = [X.cells.index(c) for c in names]
    return induced_sub(X, keep)


def _restrict_codomain(f: FunctorMap, incl: FunctorMap) -> FunctorMap:
    pos = {v: i for i, v in enumerate(incl.assignment)}
    return FunctorMap(f.source, incl.source, [pos[v] for v in f.assignment])


def build_s00(n: int, indexing: Optional[Indexing] = None, fault: Optional[str] = None) -> GeneratorSet:
    """The fundamental pushout maps, clauses (a)-(d)."""
    ix = indexing or Indexing(THETA, n)
    gens = [s00_a(ix, i) for i in range(n)] + [s00_empty(ix)]
    gens += [s00_b(ix, i, j) for j in range(1, n + 1) for i in range(j)]
    for i in range(n + 1):
        for j in range(1, n - i + 1):
            for k in range(1, n - i + 1):
                gens.append(s00_c(ix, i, j, k, drop_glue=(fault == "drop-glue")))
    gens += [s00_d(ix, k) for k in range(n + 1)]
    return GeneratorSet("S00", n, gens)


def transport_fiber_product(g: PresheafMap, rho: FunctorMap, h: FunctorMap) -> PresheafMap:
    """``H ×_{C_i} (U -> V)`` for ``rho: V -> C_i`` and ``h: H -> C_i``."""
    T = g.target.category
    if T is None:
        raise InputError("transport needs a nerve as target")
    if rho.source.cells != T.cells or rho.target.cells != h.target.cells:
        raise InputError("incompatible maps")
    ix = g.source.indexing
    pieces = []
    for i, A in enumerate(g.source.atoms):
        to_c = g.legs[i].map.then(rho)
        pieces.append(fiber_product(h, to_c))
    edges = []
    for e in g.source.edges:
        Pa, a1, a2 = pieces[e.src]
        Pb, b1, b2 = pieces[e.dst]
        edges.append(Edge(e.src, e.dst, pair_map(a1, a2.then(e.map), Pb, b1, b2)))
    U = CellularPresheaf(ix, [p[0] for p in pieces], edges, name=f"H×{g.source.name}")
    PV, v1, v2 = fiber_product(h, rho)
    legs = [Leg(0, pair_map(a1, a2.then(g.legs[i].map), PV, v1, v2))
            for i, (Pa, a1, a2) in enumerate(pieces)]
    return PresheafMap(U, nerve(PV, ix), legs)


def _map_key(g: PresheafMap):
    return (tuple(A.key for A in g.source.atoms),
            tuple((e.src, e.dst, e.map.assignment) for e in g.source.edges),
            g.target.atoms[0].key, tuple((l.atom, l.map.assignment) for l in g.legs))


def build_s0_window(n: int, indexing: Optional[Indexing] = None,
                    base: Optional[GeneratorSet] = None) -> GeneratorSet:
    """S00 together with all transports ``H ×_{C_i} (-)`` over cells H."""
    ix = indexing or Indexing(THETA, n)
    base = base or build_s00(n, ix)
    gens, seen = [], set()
    for g in base:
        k = _map_key(g.map)
        if k not in seen:
            seen.add(k)
            gens.append(g)
    for g in base:
        T = g.map.target.category
        for i in range(n + 1):
            Ci = cell(i, T.n)
            for rho in iter_functors(T, Ci):
                rho = FunctorMap(T, Ci, rho)
                for hd in range(n + 1):
                    H = cell(hd, T.n)
                    for ha in iter_functors(H, Ci):
                        t = transport_fiber_product(g.map, rho, FunctorMap(H, Ci, ha))
                        key = _map_key(t)
                        if key in seen:
                            continue
                        seen.add(key)
                        params = dict(g.params)
                        params.update({"over": i, "H": hd, "transport": True})
                        gens.append(Generator(t, g.tag, params))
    return GeneratorSet("S0-window", n, gens)


def build_generators(label: str, n: int, bound: Optional[int] = None) -> GeneratorSet:
    if label not in LABELS:
        raise InputError(f"unknown generator set {label!r}")
    if label == "S00":
        return build_s00(n)
    if label == "S0-window":
        return build_s0_window(n)
    if label == "Comp_Θn":
        return comp_theta(n)
    if label == "Segal_Θn":
        return segal_theta(n, bound if bound is not None else (6 if n <= 2 else 5))
    if label == "Comp_Δ×n":
        return comp_delta(n, bound if bound is not None else 1)
    b = bound if bound is not None else n + 1
    return {"Segal_Δ×n": segal_delta, "Glob_Δ×n": glob_delta}[label](n, b)


def recognition_generators(indexing: Indexing, bound: Optional[int] = None) -> List[Generator]:
    n = indexing.n
    if indexing.kind == THETA:
        shapes = [indexing.comp_shape(i)[0] for i in range(1, n + 1)]
        b = bound if bound is not None else (6 if n <= 2 else 5)
        return list(segal_theta(n, b, shapes)) + list(comp_theta(n))
    b = bound if bound is not None else n + 1
    return list(segal_delta(n, b)) + list(glob_delta(n, b)) + list(comp_delta(n, 1))


# ---------------------------------------------------------------------------
# recognition


@dataclass
class Recognition:
    accepted: bool
    category: Optional[FiniteStrictNCat] = None
    failing: Optional[str] = None
    witness: Optional[dict] = None


def _reconstruct(X, ix: Indexing) -> FiniteStrictNCat:
    n = ix.n
    top = ix.cell_obj(n)
    elems = list(X.elements(top))
    pos = {x: p for p, x in enumerate(elems)}
    src, tgt, comp = [], [], []
    for i in range(1, n + 1):
        es, et = ix.face_endo(i, "s"), ix.face_endo(i, "t")
        s = [pos[X.restrict(es, x)] for x in elems]
        t = [pos[X.restrict(et, x)] for x in elems]
        P, p1, p2, mu = ix.comp_shape(i)
        table = {}
        for z in X.elements(P):
            key = (pos[X.restrict(p2, z)], pos[X.restrict(p1, z)])
            if key in table:
                raise IndeterminacyError(f"composite at level {i} is not unique")
            table[key] = pos[X.restrict(mu, z)]
        src.append(s)
        tgt.append(t)
        comp.append(table)
    names = [f"x{p}" for p in range(len(elems))]
    return FiniteStrictNCat(n, names, src, tgt, comp)


def _cell_mors(ix: Indexing, o: TestObj):
    """All ``(k, u: C_k -> o)`` with the index of the top cell of ``R(C_k)``."""
    out = []
    for k in range(ix.n + 1):
        ck = ix.cell_obj(k)
        Rk = ix.realize(ck)
        topk = Rk.dims.index(k)
        for u in ix.hom(ck, o):
            out.append((k, u, ix.realize_mor(u).assignment[topk]))
    return out


def compare_with_nerve(X, Y: FiniteStrictNCat, window: Window):
    """Match ``X(o)`` with ``Fun(R(o), Y)`` on every window object through
    restrictions along all maps from cells; returns a witness on failure.

    Both sides are sent to the vector of their restrictions to cells, read as
    cells of Y; the vectors must be injective on X(o) and the two images equal.
    """
    ix = window.indexing
    top = ix.cell_obj(ix.n)
    pos = {x: p for p, x in enumerate(X.elements(top))}
    if len(pos) != len(Y.cells):
        return {"object": str(top), "presheaf_size": len(pos), "cells": len(Y.cells)}
    lifts = [ix.collapse_from_top(k) for k in range(ix.n + 1)]
    for o in window:
        mors = _cell_mors(ix, o)
        elems = X.elements(o)
        got = {tuple(pos[X.restrict(lifts[k], X.restrict(u, x))] for k, u, _ in mors)
               for x in elems}
        want = {tuple(F[c] for _, _, c in mors) for F in functor_assignments(ix.realize(o), Y)}
        if len(got) != len(elems) or got != want:
            return {"object": str(o), "presheaf_size": len(elems), "nerve_size": len(want)}
    return None


def recognize_gaunt_nerve(X, window: Window, bound: Optional[int] = None) -> Recognition:
    """Accept X with a reconstructed category, or reject with a failing generator."""
    ix = window.indexing
    needed = [ix.cell_obj(k) for k in range(ix.n + 1)] + \
        [ix.comp_shape(i)[0] for i in range(1, ix.n + 1)]
    missing = [str(o) for o in needed if o not in window.objects]
    if missing:
        raise IndeterminacyError(f"window lacks {', '.join(missing)}")
    for g in recognition_generators(ix, bound):
        r = is_local(X, g.map, window, mode="yoneda")
        if not r.local:
            return Recognition(False, failing=g.describe(), witness=r.witness)
    try:
        Y = _reconstruct(X, ix)
    except IndeterminacyError as exc:
        return Recognition(False, failing="reconstruction", witness={"reason": str(exc)})
    rep = validate(Y, limit=1)
    if not rep.valid:
        v = rep.violations[0]
        return Recognition(False, failing="reconstruction",
                           witness={"axiom": v.axiom, "levels": list(v.levels)})
    w = compare_with_nerve(X, Y, window)
    if w is not None:
        return Recognition(False, Y, failing="comparison", witness=w)
    return Recognition(True, Y)


# ---------------------------------------------------------------------------
# natural transformations of presheaves on a small window


def presheaf_maps(X, Y, objects: Sequence[TestObj]) -> List[Dict]:
    """All natural transformations ``X -> Y`` on the full subcategory on ``objects``."""
    ix = X.indexing
    objs = sorted(objects, key=lambda o: (len(ix.realize(o).cells), str(o)))
    variables = [(o, x) for o in objs for x in X.elements(o)]
    vpos = {v: p for p, v in enumerate(variables)}
    # constraints: η_a(X(u) z) = Y(u) η_b(z) for u: a -> b
    cons: List[List] = [[] for _ in variables]
    for a in objs:
        for b in objs:
            for u in ix.hom(a, b):
                for z in X.elements(b):
                    x = X.restrict(u, z)
                    pa, pb = vpos[(a, x)], vpos[(b, z)]
                    later = max(pa, pb)
                    cons[later].append((pa, pb, u))
    out = []
    val: List = [None] * len(variables)

    def ok(p, y):
        val[p] = y
        for pa, pb, u in cons[p]:
            if Y.restrict(u, val[pb]) != val[pa]:
                val[p] = None
                return False
        return True

    def rec(p):
        if p == len(variables):
            out.append({variables[q]: val[q] for q in range(p)})
            return
        o = variables[p][0]
        for y in Y.elements(o):
            if ok(p, y):
                rec(p + 1)
                val[p] = None

    rec(0)
    return out


def small_window(indexing: Indexing) -> Tuple[TestObj, ...]:
    """Cells and composition shapes."""
    n = indexing.n
    return tuple([indexing.cell_obj(k) for k in range(n + 1)] +
                 [indexing.comp_shape(i)[0] for i in range(1, n + 1)])


# ---------------------------------------------------------------------------
# δ-compatibility and Θ-Segal retract diagrams


def delta_compatibility(X: FiniteStrictNCat, n: int, window: Window, to_theta=None):
    """Compare ν over Δ^×n (wedge-built grids) with ν over Θ_n at δ_n(m),
    counts and restriction maps; returns a witness on failure.

    ``to_theta`` replaces δ_n on objects (fault injection only)."""
    from .kernel.functors import find_iso
    wd = Indexing(DELTA, n, "wedges")
    th = Indexing(THETA, n)
    A, B = nerve(X, wd), nerve(X, th)
    to_theta = to_theta or delta_n
    isos = {}
    for m in window:
        G, R = wd.realize(m), th.realize(to_theta(m))
        c = find_iso(G, R)
        if c is None:
            return {"object": str(m), "reason": "grid realizations differ"}
        isos[m] = c
        ea, eb = A.elements(m), B.elements(to_theta(m))
        if len(ea) != len(eb):
            return {"object": str(m), "delta": len(ea), "theta": len(eb)}
    # restriction maps, transported along the comparison isos
    # same as B.restrict / A.restrict, with per-morphism work hoisted
    for a in window:
        ia = isos[a].inverse().assignment
        ca, cb = A.evaluate(a).canon, B.evaluate(delta_n(a)).canon
        for b in window:
            ib = isos[b].assignment
            ys = [(y, tuple(y[v] for v in ib)) for (_, y) in B.elements(delta_n(b))]
            for f in delta_hom(a, b):
                ru = th.realize_mor(delta_n_mor(f)).assignment
                rf = wd.realize_mor(f).assignment
                for y, yd in ys:
                    lhs = cb[(0, tuple(y[v] for v in ru))][1]
                    rd = ca[(0, tuple(yd[v] for v in rf))][1]
                    rhs = tuple(rd[v] for v in ia)
                    if lhs != rhs:
                        return {"morphism": f"{a}->{b}", "maps": [list(m) for m in f.maps]}
    return None


@dataclass
class SegalRetract:
    theta_obj: ThetaObj
    grid: MultiIndex
    ok: bool


def segal_theta_retract(o: ThetaObj) -> SegalRetract:
    """Exhibit the Θ-spine of ``o`` as a retract of the δ-pushforward of the
    Δ-spine of the grid containing ``o``, atom by atom."""
    from .theta import grid_retract
    gr = grid_retract(o)
    big = delta_n(gr.grid)
    labels, edges, legs = _theta_spine(o)
    blabels, bedges, blegs = _theta_spine(big)
    ok = gr.verify() and o.m >= 2 and big.m == o.m
    m = o.m
    sec = dict(gr.section.comps) if o.level > 1 else {}
    ret = dict(gr.retraction.comps) if o.level > 1 else {}

    def s_atom(t):
        if t > m:
            return theta_identity(labels[t - 1])
        if o.level == 1:
            return theta_identity(labels[t - 1])
        return _sigma_mor(sec[(t, t)])

    def r_atom(t):
        if t > m or o.level == 1:
            return theta_identity(blabels[t - 1])
        return _sigma_mor(ret[(t, t)])

    for t in range(1, len(labels) + 1):
        s, r = s_atom(t), r_atom(t)
        ok = ok and theta_compose(r, s) == theta_identity(labels[t - 1])
        # squares with the spine legs
        ok = ok and theta_compose(blegs[t - 1], s) == theta_compose(gr.section, legs[t - 1])
        ok = ok and theta_compose(legs[t - 1], r) == theta_compose(gr.retraction, blegs[t - 1])
    for (s1, d1, u), (s2, d2, v) in zip(edges, bedges):
        ok = ok and theta_compose(s_atom(d1 + 1), u) == theta_compose(v, s_atom(s1 + 1))
    return SegalRetract(o, gr.grid, bool(ok))
