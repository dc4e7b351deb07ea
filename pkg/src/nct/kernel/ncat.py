"""Single-sorted finite strict n-categories.

A strict n-category is stored as one set of cells carrying n category
structures ``(src_i, tgt_i, comp_i)``.  Composition is written "x after y":
``comp_i(x, y)`` is defined exactly when ``src_i(x) == tgt_i(y)``.

Cells are opaque strings at the interface; internally they are indices into
``cells`` and every table is stored by index.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from ..errors import InputError


@dataclass(frozen=True)
class CatStructure:
    """One category structure, keyed by cell names (interface form)."""

    src: Mapping[str, str]
    tgt: Mapping[str, str]
    comp: Mapping[Tuple[str, str], str] = field(default_factory=dict)


class FiniteStrictNCat:
    """An immutable finite strict n-category.

    ``src[i-1][x]``, ``tgt[i-1][x]`` and ``comp[i-1][(x, y)]`` hold the
    structure at level ``i`` by cell index.  The constructor only checks that
    tables are well formed; the category axioms are checked by
    :func:`validate`.
    """

    __slots__ = ("n", "cells", "index", "src", "tgt", "comp", "__dict__")

    def __init__(self, n: int, cells: Sequence[str], src, tgt, comp):
        if n < 0:
            raise InputError(f"negative dimension {n}")
        cells = tuple(cells)
        if len(set(cells)) != len(cells):
            raise InputError("duplicate cell identifiers")
        size = len(cells)
        if len(src) != n or len(tgt) != n or len(comp) != n:
            raise InputError(f"expected {n} structures")
        self.n = n
        self.cells = cells
        self.index = {c: k for k, c in enumerate(cells)}
        self.src = tuple(tuple(s) for s in src)
        self.tgt = tuple(tuple(t) for t in tgt)
        self.comp = tuple(dict(c) for c in comp)
        for level in range(n):
            for table in (self.src[level], self.tgt[level]):
                if len(table) != size or any(not 0 <= v < size for v in table):
                    raise InputError(f"malformed src/tgt table at level {level + 1}")
            for (x, y), z in self.comp[level].items():
                if not (0 <= x < size and 0 <= y < size and 0 <= z < size):
                    raise InputError(
                        f"comp entry at level {level + 1} references an unknown cell")

    # -- construction from names -------------------------------------------

    @classmethod
    def from_names(cls, n: int, cells: Sequence[str],
                   structures: Sequence[CatStructure]) -> "FiniteStrictNCat":
        cells = list(cells)
        index = {c: k for k, c in enumerate(cells)}
        if len(structures) != n:
            raise InputError(f"expected {n} structures, got {len(structures)}")

        def look(name):
            try:
                return index[name]
            except KeyError:
                raise InputError(f"unknown cell {name!r}") from None

        src, tgt, comp = [], [], []
        for st in structures:
            missing = [c for c in cells if c not in st.src or c not in st.tgt]
            if missing:
                raise InputError(f"src/tgt undefined on {missing[0]!r}")
            src.append([look(st.src[c]) for c in cells])
            tgt.append([look(st.tgt[c]) for c in cells])
            comp.append({(look(x), look(y)): look(z) for (x, y), z in st.comp.items()})
        return cls(n, cells, src, tgt, comp)

    def structure(self, i: int) -> CatStructure:
        """Structure ``i`` (1-based) keyed by cell names."""
        c = self.cells
        k = i - 1
        return CatStructure(
            src={c[x]: c[self.src[k][x]] for x in range(len(c))},
            tgt={c[x]: c[self.tgt[k][x]] for x in range(len(c))},
            comp={(c[x], c[y]): c[z] for (x, y), z in self.comp[k].items()},
        )

    @property
    def structures(self) -> List[CatStructure]:
        return [self.structure(i) for i in range(1, self.n + 1)]

    # -- identity and hashing ------------------------------------------------

    @cached_property
    def key(self):
        return (self.n, self.cells, self.src, self.tgt,
                tuple(tuple(sorted(c.items())) for c in self.comp))

    @cached_property
    def _hash(self):
        return hash(self.key)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FiniteStrictNCat):
            return NotImplemented
        return self._hash == other._hash and self.key == other.key

    def __len__(self):
        return len(self.cells)

    def __repr__(self):
        counts = "/".join(str(c) for c in self.dim_counts)
        return f"<FiniteStrictNCat n={self.n} cells={len(self.cells)} dims={counts}>"

    # -- derived data ----------------------------------------------------------

    @cached_property
    def dims(self) -> Tuple[int, ...]:
        """Dimension of each cell: the largest level at which it is not an identity."""
        out = []
        for x in range(len(self.cells)):
            d = 0
            for level in range(self.n, 0, -1):
                if self.src[level - 1][x] != x:
                    d = level
                    break
            out.append(d)
        return tuple(out)

    @cached_property
    def dim_counts(self) -> Tuple[int, ...]:
        counts = [0] * (self.n + 1)
        for d in self.dims:
            counts[d] += 1
        return tuple(counts)

    def dim(self, name: str) -> int:
        return self.dims[self.index[name]]

    def cells_of_dim(self, d: int) -> List[str]:
        return [c for c, e in zip(self.cells, self.dims) if e == d]

    @cached_property
    def objects(self) -> Tuple[int, ...]:
        return tuple(x for x, d in enumerate(self.dims) if d == 0)

    def is_identity(self, x: int, level: int) -> bool:
        return self.src[level - 1][x] == x

    def s(self, i: int, name: str) -> str:
        return self.cells[self.src[i - 1][self.index[name]]]

    def t(self, i: int, name: str) -> str:
        return self.cells[self.tgt[i - 1][self.index[name]]]

    def compose(self, i: int, x: str, y: str) -> str:
        """``comp_i(x, y)`` by name; KeyError when not composable."""
        return self.cells[self.comp[i - 1][(self.index[x], self.index[y])]]

    # -- ambient dimension -----------------------------------------------------

    def lift(self, n: int) -> "FiniteStrictNCat":
        """The same category viewed in a larger ambient dimension."""
        if n == self.n:
            return self
        if n < self.n:
            if any(d > n for d in self.dims):
                raise InputError(f"cannot view a {max(self.dims)}-category in dimension {n}")
            return FiniteStrictNCat(n, self.cells, self.src[:n], self.tgt[:n], self.comp[:n])
        ident = tuple(range(len(self.cells)))
        extra = n - self.n
        diag = {(x, x): x for x in ident}
        return FiniteStrictNCat(n, self.cells, self.src + (ident,) * extra,
                                self.tgt + (ident,) * extra,
                                self.comp + tuple(dict(diag) for _ in range(extra)))

    def rename(self, mapping: Mapping[str, str]) -> "FiniteStrictNCat":
        return FiniteStrictNCat(self.n, [mapping.get(c, c) for c in self.cells],
                                self.src, self.tgt, self.comp)

    # -- JSON -------------------------------------------------------------------

    def to_json_dict(self) -> dict:
        c = self.cells
        structures = []
        for k in range(self.n):
            comp = sorted(([c[x], c[y], c[z]] for (x, y), z in self.comp[k].items()),
                          key=lambda e: (self.index[e[0]], self.index[e[1]]))
            structures.append({
                "src": {c[x]: c[s] for x, s in enumerate(self.src[k])},
                "tgt": {c[x]: c[t] for x, t in enumerate(self.tgt[k])},
                "comp": comp,
            })
        return {"n": self.n, "cells": list(c), "structures": structures}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_json_dict(cls, data: dict) -> "FiniteStrictNCat":
        try:
            n = int(data["n"])
            cells = [str(c) for c in data["cells"]]
            raw = data["structures"]
            structures = []
            for st in raw:
                comp = {}
                for entry in st.get("comp", []):
                    x, y, z = entry
                    if (x, y) in comp and comp[(x, y)] != z:
                        raise InputError(f"conflicting comp entries for {(x, y)}")
                    comp[(x, y)] = z
                structures.append(CatStructure(dict(st["src"]), dict(st["tgt"]), comp))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"malformed n-category JSON: {exc}") from None
        return cls.from_names(n, cells, structures)

    @classmethod
    def from_json(cls, text: str) -> "FiniteStrictNCat":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from None
        return cls.from_json_dict(data)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    axiom: str
    levels: Tuple[int, ...]
    witness: Tuple[str, ...]

    def as_dict(self):
        return {"axiom": self.axiom, "levels": list(self.levels), "witness": list(self.witness)}


@dataclass
class ValidationReport:
    valid: bool
    violations: List[Violation]

    def __bool__(self):
        return self.valid

    def axioms(self):
        return sorted({v.axiom for v in self.violations})

    def find(self, axiom: str) -> List[Violation]:
        return [v for v in self.violations if v.axiom == axiom]


def validate(X: FiniteStrictNCat, limit: int = 50) -> ValidationReport:
    """Check every strict n-category axiom, collecting up to ``limit``
    witnesses per axiom."""
    out: List[Violation] = []
    counts: Dict[str, int] = {}
    names = X.cells
    N = range(len(names))

    def bad(axiom, levels, *wit):
        counts[axiom] = counts.get(axiom, 0) + 1
        if counts[axiom] <= limit:
            out.append(Violation(axiom, tuple(levels), tuple(names[w] for w in wit)))

    for i in range(1, X.n + 1):
        s, t, c = X.src[i - 1], X.tgt[i - 1], X.comp[i - 1]
        for x in N:
            if s[s[x]] != s[x] or t[s[x]] != s[x] or t[t[x]] != t[x] or s[t[x]] != t[x]:
                bad("idempotency", (i,), x)
        for (x, y), z in c.items():
            if s[x] != t[y]:
                bad("domain", (i,), x, y)
                continue
            if s[z] != s[y] or t[z] != t[x]:
                bad("boundary", (i,), x, y)
            if s[x] == x and z != y:
                bad("unit", (i,), x, y)
            if s[y] == y and z != x:
                bad("unit", (i,), x, y)
        by_target: Dict[int, List[int]] = {}
        for y in N:
            by_target.setdefault(t[y], []).append(y)
        for x in N:
            for y in by_target.get(s[x], ()):
                if (x, y) not in c:
                    bad("domain", (i,), x, y)
        # associativity over composable triples
        for (x, y), xy in c.items():
            if s[x] != t[y]:
                continue
            for z in by_target.get(s[y], ()):
                yz = c.get((y, z))
                left = c.get((xy, z))
                right = c.get((x, yz)) if yz is not None else None
                if left is None or right is None or left != right:
                    bad("associativity", (i,), x, y, z)

    for i in range(1, X.n + 1):
        si, ti, ci = X.src[i - 1], X.tgt[i - 1], X.comp[i - 1]
        for j in range(i + 1, X.n + 1):
            sj, tj, cj = X.src[j - 1], X.tgt[j - 1], X.comp[j - 1]
            for x in N:
                # images of src_i, tgt_i are j-identities
                if sj[si[x]] != si[x] or sj[ti[x]] != ti[x]:
                    bad("globularity", (i, j), x)
                # src_i, tgt_i commute with src_j, tgt_j
                if (si[sj[x]] != sj[si[x]] or si[tj[x]] != tj[si[x]]
                        or ti[sj[x]] != sj[ti[x]] or ti[tj[x]] != tj[ti[x]]):
                    bad("functoriality", (i, j), x)
            # src_i, tgt_i preserve comp_j
            for (x, y), z in cj.items():
                for m in (si, ti):
                    if cj.get((m[x], m[y])) != m[z]:
                        bad("functoriality", (i, j), x, y)
                        break
            # comp_i commutes with src_j, tgt_j
            for (x, y), z in ci.items():
                for m in (sj, tj):
                    if ci.get((m[x], m[y])) != m[z]:
                        bad("functoriality", (i, j), x, y)
                        break
            # interchange
            into = _index_by(ti, len(names))
            for (x, xp), top in cj.items():
                for y in into.get(si[x], ()):
                    xy = ci.get((x, y))
                    if xy is None:
                        continue
                    for yp in into.get(si[xp], ()):
                        if (y, yp) not in cj:
                            continue
                        xyp = ci.get((xp, yp))
                        if xyp is None:
                            continue
                        lhs = cj.get((xy, xyp))
                        rhs = ci.get((top, cj[(y, yp)]))
                        if lhs is None or rhs is None or lhs != rhs:
                            bad("interchange", (i, j), x, y, xp, yp)
    return ValidationReport(not out, out)


def _index_by(table, size):
    out: Dict[int, List[int]] = {}
    for k in range(size):
        out.setdefault(table[k], []).append(k)
    return out


def check_valid(X: FiniteStrictNCat) -> FiniteStrictNCat:
    from ..errors import InternalError
    rep = validate(X, limit=1)
    if not rep.valid:
        v = rep.violations[0]
        raise InternalError(f"constructed object violates {v.axiom} at {v.levels}: {v.witness}")
    return X


def empty(n: int) -> FiniteStrictNCat:
    return FiniteStrictNCat(n, [], [[]] * n, [[]] * n, [{}] * n)


def discrete(n: int, names: Iterable[str]) -> FiniteStrictNCat:
    names = list(names)
    ident = list(range(len(names)))
    diag = {(x, x): x for x in ident}
    return FiniteStrictNCat(n, names, [ident] * n, [ident] * n, [diag] * n)
