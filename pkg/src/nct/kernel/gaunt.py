"""Gauntness, tested as locality against ``σ^{k-1}E -> C_{k-1}`` and
cross-checked by a direct scan for invertible cells."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .constructions import cell, suspend_map, suspension, walking_iso
from .functors import FunctorMap, common_dim, functor_assignments
from .ncat import FiniteStrictNCat


@dataclass
class GauntReport:
    gaunt: bool
    level: Optional[int] = None           # first k with a failure
    witness: Optional[FunctorMap] = None  # σ^{k-1}E -> X not factoring through C_{k-1}
    invertible_cell: Optional[Tuple[str, str]] = None  # (f, inverse) from the direct scan
    agrees: bool = True

    def __bool__(self):
        return self.gaunt


def iso_collapse(k: int) -> FunctorMap:
    """``σ^{k-1}(E -> C_0)``, a map of (k)-categories."""
    E = walking_iso(1)
    f = FunctorMap.constant(E, cell(0, 1), "*")
    return suspend_map(f, k - 1)


def invertible_cells(X: FiniteStrictNCat):
    """Non-identity k-cells with a strict k-inverse, as (cell, inverse, k)."""
    out = []
    for k in range(1, X.n + 1):
        s, t, c = X.src[k - 1], X.tgt[k - 1], X.comp[k - 1]
        for f in range(len(X.cells)):
            if s[f] == f:
                continue
            for g in range(len(X.cells)):
                if c.get((g, f)) == s[f] and c.get((f, g)) == t[f]:
                    out.append((X.cells[f], X.cells[g], k))
                    break
    return out


def is_gaunt(X: FiniteStrictNCat) -> GauntReport:
    """Restriction ``Fun(C_{k-1}, X) -> Fun(σ^{k-1}E, X)`` must be bijective for all k."""
    inv = invertible_cells(X)
    rep = GauntReport(True)
    for k in range(1, X.n + 1):
        col = iso_collapse(k)
        SE = col.source
        SE2, Xl = common_dim(SE, X)
        Ck2 = col.target.lift(Xl.n)
        a = col.assignment
        image = {tuple(u[v] for v in a) for u in functor_assignments(Ck2, Xl)}
        for w in functor_assignments(SE2, Xl):
            if w not in image:
                rep = GauntReport(False, k, FunctorMap(SE, X, w))
                break
        if not rep.gaunt:
            break
    if inv:
        rep.invertible_cell = inv[0][:2]
    rep.agrees = rep.gaunt == (not inv)
    return rep


def sigma_iso(k: int, n: Optional[int] = None) -> FiniteStrictNCat:
    """``σ^k E`` in ambient dimension ``n`` (default k+1)."""
    X = walking_iso(1)
    for _ in range(k):
        X = suspension(X)
    return X if n is None else X.lift(n)
