"""Enumeration budgets live here, in one place.

``NCT_BUDGET`` in the environment overrides the functor-search node budget.
"""
from __future__ import annotations

import os
from contextlib import contextmanager
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Budget:
    # backtracking nodes visited by a single functor search
    max_nodes: int = 2_000_000
    # cells allowed in a constructed object
    max_cells: int = 10_000
    # free-composition rounds in a pushout
    completion_rounds: int = 10


def _from_env() -> Budget:
    raw = os.environ.get("NCT_BUDGET")
    if not raw:
        return Budget()
    try:
        nodes = int(raw)
    except ValueError:
        return Budget()
    return Budget(max_nodes=max(1, nodes))


_current = _from_env()


def current() -> Budget:
    return _current


def set_budget(budget: Budget) -> None:
    global _current
    _current = budget


@contextmanager
def budget(**changes):
    """Temporarily override budget fields: ``with budget(max_nodes=10): ...``"""
    global _current
    saved = _current
    _current = replace(saved, **changes)
    try:
        yield _current
    finally:
        _current = saved
