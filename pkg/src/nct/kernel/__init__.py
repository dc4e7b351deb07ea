"""Finite strict n-categories: data model, functors, constructions."""
from .ncat import (CatStructure, FiniteStrictNCat, ValidationReport, Violation, check_valid,
                   discrete, empty, validate)
from .functors import (FunctorMap, common_dim, count_functors, find_iso, fun_enum,
                       is_iso, iter_functors)
from .constructions import (boundary, cell, coproduct, desuspend, fiber_product,
                            hom_category, induced_sub, max_sub_k, opposite_r, pair_map, poset,
                            product, simplex, standard_object, suspend_map, suspension,
                            walking_iso)
from .gaunt import GauntReport, invertible_cells, is_gaunt, iso_collapse, sigma_iso
from .cells import (CellPullback, ProductDecomposition, cell_dim, collapse,
                    decompose_cell_pullback, desuspend_map, face, product_decomposition)

__all__ = [
    "CatStructure", "FiniteStrictNCat", "ValidationReport", "Violation", "check_valid",
    "discrete", "empty", "validate", "FunctorMap", "common_dim", "count_functors",
    "find_iso", "fun_enum", "is_iso", "iter_functors", "boundary", "cell", "coproduct",
    "desuspend", "fiber_product", "hom_category", "induced_sub", "max_sub_k", "opposite_r",
    "pair_map", "poset", "product", "simplex", "standard_object", "suspend_map", "suspension",
    "walking_iso", "GauntReport", "invertible_cells", "is_gaunt", "iso_collapse",
    "sigma_iso", "CellPullback", "ProductDecomposition", "cell_dim", "collapse",
    "decompose_cell_pullback", "desuspend_map", "face", "product_decomposition",
]
