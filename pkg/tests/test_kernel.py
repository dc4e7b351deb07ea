import itertools

import pytest
from hypothesis import given, settings, strategies as st

from nct.errors import InputError
from nct.kernel import (CatStructure, FiniteStrictNCat, FunctorMap, boundary, cell,
                        count_functors, decompose_cell_pullback, fiber_product, find_iso,
                        fun_enum, is_gaunt, is_iso, max_sub_k, opposite_r, poset, product,
                        simplex, standard_object, suspension, validate, walking_iso)
from nct.kernel.cells import collapse, face


def brute_functors(A, X):
    """Oracle: try every assignment of cells."""
    out = []
    for a in itertools.product(range(len(X.cells)), repeat=len(A.cells)):
        if FunctorMap(A, X, a).is_functor():
            out.append(a)
    return out


def hand_c1():
    # the arrow category, spelled out by hand
    cells = ["a", "b", "f"]
    s = {"a": "a", "b": "b", "f": "a"}
    t = {"a": "a", "b": "b", "f": "b"}
    comp = {("a", "a"): "a", ("b", "b"): "b", ("f", "a"): "f", ("b", "f"): "f"}
    return FiniteStrictNCat.from_names(1, cells, [CatStructure(s, t, comp)])


# -- sizes -------------------------------------------------------------------

@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_cell_and_boundary_sizes(k):
    assert len(cell(k, 3).cells) == 2 * k + 1
    assert len(boundary(k, 3).cells) == 2 * k


def test_walking_iso_has_four_cells():
    assert len(walking_iso(1).cells) == 4


@pytest.mark.parametrize("m", range(5))
def test_simplex_size(m):
    assert len(simplex(m).cells) == (m + 1) * (m + 2) // 2


def test_product_of_arrows():
    P, _, _ = product(cell(1, 1), cell(1, 1))
    assert len(P.cells) == 9
    assert validate(P).valid


def test_hand_built_arrow_is_c1():
    assert is_iso(hand_c1(), cell(1, 1))


# -- validation --------------------------------------------------------------

@pytest.mark.parametrize("kind,k", [("cell", 0), ("cell", 2), ("boundary", 2), ("E", None),
                                    ("simplex", 3), ("empty", None), ("K", None)])
def test_standard_objects_validate(kind, k):
    assert validate(standard_object(kind, 2, k)).valid


def test_broken_composite_is_reported():
    X = hand_c1()
    bad = {k: v for k, v in X.comp[0].items()}
    a, f = X.index["a"], X.index["f"]
    bad[(f, a)] = a
    Y = FiniteStrictNCat(1, X.cells, X.src, X.tgt, [bad])
    rep = validate(Y)
    assert not rep.valid
    assert any("f" in v.witness for v in rep.violations)


def test_missing_identity_composite_is_reported():
    X = hand_c1()
    comp = dict(X.comp[0])
    del comp[(X.index["b"], X.index["f"])]
    rep = validate(FiniteStrictNCat(1, X.cells, X.src, X.tgt, [comp]))
    assert not rep.valid


def test_unknown_cell_is_input_error():
    with pytest.raises(InputError):
        FiniteStrictNCat.from_names(1, ["a"], [CatStructure({"a": "z"}, {"a": "a"})])


# -- functors ----------------------------------------------------------------

@pytest.mark.parametrize("A,X,count", [
    (cell(0, 1), cell(1, 1), 2),
    (cell(1, 1), cell(1, 1), 3),
    (walking_iso(1), walking_iso(1), 4),
    (cell(1, 2), cell(2, 2), 4),
    (cell(2, 2), cell(1, 2), 3),
])
def test_functor_counts(A, X, count):
    assert count_functors(A, X) == count


@pytest.mark.parametrize("A,X", [(cell(1, 1), simplex(2)), (simplex(2), cell(1, 1)),
                                 (walking_iso(1), cell(1, 1)), (boundary(2, 2), cell(2, 2))])
def test_functors_agree_with_brute_force(A, X):
    fast = sorted(f.assignment for f in fun_enum(A, X))
    assert fast == sorted(brute_functors(A, X))


def test_monotone_maps_counted_by_binomial():
    # monotone maps [m] -> [k] number C(m+k+1, m+1)
    from math import comb
    for m in range(3):
        for k in range(3):
            assert count_functors(simplex(m), simplex(k)) == comb(m + k + 1, m + 1)


# -- isomorphism -------------------------------------------------------------

def test_iso_needs_same_shape():
    assert not is_iso(cell(2, 2), boundary(2, 2))
    assert is_iso(max_sub_k(cell(2, 2), 1), boundary(2, 2))


def test_find_iso_is_a_bijective_functor():
    f = find_iso(simplex(2), simplex(["x", "y", "z"]))
    assert f is not None and f.is_bijective() and f.is_functor()


@pytest.mark.parametrize("I", [(1, 0), (0, 1), (1, 1)])
def test_opposite_is_an_involution(I):
    X = cell(2, 2)
    Y = opposite_r(opposite_r(X, I), I)
    assert Y == X or is_iso(Y, X)
    assert is_iso(opposite_r(X, I), X)


def test_suspension_of_cell():
    assert is_iso(suspension(cell(1, 1)), cell(2, 2))


# -- gaunt -------------------------------------------------------------------

@pytest.mark.parametrize("X", [cell(2, 2), boundary(2, 2), simplex(3, 2),
                               product(cell(1, 2), cell(1, 2))[0]])
def test_gaunt_examples(X):
    rep = is_gaunt(X)
    assert rep.gaunt and rep.agrees


def test_walking_iso_is_not_gaunt():
    rep = is_gaunt(walking_iso(1))
    assert not rep.gaunt and rep.agrees
    assert rep.level == 1
    assert rep.invertible_cell is not None


def test_suspended_walking_iso_fails_at_level_two():
    rep = is_gaunt(suspension(walking_iso(1)))
    assert not rep.gaunt and rep.level == 2


# -- cell pullbacks ----------------------------------------------------------

def test_pullback_of_disjoint_faces_is_empty():
    d = decompose_cell_pullback(face(0, 1, "s", 1), face(0, 1, "t", 1))
    assert d.case == "disjoint" and d.verified
    assert len(d.pullback.cells) == 0


def test_pullback_over_point_is_product():
    f = collapse(1, 0, 1)
    d = decompose_cell_pullback(f, f)
    assert d.verified
    assert is_iso(d.pullback, product(cell(1, 1), cell(1, 1))[0])


def test_pullback_of_collapses_matches_fiber_product():
    f, g = collapse(2, 1, 2), collapse(2, 1, 2)
    d = decompose_cell_pullback(f, g)
    assert d.verified
    assert is_iso(d.pullback, fiber_product(f, g)[0])


# -- random posets -----------------------------------------------------------

@st.composite
def posets(draw):
    size = draw(st.integers(1, 4))
    rels = draw(st.lists(st.tuples(st.integers(0, size - 1), st.integers(0, size - 1)),
                         max_size=5))
    rels = [(a, b) for a, b in rels if a < b]
    return poset(size, rels)


@settings(max_examples=30, deadline=None)
@given(posets())
def test_random_posets_are_gaunt_categories(P):
    assert validate(P).valid
    assert is_gaunt(P).gaunt


@settings(max_examples=20, deadline=None)
@given(posets(), posets())
def test_functor_enumeration_matches_brute_force(P, Q):
    if len(P.cells) > 6 or len(Q.cells) > 6:
        return
    assert sorted(f.assignment for f in fun_enum(P, Q)) == sorted(brute_functors(P, Q))


@settings(max_examples=20, deadline=None)
@given(posets())
def test_product_projects_onto_factors(P):
    Q, p1, p2 = product(P, cell(1, 1))
    assert len(Q.cells) == 3 * len(P.cells)
    assert p1.is_functor() and p2.is_functor()


def test_cyclic_relations_rejected():
    with pytest.raises(InputError):
        poset(2, [(0, 1), (1, 0)])
