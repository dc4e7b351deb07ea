import itertools
import os

import pytest
from hypothesis import given, settings, strategies as st

from nct.errors import InputError
from nct.kernel import FunctorMap, cell, count_functors, fun_enum, is_gaunt, is_iso, simplex, validate
from nct.theta import (DeltaMor, ThetaMor, classify_map_to_cell, delta_compose, delta_hom, delta_n,
                       delta_n_mor, delta_window, grid_retract, mi, parse_theta, realize,
                       realize_by_wedges, realize_delta, grid_by_wedges, theta, theta_compose,
                       theta_enumerate_objects, theta_hom, theta_identity)


def P(text, level):
    return parse_theta(text, level)


# -- grammar -----------------------------------------------------------------

def test_parse_is_whitespace_insensitive():
    assert P("[2;[1],[0]]", 2) == P(" [2 ; [1] , [0] ] ", 2)
    assert str(P("[2;[1],[0]]", 2)) == "[2; [1], [0]]"


@pytest.mark.parametrize("bad", ["[2; [1]]", "[1; [0; [1]]]", "[-1]", "[1", "x"])
def test_parse_rejects_garbage(bad):
    with pytest.raises(InputError):
        P(bad, 2)


@pytest.mark.parametrize("o", theta_enumerate_objects(3, 5))
def test_str_round_trips(o):
    assert P(str(o), 3) == o


# -- morphisms ---------------------------------------------------------------

def test_units():
    for a in theta_enumerate_objects(2, 4):
        for b in theta_enumerate_objects(2, 4):
            for f in theta_hom(a, b):
                assert theta_compose(theta_identity(b), f) == f
                assert theta_compose(f, theta_identity(a)) == f


def test_delta_composition_example():
    f = ThetaMor(theta(1, 0), theta(1, 1), (0,))
    g = ThetaMor(theta(1, 1), theta(1, 1), (1, 1))
    assert theta_compose(g, f).phi == (1,)


@pytest.mark.parametrize("bound", [3, pytest.param(4, marks=pytest.mark.skipif(
    not os.environ.get("NCT_SLOW"), reason="about 80 s; set NCT_SLOW=1"))])
def test_associativity_small_theta2(bound):
    objs = theta_enumerate_objects(2, bound)
    homs = {(a, b): theta_hom(a, b) for a in objs for b in objs}
    for a, b, c, d in itertools.product(objs, repeat=4):
        for f in homs[a, b]:
            for g in homs[b, c]:
                gf = theta_compose(g, f)
                for h in homs[c, d]:
                    assert theta_compose(h, gf) == theta_compose(theta_compose(h, g), f)


def test_hom_counts():
    assert len(theta_hom(P("[1; [0]]", 2), P("[1; [1]]", 2))) == 4
    assert len(theta_hom(P("[2]", 1), P("[1]", 1))) == 4


@pytest.mark.parametrize("o", theta_enumerate_objects(2, 5))
def test_identity_in_hom(o):
    assert theta_identity(o) in theta_hom(o, o)


def test_morphism_type_checks():
    with pytest.raises(InputError):
        ThetaMor(theta(1, 1), theta(1, 1), (1, 0)).check()


# -- realization -------------------------------------------------------------

def test_realize_cells():
    assert is_iso(realize(P("[1; [0]]", 2), 2), cell(1, 2))
    assert is_iso(realize(P("[1; [1; [0]]]", 3), 3), cell(2, 3))


@pytest.mark.parametrize("m", range(5))
def test_realize_chain(m):
    assert is_iso(realize(theta(1, m), 1), simplex(m))


def test_realize_mixed_object():
    o = P("[2; [1], [0]]", 2)
    X = realize(o, 2)
    assert validate(X).valid and is_gaunt(X).gaunt
    assert len(X.cells) == 10
    assert is_iso(X, realize_by_wedges(o, 2))


@pytest.mark.parametrize("o", theta_enumerate_objects(2, 5))
def test_two_realizers_agree(o):
    assert is_iso(realize(o, 2), realize_by_wedges(o, 2))


def test_realization_is_fully_faithful_on_small_window():
    objs = theta_enumerate_objects(2, 4)
    for a in objs:
        for b in objs:
            assert len(theta_hom(a, b)) == count_functors(realize(a, 2), realize(b, 2)), (a, b)


def test_window_objects_are_gaunt():
    for o in theta_enumerate_objects(2, 6):
        assert is_gaunt(realize(o, 2)).gaunt


# -- δ_n ---------------------------------------------------------------------

def test_delta_examples():
    assert delta_n(mi(2, 1)) == P("[1; [2]]", 2)
    assert delta_n(mi(1, 1)) == P("[1; [1]]", 2)
    assert is_iso(realize(delta_n(mi(1, 1)), 2), cell(2, 2))
    assert delta_n(mi(0, 0, 0)) == theta(3, 0)


@pytest.mark.parametrize("m", delta_window(2, 3))
def test_grid_realizations_agree(m):
    assert is_iso(realize_delta(m, 2), grid_by_wedges(m, 2))


def test_delta_n_is_a_functor():
    win = delta_window(2, 2)
    for a, b, c in itertools.product(win, repeat=3):
        for f in delta_hom(a, b):
            F = delta_n_mor(f)
            assert F.check() is F
            for g in delta_hom(b, c):
                assert delta_n_mor(delta_compose(g, f)) == theta_compose(delta_n_mor(g), F)
        ident = DeltaMor(a, a, tuple(tuple(range(v + 1)) for v in a.ms))
        assert delta_n_mor(ident) == theta_identity(delta_n(a))


# -- maps to cells -----------------------------------------------------------

def test_maps_from_two_cell_to_arrow():
    maps = fun_enum(cell(2, 2), cell(1, 2))
    assert len(maps) == 3
    assert sum(not classify_map_to_cell(f).degenerate for f in maps) == 1


def test_map_to_point_is_nondegenerate():
    for o in theta_enumerate_objects(2, 4):
        X = realize(o, 2)
        f = FunctorMap.constant(X, cell(0, 2), "*")
        assert not classify_map_to_cell(f).degenerate


def test_constant_arrow_is_degenerate():
    C = cell(1, 1)
    f = FunctorMap(C, C, [C.objects[0]] * 3)
    c = classify_map_to_cell(f)
    assert c.degenerate and c.through == 0


@pytest.mark.parametrize("o", theta_enumerate_objects(2, 4))
def test_classification_is_a_partition(o):
    cells = [theta(2, 0), P("[1; [0]]", 2), P("[1; [1]]", 2)]
    for c in cells:
        for f in theta_hom(o, c):
            c = classify_map_to_cell(f)
            assert c.degenerate == (c.inclusion is not None)


def test_classify_needs_a_cell():
    with pytest.raises(InputError):
        classify_map_to_cell(FunctorMap.identity(simplex(2)))


# -- grids -------------------------------------------------------------------

def test_grid_retract_example():
    r = grid_retract(P("[2; [1], [0]]", 2))
    assert r.grid == mi(1, 2)
    assert delta_n(r.grid) == P("[2; [1], [1]]", 2)
    assert r.verify()


@pytest.mark.parametrize("m", range(5))
def test_chains_are_grids(m):
    r = grid_retract(theta(1, m))
    assert r.grid == mi(m) and r.verify()


@pytest.mark.parametrize("o", theta_enumerate_objects(2, 6) + theta_enumerate_objects(3, 5))
def test_every_object_is_a_grid_retract(o):
    r = grid_retract(o)
    assert r.section.check() and r.retraction.check()
    assert r.verify()


# -- enumeration -------------------------------------------------------------

def test_enumerate_theta1():
    assert theta_enumerate_objects(1, 4) == [theta(1, m) for m in range(4)]


def test_enumerate_theta2_contains_small_shapes():
    objs = theta_enumerate_objects(2, 4)
    assert P("[1; [1]]", 2) in objs
    assert P("[2; [0], [0]]", 2) in objs
    assert len(set(objs)) == len(objs)
    assert all(o.size <= 4 for o in objs)


@st.composite
def monotone(draw, m, k):
    return tuple(sorted(draw(st.lists(st.integers(0, k), min_size=m + 1, max_size=m + 1))))


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_delta_composition_is_map_composition(data):
    a, b, c = (data.draw(st.integers(0, 3)) for _ in range(3))
    f = ThetaMor(theta(1, a), theta(1, b), data.draw(monotone(a, b))).check()
    g = ThetaMor(theta(1, b), theta(1, c), data.draw(monotone(b, c))).check()
    assert theta_compose(g, f).phi == tuple(g.phi[v] for v in f.phi)
