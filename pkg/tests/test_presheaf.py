import pytest
from hypothesis import given, settings, strategies as st

from nct.errors import InputError
from nct.kernel import (FunctorMap, cell, count_functors, fiber_product, is_iso, iter_functors,
                        poset, product, simplex, walking_iso)
from nct.kernel.cells import collapse, face
from nct.presheaf import (CellularPresheaf, Edge, Indexing, TabulatedPresheaf, Window,
                          build_generators, build_s00, comp_theta, delta_compatibility,
                          eval_bijective, evaluate, glob_hat, hom, is_local, nerve,
                          presheaf_maps, recognize_gaunt_nerve, representable, segal_theta,
                          segal_theta_retract, small_window, transport_fiber_product)
from nct.theta import delta_n, mi, theta, theta_enumerate_objects

TH1, TH2 = Indexing("theta", 1), Indexing("theta", 2)
DL2 = Indexing("delta", 2)


def glued_arrows(ix):
    """νC_1 ⊔_{νC_0} νC_1, head to tail."""
    C0, C1 = cell(0, ix.n), cell(1, ix.n)
    top, bot = [C1.index[o] for o in C1.cells if C1.dims[C1.index[o]] == 0]
    edges = [Edge(2, 0, FunctorMap(C0, C1, [bot])), Edge(2, 1, FunctorMap(C0, C1, [top]))]
    return CellularPresheaf(ix, [C1, C1, C0], edges)


# -- evaluation --------------------------------------------------------------

def test_nerve_of_arrow_at_triangle():
    assert len(evaluate(nerve(cell(1, 1), TH1), theta(1, 2))) == 4


@pytest.mark.parametrize("X", [simplex(3), walking_iso(1), cell(2, 2)])
def test_nerve_at_point_is_objects(X):
    ix = Indexing("theta", X.n)
    assert len(evaluate(nerve(X, ix), theta(X.n, 0))) == len(X.objects)


def test_presheaf_pushout_is_not_nerve_of_pushout():
    P = glued_arrows(TH1)
    assert len(evaluate(P, theta(1, 2))) == 7
    assert len(evaluate(nerve(simplex(2), TH1), theta(1, 2))) == 10


def test_nerve_of_two_cell_at_grid():
    assert len(evaluate(nerve(cell(2, 2), TH2), delta_n(mi(1, 1)))) == 5


@pytest.mark.parametrize("o", theta_enumerate_objects(2, 5))
def test_nerve_of_point_is_terminal(o):
    assert len(evaluate(nerve(cell(0, 2), TH2), o)) == 1


@pytest.mark.parametrize("o", theta_enumerate_objects(2, 4))
@pytest.mark.parametrize("f,g", [(collapse(2, 1, 2), face(0, 1, "t", 2)),
                                 (collapse(2, 1, 2), collapse(2, 1, 2)),
                                 (collapse(1, 0, 2), collapse(2, 0, 2))])
def test_nerve_preserves_fiber_products(o, f, g):
    Pb, p1, p2 = fiber_product(f, g)
    A, B = evaluate(nerve(f.source, TH2), o), evaluate(nerve(g.source, TH2), o)
    pairs = sum(1 for (_, a) in A for (_, b) in B
                if tuple(f.assignment[v] for v in a) == tuple(g.assignment[v] for v in b))
    assert len(evaluate(nerve(Pb, TH2), o)) == pairs


def test_restriction_is_precomposition():
    N = nerve(simplex(2), TH1)
    u = TH1.hom(theta(1, 1), theta(1, 2))[2]
    for x in N.elements(theta(1, 2)):
        y = N.restrict(u, x)
        r = TH1.realize_mor(u).assignment
        assert y[1] == tuple(x[1][v] for v in r)


def test_json_round_trip():
    P = glued_arrows(TH1)
    Q = CellularPresheaf.from_json_dict(P.to_json_dict())
    for m in range(4):
        assert len(Q.elements(theta(1, m))) == len(P.elements(theta(1, m)))


def test_edge_must_match_atoms():
    with pytest.raises(InputError):
        CellularPresheaf(TH1, [cell(1, 1)], [Edge(0, 0, FunctorMap.identity(cell(0, 1)))])


# -- full faithfulness -------------------------------------------------------

@pytest.mark.parametrize("X,Y", [(cell(1, 2), cell(2, 2)), (cell(2, 2), cell(1, 2)),
                                 (simplex(2, 2), cell(1, 2)), (cell(2, 2), simplex(2, 2))])
def test_nerve_maps_are_functors(X, Y):
    maps = presheaf_maps(nerve(X, TH2), nerve(Y, TH2), small_window(TH2))
    assert len(maps) == count_functors(X, Y)


# -- generators --------------------------------------------------------------

def test_s00_counts():
    S = build_generators("S00", 2)
    assert len(S) == 14
    assert [len(S.by_tag(t)) for t in "abcd"] == [3, 3, 5, 3]


def test_glob_collapse_index():
    # zero coordinates collapse everything inside them
    assert glob_hat(mi(3, 0)) == mi(0, 0)
    assert glob_hat(mi(0, 3)) == mi(0, 3)
    assert glob_hat(mi(2, 3)) == mi(2, 3)


def test_comp_base_is_the_point():
    for g in comp_theta(1):
        assert g.map.target.labels == [theta(1, 0)]


def test_unknown_generator_set():
    with pytest.raises(InputError):
        build_generators("nope", 2)


def test_families_a_and_c_are_bijective():
    win = theta_enumerate_objects(2, 5)
    S = build_s00(2)
    for g in S.by_tag("a") + S.by_tag("c"):
        ok, wit = eval_bijective(g.map, win)
        assert ok, (g.describe(), wit)


def test_families_b_and_d_are_not_bijective():
    win = theta_enumerate_objects(2, 5)
    S = build_s00(2)
    for tag in "bd":
        assert any(not eval_bijective(g.map, win)[0] for g in S.by_tag(tag))


def test_dropping_the_glue_breaks_bijectivity():
    win = theta_enumerate_objects(2, 4)
    S = build_s00(2, fault="drop-glue")
    assert any(not eval_bijective(g.map, win)[0] for g in S.by_tag("c"))


# -- locality ----------------------------------------------------------------

def test_arrow_is_segal_local():
    gens = [g for g in segal_theta(1, 3) if g.map.target.labels == [theta(1, 2)]]
    assert gens
    r = is_local(nerve(simplex(1), TH1), gens[0].map)
    assert r.local and r.hom_target == r.hom_source == 4


def test_walking_iso_is_not_complete():
    g = comp_theta(1).generators[0]
    r = is_local(nerve(walking_iso(1), TH1), g.map)
    assert not r.local
    assert (r.hom_target, r.hom_source) == (2, 4)


def test_point_is_local_for_s00():
    N = nerve(cell(0, 2), TH2)
    for g in build_s00(2):
        assert is_local(N, g.map).local, g.describe()


def test_yoneda_and_nerve_homs_agree():
    N = nerve(cell(2, 2), TH2)
    for g in build_s00(2):
        if g.map.labelled:
            assert len(hom(g.map.source, N, "yoneda")) == len(hom(g.map.source, N, "nerve"))


def test_transport_over_point_is_product():
    g = build_s00(1).by_tag("b")[0]
    T = g.map.target.category
    C0 = cell(0, 1)
    rho = FunctorMap.constant(T, C0, "*")
    H = cell(1, 1)
    t = transport_fiber_product(g.map, rho, FunctorMap.constant(H, C0, "*"))
    assert is_iso(t.target.category, product(H, T)[0])
    for A, B in zip(t.source.atoms, g.map.source.atoms):
        assert is_iso(A, product(H, B)[0])


def test_transport_along_identity_keeps_the_map():
    g = build_s00(1).by_tag("b")[0]
    T = g.map.target.category
    C1 = cell(1, 1)
    win = theta_enumerate_objects(1, 4)
    for a in iter_functors(T, C1):
        t = transport_fiber_product(g.map, FunctorMap(T, C1, a), FunctorMap.identity(C1))
        assert is_iso(t.target.category, T)
        for o in win:
            assert len(t.source.elements(o)) == len(g.map.source.elements(o))
        assert eval_bijective(t, win)[0] == eval_bijective(g.map, win)[0]


# -- recognition -------------------------------------------------------------

def test_recognize_two_cell_over_delta():
    r = recognize_gaunt_nerve(nerve(cell(2, 2), DL2), Window.build(DL2))
    assert r.accepted and is_iso(r.category, cell(2, 2))


def test_reject_walking_iso():
    win = Window.build(TH1)
    r = recognize_gaunt_nerve(nerve(walking_iso(1), TH1), win)
    assert not r.accepted and r.failing.startswith("comp")


def test_reject_doubled_element():
    win = Window.build(TH1)
    P = TabulatedPresheaf(nerve(cell(1, 1), TH1), theta(1, 2))
    r = recognize_gaunt_nerve(P, win)
    assert not r.accepted and r.failing.startswith("segal")


@pytest.mark.parametrize("rels", [[], [(0, 1)], [(0, 1), (0, 2)], [(0, 2), (1, 2)]])
def test_recognize_posets(rels):
    X = poset(3, rels)
    r = recognize_gaunt_nerve(nerve(X, TH1), Window.build(TH1))
    assert r.accepted and is_iso(r.category, X)


# -- δ-restriction -----------------------------------------------------------

@pytest.mark.parametrize("X", [cell(1, 2), cell(2, 2), simplex(2, 2)])
def test_delta_restriction(X):
    win = Window.build(DL2, 2)
    assert delta_compatibility(X, 2, win) is None


def test_delta_restriction_detects_wrong_comparison():
    win = Window.build(DL2, 2)
    shifted = lambda m: delta_n(mi(*reversed(m.ms)))
    assert delta_compatibility(cell(2, 2), 2, win, to_theta=shifted) is not None


@pytest.mark.parametrize("o", theta_enumerate_objects(2, 5))
def test_theta_spines_are_grid_retracts(o):
    if o.m >= 2:
        assert segal_theta_retract(o).ok


# -- random posets -----------------------------------------------------------

@st.composite
def posets(draw):
    size = draw(st.integers(1, 4))
    rels = draw(st.lists(st.tuples(st.integers(0, size - 1), st.integers(0, size - 1)),
                         max_size=4))
    return poset(size, [(a, b) for a, b in rels if a < b])


@settings(max_examples=25, deadline=None)
@given(posets(), st.integers(0, 3))
def test_nerve_counts_chains(P, m):
    assert len(evaluate(nerve(P, TH1), theta(1, m))) == count_functors(simplex(m), P)


@pytest.mark.parametrize("o", theta_enumerate_objects(2, 4))
def test_representable_evaluates_to_homs(o):
    R = representable(o, TH2)
    for a in theta_enumerate_objects(2, 4):
        assert len(R.elements(a)) == len(TH2.hom(a, o))
