import os
from itertools import product as iproduct

import pytest
from hypothesis import given, settings, strategies as st

from nct.kernel import (boundary, cell, empty, is_gaunt, is_iso, poset, product,
                        simplex, walking_iso)
from nct.symmetry import (GlobularWindow, autos_of_globular, flip_action, is_thin,
                          natural_endo_probe, r_I, retracts_by_idempotents, retracts_of,
                          split, sub_categories, upsilon_window, verify_rI_group)

SLOW = pytest.mark.skipif(not os.environ.get("NCT_SLOW"), reason="set NCT_SLOW=1")


def same_classes(xs, ys):
    return len(xs) == len(ys) and all(any(is_iso(a, b) for b in ys) for a in xs)


# -- automorphisms -----------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3])
def test_autos_are_the_flips(n):
    autos = autos_of_globular(n)
    assert len(autos) == 2 ** n
    flips = [A.flip for A in autos]
    assert None not in flips
    assert sorted(flips) == sorted(iproduct((0, 1), repeat=n))


def test_globular_window_is_a_category():
    assert GlobularWindow.build(2).closed_under_composition()


def test_flips_are_distinct_on_generators():
    G = GlobularWindow.build(2)
    acts = [flip_action(G, I) for I in iproduct((0, 1), repeat=2)]
    assert len({tuple(sorted(a.items())) for a in acts}) == 4


def test_flip_swaps_faces():
    G = GlobularWindow.build(1)
    a = flip_action(G, (1,))
    assert a["s0"] == G.generators["t0"][2]
    assert a["t0"] == G.generators["s0"][2]


def test_flip_group_law():
    corpus = [cell(2, 2), boundary(2, 2), simplex(2, 2), walking_iso(2),
              product(cell(1, 2), cell(2, 2))[0]]
    rep = verify_rI_group(2, corpus)
    assert rep.ok and rep.checks == len(corpus) * (4 + 16)


def test_flips_of_different_levels_differ():
    X = product(cell(1, 2), cell(2, 2))[0]
    assert r_I(X, (1, 0)) != r_I(X, (0, 1))


def test_only_identity_is_natural_on_cells():
    corpus = [cell(k, 2) for k in range(3)]
    etas = natural_endo_probe(corpus)
    assert len(etas) == 1
    assert all(e == tuple(range(len(X.cells))) for e, X in zip(etas[0], corpus))


# -- retracts ----------------------------------------------------------------

def test_triangle_is_retract_of_square():
    sq = product(cell(1, 1), cell(1, 1))[0]
    certs = retracts_of(sq)
    assert all(c.verify() for c in certs)
    assert any(is_iso(c.splitting, simplex(2)) for c in certs)


@pytest.mark.parametrize("X", [cell(0, 1), cell(1, 1), cell(2, 2), simplex(2), boundary(2, 2),
                               product(cell(1, 1), cell(1, 1))[0], walking_iso(1),
                               poset(4, [(0, 1), (0, 2), (1, 3), (2, 3)])])
def test_retracts_match_idempotent_splitting(X):
    fast = retracts_of(X)
    assert all(c.verify() for c in fast)
    assert same_classes([c.splitting for c in fast],
                        [c.splitting for c in retracts_by_idempotents(X)])


@pytest.mark.parametrize("k", [0, 1, 2])
def test_cell_retracts_are_smaller_cells(k):
    got = [c.splitting for c in retracts_of(cell(k, 2))]
    assert same_classes(got, [cell(j, 2) for j in range(k + 1)])


def test_empty_has_itself_as_only_retract():
    certs = retracts_of(empty(1))
    assert len(certs) == 1 and len(certs[0].splitting.cells) == 0


def test_split_of_identity_is_everything():
    X = simplex(2)
    c = split(X, tuple(range(len(X.cells))))
    assert c.verify() and is_iso(c.splitting, X)


def test_thin_detection():
    assert is_thin(simplex(3))
    assert is_thin(boundary(1, 1))
    assert not is_thin(boundary(2, 2))


def test_sub_categories_of_arrow():
    subs = list(sub_categories(cell(1, 1)))
    # ∅, {a}, {b}, {a, b}, whole arrow
    assert len(subs) == 5


@st.composite
def posets(draw):
    size = draw(st.integers(1, 4))
    rels = draw(st.lists(st.tuples(st.integers(0, size - 1), st.integers(0, size - 1)),
                         max_size=4))
    return poset(size, [(a, b) for a, b in rels if a < b])


@settings(max_examples=20, deadline=None)
@given(posets())
def test_random_poset_retracts_agree(P):
    fast = retracts_of(P)
    assert all(c.verify() for c in fast)
    assert same_classes([c.splitting for c in fast],
                        [c.splitting for c in retracts_by_idempotents(P)])


# -- Υ -----------------------------------------------------------------------

def test_upsilon_small_window():
    # C_1 x C_1 has 9 cells, so nothing beyond C_0, C_1 and the empty fiber fits
    U = upsilon_window(1, 8)
    assert U.fixed_point and not U.skipped
    assert len(U.objects) == 3
    for X in [cell(0, 1), cell(1, 1), empty(1)]:
        assert U.contains(X)


def test_upsilon_round_limit_is_not_a_fixed_point():
    U = upsilon_window(1, 9, rounds=1)
    assert U.rounds == 1 and not U.fixed_point
    assert U.contains(product(cell(1, 1), cell(1, 1))[0])
    assert all(is_gaunt(X).gaunt for X in U.objects)


@SLOW
def test_upsilon_three_rounds_reach_four_simplex():
    U = upsilon_window(1, 15, rounds=3)
    for m in range(5):
        assert U.contains(simplex(m))
