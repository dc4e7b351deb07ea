import pytest
from hypothesis import given, settings, strategies as st

from nct.colimits import (SpanDiagram, glue, k_diagram, point_at, pushout,
                          verify_cocone_universal, wedge_at_endpoints, wedge_many)
from nct.errors import CompletionBoundExceeded, InputError
from nct.kernel import (FunctorMap, boundary, cell, coproduct, discrete, fun_enum, is_iso,
                        simplex, suspend_map, suspension, validate, walking_iso)
from nct.kernel.cells import face


def boundary_diagram(k, n):
    C, B = cell(k - 1, n), boundary(k - 1, n)
    inc = FunctorMap.from_dict(B, C, {c: c for c in B.cells})
    return SpanDiagram(inc, inc)


def composable_diagram(n=1):
    # target of the first arrow meets the source of the second
    return SpanDiagram(face(0, 1, "t", n), face(0, 1, "s", n))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_two_cells_glued_on_boundary(k):
    d = boundary_diagram(k, 3)
    po = pushout(d)
    assert len(po.obj.cells) == 2 * k
    assert is_iso(po.obj, boundary(k, 3))
    cc = verify_cocone_universal(po.obj, po.left, po.right, d, [cell(j, 3) for j in range(4)])
    assert cc.ok, cc.witness


def test_composable_arrows_give_triangle():
    d = composable_diagram()
    po = pushout(d)
    assert len(po.obj.cells) == 6
    assert is_iso(po.obj, simplex(2))
    assert po.trace.rounds == 1
    assert verify_cocone_universal(po.obj, po.left, po.right, d, [cell(1, 1)]).ok


def test_k_pushout_is_walking_iso():
    d = k_diagram(1)
    po = pushout(d)
    assert len(po.obj.cells) == 4
    assert is_iso(po.obj, walking_iso(1))
    tests = [cell(0, 1), cell(1, 1), walking_iso(1)]
    assert verify_cocone_universal(po.obj, po.left, po.right, d, tests).ok


def test_cocone_with_extra_object_fails_at_arrow():
    d = composable_diagram()
    po = pushout(d)
    Z, inc, _ = coproduct(po.obj, discrete(1, ["extra"]))
    cc = verify_cocone_universal(Z, po.left.then(inc), po.right.then(inc), d,
                                 [cell(0, 1), cell(1, 1)])
    assert not cc.ok
    assert cc.witness["T"] == 1


def test_cocone_without_composite_is_rejected():
    d = composable_diagram()
    Z, i1, i2 = coproduct(cell(1, 1), cell(1, 1))
    cc = verify_cocone_universal(Z, i1, i2, d, [cell(1, 1)])
    assert not cc.ok


def test_induced_map_is_unique_factorisation():
    d = composable_diagram()
    po = pushout(d)
    T = cell(1, 1)
    for u in fun_enum(cell(1, 1), T):
        for v in fun_enum(cell(1, 1), T):
            if d.left.then(u).assignment != d.right.then(v).assignment:
                with pytest.raises(InputError):
                    po.induced(u, v)
                continue
            h = po.induced(u, v)
            assert h.is_functor()
            assert po.left.then(h).assignment == u.assignment
            assert po.right.then(h).assignment == v.assignment


def test_loop_does_not_close():
    # identifying both ends of an arrow asks for the free monoid
    C, B = cell(1, 1), boundary(1, 1)
    inc = FunctorMap.from_dict(B, C, {c: c for c in B.cells})
    pt = FunctorMap.constant(B, discrete(1, ["*"]), "*")
    with pytest.raises(CompletionBoundExceeded):
        pushout(SpanDiagram(inc, pt))


@pytest.mark.parametrize("diagram", [boundary_diagram(1, 2), boundary_diagram(2, 2),
                                     composable_diagram(2)])
def test_suspension_commutes_with_pushout(diagram):
    P = pushout(diagram).obj
    sd = SpanDiagram(suspend_map(diagram.left), suspend_map(diagram.right))
    assert is_iso(suspension(P), pushout(sd).obj)


def test_wedge_with_point_is_identity():
    X = simplex(2)
    assert is_iso(wedge_at_endpoints(cell(0, 1), X).obj, X)
    assert is_iso(wedge_at_endpoints(X, cell(0, 1)).obj, X)


def test_wedge_of_suspensions_has_ten_cells():
    # σC_1 ∪ σC_0, whiskered composites included
    W = wedge_at_endpoints(cell(2, 2), cell(1, 2)).obj
    assert validate(W).valid
    assert len(W.cells) == 10


def test_glue_at_chosen_points():
    X = simplex(1)
    po = glue(point_at(X, X.index["1"]), point_at(X, X.index["0"]))
    assert is_iso(po.obj, simplex(2))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=3))
def test_wedge_of_chains_is_a_chain(sizes):
    assert is_iso(wedge_many([simplex(m) for m in sizes]), simplex(sum(sizes)))
