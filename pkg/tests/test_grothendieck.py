import pytest

from factperm.errors import CategoryError
from factperm.fincat import Functor
from factperm.permconstr import check_grothendieck, grothendieck, is_cartesian
from factperm.permconstr.grothendieck import total_components
from factperm.relcat import RelFunctor, identity_rel_functor, minimal_marking


def constant(fiber):
    return lambda c: fiber, lambda phi: identity_rel_functor(fiber)


def test_over_a_point_the_total_is_the_fiber(terminal, arrow):
    fibers, transition = constant(minimal_marking(arrow))
    G = grothendieck(terminal, fibers, transition)
    assert len(G.base.obj_keys) == 2
    assert len(G.base.mor_keys) == 3
    assert len(G.rel.weq) == 2
    assert check_grothendieck(G).passed


def test_point_fibers_give_back_the_index(terminal, arrow):
    fibers, transition = constant(minimal_marking(terminal))
    G = grothendieck(arrow, fibers, transition)
    assert len(G.base.obj_keys) == 2
    assert len(G.base.mor_keys) == 3
    assert G.cartesian == frozenset(G.base.morphisms)
    assert [G.projection.ob(x) for x in G.base.objects] == [0, 1]
    assert check_grothendieck(G).passed
    assert total_components(arrow, fibers, transition) == [[(0, 0), (1, 0)]]


def test_constant_fibers_give_the_product(arrow):
    fibers, transition = constant(minimal_marking(arrow))
    G = grothendieck(arrow, fibers, transition)
    assert len(G.base.obj_keys) == 4
    assert len(G.base.mor_keys) == 9
    assert len(G.rel.weq) == 6
    report = check_grothendieck(G)
    assert report.passed, report.counterexamples


def test_cartesian_morphisms_have_invertible_fiber_part(arrow):
    fibers, transition = constant(minimal_marking(arrow))
    G = grothendieck(arrow, fibers, transition)
    for p in G.base.morphisms:
        _, _, h = G.base.mor_keys[p]
        assert (p in G.cartesian) == arrow.is_identity(h)
        assert is_cartesian(G, p) == (p in G.cartesian)


def test_index_weq_restricts_the_marking(arrow):
    fibers, transition = constant(minimal_marking(arrow))
    f = arrow.mor('f')
    G = grothendieck(arrow, fibers, transition, index_weq=[arrow.mor('id0'), arrow.mor('id1')])
    assert all(G.base.mor_keys[p][0] != f for p in G.rel.weq)
    assert len(G.rel.weq) == 4


def test_non_functorial_transition_is_rejected(arrow):
    R = minimal_marking(arrow)
    at0 = RelFunctor(R, R, Functor(arrow, arrow, [0, 0], [0, 0, 0], name='at0'))
    with pytest.raises(CategoryError, match='not the identity'):
        grothendieck(arrow, lambda c: R, lambda phi: at0)
