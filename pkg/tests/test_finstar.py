import itertools

import pytest
from hypothesis import given, strategies as st

from factperm.errors import FactpermError
from factperm.finstar import (
    MonotoneMap,
    NablaMap,
    PointedMap,
    active_maps,
    all_maps,
    check_factorization,
    check_nabla_isomorphism,
    check_rho_compatibility,
    check_wedge_laws,
    classify,
    delta_to_nabla,
    enumerate_tw_active,
    factorizations,
    factorize,
    fold,
    identity,
    rho,
    swap,
    tw_find_object,
    tw_object,
    wedge,
)


@st.composite
def pointed_maps(draw, max_n=4, max_m=4):
    n = draw(st.integers(0, max_n))
    m = draw(st.integers(0, max_m))
    table = draw(st.lists(st.integers(0, m), min_size=n, max_size=n))
    return PointedMap(n, m, table)


def test_classify_examples():
    assert classify(identity(3)) == {'inert': True, 'strongly_inert': True, 'active': True}
    assert classify(rho(2, [1])) == {'inert': True, 'strongly_inert': True, 'active': False}
    assert classify(fold(2)) == {'inert': False, 'strongly_inert': False, 'active': True}


def test_inert_but_not_strongly_inert():
    twist = PointedMap(2, 2, [2, 1])
    assert twist.is_inert()
    assert not twist.is_strongly_inert()


def test_factorize_example():
    f = PointedMap(3, 1, [1, 0, 1])
    assert factorize(f) == (rho(3, [1, 3]), fold(2))
    assert rho(3, [1, 3]) == PointedMap(3, 2, [1, 0, 2])


def test_factorize_degenerate_cases():
    assert factorize(fold(3)) == (identity(3), fold(3))
    assert factorize(rho(3, [2])) == (rho(3, [2]), identity(1))


@given(pointed_maps())
def test_factorization_is_unique_and_recomposes(f):
    inert, act = factorize(f)
    assert inert.is_strongly_inert()
    assert act.is_active()
    assert act.compose(inert) == f
    assert factorizations(f) == [(inert, act)]


def test_rho_examples():
    assert rho(3, [1, 2, 3]) == identity(3)
    assert rho(3, []) == PointedMap(3, 0, [0, 0, 0])
    assert rho(3, [2]) == PointedMap(3, 1, [0, 1, 0])
    with pytest.raises(FactpermError):
        rho(2, [3])


def test_wedge_examples():
    assert wedge(identity(1), identity(1)) == identity(2)
    assert wedge(fold(2), identity(1)).table == (1, 1, 2)
    assert wedge(fold(2), identity(0)) == fold(2)


@given(pointed_maps(2, 2), pointed_maps(2, 2), pointed_maps(2, 2))
def test_wedge_is_associative(f, g, h):
    assert wedge(wedge(f, g), h) == wedge(f, wedge(g, h))


@given(st.integers(0, 3), st.integers(0, 3))
def test_swap_is_an_involution(n, m):
    assert swap(m, n).compose(swap(n, m)) == identity(n + m)


def test_parse_and_format():
    f = PointedMap.parse('3 2 : 1 0 2')
    assert f == rho(3, [1, 3])
    assert f.format() == '3 2 : 1 0 2'
    with pytest.raises(FactpermError):
        PointedMap.parse('3 2 1 0 2')


def test_pointed_map_rejects_bad_tables():
    with pytest.raises(FactpermError):
        PointedMap(2, 1, [1])
    with pytest.raises(FactpermError):
        PointedMap(1, 1, [2])


def test_delta_to_nabla_examples():
    assert delta_to_nabla(MonotoneMap(2, 2, [0, 1, 2])) == NablaMap(2, 2, [-1, 0, 1, 2])
    u = MonotoneMap(0, 1, [0])
    assert delta_to_nabla(u).table == (-1, 0, 0)


def test_nabla_rejects_moving_the_extrema():
    with pytest.raises(FactpermError):
        NablaMap(1, 1, [0, 0, 1])


@pytest.mark.parametrize('check', [check_factorization, check_rho_compatibility, check_wedge_laws,
                                   check_nabla_isomorphism])
def test_exhaustive_checks_pass(check):
    report = check(3)
    assert report.passed, report.counterexamples
    assert report.bounds['max_n'] == 3


def test_tw_active_at_zero():
    tw, act = enumerate_tw_active(0)
    assert len(tw.obj_keys) == 1
    assert len(tw.mor_keys) == 1
    assert tw_object(tw, act, 0) == identity(0)


def test_tw_active_at_one():
    """Active maps below ⟨1⟩ are id⟨0⟩, id⟨1⟩ and ⟨0⟩ -> ⟨1⟩; ⟨1⟩ -> ⟨0⟩ is not active"""
    tw, act = enumerate_tw_active(1)
    assert sorted(tw_object(tw, act, x) for x in tw.objects) == sorted([identity(0), identity(1), PointedMap(0, 1, [])])
    assert list(active_maps(1, 0)) == []


def test_tw_active_hom_from_id1_is_never_empty():
    tw, act = enumerate_tw_active(2)
    start = tw_find_object(tw, act, identity(1))
    for x in tw.objects:
        if tw_object(tw, act, x).n >= 1:
            assert tw.hom(start, x)


def test_tw_active_rejects_negative_bound():
    with pytest.raises(FactpermError):
        enumerate_tw_active(-1)


def test_tw_active_pairs_the_category_with_its_index():
    tw, act = enumerate_tw_active(1)
    assert sorted(tw.obj_keys) == sorted(act.morphisms)
    assert not hasattr(tw, 'active')


def test_wedge_associativity_reaches_the_bound():
    """Every triple of maps whose wedge fits in ⟨2⟩, not just maps out of ⟨0⟩ and ⟨1⟩"""
    maps = [f for n in range(3) for m in range(3) for f in all_maps(n, m)]
    expected = sum(1 for f, g, h in itertools.product(maps, repeat=3)
                   if f.n + g.n + h.n <= 2 and f.m + g.m + h.m <= 2)
    report = check_wedge_laws(2)
    assert report.passed
    assert report.bounds == {'max_n': 2, 'triples': expected}
