import pytest

from factperm.errors import BoundError, FactpermError
from factperm.finstar import fold, identity, rho
from factperm.permcat import check_permutative
from factperm.permconstr import (
    PermObject,
    check_grothendieck,
    fact_functor,
    perm_build,
    unit_inclusion,
)


@pytest.fixture(scope='module')
def fact1(z2):
    return fact_functor(z2, 1, segal=False)


@pytest.fixture(scope='module')
def perm1(fact1):
    return perm_build(fact1, 1)


@pytest.fixture(scope='module')
def perm2(z2):
    return perm_build(fact_functor(z2, 2, segal=False), 2)


def test_perm_is_permutative(perm1):
    report = check_permutative(perm1)
    assert report.passed, report.counterexamples
    assert report.bounds == {'bound': 1}


def test_perm_total_is_a_relative_grothendieck_construction(perm1):
    assert check_grothendieck(perm1.total).passed


def test_unit_is_the_empty_wedge(perm1):
    unit = perm1.perm_object(perm1.unit)
    assert unit.u == identity(0)
    assert unit.xs == ()


def test_unit_inclusion(fact1, perm1):
    incl, report = unit_inclusion(perm1)
    assert report.passed, report.counterexamples
    for x in fact1.value(1).base.objects:
        assert perm1.perm_object(incl.ob(x)) == PermObject(identity(1), (x,))


def test_tensor_is_the_wedge_sum(perm2):
    incl, _ = unit_inclusion(perm2)
    x, y = incl.ob(0), incl.ob(1)
    assert perm2.tensor(x, y) == perm2.object_of(identity(2), (0, 1))
    assert perm2.tensor(perm2.unit, x) == x
    assert perm2.tensor(x, perm2.unit) == x


def test_tensor_leaves_the_bound(perm1):
    incl, _ = unit_inclusion(perm1)
    assert perm1.tensor(incl.ob(0), incl.ob(1)) is None


def test_braid_lies_over_the_interchange(perm2):
    incl, _ = unit_inclusion(perm2)
    x, y = incl.ob(0), incl.ob(1)
    b = perm2.braid(x, y)
    assert perm2.base.dom[b] == perm2.tensor(x, y)
    assert perm2.base.cod[b] == perm2.tensor(y, x)
    assert perm2.is_weq(b)


def test_format_object(fact1, perm1):
    incl, _ = unit_inclusion(perm1)
    label = fact1.value(1).base.obj_label(0)
    assert perm1.format_object(incl.ob(0)) == f"u = 1 1 : 1 | {label}"


def test_perm_objects_need_active_maps():
    with pytest.raises(FactpermError):
        PermObject(rho(2, [1]), [0])
    with pytest.raises(FactpermError):
        PermObject(fold(2), [0, 1])


def test_perm_beyond_the_bound(fact1):
    with pytest.raises(BoundError):
        perm_build(fact1, 2)
