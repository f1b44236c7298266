import pytest

from factperm.errors import CoherenceError
from factperm.finstar import identity
from factperm.fincat import identity_transformation
from factperm.permconstr import (
    OplaxTransformation,
    alpha_beta_check,
    check_counit,
    check_functoriality,
    check_oplax,
    counit_functor,
    eta,
    fact_functor,
    identity_oplax,
    path_of_oplax,
    unit_inclusion,
)
from factperm.permconstr.eta import check_path_projections

ONE = frozenset([1])


@pytest.fixture(scope='module')
def fact1(z2):
    return fact_functor(z2, 1, segal=False)


@pytest.fixture(scope='module')
def eta1(fact1):
    return eta(fact1, 1)


@pytest.mark.parametrize('name', ['z2', 'maxposet'])
def test_counit(z2, maxposet, name):
    C = {'z2': z2, 'maxposet': maxposet}[name]
    report = check_counit(C, 1)
    assert report.passed, report.counterexamples


def test_counit_on_objects(z2, fact1):
    counit, P = counit_functor(z2, 1, fact1)
    assert counit.ob(P.unit) == z2.unit
    incl, _ = unit_inclusion(P)
    for x, A in enumerate(fact1.cats[1].algebras):
        assert counit.ob(incl.ob(x)) == A.obj[ONE]


def test_eta_is_oplax(eta1):
    _, report = eta1
    assert report.passed, report.counterexamples


def test_eta_at_one_is_the_unit_inclusion(fact1, eta1):
    alpha, _ = eta1
    P = alpha.P
    for x in fact1.value(1).base.objects:
        assert alpha.algebras[1][x].obj[ONE] == P.object_of(identity(1), (x,))
        assert alpha.components[1].ob(x) == alpha.target.cats[1].index_of(alpha.algebras[1][x])


def test_identity_oplax(fact1):
    alpha = identity_oplax(fact1)
    assert check_oplax(alpha).passed
    path = path_of_oplax(alpha)
    assert check_functoriality(path).passed
    assert check_path_projections(path).passed


def test_mismatched_fillers_are_rejected(fact1):
    F = fact1
    broken = OplaxTransformation(F, F, identity_oplax(F).components,
                                 lambda u: identity_transformation(F.act(identity(u.m)).underlying),
                                 name='broken')
    report = check_oplax(broken)
    assert not report.passed
    assert any('does not run' in c for c in report.counterexamples)
    with pytest.raises(CoherenceError):
        path_of_oplax(broken)


def test_alpha_beta(fact1):
    report = alpha_beta_check(fact1, 1)
    assert report.passed, report.counterexamples
