import pytest

from factperm.errors import CategoryError
from factperm.fincat import (
    FinCategory,
    Functor,
    NatTransformation,
    category_to_schema,
    check_functor,
    check_nat_trans,
    comma_probe,
    compose_functors,
    full_subcategory,
    identity_functor,
    identity_transformation,
    inverse,
    isomorphisms,
    opposite,
    product,
    twisted_arrow,
    tw_functor,
    validate_category,
    vertical_compose,
)
from factperm.loader import load_fixture


def _raw_monoid(compose):
    return {
        'name': 'monoid',
        'objects': [0],
        'morphisms': [{'id': k, 'dom': 0, 'cod': 0} for k in ('id', 'a', 'b')],
        'identities': {'0': 'id'},
        'compose': compose,
    }


UNIT_ROWS = [['id', 'id', 'id'], ['a', 'id', 'a'], ['id', 'a', 'a'], ['b', 'id', 'b'], ['id', 'b', 'b']]


def test_validate_terminal(terminal):
    C = validate_category(category_to_schema(terminal))
    assert len(C.obj_keys) == 1
    assert len(C.mor_keys) == 1
    assert C.violations() == []


def test_validate_arrow(arrow):
    C = validate_category(category_to_schema(arrow))
    assert (len(C.obj_keys), len(C.mor_keys)) == (2, 3)
    assert C.comp(C.mor('f'), C.mor('id0')) == C.mor('f')
    assert C.comp(C.mor('id1'), C.mor('f')) == C.mor('f')


def test_validate_rejects_non_associative_table():
    """
    a∘a = b, a∘b = id, b∘b = id makes (a∘a)∘b differ from a∘(a∘b)
    """
    rows = UNIT_ROWS + [['a', 'a', 'b'], ['a', 'b', 'id'], ['b', 'a', 'b'], ['b', 'b', 'id']]
    with pytest.raises(CategoryError, match='associative') as info:
        validate_category(_raw_monoid(rows))
    assert len(info.value.witness) == 3


def test_validate_rejects_missing_composite():
    rows = UNIT_ROWS + [['a', 'a', 'b'], ['a', 'b', 'id'], ['b', 'a', 'b']]
    with pytest.raises(CategoryError, match='misses'):
        validate_category(_raw_monoid(rows))


def test_validate_rejects_missing_identity():
    raw = _raw_monoid(UNIT_ROWS)
    raw['identities'] = {}
    with pytest.raises(CategoryError, match='missing identity'):
        validate_category(raw)


def test_isomorphisms(arrow, indiscrete, terminal):
    assert isomorphisms(arrow) == {arrow.mor('id0'), arrow.mor('id1')}
    assert isomorphisms(indiscrete) == set(indiscrete.morphisms)
    assert isomorphisms(terminal) == {0}
    assert inverse(indiscrete, indiscrete.mor('a')) == indiscrete.mor('b')
    assert inverse(arrow, arrow.mor('f')) is None


def test_twisted_arrow_of_terminal(terminal):
    T = twisted_arrow(terminal)
    assert len(T.obj_keys) == 1
    assert len(T.mor_keys) == 1


def test_twisted_arrow_of_arrow(arrow):
    """
    The only non-identity twisted arrows leave f, towards id0 and id1
    """
    T = twisted_arrow(arrow)
    f = arrow.mor('f')
    assert len(T.obj_keys) == 3
    moves = [(T.obj_keys[T.dom[p]], T.obj_keys[T.cod[p]]) for p in T.morphisms if not T.is_identity(p)]
    assert sorted(moves) == [(f, arrow.mor('id0')), (f, arrow.mor('id1'))]
    assert T.violations() == []


def test_twisted_arrow_of_indiscrete(indiscrete):
    T = twisted_arrow(indiscrete)
    assert len(T.obj_keys) == 4
    assert all(len(T.hom(x, y)) == 1 for x in T.objects for y in T.objects)


@pytest.mark.parametrize('c', [0, 1])
def test_comma_probe_vanishes(arrow, indiscrete, c):
    assert comma_probe(arrow, c) == (1, 0, [])
    assert comma_probe(indiscrete, c) == (1, 0, [])


def test_comma_probe_terminal(terminal):
    assert comma_probe(terminal, 0) == (1, 0, [])


def test_opposite_swaps_composition(arrow):
    op = opposite(arrow)
    f = arrow.mor('f')
    assert (op.dom[f], op.cod[f]) == (1, 0)
    assert op.comp(f, arrow.mor('id1')) == f
    assert opposite(arrow, lazy=True).comp(f, arrow.mor('id1')) == f


def test_product_counts(arrow, indiscrete):
    P = product(arrow, indiscrete)
    assert len(P.obj_keys) == 4
    assert len(P.mor_keys) == 12
    assert product().obj_keys == ((),)


def test_identity_functor_and_transformation_pass(indiscrete):
    F = identity_functor(indiscrete)
    assert check_functor(F).passed
    assert check_nat_trans(identity_transformation(F)).passed
    assert compose_functors(F, F) == F


def test_functor_breaking_dom_cod_is_reported(arrow):
    """Sending both objects to 0 while keeping f fixed"""
    F = Functor(arrow, arrow, [0, 0], [0, 0, arrow.mor('f')], name='broken')
    report = check_functor(F)
    assert not report.passed
    assert 'dom/cod not preserved at f' in report.counterexamples


def test_constant_functors_are_related_by_f(arrow):
    at0 = Functor(arrow, arrow, [0, 0], [0, 0, 0], name='at0')
    at1 = Functor(arrow, arrow, [1, 1], [1, 1, 1], name='at1')
    f = arrow.mor('f')
    assert check_nat_trans(NatTransformation(at0, at1, [f, f])).passed
    assert not check_nat_trans(NatTransformation(at1, at0, [f, f])).passed


def test_vertical_composite_with_an_identity(arrow):
    at0 = Functor(arrow, arrow, [0, 0], [0, 0, 0], name='at0')
    at1 = Functor(arrow, arrow, [1, 1], [1, 1, 1], name='at1')
    f = arrow.mor('f')
    alpha = NatTransformation(at0, at1, [f, f], name='α')
    composite = vertical_compose(identity_transformation(at1), alpha)
    assert composite.components == (f, f)
    assert composite.target_functor == at1
    assert check_nat_trans(composite).passed


def test_full_subcategory_on_one_object(indiscrete):
    sub = full_subcategory(indiscrete, [1])
    assert list(sub.obj_keys) == [1]
    assert list(sub.mor_keys) == ['i1']
    assert sub.identity[0] == 0


def test_comp_chain_reads_right_to_left(indiscrete):
    a, b = indiscrete.mor('a'), indiscrete.mor('b')
    assert indiscrete.comp_chain(a) == a
    assert indiscrete.comp_chain(b, a) == indiscrete.mor('i0')
    assert indiscrete.comp_chain(a, b, a) == a


def _swap(indiscrete):
    return Functor(indiscrete, indiscrete, [1, 0], [1, 0, 3, 2], name='swap')


@pytest.mark.parametrize('name', ['arrow', 'parallel', 'z2', 'maxposet', 'indiscrete2'])
def test_tw_of_the_identity_is_the_identity(name):
    fixture = load_fixture(name)
    C = fixture if isinstance(fixture, FinCategory) else fixture.base
    assert tw_functor(identity_functor(C)) == identity_functor(twisted_arrow(C))


def test_tw_preserves_composition(arrow, indiscrete):
    swap = _swap(indiscrete)
    assert check_functor(tw_functor(swap)).passed
    assert tw_functor(compose_functors(swap, swap)) == compose_functors(tw_functor(swap), tw_functor(swap))
    into = Functor(arrow, indiscrete, [0, 1], [0, 1, 2], name='into')
    twice = compose_functors(swap, into)
    assert tw_functor(twice) == compose_functors(tw_functor(swap), tw_functor(into))
    assert check_functor(tw_functor(twice)).passed
