import pytest
from hypothesis import given, settings, strategies as st

from factperm.errors import RelCatError
from factperm.fincat import Functor, NatTransformation, identity_functor
from factperm.relcat import (
    BWD,
    FWD,
    HomotopyEquivWitness,
    RelFunctor,
    ZigZag,
    check_relcat,
    check_zigzag,
    identity_rel_functor,
    invert_witness,
    maximal_marking,
    minimal_marking,
    paste_witnesses,
    path_adjunction_witness,
    path_construction,
    path_section,
    rel_product,
    trivial_witness,
    validate_relcat,
    verify_homotopy_equivalence,
    zigzag_violations,
)


def test_minimal_and_maximal_markings_validate(arrow):
    minimal = validate_relcat(arrow, [arrow.mor('id0'), arrow.mor('id1')])
    maximal = validate_relcat(arrow, arrow.morphisms)
    assert check_relcat(minimal).passed
    assert check_relcat(maximal).passed
    assert minimal.weq == minimal_marking(arrow).weq
    assert maximal.weq == maximal_marking(arrow).weq


def test_marking_missing_isomorphisms_is_rejected(indiscrete):
    with pytest.raises(RelCatError, match='misses isomorphisms'):
        validate_relcat(indiscrete, [indiscrete.mor('i0'), indiscrete.mor('i1')])


def test_complete_closes_the_marking(indiscrete):
    R = validate_relcat(indiscrete, [], complete=True)
    assert R.weq == frozenset(indiscrete.morphisms)


def test_unknown_weq_ids_are_rejected(arrow):
    with pytest.raises(RelCatError):
        validate_relcat(arrow, [7])


def test_rel_product_marks_componentwise(arrow):
    R = rel_product(minimal_marking(arrow), maximal_marking(arrow))
    f, id0 = arrow.mor('f'), arrow.mor('id0')
    assert R.is_weq(R.base.mor((id0, f)))
    assert not R.is_weq(R.base.mor((f, id0)))


def test_trivial_witness_passes(arrow):
    assert verify_homotopy_equivalence(trivial_witness(minimal_marking(arrow))).passed


def _collapse_witness(R):
    """[1] ≃ point through the constant functor at 0, using the transformation at0 => id"""
    C = R.base
    at0 = RelFunctor(R, R, Functor(C, C, [0, 0], [0, 0, 0], name='at0'))
    ident = identity_rel_functor(R)
    step = NatTransformation(at0.underlying, identity_functor(C), [C.mor('id0'), C.mor('f')], name='collapse')
    zz = ZigZag(at0, ident, [(FWD, step)])
    return HomotopyEquivWitness(at0, ident, zz, zz, name='collapse')


def test_witness_with_weq_components_passes(arrow):
    report = verify_homotopy_equivalence(_collapse_witness(maximal_marking(arrow)))
    assert report.passed
    assert report.bounds == {'steps_fg': 1, 'steps_gf': 1}


def test_witness_with_non_weq_component_names_it(arrow):
    report = verify_homotopy_equivalence(_collapse_witness(minimal_marking(arrow)))
    assert not report.passed
    assert any('component at 1 is f, not weq' in c for c in report.counterexamples)


def test_zigzag_reverse_and_concat(arrow):
    w = _collapse_witness(maximal_marking(arrow))
    back = w.zz_gf.reverse()
    assert check_zigzag(back).passed
    assert len(w.zz_gf.concat(back)) == 2
    with pytest.raises(RelCatError):
        w.zz_gf.concat(w.zz_gf)


def test_path_object_counts(terminal, arrow):
    assert len(path_construction(identity_rel_functor(minimal_marking(terminal))).rel.base.obj_keys) == 1
    assert len(path_construction(identity_rel_functor(minimal_marking(arrow))).rel.base.obj_keys) == 2
    assert len(path_construction(identity_rel_functor(maximal_marking(arrow))).rel.base.obj_keys) == 3


def test_path_adjunction_counit(arrow):
    """The counit at (0, f) is (id0, f) and is a weak equivalence"""
    f = identity_rel_functor(maximal_marking(arrow))
    path = path_construction(f)
    w = path_adjunction_witness(f, path)
    assert verify_homotopy_equivalence(w).passed
    P = path.rel.base
    epsilon = w.zz_gf.steps[0][1]
    at = path.object_of(0, arrow.mor('f'))
    component = epsilon.components[at]
    assert P.mor_keys[component][:2] == (arrow.mor('id0'), arrow.mor('f'))
    assert path.rel.is_weq(component)


def test_section_then_projection_is_identity(indiscrete):
    f = identity_rel_functor(maximal_marking(indiscrete))
    path = path_construction(f)
    ell = path_section(path)
    assert [path.to_source.ob(ell.ob(x)) for x in indiscrete.objects] == list(indiscrete.objects)


ENDOS = [(0, 0), (1, 1), (0, 1), (1, 0)]


def _endo(R, objs):
    C = R.base
    mors = [C.hom(objs[C.dom[f]], objs[C.cod[f]])[0] for f in C.morphisms]
    return RelFunctor(R, R, Functor(C, C, list(objs), mors, name=f"F{objs}"))


def _zigzag(R, start, steps):
    """Each step moves to a new endofunctor through the unique transformation, in the given direction"""
    C = R.base
    first = current = _endo(R, start)
    built = []
    for objs, direction in steps:
        nxt = _endo(R, objs)
        a, b = (current, nxt) if direction == FWD else (nxt, current)
        components = [C.hom(a.ob(x), b.ob(x))[0] for x in C.objects]
        built.append((direction, NatTransformation(a.underlying, b.underlying, components)))
        current = nxt
    return ZigZag(first, current, built)


zigzag_steps = st.lists(st.tuples(st.sampled_from(ENDOS), st.sampled_from([FWD, BWD])), max_size=4)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(ENDOS), zigzag_steps, zigzag_steps, st.sampled_from(ENDOS))
def test_zigzag_operations_stay_valid(indiscrete_weq, start, steps, more, k):
    R = indiscrete_weq
    zz = _zigzag(R, start, steps)
    tail = _zigzag(R, steps[-1][0] if steps else start, more)
    K = _endo(R, k)
    assert zigzag_violations(zz) == []
    assert zigzag_violations(zz.reverse()) == []
    assert zigzag_violations(zz.concat(tail)) == []
    assert zigzag_violations(zz.whisker_left(K)) == []
    assert zigzag_violations(zz.whisker_right(K)) == []
    assert len(zz.concat(tail)) == len(zz) + len(tail)


def test_inverted_witness_passes(arrow):
    w = _collapse_witness(maximal_marking(arrow))
    inverse = invert_witness(w)
    assert (inverse.f, inverse.g) == (w.g, w.f)
    assert verify_homotopy_equivalence(inverse).passed


def test_pasted_witnesses_pass(arrow):
    R = maximal_marking(arrow)
    w = _collapse_witness(R)
    twice = paste_witnesses(w, w)
    report = verify_homotopy_equivalence(twice)
    assert report.passed, report.counterexamples
    assert report.bounds == {'steps_fg': 2, 'steps_gf': 2}
    assert verify_homotopy_equivalence(paste_witnesses(w, invert_witness(w))).passed
    assert verify_homotopy_equivalence(paste_witnesses(trivial_witness(R), w)).passed
