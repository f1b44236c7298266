import pytest
from sympy.combinatorics import Permutation

from factperm.errors import BoundError, PermutativeError
from factperm.fincat import Functor
from factperm.finstar import PointedMap, fold, identity
from factperm.loader import fixture_path, read_json
from factperm.permcat import (
    PermRelCategory,
    canonical_symmetry,
    check_permutative,
    check_strict_sm_functor,
    check_symmetry_homomorphism,
    iterated_tensor,
    symmetry_pseudofunctor,
    symmetry_along,
    transposition_word,
    validate_permutative,
)
from factperm.relcat import RelFunctor, identity_rel_functor


@pytest.mark.parametrize('name', ['z2', 'maxposet', 'indiscrete2', 'terminal'])
def test_bundled_fixtures_are_permutative(name):
    C = validate_permutative(read_json(fixture_path(name)))
    assert check_permutative(C).passed


def test_markings_are_selectable():
    raw = read_json(fixture_path('maxposet'))
    C = validate_permutative(raw, 'maximal')
    assert C.is_weq(C.base.mor('f'))
    assert C.name == 'maxposet[maximal]'
    with pytest.raises(PermutativeError, match='unknown marking'):
        validate_permutative(raw, 'nope')


def test_wrong_unit_is_rejected():
    raw = read_json(fixture_path('z2'))
    raw['unit'] = 1
    with pytest.raises(PermutativeError, match='unit law'):
        validate_permutative(raw)


def test_braid_with_wrong_ends_is_rejected():
    raw = read_json(fixture_path('indiscrete2'))
    raw['braid'][0] = [0, 0, 'b']
    with pytest.raises(PermutativeError, match='wrong dom/cod'):
        validate_permutative(raw)


def test_iterated_tensor(maxposet, z2):
    assert iterated_tensor(maxposet, [], {}) == maxposet.unit
    assert iterated_tensor(maxposet, ['s'], {'s': 1}) == 1
    assert iterated_tensor(maxposet, [1, 2, 3], {1: 0, 2: 1, 3: 0}) == 1
    assert iterated_tensor(z2, [1, 2, 3], lambda s: 1) == 1


def test_canonical_symmetry_small_cases(z2):
    B = z2.base
    assert canonical_symmetry(z2, [0, 1], [1, 0]) == B.identity[1]
    assert canonical_symmetry(z2, [1, 0], [0, 1]) == z2.braid(1, 0)


def test_cycle_does_not_depend_on_the_decomposition(z2):
    xs = [1, 0, 1, 1]
    arrangement = [3, 2, 1, 0]
    assert transposition_word(arrangement, 'bubble') == [0, 1, 2, 0, 1, 0]
    assert transposition_word(arrangement, 'insertion') == [0, 1, 0, 2, 1, 0]
    bubble = symmetry_along(z2, xs, arrangement, transposition_word(arrangement, 'bubble'))
    insertion = symmetry_along(z2, xs, arrangement, transposition_word(arrangement, 'insertion'))
    assert bubble == insertion
    assert canonical_symmetry(z2, Permutation([3, 2, 1, 0]), xs) == bubble


def test_insertion_word_on_three_letters():
    assert transposition_word([2, 0, 1], 'insertion') == [0, 1]
    assert transposition_word([1, 2, 0], 'insertion') == [1, 0]
    assert transposition_word([0, 1, 2], 'insertion') == []


def test_transposition_word_rejects_unknown_sort():
    with pytest.raises(ValueError):
        transposition_word([1, 0], 'quick')


@pytest.mark.parametrize('xs', [[0, 1, 1], [1, 1, 1]])
def test_symmetry_homomorphism(z2, xs):
    assert check_symmetry_homomorphism(z2, xs).passed


def test_identity_is_strict_symmetric_monoidal(z2):
    assert check_strict_sm_functor(identity_rel_functor(z2.rel), z2, z2).passed


def test_shift_by_a_non_unit_object_fails(z2):
    """x |-> x ⊗ 1 on Z/2 moves the unit"""
    B = z2.base
    shift = RelFunctor(z2.rel, z2.rel, Functor(B, B, [1, 0], [B.identity[1], B.identity[0]], name='shift'))
    report = check_strict_sm_functor(shift, z2, z2)
    assert not report.passed
    assert any('unit goes to' in c for c in report.counterexamples)


def test_partial_tensor_outside_the_bound(point):
    with pytest.raises(BoundError):
        canonical_symmetry(_partial(point), [1, 0], [0, 0])


def _partial(C):
    return PermRelCategory(C.rel, lambda x, y: None, lambda f, g: None, C.unit, lambda x, y: None, bound=0)


def test_symmetry_pseudofunctor_tensors_the_fibres(z2):
    assert symmetry_pseudofunctor(z2, identity(2), [0, 1]) == (0, 1)
    assert symmetry_pseudofunctor(z2, fold(2), [1, 1]) == (z2.tensor(1, 1),)
    assert symmetry_pseudofunctor(z2, PointedMap(2, 1, [0, 1]), [1, 0]) == (0,)
    assert symmetry_pseudofunctor(z2, PointedMap(1, 1, [0]), [1]) == (z2.unit,)
