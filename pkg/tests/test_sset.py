import pytest
from hypothesis import given, settings, strategies as st

from factperm.errors import FactpermError
from factperm.loader import load_fixture
from factperm.sset import (
    TruncatedSSet,
    category_of_simplices,
    check_simplicial_identities,
    epsilon,
    homology,
    marking,
    nerve_truncate,
)


def counts(X):
    return [len(level) for level in X.simplices]


def test_nerve_counts(terminal, arrow, indiscrete):
    assert counts(nerve_truncate(terminal, 2)) == [1, 1, 1]
    assert counts(nerve_truncate(arrow, 1)) == [2, 3]
    assert counts(nerve_truncate(indiscrete, 2)) == [2, 4, 8]


def test_nerve_rejects_negative_dimension(arrow):
    with pytest.raises(FactpermError):
        nerve_truncate(arrow, -1)


@pytest.mark.parametrize('d', [1, 2, 3])
def test_nerve_satisfies_simplicial_identities(indiscrete, d):
    assert check_simplicial_identities(nerve_truncate(indiscrete, d)).passed


def test_nerve_faces_of_an_edge(arrow):
    X = nerve_truncate(arrow, 1)
    f = X.index[1][(arrow.mor('f'),)]
    assert X.face(1, 0, f) == 1
    assert X.face(1, 1, f) == 0
    assert X.nondegenerate(1) == [f]


def test_homology_of_contractible_nerves(terminal, indiscrete):
    assert homology(nerve_truncate(terminal, 2)) == (1, 0, [])
    assert homology(nerve_truncate(indiscrete, 2)) == (1, 0, [])


def test_parallel_arrows_give_a_circle():
    """f, g: 0 -> 1 with nothing in degree 2 but degenerate simplices"""
    X = nerve_truncate(load_fixture('parallel'), 2)
    assert X.nondegenerate(2) == []
    assert homology(X) == (1, 1, [])


def test_homology_needs_dimension_two(arrow):
    with pytest.raises(FactpermError):
        homology(nerve_truncate(arrow, 1))


def test_category_of_simplices_counts(terminal, arrow):
    assert len(category_of_simplices(nerve_truncate(arrow, 1), 1).obj_keys) == 5
    assert len(category_of_simplices(nerve_truncate(terminal, 1), 1).obj_keys) == 2


def test_category_of_simplices_of_a_point(terminal):
    """Δ/Δ⁰ through dimension 1: two maps [0] -> [1] and one degeneracy [1] -> [0]"""
    D = category_of_simplices(nerve_truncate(terminal, 1))
    assert D.violations() == []
    vertex, edge = D.obj((0, 0)), D.obj((1, 0))
    assert len(D.hom(vertex, edge)) == 2
    assert len(D.hom(edge, vertex)) == 1


@pytest.mark.parametrize('d', [1, 2, 3])
@pytest.mark.parametrize('name', ['terminal', 'arrow', 'indiscrete'])
def test_epsilon_is_simplicial(terminal, arrow, indiscrete, name, d):
    C = {'terminal': terminal, 'arrow': arrow, 'indiscrete': indiscrete}[name]
    X = nerve_truncate(C, d)
    report = epsilon(X, d).check()
    assert report.passed, report.counterexamples


def test_epsilon_needs_enough_dimensions(arrow):
    with pytest.raises(FactpermError):
        epsilon(nerve_truncate(arrow, 1), 2)


def test_marking_is_monotone_and_marks_degenerate_edges(arrow):
    X = nerve_truncate(arrow, 1)
    least = marking(X, [])
    most = marking(X, range(len(X.simplices[1])))
    assert least.marked <= most.marked
    assert least.missing_degenerate() == []
    assert most.missing_degenerate() == []


def test_marking_adds_the_vertex_inclusions_of_marked_edges(arrow):
    X = nerve_truncate(arrow, 1)
    f = X.index[1][(arrow.mor('f'),)]
    assert len(marking(X, [f]).marked) > len(marking(X, []).marked)


def test_schema_keeps_the_structure(indiscrete):
    X = nerve_truncate(indiscrete, 2)
    Y = TruncatedSSet.from_schema(X.to_schema())
    assert counts(Y) == counts(X)
    assert Y.faces == X.faces
    assert Y.degeneracies == X.degeneracies
    assert homology(Y) == homology(X)


def relabel(X, perms):
    """The same simplicial set with level k reindexed by s |-> perms[k][s]"""
    simplices = []
    for k, level in enumerate(X.simplices):
        moved = [None] * len(level)
        for s, label in enumerate(level):
            moved[perms[k][s]] = label
        simplices.append(moved)

    def move(rows, k, into):
        out = []
        for row in rows:
            new = [None] * len(row)
            for s, t in enumerate(row):
                new[perms[k][s]] = perms[into][t]
            out.append(new)
        return out

    faces = [[]] + [move(X.faces[k], k, k - 1) for k in range(1, X.dimension + 1)]
    degeneracies = [move(X.degeneracies[k], k, k + 1) for k in range(X.dimension)]
    return TruncatedSSet(X.dimension, simplices, faces, degeneracies, name=f"{X.name}'")


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(['parallel', 'arrow', 'maxposet']), st.data())
def test_homology_ignores_simplex_labels(name, data):
    fixture = load_fixture(name)
    C = getattr(fixture, 'base', fixture)
    X = nerve_truncate(C, 2)
    perms = [data.draw(st.permutations(range(len(level)))) for level in X.simplices]
    Y = relabel(X, perms)
    assert check_simplicial_identities(Y).passed
    assert homology(Y) == homology(X)
