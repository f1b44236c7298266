import pytest

from factperm.fincat import FinCategory, terminal_category
from factperm.loader import load_fixture
from factperm.relcat import maximal_marking


def arrow_category() -> FinCategory:
    """[1] = {0 -> 1}"""
    return FinCategory([0, 1], ['id0', 'id1', 'f'], [0, 1, 0], [0, 1, 1], [0, 1],
                       compose_table={(0, 0): 0, (1, 1): 1, (2, 0): 2, (1, 2): 2}, name='[1]')


def indiscrete_category() -> FinCategory:
    """two objects, exactly one morphism between any pair"""
    table = {(0, 0): 0, (1, 1): 1, (2, 0): 2, (1, 2): 2, (3, 1): 3, (0, 3): 3, (3, 2): 0, (2, 3): 1}
    return FinCategory([0, 1], ['i0', 'i1', 'a', 'b'], [0, 1, 0, 1], [0, 1, 1, 0], [0, 1],
                       compose_table=table, name='indiscrete2')


@pytest.fixture
def terminal():
    return terminal_category()


@pytest.fixture
def arrow():
    return arrow_category()


@pytest.fixture
def indiscrete():
    return indiscrete_category()


@pytest.fixture(scope='session')
def z2():
    return load_fixture('z2')


@pytest.fixture(scope='session')
def maxposet():
    return load_fixture('maxposet')


@pytest.fixture(scope='session')
def point():
    return load_fixture('terminal')


@pytest.fixture(scope='session')
def indiscrete_weq():
    """indiscrete2 with every morphism a weak equivalence"""
    return maximal_marking(indiscrete_category())
