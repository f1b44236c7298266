import pytest
from pydantic import ValidationError

from factperm import config
from factperm.errors import CategoryError, FactpermError
from factperm.schemas import CategorySchema, RunConfig, make_report, merge_reports


def test_run_config_defaults():
    run = RunConfig()
    assert run.fmt == 'text'
    assert run.fixtures == []


@pytest.mark.parametrize('bad', [{'max_n': -1}, {'perm_n': -1}, {'fmt': 'svg'}, {'checks': ['nope']}])
def test_run_config_rejects(bad):
    with pytest.raises(ValidationError):
        RunConfig(**bad)


def test_compose_rows_are_triples():
    with pytest.raises(ValidationError):
        CategorySchema(objects=[0], morphisms=[], identities={}, compose=[['a', 'b']])


def test_make_report_sorts_bounds():
    report = make_report('r', 'anchor', [], {'b': 2, 'a': 1})
    assert report.passed
    assert list(report.bounds) == ['a', 'b']


def test_merge_reports_prefixes_counterexamples():
    good = make_report('good', 'x', [])
    bad = make_report('bad', 'x', ['broken at 3'])
    merged = merge_reports('both', 'x', [good, bad], {'n': 1})
    assert not merged.passed
    assert merged.counterexamples == ['bad: broken at 3']
    assert merged.notes == ['good: pass', 'bad: FAIL']


def test_errors_carry_their_witness():
    exc = CategoryError('composition is not associative', ('h', 'g', 'f'))
    assert isinstance(exc, FactpermError)
    assert exc.detail == 'composition is not associative'
    assert str(exc) == "composition is not associative (witness: ('h', 'g', 'f'))"
    assert str(CategoryError('plain')) == 'plain'


def test_run_config_runs_every_group_by_default():
    assert RunConfig().checks == list(config.SUITES)
    assert RunConfig(checks=['eta', 'category']).checks == ['category', 'eta']
