from factperm import config
from factperm.schemas import RunConfig
from factperm.suite import finstar_reports, run_suite


def _names(reports):
    return sorted(r.name for r in reports)


def test_default_run_covers_every_group():
    run = RunConfig(max_n=1, perm_n=1, fixtures=['terminal'])
    full = run_suite(run)
    parts = {check: run_suite(run.model_copy(update={'checks': [check]})) for check in config.SUITES}
    assert all(parts.values())
    assert _names(full) == _names([r for part in parts.values() for r in part])


def test_permutative_groups_skip_plain_fixtures():
    assert run_suite(RunConfig(fixtures=['arrow', 'parallel'], checks=['fact', 'perm', 'eta'])) == []


def test_finstar_runs_once_per_suite():
    run = RunConfig(max_n=1, fixtures=['arrow', 'parallel'], checks=['finstar'])
    assert _names(run_suite(run)) == _names(finstar_reports(1))
