import json

import pytest
from click.testing import CliRunner

from factperm.cli import cli


@pytest.fixture
def runner():
    return CliRunner()


def test_check_z2(runner):
    result = runner.invoke(cli, ['check', 'z2', '--checks', 'category'])
    assert result.exit_code == 0, result.output
    assert 'checks passed' in result.output


def test_check_writes_json_reports(runner, tmp_path):
    out = tmp_path / 'reports.json'
    result = runner.invoke(cli, ['--format', 'json', '--out', str(out), 'check', 'terminal'])
    assert result.exit_code == 0
    reports = json.loads(out.read_text(encoding='utf-8'))
    assert reports
    assert all(r['passed'] for r in reports)
    assert {'name', 'anchor', 'counterexamples', 'bounds', 'notes'} <= set(reports[0])


def test_malformed_fixture_exits_2_with_its_location(runner, tmp_path):
    bad = tmp_path / 'bad.json'
    bad.write_text('{"objects": [0,\n', encoding='utf-8')
    result = runner.invoke(cli, ['check', str(bad)])
    assert result.exit_code == 2
    assert f"{bad}:2:1" in result.output


def test_negative_bound_is_rejected(runner):
    result = runner.invoke(cli, ['--max-n', '-1', 'finstar'])
    assert result.exit_code == 2


def test_finstar(runner):
    result = runner.invoke(cli, ['--max-n', '2', 'finstar'])
    assert result.exit_code == 0, result.output
    assert '4/4 checks passed' in result.output


def test_reports_do_not_render_as_dot(runner):
    result = runner.invoke(cli, ['--format', 'dot', 'finstar'])
    assert result.exit_code == 2


def test_commands_needing_a_tensor_reject_plain_categories(runner):
    result = runner.invoke(cli, ['fact', 'parallel'])
    assert result.exit_code == 2
    assert 'tensor_obj' in result.output


def test_roundtrip_maxposet(runner):
    result = runner.invoke(cli, ['roundtrip', 'maxposet', '--n', '2'])
    assert result.exit_code == 0, result.output


def test_probe_initial(runner):
    result = runner.invoke(cli, ['probe-initial', 'arrow'])
    assert result.exit_code == 0, result.output
    assert result.output.count('PASS') == 2


def test_sset_on_the_point(runner):
    result = runner.invoke(cli, ['sset', 'terminal', '--dimension', '2'])
    assert result.exit_code == 0, result.output


def test_export_twisted_arrow(runner, tmp_path):
    out = tmp_path / 'tw.gv'
    result = runner.invoke(cli, ['--format', 'dot', '--out', str(out), 'export', 'tw', 'arrow'])
    assert result.exit_code == 0, result.output
    text = out.read_text(encoding='utf-8')
    assert text.startswith('digraph')
    assert text.count('->') == 2


def test_check_rejects_an_unknown_group(runner):
    result = runner.invoke(cli, ['check', 'terminal', '--checks', 'nope'])
    assert result.exit_code == 2


def test_check_selects_groups(runner, tmp_path):
    out = tmp_path / 'reports.json'
    result = runner.invoke(cli, ['--max-n', '1', '--format', 'json', '--out', str(out),
                                 'check', 'terminal', '--checks', 'finstar', '--checks', 'eta', '--truncate', '1'])
    assert result.exit_code in (0, 1), result.output
    names = [r['name'] for r in json.loads(out.read_text(encoding='utf-8'))]
    assert not any(name.startswith('probe') for name in names)
    assert len(names) == 5
