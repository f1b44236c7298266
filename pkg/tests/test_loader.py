import json

import pytest

from factperm.errors import FixtureError
from factperm.export import to_json
from factperm.fincat import FinCategory
from factperm.loader import bundled_fixtures, fixture_path, load_fixture, load_sset, markings_of, read_json
from factperm.permcat import PermRelCategory
from factperm.relcat import RelCategory
from factperm.sset import nerve_truncate


def test_bundled_fixtures():
    assert bundled_fixtures() == ['arrow', 'indiscrete2', 'maxposet', 'parallel', 'terminal', 'z2']


def test_fixture_kinds():
    assert isinstance(load_fixture('parallel'), FinCategory)
    assert isinstance(load_fixture('arrow'), RelCategory)
    assert isinstance(load_fixture('z2'), PermRelCategory)


def test_markings():
    assert markings_of('arrow') == ['maximal', 'minimal']
    assert markings_of('parallel') == []
    maximal = load_fixture('arrow', 'maximal')
    assert maximal.name == 'arrow[maximal]'
    assert len(maximal.weq) == 3
    with pytest.raises(FixtureError, match='unknown marking'):
        load_fixture('arrow', 'nope')


def test_unknown_fixture_lists_the_bundled_ones():
    with pytest.raises(FixtureError, match='bundled: arrow'):
        fixture_path('no-such-fixture')


def test_malformed_json_reports_line_and_column(tmp_path):
    bad = tmp_path / 'bad.json'
    bad.write_text('{"objects": [0,\n', encoding='utf-8')
    with pytest.raises(FixtureError) as exc:
        read_json(str(bad))
    assert exc.value.detail.startswith(f"{bad}:2:1:")
    assert exc.value.witness == (2, 1)


def test_law_violations_become_fixture_errors(tmp_path):
    broken = tmp_path / 'broken.json'
    broken.write_text('''{
      "objects": [0],
      "morphisms": [{"id": "e", "dom": 0, "cod": 0}, {"id": "a", "dom": 0, "cod": 0}],
      "identities": {"0": "e"},
      "compose": [["e", "e", "e"], ["a", "e", "a"], ["e", "a", "a"]]
    }''', encoding='utf-8')
    with pytest.raises(FixtureError, match='misses'):
        load_fixture(str(broken))


def test_schema_errors_name_the_field(tmp_path):
    bad = tmp_path / 'rows.json'
    bad.write_text('{"objects": [0], "morphisms": [], "identities": {}, "compose": [[1, 2]]}', encoding='utf-8')
    with pytest.raises(FixtureError, match='compose'):
        load_fixture(str(bad))


def test_fixture_name_defaults_to_the_file_stem(tmp_path):
    path = tmp_path / 'nameless.json'
    raw = read_json(fixture_path('parallel'))
    del raw['name']
    path.write_text(json.dumps(raw), encoding='utf-8')
    assert load_fixture(str(path)).name == 'nameless'


def test_load_sset(tmp_path, arrow):
    path = tmp_path / 'arrow_nerve.json'
    path.write_text(to_json(nerve_truncate(arrow, 2).to_schema()), encoding='utf-8')
    X = load_sset(str(path))
    assert X.name == 'arrow_nerve'
    assert [len(level) for level in X.simplices] == [2, 3, 4]
