import json

import pytest

from factperm.errors import ExportError
from factperm.export import export
from factperm.fincat import twisted_arrow
from factperm.permcat import check_permutative, validate_permutative
from factperm.relcat import maximal_marking
from factperm.sset import nerve_truncate


def test_twisted_arrow_as_dot(arrow):
    text = export(twisted_arrow(arrow), 'dot')
    lines = text.strip().splitlines()
    assert lines[0].startswith('digraph')
    assert len([l for l in lines if '[label=' in l and '->' not in l]) == 3
    assert len([l for l in lines if '->' in l]) == 2


def test_weq_edges_are_bold(arrow):
    text = export(maximal_marking(arrow), 'dot')
    assert 'style=bold' in text
    assert 'style=solid' not in text


def test_category_as_text(arrow):
    text = export(arrow, 'text')
    assert text.splitlines()[0] == '[1]: 2 objects, 3 morphisms'
    assert '  f: 0 -> 1' in text


def test_permutative_json_loads_back(z2):
    raw = json.loads(export(z2, 'json'))
    assert raw['unit'] == '0'
    again = validate_permutative(raw)
    assert check_permutative(again).passed


def test_nerve_exports(arrow):
    X = nerve_truncate(arrow, 2)
    assert json.loads(export(X, 'json'))['dimension'] == 2
    dot = export(X, 'dot')
    assert len([l for l in dot.splitlines() if '->' in l]) == 1


def test_unknown_format_lists_the_supported_ones(arrow):
    with pytest.raises(ExportError, match='text, json, dot'):
        export(arrow, 'svg')


def test_unknown_entity(arrow):
    with pytest.raises(ExportError):
        export([arrow], 'json')
