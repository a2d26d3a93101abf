import json
import os

import pytest

from cache import ReportCache, document_hash
from conftest import GOLDEN
from exporter import ReportExporter
import main as main_module
from main import main
from models import LimitDivergesError


def run_json(capsys, *args):
    status = main([*args, '--format', 'json', '--no-cache'])
    return status, json.loads(capsys.readouterr().out)


def write_document(tmp_path, **overrides):
    with open(GOLDEN / 'tp1.json', 'r', encoding='utf-8') as f:
        document = json.load(f)
    document.update(overrides)
    path = tmp_path / 'input.json'
    path.write_text(json.dumps(document), encoding='utf-8')
    return str(path)


def test_validate_golden_input():
    assert main(['validate', '--input', str(GOLDEN / 'tp1.json'), '--no-cache']) == 0


def test_xi_matrix_json(capsys):
    status, report = run_json(capsys, 'xi-matrix', '--input', str(GOLDEN / 'tp2.json'))
    assert status == 0
    assert report['pass'] is True
    assert report['command'] == 'xi-matrix'
    assert len(report['data']['matrix']['entries']) == 9


def test_json_output_is_deterministic(capsys):
    main(['fixed-points', '--preset', 'tp1', '--format', 'json', '--no-cache'])
    first = capsys.readouterr().out
    main(['fixed-points', '--preset', 'tp1', '--format', 'json', '--no-cache'])
    assert capsys.readouterr().out == first


def test_dimension_mismatch_is_invalid_input(tmp_path, capsys):
    path = write_document(tmp_path, partial=[[1], [1], [1]])
    assert main(['validate', '--input', path, '--no-cache']) == 2
    assert 'Invalid input' in capsys.readouterr().err


def test_missing_file_is_invalid_input(capsys):
    assert main(['validate', '--input', 'no_such_file.json', '--no-cache']) == 2


def test_non_exact_input_fails_validate_and_rejects_other_commands(tmp_path):
    path = write_document(tmp_path, beta=[[1, 1]])
    assert main(['validate', '--input', path, '--no-cache']) == 1
    assert main(['xi-matrix', '--input', path, '--no-cache']) == 2


def test_stab_random_slopes(capsys):
    status, report = run_json(capsys, 'stab', '--preset', 'tp1', '--random-slopes', '3', '--seed', '5')
    assert status == 0
    assert len(report['data']['families']) == 3
    assert all('slope' in c['witness'] for c in report['checks'])


def test_stab_given_slope(capsys):
    status, report = run_json(capsys, 'stab', '--preset', 'tp1', '--slope', '1/3,1/5')
    assert status == 0
    assert [f['slope'] for f in report['data']['families']] == ['1/3,1/5']


def test_slope_of_wrong_length(capsys):
    assert main(['stab', '--preset', 'tp1', '--slope', '1/3', '--no-cache']) == 2


def test_report_is_cached(capsys):
    assert main(['xi-matrix', '--preset', 'tp1', '--format', 'json']) == 0
    first = capsys.readouterr().out
    assert main(['xi-matrix', '--preset', 'tp1', '--format', 'json']) == 0
    assert capsys.readouterr().out == first
    assert main(['cache', 'stats']) == 0
    stats = json.loads(capsys.readouterr().out)
    assert stats['total_entries'] == 1
    assert main(['cache', 'clear']) == 0
    assert json.loads(capsys.readouterr().out) == {'removed': 1}


@pytest.mark.parametrize('fmt', ['json', 'csv'])
def test_export(fmt, tmp_path):
    assert main(['pneqq', '--preset', 'tp1', '--export', fmt, '--no-cache']) == 0
    assert list((tmp_path / 'outputs').glob(f'*.{fmt}'))


def test_cache_round_trip(tmp_path):
    cache = ReportCache(cache_dir=str(tmp_path / 'reports'))
    cache.enable()
    digest = document_hash({'E': ['e1']})
    assert cache.get(digest, 'validate', {}) is None
    assert cache.set(digest, 'validate', {}, {'pass': True})
    assert cache.get(digest, 'validate', {}) == {'pass': True}
    assert cache.get(digest, 'validate', {'seed': 1}) is None
    assert cache.invalidate(digest) == 1
    assert cache.get_stats()['hits'] == 1


def test_unsupported_export_format(tmp_path):
    exporter = ReportExporter(output_dir=str(tmp_path))
    with pytest.raises(ValueError):
        exporter.export_report({'command': 'validate', 'checks': []}, format='pdf')


def test_math_failure_is_check_failure(monkeypatch, capsys):
    def diverges(data):
        raise LimitDivergesError("leading grade of the numerator exceeds the denominator")

    monkeypatch.setattr(main_module, 'check_pneqq', diverges)
    assert main(['pneqq', '--preset', 'tp1', '--no-cache']) == 1
    err = capsys.readouterr().err
    assert 'Check failed' in err and 'LimitDivergesError' in err


def test_unparseable_zeta_is_invalid_input(capsys):
    assert main(['validate', '--preset', 'tp1', '--zeta', 'one', '--no-cache']) == 2
    assert 'Invalid input' in capsys.readouterr().err


def test_intertwiner_reports_polarization(capsys):
    status, report = run_json(capsys, 'intertwiner-check', '--preset', 'tp1', '--slope', '1/3,1/5',
                              '--slope-dual', '1/4,1/7')
    assert status == 0
    assert report['calibration']['polarization'] == 'standard'
    assert report['data']['polarization'] == 'xx/x'
    index_form = next(c for c in report['checks'] if c['name'] == 'intertwiner_index_form')
    assert index_form['informational'] is True
    assert index_form['witness']['opposite']['polarization'] == 'yy/y'


def test_intertwiner_with_opposite_polarization_fails(capsys):
    status, report = run_json(capsys, 'intertwiner-check', '--preset', 'tp1', '--polarization', 'opposite')
    assert status == 1
    assert report['calibration']['polarization'] == 'opposite'


GOLDEN_REPORTS = [('tp1', 'validate'), ('tp2', 'validate'), ('rank2', 'validate'), ('tp1', 'dual')]


@pytest.mark.parametrize('arrangement_name,command', GOLDEN_REPORTS)
def test_report_matches_golden(arrangement_name, command, capsys):
    """UPDATE_GOLDEN=1 rewrites the expected report from the current output"""
    expected_path = GOLDEN / f'{arrangement_name}.{command}.json'
    status = main([command, '--input', str(GOLDEN / f'{arrangement_name}.json'), '--format', 'json', '--no-cache'])
    out = capsys.readouterr().out
    if os.getenv('UPDATE_GOLDEN') == '1':
        expected_path.write_text(out, encoding='utf-8')
    expected = json.loads(expected_path.read_text(encoding='utf-8'))
    assert status == (0 if expected['pass'] else 1)
    assert json.loads(out) == expected
    assert out == json.dumps(expected, indent=2, sort_keys=True, ensure_ascii=False) + '\n'
