import glob
import json
import os

import pytest

from gradedq.cli import EXIT_FAIL, EXIT_OK, EXIT_SOURCE, main

SUITE = os.path.join(os.path.dirname(__file__), os.pardir, os.pardir, 'suite')


def write(tmp_path, text, name='prog.gq'):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_passing_program(tmp_path, capsys):
    path = write(tmp_path, 'algebra G = so3; check cartan G;')
    assert main(['run', path]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith('PASS cartan G (')


def test_failing_program(tmp_path, capsys):
    path = write(tmp_path, 'chart X { x:0; y:0; e:1; f:1; } '
                           'qfield W on X { x -> e; y -> x*f; } check q2 W;')
    assert main(['run', path]) == EXIT_FAIL
    assert capsys.readouterr().out.startswith('FAIL q2 W')


def test_parse_error(tmp_path, capsys):
    path = write(tmp_path, 'chart X { x 0; }')
    assert main(['run', path]) == EXIT_SOURCE
    err = capsys.readouterr().err
    assert err.startswith(path + ':1:13:')


def test_semantic_error(tmp_path, capsys):
    path = write(tmp_path, 'check q2 Q;')
    assert main(['run', path]) == EXIT_SOURCE
    assert "unknown identifier 'Q'" in capsys.readouterr().err


def test_missing_file(tmp_path, capsys):
    assert main(['run', str(tmp_path / 'nope.gq')]) == EXIT_SOURCE
    assert 'nope.gq' in capsys.readouterr().err


def test_report_is_byte_stable(tmp_path):
    path = write(tmp_path, 'algebra G = so3; check cartan G; check cocycle G 2; '
                           'check cocycle G 2 broken expect fail;')
    first, second = tmp_path / 'a.json', tmp_path / 'b.json'
    assert main(['run', path, '--report', str(first)]) == EXIT_OK
    assert main(['run', path, '--report', str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    data = json.loads(first.read_text())
    assert [r['name'] for r in data['records']] == ['cartan', 'cocycle', 'cocycle']
    assert data['ok'] is True


def test_timing_goes_into_report(tmp_path):
    path = write(tmp_path, 'algebra G = so3; check cartan G;')
    out = tmp_path / 'r.json'
    main(['run', path, '--report', str(out), '--timing'])
    assert 'ms' in json.loads(out.read_text())['records'][0]


def test_load_relative_to_program(tmp_path, capsys):
    (tmp_path / 'data').mkdir()
    (tmp_path / 'data' / 'c.complex').write_text('dims 0:1 1:1\n')
    path = write(tmp_path, 'load complex C "data/c.complex"; check lemma1 C 2;')
    assert main(['run', path]) == EXIT_OK


def test_canned_checks(capsys):
    assert main(['check', 'cartan', 'master', 'skew']) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert [line.split()[:2] for line in lines] == [['PASS', 'cartan'], ['PASS', 'master'],
                                                    ['XFAIL', 'skew']]


def test_unknown_canned_check(capsys):
    with pytest.raises(SystemExit) as e:
        main(['check', 'lemma7'])
    assert e.value.code == 2


def test_fmt(tmp_path, capsys):
    path = write(tmp_path, '# comment\nchart X{x:0;xi:1;}\nqfield Q on X { x -> xi; }\n'
                           'check q2 Q;\n')
    assert main(['fmt', path]) == EXIT_OK
    assert capsys.readouterr().out == ('chart X { x:0; xi:1; }\n'
                                       'qfield Q on X deg 1 { x -> xi; }\n'
                                       'check q2 Q;\n')


def test_fmt_rejects_bad_source(tmp_path, capsys):
    path = write(tmp_path, 'chart X { x:-1; }')
    assert main(['fmt', path]) == EXIT_SOURCE
    assert 'negative weight' in capsys.readouterr().err


@pytest.mark.parametrize('path', sorted(glob.glob(os.path.join(SUITE, '*.gq'))),
                         ids=os.path.basename)
def test_suite(path, tmp_path, capsys):
    report = tmp_path / 'report.json'
    code = main(['run', path, '--report', str(report)])
    assert code == EXIT_OK, capsys.readouterr().out
    data = json.loads(report.read_text())
    assert data['failed'] == 0
    assert data['total'] > 0


@pytest.mark.parametrize('kind, name, text', [
    ('grid', 'oob.grid', 'grid 2 2\n0 0 1 0 0 0\n0 1 1 0 0 0\n1 0 1 0 0 0\n1 1 1 0 0 0\n'
                         '5 0 0.5\n'),
    ('grid', 'neg.grid', 'grid 2 2\n0 0 1 0 0 0\n0 1 1 0 0 0\n1 0 1 0 0 0\n1 1 1 0 0 0\n'
                         '-1 1 0 1 0 0\n'),
    ('path', 'bad.path', 'dim x\n0 0\n1 0\n'),
])
def test_malformed_data_file(tmp_path, capsys, kind, name, text):
    (tmp_path / name).write_text(text)
    check = 'wzw W' if kind == 'grid' else 'holonomy W'
    path = write(tmp_path, 'load %s W "%s"; check %s;' % (kind, name, check))
    assert main(['run', path]) == EXIT_SOURCE
    err = capsys.readouterr().err
    assert err.startswith(path + ':1:1:')
    assert name in err and 'line ' in err
