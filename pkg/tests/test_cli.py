import json
import subprocess
import sys

import pytest

from zerosum.cli import run
from zerosum.labelling import load_labelling


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_na(capsys):
    code, out, _ = call(capsys, 'na', '--group', 'Z2')
    assert code == 0 and out == 'n(Z2) = 3\n'
    code, out, _ = call(capsys, 'na', '--group', 'Z2xZ2', '--json')
    doc = json.loads(out)
    assert code == 0 and doc['value'] == 5 and doc['group'] == 'Z2xZ2'


def test_na_budget(capsys):
    code, _, err = call(capsys, 'na', '--group', 'Z4', '--max-n', '4')
    assert code == 3 and err.count('\n') == 1


def test_na_stats_file(capsys, tmp_path):
    p = tmp_path / 'stats.json'
    code, _, _ = call(capsys, 'na', '--group', 'Z3', '-o', str(p))
    doc = json.loads(p.read_text())
    assert code == 0 and doc['value'] == 4 and 'wall_time' in doc and 'prunes' in doc


def test_check_lower_bound(capsys, tmp_path):
    p = tmp_path / 'lower_q5.json'
    assert call(capsys, 'lowerbound', '--q', '5', '-o', str(p))[0] == 0
    code, out, _ = call(capsys, 'check', str(p), '--min-len', '2')
    assert code == 1 and out.strip() == 'zero-sum-free'


def test_check_finds_cycle(capsys, tmp_path):
    p = tmp_path / 'r.json'
    call(capsys, 'random', '--group', 'Z3', '--n', '6', '--seed', '1', '-o', str(p))
    code, out, _ = call(capsys, 'check', str(p), '--json')
    doc = json.loads(out)
    assert code == 0 and doc['zero_sum_free'] is False and doc['witness']['sum'] == [0]


def test_solve_malformed(capsys, tmp_path):
    p = tmp_path / 'bad.json'
    p.write_text(json.dumps({'group': 'Z2', 'n': 2, 'arcs': [[0, 1, [0]], [0, 1, [1]]]}))
    code, out, err = call(capsys, 'solve', str(p))
    assert code == 2 and out == '' and err.count('\n') == 1
    assert call(capsys, 'solve', str(tmp_path / 'missing.json'))[0] == 2


def test_solve_report(capsys, tmp_path):
    p, rep = tmp_path / 'r.json', tmp_path / 'rep.json'
    call(capsys, 'random', '--group', 'Z2xZ2', '--n', '32', '--seed', '4', '-o', str(p))
    code, out, _ = call(capsys, 'solve', str(p), '--method', 'constructive', '--emit-report', str(rep), '--json')
    assert code == 0
    doc = json.loads(out)
    assert doc == json.loads(rep.read_text())
    assert doc['method'] == 'general-recursive' and doc['witness']['sum'] == [0, 0]


def test_solve_zero_sum_free(capsys, tmp_path):
    p = tmp_path / 'l.json'
    call(capsys, 'lowerbound', '--q', '4', '-o', str(p))
    code, out, _ = call(capsys, 'solve', str(p))
    assert code == 1 and out.strip() == 'zero-sum-free'


def test_solve_undirected(capsys, tmp_path):
    p = tmp_path / 'e.json'
    call(capsys, 'random', '--kind', 'edges', '--group', 'Z2', '--n', '16', '--seed', '3', '-o', str(p))
    code, out, _ = call(capsys, 'solve', str(p), '--json')
    assert code == 0 and len(json.loads(out)['witness']['vertices']) >= 3


def test_sat_export_and_verify(capsys, tmp_path):
    cnf = tmp_path / 'z3.cnf'
    assert call(capsys, 'sat-export', '--group', 'Z3', '--n', '3', '-o', str(cnf))[0] == 0
    assert cnf.read_text().count('p cnf') == 1
    code, out, _ = call(capsys, 'sat-export', '--group', 'Z3', '--n', '3', '--solve', '--json')
    doc = json.loads(out)
    assert code == 0 and doc['satisfiable']
    code, out, _ = call(capsys, 'sat-export', '--group', 'Z2', '--n', '3', '--solve')
    assert code == 1 and out.strip() == 'UNSAT'
    assert call(capsys, 'sat-export', '--group', 'Z2', '--n', '8')[0] == 3

    # a hand-written model for the canonical Z3 labelling 0 -> 1 -> 2
    from zerosum.abelian import GroupSpec
    from zerosum.ramsey import sat_export, sat_solve
    inst = sat_export(GroupSpec((3,)), 3)
    model = sat_solve(inst)
    text = 'v ' + ' '.join(str(v if model[v] else -v) for v in sorted(model)) + ' 0\n'
    mp, lab = tmp_path / 'model.txt', tmp_path / 'lab.json'
    mp.write_text(text)
    code, out, _ = call(capsys, 'sat-verify', str(mp), '--group', 'Z3', '--n', '3', '-o', str(lab))
    assert code == 0 and out.strip() == 'verified zero-sum-free'
    assert load_labelling(lab).n == 3
    mp.write_text('v ' + ' '.join(str(v) for v in sorted(model)) + ' 0\n')
    assert call(capsys, 'sat-verify', str(mp), '--group', 'Z3', '--n', '3')[0] == 2


def test_minor_extract(capsys, tmp_path):
    p = tmp_path / 'm.json'
    assert call(capsys, 'random', '--kind', 'minor-model', '--n', '4', '--seed', '2', '-o', str(p))[0] == 0
    code, out, _ = call(capsys, 'minor-extract', str(p), '--q', '3', '--json')
    doc = json.loads(out)
    assert code == 0 and doc['q'] == 3 and doc['length'] % 3 == 0 and len(doc['cycle']) == doc['length']
    bad = json.loads(p.read_text())
    bad['pairs'][1]['plus'] = bad['pairs'][0]['plus']
    p.write_text(json.dumps(bad))
    assert call(capsys, 'minor-extract', str(p), '--q', '3')[0] == 2


def test_random_requires_seed(capsys):
    assert call(capsys, 'random', '--group', 'Z2', '--n', '3')[0] == 2
    assert call(capsys, 'random', '--group', 'Z2', '--n', '3', '--seed', '-1')[0] == 2
    assert call(capsys, 'random', '--n', '3', '--seed', '1')[0] == 2


@pytest.mark.parametrize('argv', [
    ['na', '--group', 'Z1'], ['na'], ['bogus'], [], ['check'], ['solve', 'x.json', '--min-len', '4'],
    ['lowerbound', '--q', '1'], ['na', '--group', 'Z2', '--threads', '0'],
])
def test_input_errors(capsys, argv):
    assert call(capsys, *argv)[0] == 2


def test_json_output_is_deterministic(capsys):
    for argv in (['random', '--group', 'Z2xZ3', '--n', '7', '--seed', '12345'],
                 ['random', '--kind', 'minor-model', '--n', '5', '--seed', '8'],
                 ['na', '--group', 'Z3', '--json']):
        a, b = call(capsys, *argv)[1], call(capsys, *argv)[1]
        assert a == b and len(a.strip().splitlines()) == 1
        json.loads(a)


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, '-m', 'zerosum', 'na', '--group', 'Z2'], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == 'n(Z2) = 3\n'
