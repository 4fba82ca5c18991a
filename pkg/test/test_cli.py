"""
命令行入口测试：各命令的规范输出、退出码与 json-lines 记录
"""
import asyncio
import json
import sys
from pathlib import Path

import pytest

# 添加项目根目录到 Python 路径，以便导入根目录的模块
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from detdeform_cli import build_parser, main, run
from utils.constants import RECORD_KEYS

FIXTURES = Path(__file__).parent / 'fixtures'


def invoke(*argv):
    return asyncio.run(run(list(argv)))


def scene(name):
    return str(FIXTURES / name)


def test_map_p_prints_class():
    result = invoke('map-p', '--scene', scene('divisor_x.toml'), '--chart', 'U1')
    assert result['exit_code'] == 0
    assert result['output'] == 'class: (e*y) / x^1'


def test_cycle_check_text_report():
    result = invoke('cycle-check', '--scene', scene('divisor_x.toml'))
    assert result['exit_code'] == 0
    assert result['lines'] == ['class: (e*y) / x^1', 'gamma[x,y] = e*y^2 : ZERO', 'overall: PASS']


def test_cycle_check_with_oracle():
    result = invoke('cycle-check', '--scene', scene('divisor_x.toml'), '--degree-bound', '4')
    assert result['lines'] == [
        'class: (e*y) / x^1',
        'gamma[x,y] = e*y^2 : ZERO',
        'oracle[x,y] (degree ≤ 4): ZERO',
        'overall: PASS',
    ]


def test_cycle_check_json_lines():
    result = invoke('cycle-check', '--scene', scene('three_dim.toml'), '--format', 'json-lines')
    records = [json.loads(line) for line in result['output'].splitlines()]
    assert len(records) == 3
    assert all(set(r) == set(RECORD_KEYS) for r in records)
    assert [r['direction'] for r in records] == ['2', '3', None]
    assert records[0]['verdict'] == 'ZERO'
    assert records[-1]['verdict'] == 'PASS'
    assert records[-1]['class'] == '(e*y*z) / x^1'


def test_check_axioms_without_scene():
    result = invoke('check-axioms', '--seed', '7', '--cases', '3')
    assert result['exit_code'] == 0
    assert result['lines'][-1] == 'axioms: 3/3 suites passed, 3 cases'
    assert len(result['records']) == 9


def test_check_axioms_is_deterministic():
    first = invoke('check-axioms', '--seed', '42', '--cases', '2')
    second = invoke('check-axioms', '--seed', '42', '--cases', '2')
    assert first['output'] == second['output']


def test_koszul_defaults_to_chart_parameters():
    result = invoke('koszul', '--scene', scene('divisor_x.toml'))
    assert result['lines'][:4] == ['F2: rank 1 [e1∧e2]', 'd2:', '  [y]', '  [-x]']
    assert result['lines'][-2:] == ['ranks: 1, 2, 1', 'd∘d = 0: PASS']


def test_koszul_with_operands():
    result = invoke('koszul', 'x', 'y', 'x*y', '--scene', scene('divisor_x.toml'))
    assert result['exit_code'] == 0
    assert 'ranks: 1, 3, 3, 1' in result['lines']


def test_det_report():
    result = invoke('det', '--scene', scene('divisor_x.toml'))
    assert result['exit_code'] == 0
    assert result['lines'][0].startswith('det(K[x, y]) = ')
    assert 'minor rows: 1' in result['lines']
    assert '|M1| = x + e*y' in result['lines']


def test_alpha_report():
    result = invoke('alpha', '--scene', scene('divisor_x.toml'))
    lines = result['lines']
    assert lines[0] == 'alpha:'
    assert '    [x + e*y]' in lines
    reduced = lines[lines.index('reduced:'):]
    assert '    [x]' in reduced


def test_cech_exit_codes():
    ok = invoke('cech', '--scene', scene('two_charts.toml'))
    assert ok['exit_code'] == 0
    assert ok['lines'][-1] == 'cocycle: PASS'
    broken = invoke('cech', '--scene', scene('broken_gluing.toml'))
    assert broken['exit_code'] == 1
    assert not broken['success']
    assert broken['error']


def test_functorial_command():
    result = invoke('functorial', '--scene', scene('functorial.toml'))
    assert result['exit_code'] == 0
    assert result['lines'][-1] == 'functorial: PASS'
    missing = invoke('functorial', '--scene', scene('divisor_x.toml'))
    assert missing['exit_code'] == 2


def test_oracle_membership_agreement():
    result = invoke('oracle-membership', 'e*y^2', 'x', 'y', '--scene', scene('divisor_x.toml'),
                    '--degree-bound', '3')
    assert result['lines'] == [
        'candidate: e*y^2 in (x, y)',
        'groebner: IN',
        'oracle (degree ≤ 3): IN',
        'agree: YES',
    ]
    outside = invoke('oracle-membership', 'e', 'x', 'y', '--scene', scene('divisor_x.toml'))
    assert outside['exit_code'] == 0
    assert 'groebner: OUT' in outside['lines']


def test_oracle_membership_disagreement_fails():
    """次数上界为 0 时预言机找不到余因子，与 Gröbner 判定不一致"""
    result = invoke('oracle-membership', 'e*y^2', 'x', 'y', '--scene', scene('divisor_x.toml'),
                    '--degree-bound', '0')
    assert result['exit_code'] == 1
    assert result['lines'][-1] == 'agree: NO'


@pytest.mark.parametrize('argv', [
    ['map-p', '--scene', scene('malformed.toml')],
    ['map-p'],
    ['frobnicate', '--scene', scene('divisor_x.toml')],
    ['check-axioms', '--cases', '0'],
    ['check-axioms', '--seed', '-1'],
    ['map-p', '--scene', scene('divisor_x.toml'), '--chart', 'U9'],
    ['map-p', '--scene', scene('no_such_scene.toml')],
    ['oracle-membership', 'e', '--scene', scene('divisor_x.toml')],
])
def test_input_errors_exit_two(argv):
    result = invoke(*argv)
    assert result['exit_code'] == 2
    assert result['error']
    assert result['output'] == ''


def test_malformed_error_names_line_and_key():
    result = invoke('cycle-check', '--scene', scene('malformed.toml'))
    assert 'malformed.toml:11' in result['error']
    assert 'chart.U1.lifting' in result['error']


def test_main_prints_output(capsys):
    code = asyncio.run(main(['map-p', '--scene', scene('divisor_x.toml')]))
    assert code == 0
    assert capsys.readouterr().out.strip() == 'class: (e*y) / x^1'


def test_parser_defaults():
    args = build_parser().parse_args(['cycle-check'])
    assert args.format == 'text'
    assert args.operands == []
    assert args.degree_bound is None
