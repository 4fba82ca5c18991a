"""
命令行入口模块
读取场景文件，分发命令，输出规范报告并按约定返回退出码

退出码：0 成功或检验全部通过；1 数学检验失败（含提升不能粘合）；2 输入或解析错误

用法示例：
    python detdeform_cli.py check-axioms --seed 7 --cases 100
    python detdeform_cli.py map-p --scene test/fixtures/divisor_x.toml --chart U1
    python detdeform_cli.py cycle-check --scene test/fixtures/divisor_x.toml --format json-lines
    python detdeform_cli.py oracle-membership "e*y^2" x y --scene test/fixtures/divisor_x.toml
"""
import argparse
import asyncio
import inspect
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from config import DEFAULT_CASES, DEFAULT_SEED, REPORT_FORMAT
from scene_manager import SceneFile, SceneManager
from utils.axiom_suite import axiom_suite_async
from utils.complexes import koszul, render_complex, verify_complex
from utils.constants import (COMMANDS, EXIT_CHECK_FAILED, EXIT_INPUT_ERROR, EXIT_OK,
                             SCENELESS_COMMANDS)
from utils.deformation import (alpha, alpha_reduced, cech_transitions, cycle_check_async,
                               functoriality_report, map_p)
from utils.determinant import canonical_element, det_complex, det_presentation
from utils.exceptions import DetDeformError, GluingError, SceneError, UsageError
from utils.groebner import ideal_membership, oracle_membership
from utils.helpers import format_records, make_record, parse_seed
from utils.localcoh import render_class
from utils.logger import get_logger
from utils.poly_parser import parse_many, render

logger = get_logger('cli')


class _ArgumentParser(argparse.ArgumentParser):
    """参数错误时抛出 UsageError，由 run() 统一映射为退出码 2"""

    def error(self, message: str):
        raise UsageError(message)


def _count(text: str) -> int:
    value = int(text)
    if value < 1:
        raise ValueError(text)
    return value


def _bound(text: str) -> int:
    value = int(text)
    if value < 0:
        raise ValueError(text)
    return value


def build_parser() -> argparse.ArgumentParser:
    """构建命令行参数解析器"""
    parser = _ArgumentParser(prog='detdeform', description='行列式函子与除子形变的精确计算')
    parser.add_argument('command', choices=COMMANDS, help='要执行的命令')
    parser.add_argument('operands', nargs='*',
                        help='koszul: 可选的序列；oracle-membership: 候选元素与理想生成元')
    parser.add_argument('--scene', type=Path, help='场景文件（TOML）')
    parser.add_argument('--chart', help='图卡名称，默认取场景中的第一个')
    parser.add_argument('--seed', type=parse_seed, help='64 位无符号随机种子')
    parser.add_argument('--cases', type=_count, help='每条公理的随机用例数')
    parser.add_argument('--degree-bound', type=_bound, help='线性代数预言机的次数上界')
    parser.add_argument('--format', choices=('text', 'json-lines'), default=REPORT_FORMAT,
                        help='报告格式')
    return parser


def _result(lines: List[str], records: List[Dict[str, Any]], exit_code: int = EXIT_OK,
            error: Optional[str] = None) -> Dict[str, Any]:
    return {
        'success': exit_code == EXIT_OK,
        'error': error,
        'exit_code': exit_code,
        'lines': lines,
        'records': records,
    }


def _verdict(ok: bool) -> str:
    return 'PASS' if ok else 'FAIL'


# ---- 命令处理 ----

async def cmd_check_axioms(args, scene_file: Optional[SceneFile]) -> Dict[str, Any]:
    """三条行列式函子公理的随机检验"""
    if args.seed is not None:
        seed = args.seed
    else:
        seed = scene_file.scene.options.seed if scene_file else DEFAULT_SEED
    report = await axiom_suite_async(seed, args.cases or DEFAULT_CASES)
    records = [make_record('check-axioms', direction=f"{r.axiom} #{r.index}", verdict=_verdict(r.passed))
               for r in report.results]
    return _result(report.lines(), records, EXIT_OK if report.all_passed else EXIT_CHECK_FAILED)


def cmd_koszul(args, scene_file: SceneFile) -> Dict[str, Any]:
    """Koszul 复形：默认取图卡的参数系，也可在命令行给出序列"""
    scene = scene_file.scene
    chart = scene.chart(args.chart)
    seq = parse_many(args.operands, scene.ring_context) if args.operands else list(chart.parameters)
    complex_ = koszul(seq, scene.ring_context)
    ok = verify_complex(complex_)
    lines = render_complex(complex_)
    lines.append(f"ranks: {', '.join(str(r) for r in complex_.ranks())}")
    lines.append(f"d∘d = 0: {_verdict(ok)}")
    records = [make_record('koszul', chart.name, verdict=_verdict(ok))]
    return _result(lines, records, EXIT_OK if ok else EXIT_CHECK_FAILED)


def cmd_det(args, scene_file: SceneFile) -> Dict[str, Any]:
    """α 的表示的行列式：分次线、所选子式与典范元"""
    scene = scene_file.scene
    chart = scene.chart(args.chart)
    presentation = alpha(scene, chart.name)
    line, iso = det_presentation(presentation)
    element = canonical_element(presentation)
    lines = [
        f"det(K[{', '.join(render(p) for p in chart.parameters)}]) = {det_complex(koszul(list(chart.parameters)))}",
        f"det(L) = {line}",
        f"minor rows: {', '.join(str(r + 1) for r in element.selected_rows)}",
        f"|M1| = {render(iso.scalar)}",
    ]
    lines.extend(element.render())
    records = [make_record('det', chart.name, class_text=render(iso.scalar))]
    return _result(lines, records)


def cmd_alpha(args, scene_file: SceneFile) -> Dict[str, Any]:
    """α_A(Y′) 的表示及其沿 A → k 的约化"""
    scene = scene_file.scene
    chart = scene.chart(args.chart)
    lines = ['alpha:']
    lines.extend('  ' + line for line in render_complex(alpha(scene, chart.name).complex))
    lines.append('reduced:')
    lines.extend('  ' + line for line in render_complex(alpha_reduced(scene, chart.name).complex))
    records = [make_record('alpha', chart.name, class_text=render(chart.lifting))]
    return _result(lines, records)


def cmd_map_p(args, scene_file: SceneFile) -> Dict[str, Any]:
    """P∘α_A(Y′)"""
    scene = scene_file.scene
    chart = scene.chart(args.chart)
    class_rep = map_p(alpha(scene, chart.name), chart.divisor)
    text = render_class(class_rep)
    return _result([f"class: {text}"], [make_record('map-p', chart.name, class_text=text)])


async def cmd_cycle_check(args, scene_file: SceneFile) -> Dict[str, Any]:
    """逐方向检验 ∂∘P∘α = 0；给出 --degree-bound 时再用线性代数预言机复核"""
    scene = scene_file.scene
    chart = scene.chart(args.chart)
    report = await cycle_check_async(scene, chart.name)
    lines = report.lines()
    records = [make_record('cycle-check', chart.name, str(v.direction), str(v.gamma),
                           'ZERO' if v.zero else 'NONZERO')
               for v in report.per_direction]
    agree = True
    if args.degree_bound is not None:
        oracle_lines = []
        for v in report.per_direction:
            oracle = oracle_membership(v.gamma.numerator, [v.gamma.f1, v.gamma.f2], args.degree_bound)
            agree = agree and oracle == v.zero
            oracle_lines.append(f"oracle[{render(v.gamma.f1)},{render(v.gamma.f2)}] "
                                f"(degree ≤ {args.degree_bound}): {'ZERO' if oracle else 'NONZERO'}")
        lines[-1:-1] = oracle_lines
        if not agree:
            logger.warning("✗ Gröbner 判定与线性代数预言机不一致")
    overall = report.overall and agree
    lines[-1] = f"overall: {_verdict(overall)}"
    records.append(make_record('cycle-check', chart.name, class_text=render_class(report.class_rep),
                               verdict=_verdict(overall)))
    return _result(lines, records, EXIT_OK if overall else EXIT_CHECK_FAILED)


def cmd_cech(args, scene_file: SceneFile) -> Dict[str, Any]:
    """各交上的 Čech 转移单位与上闭链条件"""
    report = cech_transitions(scene_file.scene)
    records = [make_record('cech', t.name, class_text=str(t.unit)) for t in report.transitions]
    records.append(make_record('cech', verdict=_verdict(report.valid)))
    return _result(report.lines(), records, EXIT_OK if report.valid else EXIT_CHECK_FAILED)


def cmd_functorial(args, scene_file: SceneFile) -> Dict[str, Any]:
    """沿 [morphism] 给出的代换比较 P∘α 的两条路径"""
    if scene_file.morphism is None:
        raise SceneError("functorial 命令需要 [morphism] 表", scene_file.path, 0, 'morphism')
    report = functoriality_report(scene_file.scene, scene_file.morphism, args.chart)
    records = [make_record('functorial', report.chart, class_text=render_class(report.pushed),
                           verdict=_verdict(report.equal))]
    return _result(report.lines(), records, EXIT_OK if report.equal else EXIT_CHECK_FAILED)


def cmd_oracle_membership(args, scene_file: SceneFile) -> Dict[str, Any]:
    """同时用 Gröbner 正规形与次数有界的线性代数预言机判定 a ∈ (g₁..g_k)"""
    if len(args.operands) < 2:
        raise UsageError("oracle-membership 需要候选元素和至少一个生成元")
    scene = scene_file.scene
    candidate, *gens = parse_many(args.operands, scene.ring_context)
    bound = args.degree_bound if args.degree_bound is not None else scene.options.degree_bound
    by_groebner = ideal_membership(candidate, gens)
    by_oracle = oracle_membership(candidate, gens, bound)
    agree = by_groebner == by_oracle
    ideal = f"({', '.join(render(g) for g in gens)})"
    lines = [
        f"candidate: {render(candidate)} in {ideal}",
        f"groebner: {'IN' if by_groebner else 'OUT'}",
        f"oracle (degree ≤ {bound}): {'IN' if by_oracle else 'OUT'}",
        f"agree: {'YES' if agree else 'NO'}",
    ]
    records = [make_record('oracle-membership', class_text=render(candidate), verdict=_verdict(agree))]
    return _result(lines, records, EXIT_OK if agree else EXIT_CHECK_FAILED)


HANDLERS = {
    'check-axioms': cmd_check_axioms,
    'koszul': cmd_koszul,
    'det': cmd_det,
    'alpha': cmd_alpha,
    'map-p': cmd_map_p,
    'cycle-check': cmd_cycle_check,
    'cech': cmd_cech,
    'functorial': cmd_functorial,
    'oracle-membership': cmd_oracle_membership,
}


async def _load_scene(args) -> Optional[SceneFile]:
    if args.scene is None:
        if args.command in SCENELESS_COMMANDS:
            return None
        raise UsageError(f"命令 {args.command} 需要 --scene 场景文件")
    return await SceneManager(args.scene).load_scene()


def render_output(result: Dict[str, Any], report_format: str) -> str:
    if report_format == 'json-lines':
        return format_records(result['records'])
    return '\n'.join(result['lines'])


async def run(argv: List[str]) -> Dict[str, Any]:
    """
    执行一条命令

    Args:
        argv: 命令行参数（不含程序名）

    Returns:
        Dict: 包含 success、error、exit_code、lines、records 与渲染后的 output
    """
    report_format = REPORT_FORMAT
    try:
        args = build_parser().parse_args(argv)
        report_format = args.format
        scene_file = await _load_scene(args)
        outcome = HANDLERS[args.command](args, scene_file)
        result = await outcome if inspect.isawaitable(outcome) else outcome
    except GluingError as exc:
        logger.error(f"✗ {exc}")
        result = _result([], [], EXIT_CHECK_FAILED, str(exc))
    except DetDeformError as exc:
        logger.error(f"✗ {exc}")
        result = _result([], [], EXIT_INPUT_ERROR, str(exc))
    result['output'] = render_output(result, report_format)
    return result


async def main(argv: Optional[List[str]] = None) -> int:
    result = await run(sys.argv[1:] if argv is None else argv)
    if result['output']:
        print(result['output'])
    return result['exit_code']


if __name__ == '__main__':
    sys.exit(asyncio.run(main()))
