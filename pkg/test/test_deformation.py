"""
除子形变流水线测试：α、P、闭链检验、Čech 转移与函子性
"""
import asyncio
import random
import sys
from pathlib import Path

import pytest

# 添加项目根目录到 Python 路径，以便导入根目录的模块
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from scene_manager import SceneManager
from utils.complexes import direct_sum, koszul, present
from utils.deformation import (Chart, Overlap, Scene, alpha, alpha_reduced, cech_transitions,
                               cycle_check, cycle_check_async, deform_class, functoriality_check,
                               functoriality_report, map_p, push_scene)
from utils.exceptions import (DetDeformError, GluingError, ParameterSystemError,
                              SupportConditionError)
from utils.groebner import ideal_membership, oracle_membership
from utils.localcoh import h1y_add, h1y_equal, h1y_is_zero, render_class
from utils.poly_parser import parse_many, parse_poly
from utils.ring import ArtinAlgebra, ArtinMorphism, RingContext

FIXTURES = Path(__file__).parent / 'fixtures'
DUAL = RingContext(('x', 'y'), ArtinAlgebra(('e',), 2))
DUAL3 = RingContext(('x', 'y', 'z'), ArtinAlgebra(('e',), 2))
CUBIC = RingContext(('x', 'y'), ArtinAlgebra(('e',), 3))


def load(name):
    return SceneManager(FIXTURES / name).load_scene_sync()


def single_chart(ctx, lifting, parameters=None):
    params = tuple(parse_many(parameters or list(ctx.variables), ctx))
    return Scene(ctx, (Chart('U1', params, parse_poly(lifting, ctx)),))


def random_poly(rng, ctx, max_degree=3):
    names = list(ctx.variables)
    terms = []
    for _ in range(rng.randint(1, 3)):
        factors = [rng.choice(names) for _ in range(rng.randint(0, max_degree))]
        terms.append('*'.join([str(rng.randint(1, 5))] + factors))
    return ' + '.join(terms)


def test_alpha_is_presentation_of_lifting():
    scene = load('divisor_x.toml').scene
    presentation = alpha(scene)
    assert (presentation.r0, presentation.r1) == (1, 1)
    assert presentation.complex.differential(1).matrix[0, 0] == parse_poly('x + e*y', DUAL)
    reduced = alpha_reduced(scene)
    assert reduced.context.artinian.is_field
    assert str(reduced.complex.differential(1).matrix[0, 0]) == 'x'


def test_map_p_on_divisor():
    """P∘α(x + e*y) = (e*y)/x"""
    scene = load('divisor_x.toml').scene
    class_rep = deform_class(scene)
    assert render_class(class_rep) == '(e*y) / x^1'
    assert class_rep.numerator == parse_poly('e*y', DUAL)
    assert not h1y_is_zero(class_rep)


def test_trivial_lifting_gives_zero_class():
    class_rep = deform_class(single_chart(DUAL, 'x'))
    assert class_rep.numerator.is_zero
    assert h1y_is_zero(class_rep)


def test_map_p_support_condition():
    with pytest.raises(SupportConditionError):
        map_p(present(koszul([parse_poly('y + e*x', DUAL)])), parse_poly('x', DUAL))
    squared = present(koszul([parse_poly('x^2 + e*y', DUAL)]))
    with pytest.raises(SupportConditionError):
        map_p(squared, parse_poly('x', DUAL))
    class_rep = map_p(squared, parse_poly('x', DUAL), max_level=2)
    assert class_rep.n == 2
    assert render_class(class_rep) == '(e*y) / x^2'


def test_map_p_keeps_unit_cofactor():
    """(1 + y)·x 的增广行列式分解为单位 (y + 1) 乘以 x"""
    p = present(koszul([parse_poly('x + x*y + e*y', DUAL)]))
    class_rep = map_p(p, parse_poly('x', DUAL))
    assert class_rep.unit == parse_poly('1 + y', DUAL)
    assert render_class(class_rep) == '(e*y) / ((y + 1) * x^1)'


def test_cycle_check_two_dimensional():
    report = cycle_check(load('divisor_x.toml').scene)
    assert report.lines() == ['class: (e*y) / x^1', 'gamma[x,y] = e*y^2 : ZERO', 'overall: PASS']
    assert report.overall


def test_cycle_check_three_dimensional():
    scene = load('three_dim.toml').scene
    report = cycle_check(scene)
    assert [v.direction for v in report.per_direction] == [2, 3]
    assert report.overall
    assert report.lines()[0] == 'class: (e*y*z) / x^1'


def test_cycle_check_random_liftings():
    """x + e·g 的每个方向都为零，Gröbner 与有界次数线性代数一致"""
    rng = random.Random(300)
    for _ in range(100):
        ctx = rng.choice([DUAL, DUAL3])
        g = random_poly(rng, ctx, max_degree=4)
        scene = single_chart(ctx, f"x + e*({g})")
        report = cycle_check(scene)
        assert report.overall
        for verdict in report.per_direction:
            gens = [verdict.gamma.f1, verdict.gamma.f2]
            assert ideal_membership(verdict.gamma.numerator, gens)
            assert oracle_membership(verdict.gamma.numerator, gens, 6)


def test_cycle_check_async_matches_sequential():
    scene = load('three_dim.toml').scene
    assert asyncio.run(cycle_check_async(scene)).lines() == cycle_check(scene).lines()


def test_cycle_check_rejects_bad_parameter_system():
    scene = single_chart(DUAL, 'x + e*y', ['x', 'x*y'])
    with pytest.raises(ParameterSystemError) as excinfo:
        cycle_check(scene)
    assert excinfo.value.direction == 2
    with pytest.raises(ParameterSystemError):
        scene.certify_parameters()


def test_scene_validation():
    with pytest.raises(DetDeformError):
        single_chart(DUAL, 'y + e*x')
    with pytest.raises(ParameterSystemError):
        Scene(DUAL, (Chart('U1', (parse_poly('x + e', DUAL),), parse_poly('x + e', DUAL)),))
    with pytest.raises(DetDeformError):
        Scene(DUAL, ())
    chart = Chart('U1', tuple(parse_many(['x', 'y'], DUAL)), parse_poly('x', DUAL))
    with pytest.raises(DetDeformError):
        Scene(DUAL, (chart, chart))
    with pytest.raises(DetDeformError):
        Scene(DUAL, (chart,), (Overlap('U1', 'U9'),))
    with pytest.raises(DetDeformError):
        single_chart(DUAL, 'x').chart('U9')


def test_cech_two_charts():
    """U2 上的提升是 (1 + e) 倍：g12 = 1 − e，g21 = 1 + e"""
    scene = load('two_charts.toml').scene
    report = cech_transitions(scene)
    forward, backward = report.transitions
    assert forward.name == 'U1.U2' and backward.name == 'U2.U1'
    assert forward.unit.numerator == parse_poly('1 - e', DUAL)
    assert backward.unit.numerator == parse_poly('1 + e', DUAL)
    assert forward.unit.denominator == 1
    assert report.valid
    assert report.lines()[2] == 'g[U1.U2]*g[U2.U1] = 1 : OK'
    assert report.lines()[-1] == 'cocycle: PASS'


def test_cech_broken_gluing():
    with pytest.raises(GluingError):
        cech_transitions(load('broken_gluing.toml').scene)


def test_cech_triple_overlap():
    """三个图卡两两相交，转移单位满足上闭链条件"""
    liftings = ['x + e*y', '(1 + e)*(x + e*y)', '(1 - 2*e)*(x + e*y)']
    params = tuple(parse_many(['x', 'y'], DUAL))
    charts = tuple(Chart(f"U{k}", params, parse_poly(text, DUAL)) for k, text in enumerate(liftings, 1))
    overlaps = (Overlap('U1', 'U2'), Overlap('U2', 'U3'), Overlap('U1', 'U3'))
    report = cech_transitions(Scene(DUAL, charts, overlaps))
    assert report.triple_checks == (('U1.U2.U3', True),)
    assert report.valid
    assert 'cocycle[U1.U2.U3] : OK' in report.lines()


def test_cech_with_inverted_element():
    """y·(x + e*y) 与 x + e*y 在 y 可逆的交上相差单位 y"""
    params = tuple(parse_many(['x', 'y'], DUAL))
    charts = (Chart('U1', params, parse_poly('x + e*y', DUAL)),
              Chart('U2', (parse_poly('x*y', DUAL), params[1]), parse_poly('x*y + e*y^2', DUAL)))
    report = cech_transitions(Scene(DUAL, charts, (Overlap('U1', 'U2', (parse_poly('y', DUAL),)),)))
    forward = report.transitions[0].unit
    assert forward.numerator == 1
    assert forward.denominator == parse_poly('y', DUAL)
    assert report.valid


def test_functoriality_fixture():
    scene_file = load('functorial.toml')
    report = functoriality_report(scene_file.scene, scene_file.morphism)
    assert report.equal
    assert report.lines() == ['push then P: (e*y) / x^1', 'P then push: (e*y) / x^1', 'functorial: PASS']


def test_push_scene_truncates_liftings():
    scene = load('functorial.toml').scene
    pushed = push_scene(scene, ArtinMorphism.truncation(CUBIC, 2))
    assert pushed.charts[0].lifting == parse_poly('x + e*y', DUAL)
    assert pushed.ring_context.artinian.truncation_order == 2
    with pytest.raises(DetDeformError):
        push_scene(scene, ArtinMorphism.identity(DUAL))


def _inverse_checks_hold(report):
    return bool(report.inverse_checks) and all(ok for _, ok in report.inverse_checks)


def test_cech_survives_push_along_truncations():
    """e³ → e² → k 逐级搬运两图卡场景，每一级 g12·g21 = 1 且上闭链成立"""
    params = tuple(parse_many(['x', 'y'], CUBIC))
    charts = (Chart('U1', params, parse_poly('x + e*y', CUBIC)),
              Chart('U2', params, parse_poly('(1 + e)*(x + e*y)', CUBIC)))
    scene = Scene(CUBIC, charts, (Overlap('U1', 'U2'),))
    assert cech_transitions(scene).valid

    dual_scene = push_scene(scene, ArtinMorphism.truncation(CUBIC, 2))
    report = cech_transitions(dual_scene)
    assert report.valid
    assert _inverse_checks_hold(report)
    assert report.lines()[2] == 'g[U1.U2]*g[U2.U1] = 1 : OK'
    forward, backward = report.transitions
    assert forward.unit.numerator == parse_poly('1 - e', DUAL)
    assert backward.unit.numerator == parse_poly('1 + e', DUAL)

    field_scene = push_scene(dual_scene, ArtinMorphism.augmentation(DUAL))
    report = cech_transitions(field_scene)
    assert report.valid
    assert _inverse_checks_hold(report)
    assert report.lines()[-1] == 'cocycle: PASS'


def test_pushed_broken_gluing_still_fails():
    params = tuple(parse_many(['x', 'y'], CUBIC))
    charts = (Chart('U1', params, parse_poly('x + e*y', CUBIC)),
              Chart('U2', params, parse_poly('x + e*y^2', CUBIC)))
    scene = Scene(CUBIC, charts, (Overlap('U1', 'U2', (parse_poly('y', CUBIC),)),))
    with pytest.raises(GluingError):
        cech_transitions(scene)
    with pytest.raises(GluingError):
        cech_transitions(push_scene(scene, ArtinMorphism.truncation(CUBIC, 2)))


def test_functoriality_random_liftings():
    """e³ → e² → k 两级截断下，先代换再求类与先求类再代换一致"""
    rng = random.Random(50)
    to_dual = ArtinMorphism.truncation(CUBIC, 2)
    to_field = ArtinMorphism.augmentation(DUAL)
    for _ in range(50):
        lifting = f"x + e*({random_poly(rng, CUBIC)}) + e^2*({random_poly(rng, CUBIC)})"
        scene = single_chart(CUBIC, lifting)
        assert functoriality_check(scene, to_dual)
        assert functoriality_check(push_scene(scene, to_dual), to_field)


def test_functoriality_nontrivial_substitution():
    """e ↦ 2e 把 (e*y)/x 变成 (2*e*y)/x"""
    target = parse_poly('2*e', DUAL)
    morphism = ArtinMorphism(DUAL, DUAL, {'e': target})
    report = functoriality_report(single_chart(DUAL, 'x + e*y'), morphism)
    assert report.equal
    assert render_class(report.pushed) == '(2*e*y) / x^1'


def test_map_p_is_additive_on_direct_sums():
    """P(α ⊕ α) = 2·P(α)：第 2 层的类等于两个第 1 层的类之和"""
    rng = random.Random(12)
    x = parse_poly('x', DUAL)
    for _ in range(20):
        lifting = parse_poly(f"x + e*({random_poly(rng, DUAL)})", DUAL)
        single = map_p(present(koszul([lifting])), x)
        doubled = map_p(present(direct_sum(koszul([lifting]), koszul([lifting]))), x, max_level=2)
        assert doubled.n == 2
        assert h1y_equal(doubled, h1y_add(single, single))


def test_unit_rescaling_invariance_on_dual_numbers():
    """u·f^A 与 f^A 给出同一个类，u 的增广是非零常数"""
    rng = random.Random(77)
    x = parse_poly('x', DUAL)
    for _ in range(30):
        lifting = parse_poly(f"x + e*({random_poly(rng, DUAL)})", DUAL)
        unit = parse_poly(f"{rng.randint(1, 5)} + e*({random_poly(rng, DUAL)})", DUAL)
        plain = map_p(present(koszul([lifting])), x)
        scaled = map_p(present(koszul([unit * lifting])), x)
        assert h1y_equal(plain, scaled)


@pytest.mark.parametrize('source_order, target_order', [(n, m) for n in range(2, 5) for m in range(1, n + 1)])
def test_functoriality_under_truncations(source_order, target_order):
    ctx = RingContext(('x', 'y'), ArtinAlgebra(('e',), source_order))
    morphism = ArtinMorphism.truncation(ctx, target_order)
    rng = random.Random(f"{source_order}->{target_order}")
    for _ in range(10):
        terms = ' + '.join(f"e^{k}*({random_poly(rng, ctx)})" for k in range(1, source_order))
        assert functoriality_check(single_chart(ctx, f"x + {terms}"), morphism)
