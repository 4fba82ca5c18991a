"""
除子形变模块
从提升 f^A 出发：α_A（表示 O_{X_A,y}/(f^A)），经行列式映到 H¹_y 的类 P∘α_A，
在每个余维 2 方向 (f₁, f_j) 上检验 Gersten 边界为零，
并计算图卡之间的 Čech 转移单位与 Artin 代数代换下的函子性
"""
import asyncio
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .complexes import ModulePresentation, augment_presentation, koszul, present
from .determinant import submatrix_det
from .exceptions import (DetDeformError, GluingError, NotAUnitError, ParameterSystemError,
                         SupportConditionError)
from .groebner import pure_membership, split_valuation
from .localcoh import (Ext2ClassRep, H1yClassRep, boundary_to_ext2, ext2_is_zero, h1y_equal,
                       render_class)
from .localization import LocalFraction, divide, is_unit_local
from .logger import get_logger
from .ring import ArtinMorphism, RingContext, RingElem

logger = get_logger('deformation')


@dataclass(frozen=True)
class Chart:
    """一个图卡：正则参数系 f₁..f_d（f₁ 是除子的局部方程）与提升 f^A"""

    name: str
    parameters: Tuple[RingElem, ...]
    lifting: RingElem

    @property
    def divisor(self) -> RingElem:
        return self.parameters[0]


@dataclass(frozen=True)
class Overlap:
    """两个图卡的交，inverted 生成被求逆的乘法集"""

    first: str
    second: str
    inverted: Tuple[RingElem, ...] = ()

    @property
    def name(self) -> str:
        return f"{self.first}.{self.second}"


@dataclass(frozen=True)
class SceneOptions:
    monomial_order: str = 'lex'
    degree_bound: int = 6
    seed: int = 7


@dataclass(frozen=True)
class Scene:
    """
    场景：公共环上下文、若干图卡与它们的交

    构造时校验 augment(lifting) = f₁、参数是纯多项式且非零；
    f_j ∉ (f₁) 由 certify_parameters 单独校验
    """

    ring_context: RingContext
    charts: Tuple[Chart, ...]
    overlaps: Tuple[Overlap, ...] = ()
    options: SceneOptions = field(default_factory=SceneOptions)

    def __post_init__(self):
        names = [c.name for c in self.charts]
        if not names:
            raise DetDeformError("场景至少需要一个图卡")
        if len(set(names)) != len(names):
            raise DetDeformError(f"图卡名重复: {names}")
        for chart in self.charts:
            if not chart.parameters:
                raise DetDeformError(f"图卡 {chart.name} 没有参数")
            for index, param in enumerate(chart.parameters, start=1):
                if not param.context.same_ring(self.ring_context):
                    raise DetDeformError(f"图卡 {chart.name} 的参数不在场景的环中")
                if param.is_zero or not param.is_pure:
                    raise ParameterSystemError(
                        f"图卡 {chart.name} 的第 {index} 个参数必须是非零纯多项式", index)
            if chart.lifting.augment() != chart.divisor:
                raise DetDeformError(
                    f"图卡 {chart.name} 的提升 {chart.lifting} 的增广不等于 f₁ = {chart.divisor}")
        for overlap in self.overlaps:
            for name in (overlap.first, overlap.second):
                if name not in names:
                    raise DetDeformError(f"交 {overlap.name} 引用了未知图卡 {name}")

    def chart(self, name: Optional[str] = None) -> Chart:
        """按名称取图卡；name 为空时取第一个"""
        if name is None:
            return self.charts[0]
        for chart in self.charts:
            if chart.name == name:
                return chart
        raise DetDeformError(f"未知图卡 '{name}'，可选: {[c.name for c in self.charts]}")

    def certify_parameters(self):
        """对每个图卡校验 f_j ∉ (f₁)，j ≥ 2"""
        for chart in self.charts:
            f1 = chart.divisor.to_pure()
            for j, fj in enumerate(chart.parameters[1:], start=2):
                if pure_membership(fj.to_pure(), [f1]):
                    raise ParameterSystemError(
                        f"图卡 {chart.name}: 方向 {j} 的参数 {fj} ∈ ({chart.divisor})，不是正则参数系", j)


# ---- α 与 P ----

def alpha(scene: Scene, chart: Optional[str] = None) -> ModulePresentation:
    """α_A(Y′) = [O_{X_A,y}/(f^A)]，表示为 koszul([f^A])"""
    lifting = scene.chart(chart).lifting
    return present(koszul([lifting], scene.ring_context))


def alpha_reduced(scene: Scene, chart: Optional[str] = None) -> ModulePresentation:
    """沿 A → k 约化后的表示 koszul([f₁])"""
    return augment_presentation(alpha(scene, chart))


def map_p(p: ModulePresentation, f: RingElem, max_level: int = 1) -> H1yClassRep:
    """
    P: 表示 ↦ H¹_y 的类 ρ(|M̃₁|) / (u·f^m)

    增广行列式分解为 u·f^m（f ∤ u），默认只接受 m = 1；
    max_level > 1 时接受 m ≤ max_level

    Raises:
        SupportConditionError: 增广行列式为零，或赋值不在 1..max_level 内
    """
    det = submatrix_det(p)
    augmented = det.augment()
    if augmented.is_zero:
        raise SupportConditionError("增广行列式为零，表示不支撑在 y 上")
    level, cofactor = split_valuation(augmented.to_pure(), f.to_pure())
    if not 1 <= level <= max_level:
        raise SupportConditionError(
            f"增广行列式 {augmented} 在 {f} 处的赋值为 {level}，要求 1..{max_level}")
    unit = RingElem.from_pure(p.context, cofactor)
    return H1yClassRep(f, level, det.rho_split(), unit)


def deform_class(scene: Scene, chart: Optional[str] = None) -> H1yClassRep:
    """P∘α_A(Y′)"""
    return map_p(alpha(scene, chart), scene.chart(chart).divisor)


# ---- 闭链条件 ----

@dataclass(frozen=True)
class DirectionVerdict:
    direction: int
    gamma: Ext2ClassRep
    zero: bool

    def line(self) -> str:
        return f"{self.gamma} : {'ZERO' if self.zero else 'NONZERO'}"


@dataclass(frozen=True)
class CycleReport:
    chart: str
    class_rep: H1yClassRep
    per_direction: Tuple[DirectionVerdict, ...]

    @property
    def overall(self) -> bool:
        return all(v.zero for v in self.per_direction)

    def lines(self) -> List[str]:
        lines = [f"class: {render_class(self.class_rep)}"]
        lines.extend(v.line() for v in self.per_direction)
        lines.append(f"overall: {'PASS' if self.overall else 'FAIL'}")
        return lines


def _direction_verdict(chart: Chart, class_rep: H1yClassRep, j: int) -> DirectionVerdict:
    fj = chart.parameters[j - 1]
    if pure_membership(fj.to_pure(), [chart.divisor.to_pure()]):
        raise ParameterSystemError(f"图卡 {chart.name}: 方向 {j} 的参数 {fj} ∈ ({chart.divisor})", j)
    gamma = boundary_to_ext2(class_rep, fj)
    zero = ext2_is_zero(gamma)
    logger.debug(f"{chart.name} 方向 {j}: {gamma} → {'ZERO' if zero else 'NONZERO'}")
    return DirectionVerdict(j, gamma, zero)


def cycle_check(scene: Scene, chart: Optional[str] = None) -> CycleReport:
    """
    对 j = 2..d 计算 ∂(P∘α) 在 (f₁, f_j) 处的分量 γ 并判定是否为零

    Raises:
        ParameterSystemError: 某个 f_j ∈ (f₁)，异常中带方向 j
    """
    target = scene.chart(chart)
    class_rep = deform_class(scene, target.name)
    verdicts = tuple(_direction_verdict(target, class_rep, j)
                     for j in range(2, len(target.parameters) + 1))
    return CycleReport(target.name, class_rep, verdicts)


async def cycle_check_async(scene: Scene, chart: Optional[str] = None) -> CycleReport:
    """各方向在线程中并发计算，报告顺序仍按 j 递增"""
    target = scene.chart(chart)
    class_rep = deform_class(scene, target.name)
    verdicts = await asyncio.gather(*[
        asyncio.to_thread(_direction_verdict, target, class_rep, j)
        for j in range(2, len(target.parameters) + 1)
    ])
    return CycleReport(target.name, class_rep, tuple(sorted(verdicts, key=lambda v: v.direction)))


# ---- Čech 转移单位 ----

@dataclass(frozen=True)
class Transition:
    source: str
    target: str
    unit: LocalFraction

    @property
    def name(self) -> str:
        return f"{self.source}.{self.target}"


@dataclass(frozen=True)
class CechReport:
    transitions: Tuple[Transition, ...]
    inverse_checks: Tuple[Tuple[str, bool], ...]
    triple_checks: Tuple[Tuple[str, bool], ...]

    @property
    def valid(self) -> bool:
        return all(ok for _, ok in self.inverse_checks) and all(ok for _, ok in self.triple_checks)

    def lines(self) -> List[str]:
        lines = [f"g[{t.name}] = {t.unit}" for t in self.transitions]
        lines += [f"g[{name}]*g[{'.'.join(reversed(name.split('.')))}] = 1 : {'OK' if ok else 'FAIL'}"
                  for name, ok in self.inverse_checks]
        lines += [f"cocycle[{name}] : {'OK' if ok else 'FAIL'}" for name, ok in self.triple_checks]
        lines.append(f"cocycle: {'PASS' if self.valid else 'FAIL'}")
        return lines


def _transition(scene: Scene, source: str, target: str, context: RingContext) -> LocalFraction:
    """g = l_source / l_target，校验它是单位且 l_source = g·l_target"""
    l_source = scene.chart(source).lifting
    l_target = scene.chart(target).lifting
    try:
        unit = divide(l_source, l_target, context)
    except NotAUnitError as exc:
        raise GluingError(f"{source}.{target}: 提升不能在交上粘合（{exc}）") from exc
    if not is_unit_local(unit.numerator, context):
        raise GluingError(f"{source}.{target}: 比值 {unit} 在交上不是单位，提升不能粘合")
    if l_source * unit.denominator != unit.numerator * l_target:
        raise GluingError(f"{source}.{target}: 粘合恒等式 l_i = g·l_j 不成立")
    return unit


def _overlap_context(scene: Scene, overlaps: Sequence[Overlap]) -> RingContext:
    inverted = [g for overlap in overlaps for g in overlap.inverted]
    if not inverted:
        return scene.ring_context.unlocalized()
    return scene.ring_context.localized_at_elements(inverted)


def cech_transitions(scene: Scene) -> CechReport:
    """
    对每个声明的交 (i, j) 计算 g_ij 与 g_ji，校验 g_ij·g_ji = 1；
    三个交都声明过的三元组上校验 g_ij·g_jk·g_ki = 1（交叉相乘）

    Raises:
        GluingError: 某个交上的提升不是彼此的单位倍
    """
    transitions = []
    inverse_checks = []
    declared: Dict[frozenset, Overlap] = {}
    for overlap in scene.overlaps:
        declared[frozenset((overlap.first, overlap.second))] = overlap
        context = _overlap_context(scene, [overlap])
        forward = _transition(scene, overlap.first, overlap.second, context)
        backward = _transition(scene, overlap.second, overlap.first, context)
        transitions.append(Transition(overlap.first, overlap.second, forward))
        transitions.append(Transition(overlap.second, overlap.first, backward))
        inverse_checks.append((overlap.name, (forward * backward).is_one()))

    triple_checks = []
    names = [c.name for c in scene.charts]
    for i, j, k in combinations(names, 3):
        pairs = [frozenset((i, j)), frozenset((j, k)), frozenset((k, i))]
        if not all(pair in declared for pair in pairs):
            continue
        context = _overlap_context(scene, [declared[pair] for pair in pairs])
        product = (_transition(scene, i, j, context) * _transition(scene, j, k, context)
                   * _transition(scene, k, i, context))
        triple_checks.append((f"{i}.{j}.{k}", product.is_one()))

    report = CechReport(tuple(transitions), tuple(inverse_checks), tuple(triple_checks))
    logger.info(f"Čech 转移: {len(transitions)} 个，上闭链{'成立' if report.valid else '不成立'}")
    return report


# ---- 函子性 ----

def push_scene(scene: Scene, morphism: ArtinMorphism) -> Scene:
    """沿 Artin 代数同态 B → A 搬运整个场景（提升做 ε 代换并截断）"""
    if not scene.ring_context.same_ring(morphism.source):
        raise DetDeformError("代换的源环与场景的环不一致")
    charts = tuple(
        Chart(c.name, tuple(morphism.apply(p) for p in c.parameters), morphism.apply(c.lifting))
        for c in scene.charts
    )
    overlaps = tuple(
        Overlap(o.first, o.second, tuple(morphism.apply(g) for g in o.inverted))
        for o in scene.overlaps
    )
    return replace(scene, ring_context=morphism.target, charts=charts, overlaps=overlaps)


@dataclass(frozen=True)
class FunctorialityReport:
    chart: str
    pushed: H1yClassRep
    transported: H1yClassRep
    equal: bool

    def lines(self) -> List[str]:
        return [
            f"push then P: {render_class(self.pushed)}",
            f"P then push: {render_class(self.transported)}",
            f"functorial: {'PASS' if self.equal else 'FAIL'}",
        ]


def functoriality_report(scene_b: Scene, morphism: ArtinMorphism,
                         chart: Optional[str] = None) -> FunctorialityReport:
    """
    比较两条路径：先代换提升再算 P∘α，与先在 B 上算 P∘α 再代换分子
    """
    name = scene_b.chart(chart).name
    pushed = deform_class(push_scene(scene_b, morphism), name)
    over_b = deform_class(scene_b, name)
    transported = H1yClassRep(morphism.apply(over_b.f), over_b.n,
                              morphism.apply(over_b.numerator), morphism.apply(over_b.unit))
    return FunctorialityReport(name, pushed, transported, h1y_equal(pushed, transported))


def functoriality_check(scene_b: Scene, morphism: ArtinMorphism, chart: Optional[str] = None) -> bool:
    return functoriality_report(scene_b, morphism, chart).equal
