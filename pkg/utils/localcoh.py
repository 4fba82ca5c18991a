"""
局部上同调模块
H¹_y(O_X ⊗ m_A) 的分式代表元 numerator / (unit·fⁿ)（Ext¹ 沿 f 的幂取余极限），
以及 Koszul 复形上 Ext² 的代表元 γ[f1,f2] = numerator

类不做约分，所有相等性判定都归结为 f-进赋值：
p ∈ (f^m)·R_(f) 当且仅当 ord_f(p) ≥ m（f 不可约，多项式环是唯一分解整环）
"""
from dataclasses import dataclass, field
from typing import Optional

from .exceptions import (ContextMismatchError, DetDeformError, LevelNotSupportedError,
                         ParameterSystemError)
from .groebner import f_valuation, ideal_membership, pure_membership
from .logger import get_logger
from .ring import RingContext, RingElem

logger = get_logger('localcoh')


def _all_valuations_at_least(elem: RingElem, f: RingElem, bound: int) -> bool:
    """elem 的每个 ε 系数的 f-进赋值是否都 ≥ bound"""
    pure_f = f.to_pure()
    return all(f_valuation(coeff, pure_f) >= bound for coeff in elem.eps_coefficients().values())


@dataclass(frozen=True)
class H1yClassRep:
    """
    H¹_y(O_X ⊗ m_A) 中的类 numerator / (unit · fⁿ)

    f 是 y 的局部方程（纯多项式，按约定不可约）；
    unit 是 ord_f = 0 的纯多项式，默认为 1
    """

    f: RingElem
    n: int
    numerator: RingElem
    unit: Optional[RingElem] = field(default=None)

    def __post_init__(self):
        context = self.f.context
        if self.unit is None:
            object.__setattr__(self, 'unit', RingElem.one(context))
        if not (self.numerator.context.same_ring(context) and self.unit.context.same_ring(context)):
            raise ContextMismatchError("类代表元的各部分不在同一个环中")
        if self.f.is_zero or not self.f.is_pure or self.f.total_degree() < 1:
            raise DetDeformError(f"局部方程必须是非常数纯多项式，实际为 {self.f}")
        if self.n < 1:
            raise DetDeformError(f"余极限层数必须 ≥ 1，实际为 {self.n}")
        if not self.numerator.augment().is_zero:
            raise DetDeformError(f"分子必须落在 O ⊗ m_A 中，实际为 {self.numerator}")
        if self.unit.is_zero or not self.unit.is_pure \
                or f_valuation(self.unit.to_pure(), self.f.to_pure()) != 0:
            raise DetDeformError(f"单位因子必须是与 f 互素的纯多项式，实际为 {self.unit}")

    @property
    def context(self) -> RingContext:
        return self.f.context

    def __str__(self):
        return render_class(self)


@dataclass(frozen=True)
class Ext2ClassRep:
    """Ext²(O/(f1, f2), O ⊗ m_A) ≅ M/(f1, f2)M 中的类 γ[f1,f2] = numerator"""

    f1: RingElem
    f2: RingElem
    numerator: RingElem

    def __post_init__(self):
        if self.f1.is_zero or self.f2.is_zero:
            raise ParameterSystemError("参数对中有零元素")
        if not self.f1.context.same_ring(self.f2.context) \
                or not self.f1.context.same_ring(self.numerator.context):
            raise ContextMismatchError("Ext² 代表元的各部分不在同一个环中")
        if pure_membership(self.f2.to_pure(), [self.f1.to_pure()]):
            raise ParameterSystemError(f"{self.f2} ∈ ({self.f1})，不是参数系")
        if not self.numerator.augment().is_zero:
            raise DetDeformError(f"分子必须落在 O ⊗ m_A 中，实际为 {self.numerator}")

    def __str__(self):
        return render_ext2(self)


def _require_same_f(a: H1yClassRep, b: H1yClassRep):
    if not a.f.context.same_ring(b.f.context) or a.f != b.f:
        raise DetDeformError(f"局部方程不一致: {a.f} 与 {b.f}")


def h1y_equal(a: H1yClassRep, b: H1yClassRep) -> bool:
    """
    余极限中的相等：a.num·b.unit·f^{b.n} − b.num·a.unit·f^{a.n}
    的每个 ε 系数的 f-进赋值都 ≥ a.n + b.n
    """
    _require_same_f(a, b)
    f = a.f
    difference = a.numerator * b.unit * f ** b.n - b.numerator * a.unit * f ** a.n
    return _all_valuations_at_least(difference, f, a.n + b.n)


def h1y_is_zero(a: H1yClassRep) -> bool:
    """零类：分子的每个 ε 系数的 f-进赋值都 ≥ n（分子是正则元）"""
    return _all_valuations_at_least(a.numerator, a.f, a.n)


def h1y_zero(f: RingElem) -> H1yClassRep:
    return H1yClassRep(f, 1, RingElem.zero(f.context))


def h1y_rescale(a: H1yClassRep) -> H1yClassRep:
    """g/fⁿ ↦ g·f/f^{n+1}（余极限的转移映射）"""
    return H1yClassRep(a.f, a.n + 1, a.numerator * a.f, a.unit)


def h1y_scale(a: H1yClassRep, factor: RingElem) -> H1yClassRep:
    """乘以 O ⊗ A 中的元素"""
    return H1yClassRep(a.f, a.n, a.numerator * factor, a.unit)


def h1y_add(a: H1yClassRep, b: H1yClassRep) -> H1yClassRep:
    """通分相加：(a.num·b.unit·f^{b.n} + b.num·a.unit·f^{a.n}) / (a.unit·b.unit·f^{a.n+b.n})"""
    _require_same_f(a, b)
    f = a.f
    numerator = a.numerator * b.unit * f ** b.n + b.numerator * a.unit * f ** a.n
    return H1yClassRep(f, a.n + b.n, numerator, a.unit * b.unit)


def ext2_is_zero(c: Ext2ClassRep) -> bool:
    """沿正则对的 Koszul 分解 Ext² ≅ M/(f1,f2)M，零类即理想成员"""
    return ideal_membership(c.numerator, [c.f1, c.f2])


def boundary_to_ext2(a: H1yClassRep, f2: RingElem) -> Ext2ClassRep:
    """
    Gersten 边界在 (f1, f2) 截出的余维 2 点上的分量：
    numerator/f1 = (f2·numerator)/(f1·f2)，给出 γ[f1,f2] = f2·numerator

    只实现余极限第 1 层且单位因子为常数的情形

    Raises:
        LevelNotSupportedError: a.n > 1 或单位因子不是常数
        ParameterSystemError: f2 ∈ (f1)
    """
    if a.n != 1:
        raise LevelNotSupportedError(f"边界映射只在第 1 层实现，实际层数为 {a.n}")
    if not a.unit.is_constant():
        raise LevelNotSupportedError(f"边界映射要求常数单位因子，实际为 {a.unit}")
    numerator = (f2 * a.numerator).scale(1 / a.unit.constant_value())
    return Ext2ClassRep(a.f, f2, numerator)


# ---- 规范渲染 ----

def _factor_text(elem: RingElem) -> str:
    text = str(elem)
    return text if text.isidentifier() else f"({text})"


def render_class(a: H1yClassRep) -> str:
    """"(numerator) / f^n"，单位因子非 1 时写成 "(numerator) / (unit * f^n)" """
    power = f"{_factor_text(a.f)}^{a.n}"
    if a.unit == 1:
        return f"({a.numerator}) / {power}"
    return f"({a.numerator}) / ({_factor_text(a.unit)} * {power})"


def render_ext2(c: Ext2ClassRep) -> str:
    """"gamma[f1,f2] = numerator" """
    return f"gamma[{c.f1},{c.f2}] = {c.numerator}"
