"""
局部化模块
单位判定、局部分式与 O ⊗ A 中的精确除法

局部化只以成员资格证书和分式表示，不做完整的分式域运算；
每次构造 LocalFraction 都重新校验分母
"""
from dataclasses import dataclass

from sympy.polys.rings import PolyElement

from .exceptions import ContextMismatchError, NotAUnitError
from .groebner import pure_membership
from .logger import get_logger
from .ring import RingContext, RingElem, pure_total_degree

logger = get_logger('localization')


def _divides_power(poly: PolyElement, base: PolyElement) -> bool:
    # poly | base^k 对某个 k ≤ deg(poly) 成立
    power = base.ring.one
    for _ in range(max(pure_total_degree(poly), 1)):
        power = power * base
        if not power.div(poly)[1]:
            return True
    return False


def pure_is_unit(poly: PolyElement, context: RingContext) -> bool:
    """纯多项式在 context 的局部化中是否可逆"""
    if not poly:
        return False
    if pure_total_degree(poly) == 0:
        return True
    if context.inverted_primes:
        return all(not pure_membership(poly, prime) for prime in context.inverted_primes)
    if context.inverted_elements:
        product = context.pure_ring.one
        for element in context.inverted_elements:
            product = product * element
        return _divides_power(poly, product)
    return False


def is_unit_local(a: RingElem, context: RingContext = None) -> bool:
    """
    判定 a 在局部化环 ⊗ A 中是否为单位

    m_A 幂零，所以只需看增广 augment(a)：
    素理想局部化时要求它不落在任何被局部化的素理想中；
    乘法集局部化时要求它整除生成元乘积的某个幂

    Args:
        a: 环元素
        context: 局部化上下文，默认取 a 的上下文
    """
    context = context or a.context
    if not a.context.same_ring(context):
        raise ContextMismatchError("单位判定的上下文与元素所在环不一致")
    return pure_is_unit(a.augment().to_pure(), context)


@dataclass(frozen=True)
class LocalFraction:
    """局部化环 ⊗ A 中的分式 numerator / denominator，分母是纯多项式且为单位"""

    numerator: RingElem
    denominator: RingElem

    def __post_init__(self):
        context = self.numerator.context
        if not context.same_ring(self.denominator.context):
            raise ContextMismatchError("分子与分母不在同一个环中")
        if self.denominator.is_zero:
            raise NotAUnitError("分母为零")
        if not self.denominator.is_pure:
            raise NotAUnitError(f"分母必须是纯多项式，实际为 {self.denominator}")
        if not pure_is_unit(self.denominator.to_pure(), context):
            raise NotAUnitError(f"分母 {self.denominator} 在该局部化中不可逆")

    @property
    def context(self) -> RingContext:
        return self.numerator.context

    def __mul__(self, other: 'LocalFraction') -> 'LocalFraction':
        return LocalFraction(self.numerator * other.numerator,
                             (self.denominator * other.denominator).with_context(self.context))

    def equals(self, other: 'LocalFraction') -> bool:
        """交叉相乘比较：a/b = c/d 当且仅当 a·d = c·b（分母都是非零因子）"""
        return self.numerator * other.denominator == other.numerator * self.denominator

    def equals_elem(self, elem: RingElem) -> bool:
        return self.numerator == elem * self.denominator

    def is_one(self) -> bool:
        return self.numerator == self.denominator

    def is_unit(self) -> bool:
        """分子也是单位时分式可逆"""
        return is_unit_local(self.numerator, self.context)

    def inverse(self) -> 'LocalFraction':
        """(n/d)⁻¹ = d·(1/n)"""
        inv = invert_unit(self.numerator, self.context)
        return LocalFraction(inv.numerator * self.denominator, inv.denominator)

    def __str__(self):
        from .poly_parser import render_fraction
        return render_fraction(self)


def divide(a: RingElem, b: RingElem, context: RingContext = None) -> LocalFraction:
    """
    在局部化环 ⊗ A 中计算 a / b

    b = b₀ + ν，b₀ = augment(b)，ν 幂零（ν^N = 0，N 为截断阶），于是
    1/b = Σ_{k<N} (−ν)^k · b₀^{N−1−k} / b₀^N；
    得到分式后约去分母与分子各 ε 系数的最大公因式

    Args:
        a: 被除元素
        b: 除数，增广必须在 context 中可逆
        context: 局部化上下文，默认取 b 的上下文

    Returns:
        LocalFraction（分母为 b₀ 的幂，常数分母会被吸收进分子）
    """
    context = context or b.context
    if not a.context.same_ring(b.context) or not b.context.same_ring(context):
        raise ContextMismatchError("除法的参数不在同一个环中")
    b0 = b.augment()
    if b0.is_zero:
        raise NotAUnitError(f"{b} 的增广为零，不可逆")
    nilpotent = b.rho_split()
    order = context.artinian.truncation_order

    series = RingElem.zero(context)
    power = RingElem.one(context)
    for k in range(order):
        series = series + power * b0 ** (order - 1 - k)
        power = power * (-nilpotent)
    numerator = (a * series).with_context(context)
    denominator = (b0 ** order).with_context(context)

    # 约去分母与分子所有 ε 系数的公因子
    common = denominator.to_pure()
    for coeff in numerator.eps_coefficients().values():
        common = common.gcd(coeff)
    if pure_total_degree(common) > 0:
        numerator = numerator.exquo_pure(common)
        denominator = denominator.exquo_pure(common)
    if denominator.is_constant():
        numerator = numerator.scale(1 / denominator.constant_value())
        denominator = RingElem.one(context)
    return LocalFraction(numerator, denominator)


def invert_unit(a: RingElem, context: RingContext = None) -> LocalFraction:
    """
    求单位的逆：增广按分式求逆，幂零部分展开为有限 Neumann 级数

    Returns:
        LocalFraction u，满足 a·u = 1
    """
    context = context or a.context
    if not is_unit_local(a, context):
        raise NotAUnitError(f"{a} 在该局部化中不是单位")
    return divide(RingElem.one(context), a, context)
