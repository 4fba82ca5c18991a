"""
环运算模块
O_X(U) ⊗ A 的精确算术：ℚ 上多元多项式与截断 Artin 代数 k[ε₁..ε_s]/(次数 ≥ n) 的张量积

多项式的存储与单项式运算交给 sympy 的 PolyRing（系数域 QQ），
本模块只负责 ε 截断、增广/投影分解和环之间的代换
"""
from dataclasses import dataclass, field, replace
from functools import cached_property
from itertools import combinations_with_replacement
from typing import Dict, List, Sequence, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement, PolyRing

from .constants import MONOMIAL_ORDERS
from .exceptions import ContextMismatchError, DetDeformError, MorphismError, PolySyntaxError

Monomial = Tuple[int, ...]
Scalar = Union[int, 'QQ.dtype']


def to_rational(value) -> 'QQ.dtype':
    """
    把整数、(分子, 分母) 或 'a/b' 字符串规范化为既约有理数

    Args:
        value: int、QQ 元素、(num, den) 二元组或 'a/b' 形式的字符串

    Returns:
        QQ 元素（分母为正且与分子互素，零为 0/1）
    """
    if isinstance(value, str):
        text = value.strip()
        num_text, slash, den_text = text.partition('/')
        if not num_text.strip():
            raise PolySyntaxError("有理数缺少分子", 0, text)
        if slash and not den_text.strip():
            raise PolySyntaxError("有理数缺少分母", len(text), text)
        num, den = int(num_text), int(den_text) if slash else 1
    elif isinstance(value, tuple):
        num, den = value
    else:
        return QQ.convert(value)
    if den == 0:
        raise DetDeformError(f"有理数分母为零: {value!r}")
    return QQ(int(num), int(den))


@dataclass(frozen=True)
class ArtinAlgebra:
    """截断 Artin 代数 k[ε₁..ε_s]/(所有总次数 ≥ n 的 ε 单项式)"""

    generators: Tuple[str, ...] = ()
    truncation_order: int = 1

    def __post_init__(self):
        object.__setattr__(self, 'generators', tuple(self.generators))
        if self.truncation_order < 1:
            raise DetDeformError(f"截断阶必须 ≥ 1，实际为 {self.truncation_order}")
        if len(set(self.generators)) != len(self.generators):
            raise DetDeformError(f"Artin 生成元重复: {self.generators}")

    @property
    def is_field(self) -> bool:
        """A = k 的两种情形：没有生成元，或截断阶为 1"""
        return not self.generators or self.truncation_order == 1

    def basis(self) -> List[Monomial]:
        """按次数递增列出 k-向量空间基（次数 < n 的 ε 单项式指数）"""
        s = len(self.generators)
        result = []
        for degree in range(self.truncation_order):
            for combo in combinations_with_replacement(range(s), degree):
                exps = [0] * s
                for index in combo:
                    exps[index] += 1
                result.append(tuple(exps))
            if s == 0:
                break
        return result


@dataclass(frozen=True)
class RingContext:
    """
    环的上下文：变量、Artin 代数、单项式序与局部化数据

    inverted_primes 中每一项生成一个素理想 P，其补集被求逆；
    inverted_elements 生成一个被求逆的乘法集（用于图卡交集）。
    两者都只影响单位判定，不改变底层多项式环
    """

    variables: Tuple[str, ...]
    artinian: ArtinAlgebra = field(default_factory=ArtinAlgebra)
    order: str = 'lex'
    inverted_primes: Tuple[Tuple[PolyElement, ...], ...] = ()
    inverted_elements: Tuple[PolyElement, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'variables', tuple(self.variables))
        if not self.variables:
            raise DetDeformError("至少需要声明一个变量")
        if len(set(self.variables)) != len(self.variables):
            raise DetDeformError(f"变量名重复: {self.variables}")
        clash = set(self.variables) & set(self.artinian.generators)
        if clash:
            raise DetDeformError(f"变量名与 ε 生成元重名: {sorted(clash)}")
        if self.order not in MONOMIAL_ORDERS:
            raise DetDeformError(f"未知的单项式序 '{self.order}'，可选: {sorted(MONOMIAL_ORDERS)}")
        if self.inverted_primes and self.inverted_elements:
            raise DetDeformError("不能同时按素理想补集和乘法集局部化")
        for prime in self.inverted_primes:
            if not prime or any(not g for g in prime):
                raise DetDeformError("被局部化的素理想必须由非零多项式生成")

    @cached_property
    def full_ring(self) -> PolyRing:
        """变量与 ε 生成元一起组成的多项式环（ε 位于末尾）"""
        symbols = self.variables + self.artinian.generators
        return PolyRing(symbols, QQ, MONOMIAL_ORDERS[self.order])

    @cached_property
    def pure_ring(self) -> PolyRing:
        """只含变量的多项式环 ℚ[x₁..x_d]"""
        return PolyRing(self.variables, QQ, MONOMIAL_ORDERS[self.order])

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def ring_key(self) -> tuple:
        return (self.variables, self.artinian, self.order)

    def same_ring(self, other: 'RingContext') -> bool:
        """局部化数据不同但底层环相同的上下文可以互相运算"""
        return self.ring_key == other.ring_key

    def localized_at_primes(self, primes: Sequence[Sequence['RingElem']]) -> 'RingContext':
        """返回把每个素理想补集求逆后的上下文"""
        pure = tuple(tuple(g.to_pure() for g in prime) for prime in primes)
        return replace(self, inverted_primes=pure, inverted_elements=())

    def localized_at_elements(self, elements: Sequence['RingElem']) -> 'RingContext':
        """返回把给定元素生成的乘法集求逆后的上下文"""
        pure = tuple(g.to_pure() for g in elements)
        return replace(self, inverted_primes=(), inverted_elements=pure)

    def unlocalized(self) -> 'RingContext':
        return replace(self, inverted_primes=(), inverted_elements=())

    def with_artinian(self, artinian: ArtinAlgebra) -> 'RingContext':
        """换底 Artin 代数（局部化数据保留，它们只涉及变量）"""
        return replace(self, artinian=artinian)

    def split_monomial(self, monom: Monomial) -> Tuple[Monomial, Monomial]:
        return monom[:self.nvars], monom[self.nvars:]

    def eps_zero(self) -> Monomial:
        return (0,) * len(self.artinian.generators)


def _truncate(poly: PolyElement, context: RingContext) -> PolyElement:
    """丢弃 ε 次数 ≥ 截断阶的项（它们在 A 中为零）"""
    if not context.artinian.generators:
        return poly
    limit = context.artinian.truncation_order
    d = context.nvars
    if all(sum(m[d:]) < limit for m in poly.keys()):
        return poly
    return context.full_ring.from_dict({m: c for m, c in poly.items() if sum(m[d:]) < limit})


class RingElem:
    """O_X(U) ⊗ A 中的元素；构造后不可变"""

    __slots__ = ('context', 'poly')

    def __init__(self, context: RingContext, poly: PolyElement, truncate: bool = True):
        if poly.ring != context.full_ring:
            poly = context.full_ring.from_dict(dict(poly.items()))
        object.__setattr__(self, 'context', context)
        object.__setattr__(self, 'poly', _truncate(poly, context) if truncate else poly)

    def __setattr__(self, name, value):
        raise AttributeError("RingElem 是不可变对象")

    # ---- 构造 ----
    @classmethod
    def zero(cls, context: RingContext) -> 'RingElem':
        return cls(context, context.full_ring.zero, truncate=False)

    @classmethod
    def one(cls, context: RingContext) -> 'RingElem':
        return cls(context, context.full_ring.one)

    @classmethod
    def constant(cls, context: RingContext, value) -> 'RingElem':
        return cls(context, context.full_ring.ground_new(to_rational(value)))

    @classmethod
    def symbol(cls, context: RingContext, name: str) -> 'RingElem':
        names = context.variables + context.artinian.generators
        return cls(context, context.full_ring.gens[names.index(name)])

    @classmethod
    def from_pure(cls, context: RingContext, pure: PolyElement) -> 'RingElem':
        """把 ℚ[x] 中的多项式嵌入 O ⊗ A（ε 指数全为零）"""
        tail = context.eps_zero()
        return cls(context, context.full_ring.from_dict({m + tail: c for m, c in pure.items()}),
                   truncate=False)

    @classmethod
    def from_terms(cls, context: RingContext,
                   terms: Dict[Tuple[Monomial, Monomial], Scalar]) -> 'RingElem':
        """由 {(变量指数, ε 指数): 系数} 构造"""
        data = {}
        for (xmon, emon), coeff in terms.items():
            data[tuple(xmon) + tuple(emon)] = to_rational(coeff)
        return cls(context, context.full_ring.from_dict(data))

    def with_context(self, context: RingContext) -> 'RingElem':
        """换到底层环相同的另一个上下文（例如局部化后的上下文）"""
        if not self.context.same_ring(context):
            raise ContextMismatchError("只能在底层环相同的上下文之间切换")
        return RingElem(context, self.poly, truncate=False)

    # ---- 运算 ----
    def _coerce(self, other) -> 'RingElem':
        if isinstance(other, RingElem):
            if not self.context.same_ring(other.context):
                raise ContextMismatchError(
                    f"环不一致: {self.context.ring_key} 与 {other.context.ring_key}")
            return other
        if isinstance(other, PolyElement):
            return NotImplemented
        return RingElem.constant(self.context, other)

    def __add__(self, other):
        other = self._coerce(other)
        return RingElem(self.context, self.poly + other.poly, truncate=False)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return RingElem(self.context, self.poly - other.poly, truncate=False)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return RingElem(self.context, -self.poly, truncate=False)

    def __mul__(self, other):
        other = self._coerce(other)
        return RingElem(self.context, self.poly * other.poly)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise DetDeformError("环元素只支持非负整数次幂")
        result = RingElem.one(self.context)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, RingElem):
            return self.context.same_ring(other.context) and self.poly == other.poly
        if isinstance(other, int) or QQ.of_type(other):
            return self.poly == self.context.full_ring.ground_new(QQ.convert(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.context.ring_key, self.poly))

    def __bool__(self):
        return bool(self.poly)

    def __str__(self):
        from .poly_parser import render
        return render(self)

    def __repr__(self):
        return f"RingElem({self})"

    # ---- 结构 ----
    @property
    def is_zero(self) -> bool:
        return not self.poly

    def terms(self) -> List[Tuple[Monomial, Monomial, 'QQ.dtype']]:
        """按单项式序降序列出 (变量指数, ε 指数, 系数)"""
        return [self.context.split_monomial(m) + (c,) for m, c in self.poly.terms()]

    def eps_coefficients(self) -> Dict[Monomial, PolyElement]:
        """按 ε 单项式拆成 ℚ[x] 中的系数多项式（只含非零系数）"""
        pure = self.context.pure_ring
        groups: Dict[Monomial, dict] = {}
        for monom, coeff in self.poly.items():
            xmon, emon = self.context.split_monomial(monom)
            groups.setdefault(emon, {})[xmon] = coeff
        return {emon: pure.from_dict(groups[emon]) for emon in sorted(groups)}

    def eps_degree(self) -> int:
        """最高 ε 次数，零元素返回 -1"""
        d = self.context.nvars
        return max((sum(m[d:]) for m in self.poly.keys()), default=-1)

    def total_degree(self) -> int:
        """变量部分的最高总次数，零元素返回 -1"""
        d = self.context.nvars
        return max((sum(m[:d]) for m in self.poly.keys()), default=-1)

    @property
    def is_pure(self) -> bool:
        d = self.context.nvars
        return all(not any(m[d:]) for m in self.poly.keys())

    def to_pure(self) -> PolyElement:
        """取出 ℚ[x] 中的多项式；含 ε 项时报错"""
        if not self.is_pure:
            raise DetDeformError(f"期望纯多项式（不含 ε），实际为 {self}")
        d = self.context.nvars
        return self.context.pure_ring.from_dict({m[:d]: c for m, c in self.poly.items()})

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.poly.keys())

    def constant_value(self) -> 'QQ.dtype':
        """常数项（零单项式的系数）"""
        return self.poly.get(self.context.full_ring.zero_monom, QQ.zero)

    def scale(self, factor) -> 'RingElem':
        return RingElem(self.context, self.poly * to_rational(factor), truncate=False)

    def augment(self) -> 'RingElem':
        """增广：保留 ε 次数为 0 的项，对应 A → k"""
        d = self.context.nvars
        kept = {m: c for m, c in self.poly.items() if not any(m[d:])}
        return RingElem(self.context, self.context.full_ring.from_dict(kept), truncate=False)

    def rho_split(self) -> 'RingElem':
        """投影 ρ：保留 ε 次数 ≥ 1 的项，落在 O ⊗ m_A 中"""
        d = self.context.nvars
        kept = {m: c for m, c in self.poly.items() if any(m[d:])}
        return RingElem(self.context, self.context.full_ring.from_dict(kept), truncate=False)

    def exquo_pure(self, divisor: PolyElement) -> Union['RingElem', None]:
        """
        按 ε 系数逐个精确除以纯多项式

        Returns:
            商；只要有一个系数不能整除就返回 None
        """
        data = {}
        for emon, coeff in self.eps_coefficients().items():
            quotient, remainder = coeff.div(divisor)
            if remainder:
                return None
            for xmon, c in quotient.items():
                data[xmon + emon] = c
        return RingElem(self.context, self.context.full_ring.from_dict(data), truncate=False)


def augment(a: RingElem) -> RingElem:
    """A = k ⊕ m_A 诱导的到 O 的投影"""
    return a.augment()


def rho_split(a: RingElem) -> RingElem:
    """到 O ⊗ m_A 的投影 ρ；augment(a) + rho_split(a) = a"""
    return a.rho_split()


def ring_arith(op: str, a: RingElem, b: RingElem):
    """
    按名称执行环运算

    Args:
        op: 'add' | 'sub' | 'mul' | 'neg' | 'eq'
        a, b: 同一环中的元素（'neg' 忽略 b）

    Returns:
        RingElem，或 'eq' 时返回 bool
    """
    if not a.context.same_ring(b.context):
        raise ContextMismatchError("ring_arith 的两个参数不在同一个环中")
    if op == 'add':
        return a + b
    if op == 'sub':
        return a - b
    if op == 'mul':
        return a * b
    if op == 'neg':
        return -a
    if op == 'eq':
        return a == b
    raise DetDeformError(f"未知的环运算 '{op}'")


def pure_total_degree(poly: PolyElement) -> int:
    return max((sum(m) for m in poly.keys()), default=-1)


class ArtinMorphism:
    """
    Artin 代数之间的局部同态 B → A，由 ε 代换给出

    每个 B 的生成元映到 A 的生成元的一个多项式（落在 m_A 中，不含变量）；
    变量部分保持不变
    """

    def __init__(self, source: RingContext, target: RingContext, images: Dict[str, RingElem]):
        """
        Args:
            source: 以 B 为系数的环
            target: 以 A 为系数的环（变量与单项式序必须相同）
            images: B 的每个生成元 → target 中的元素
        """
        if source.variables != target.variables or source.order != target.order:
            raise MorphismError("源环与目标环的变量或单项式序不一致")
        missing = [g for g in source.artinian.generators if g not in images]
        if missing:
            raise MorphismError(f"缺少生成元的像: {missing}")
        for g in source.artinian.generators:
            if not images[g].context.same_ring(target):
                raise MorphismError(f"生成元 {g} 的像不在目标环中")
        self.source = source
        self.target = target
        self.images = tuple(images[g].with_context(target) for g in source.artinian.generators)
        self._validate()

    def _validate(self):
        for name, image in zip(self.source.artinian.generators, self.images):
            if not image.augment().is_zero:
                raise MorphismError(f"生成元 {name} 的像含 ε 次数为 0 的项，不在 m_A 中")
            if any(any(xmon) for xmon, _, _ in image.terms()):
                raise MorphismError(f"生成元 {name} 的像含变量，只允许 ε 多项式")
        # 良定义：B 中次数等于截断阶的单项式必须映到零
        s = len(self.source.artinian.generators)
        degree = self.source.artinian.truncation_order
        if s:
            for combo in combinations_with_replacement(range(s), degree):
                image = RingElem.one(self.target)
                for index in combo:
                    image = image * self.images[index]
                if not image.is_zero:
                    names = '*'.join(self.source.artinian.generators[i] for i in combo)
                    raise MorphismError(f"代换不是良定义的：{names} 在 B 中为零但像为 {image}")

    @classmethod
    def identity(cls, context: RingContext) -> 'ArtinMorphism':
        gens = {g: RingElem.symbol(context, g) for g in context.artinian.generators}
        return cls(context, context, gens)

    @classmethod
    def truncation(cls, source: RingContext, order: int) -> 'ArtinMorphism':
        """k[ε]/(次数 ≥ n) → k[ε]/(次数 ≥ m)，m ≤ n，ε ↦ ε"""
        artinian = ArtinAlgebra(source.artinian.generators, order)
        target = source.with_artinian(artinian)
        gens = {g: RingElem.symbol(target, g) for g in artinian.generators}
        return cls(source, target, gens)

    @classmethod
    def augmentation(cls, source: RingContext) -> 'ArtinMorphism':
        """B → k，所有生成元映到零"""
        target = source.with_artinian(ArtinAlgebra())
        return cls(source, target, {g: RingElem.zero(target) for g in source.artinian.generators})

    def apply(self, elem: RingElem) -> RingElem:
        """对元素做 ε 代换并在 A 中截断"""
        if not elem.context.same_ring(self.source):
            raise ContextMismatchError("代换的参数不在源环中")
        target_ring = self.target.full_ring
        tail = self.target.eps_zero()
        powers: Dict[Tuple[int, int], RingElem] = {}
        result = RingElem.zero(self.target)
        for xmon, emon, coeff in elem.terms():
            term = RingElem(self.target, target_ring.from_dict({tuple(xmon) + tail: coeff}),
                            truncate=False)
            for index, exponent in enumerate(emon):
                if exponent:
                    key = (index, exponent)
                    if key not in powers:
                        powers[key] = self.images[index] ** exponent
                    term = term * powers[key]
            result = result + term
        return result
