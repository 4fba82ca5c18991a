"""
行列式函子模块
自由模、复形与两项表示的行列式（分次线），分裂短正合列诱导的同构，
以及表示矩阵的极大子式（经典行列式）
"""
from dataclasses import dataclass
from itertools import combinations
from typing import List, Tuple

from sympy.combinatorics import Permutation

from .constants import DUAL_SUFFIX, EMPTY_WEDGE, TENSOR, WEDGE
from .complexes import (ChainComplex, FreeModule, Matrix, ModuleMap, ModulePresentation,
                        require_complex)
from .exceptions import (ContextMismatchError, DetDeformError, NotAUnitError, PresentationError,
                         SplitCertificationError)
from .logger import get_logger
from .ring import RingContext, RingElem

logger = get_logger('determinant')


@dataclass(frozen=True)
class GradedLine:
    """分次线：秩一自由模，带整数分次与形式生成元符号"""

    symbol: str
    grade: int
    context: RingContext

    def tensor(self, other: 'GradedLine') -> 'GradedLine':
        """张量积，分次相加；空楔积 1 是单位"""
        if not self.context.same_ring(other.context):
            raise ContextMismatchError("张量积的两条分次线不在同一个环上")
        if self.symbol == EMPTY_WEDGE:
            symbol = other.symbol
        elif other.symbol == EMPTY_WEDGE:
            symbol = self.symbol
        else:
            symbol = f"{self.symbol}{TENSOR}{other.symbol}"
        return GradedLine(symbol, self.grade + other.grade, self.context)

    def dual(self) -> 'GradedLine':
        return GradedLine(f"({self.symbol}){DUAL_SUFFIX}", -self.grade, self.context)

    def same_as(self, other: 'GradedLine') -> bool:
        return self.symbol == other.symbol and self.grade == other.grade

    def __str__(self):
        return f"({self.symbol}, {self.grade})"


def _is_unit_scalar(scalar: RingElem) -> bool:
    augmented = scalar.augment()
    return augmented.is_constant() and not augmented.is_zero


@dataclass(frozen=True)
class DetIso:
    """分次线之间的同构：源生成元 ↦ scalar · 靶生成元"""

    source: GradedLine
    target: GradedLine
    scalar: RingElem

    def __post_init__(self):
        if self.source.grade != self.target.grade:
            raise DetDeformError(f"同构两端分次不同: {self.source.grade} 与 {self.target.grade}")

    def compose(self, inner: 'DetIso') -> 'DetIso':
        """self ∘ inner，标量相乘"""
        if not inner.target.same_as(self.source):
            raise DetDeformError(f"无法复合: {inner.target} 与 {self.source} 不是同一条分次线")
        return DetIso(inner.source, self.target, self.scalar * inner.scalar)

    def is_unit(self) -> bool:
        return _is_unit_scalar(self.scalar)

    def inverse(self) -> 'DetIso':
        """
        逆同构（标量的增广须为非零常数，此时逆标量仍在 O ⊗ A 中）
        """
        from .localization import invert_unit
        if not self.is_unit():
            raise NotAUnitError(f"标量 {self.scalar} 的增广不是非零常数，同构不可逆")
        inverse = invert_unit(self.scalar, self.scalar.context.unlocalized())
        return DetIso(self.target, self.source, inverse.numerator)


def det_free(module: FreeModule) -> GradedLine:
    """det(M) = (∧^r M, r)，生成元 b₁∧⋯∧b_r；秩 0 时为 (1, 0)"""
    symbol = WEDGE.join(module.labels) if module.labels else EMPTY_WEDGE
    return GradedLine(symbol, module.rank, module.context)


def det_complex(c: ChainComplex) -> GradedLine:
    """
    det(F_•) = ⊗_i det(F_i)^{(−1)^i}

    生成元按次数从 n 到 0 排列，奇数次的因子取对偶；分次为 Σ (−1)^i rank F_i
    """
    require_complex(c)
    factors = []
    grade = 0
    for degree in range(c.length, -1, -1):
        line = det_free(c.modules[degree])
        if degree % 2:
            factors.append(f"({line.symbol}){DUAL_SUFFIX}")
            grade -= line.grade
        else:
            factors.append(f"({line.symbol})")
            grade += line.grade
    return GradedLine(TENSOR.join(factors), grade, c.context)


def select_minor(p: ModulePresentation) -> Tuple[int, ...]:
    """
    选取极大子式的行：按字典序第一个使增广子式非零的 r₁ 元行子集

    幂零部分不影响可逆性，所以只看增广
    """
    matrix = p.matrix
    columns = list(range(p.r1))
    augmented = matrix.augment()
    for rows in combinations(range(p.r0), p.r1):
        if not augmented.submatrix(rows, columns).det().is_zero:
            logger.debug(f"选取子式行 {[r + 1 for r in rows]}")
            return rows
    raise PresentationError("找不到非奇异的 r₁×r₁ 子式，表示不是单射")


def submatrix_det(p: ModulePresentation) -> RingElem:
    """所选 r₁×r₁ 子式 M̃₁ 的经典行列式"""
    rows = select_minor(p)
    return p.matrix.submatrix(rows, range(p.r1)).det()


def det_presentation(p: ModulePresentation) -> Tuple[GradedLine, DetIso]:
    """
    det(M) = det(L_•)，以及把它的生成元送到 |M̃₁| 的同构 det(M) → O

    Returns:
        (det(L_•), DetIso)，DetIso 的标量就是 submatrix_det(p)
    """
    line = det_complex(p.complex)
    scalar = submatrix_det(p)
    trivial = GradedLine(EMPTY_WEDGE, line.grade, p.context)
    return line, DetIso(line, trivial, scalar)


def _permutation_sign(sequence: List[int]) -> int:
    return Permutation(list(sequence)).signature()


@dataclass(frozen=True)
class CanonicalElement:
    """
    d′ ∘ ∧^{r₁}d₁ 的展开

    terms 中每项为 (行子集 S, 子式行列式 |M_S|, g_S ∧ g_{S^c} 重排为 g₁∧⋯∧g_{r₀} 的符号)
    """

    presentation: ModulePresentation
    terms: Tuple[Tuple[Tuple[int, ...], RingElem, int], ...]
    selected_rows: Tuple[int, ...]

    def coefficient(self) -> RingElem:
        """在 e^∨ ⊗ g₁∧⋯∧g_{r₀} 上的系数（只保留所选子式所在的项）"""
        for rows, minor, sign in self.terms:
            if rows == self.selected_rows:
                return minor if sign > 0 else -minor
        return RingElem.zero(self.presentation.context)

    def render(self) -> List[str]:
        from .poly_parser import render
        labels = self.presentation.complex.modules[0].labels
        lines = []
        for rows, minor, sign in self.terms:
            if minor.is_zero:
                continue
            word = WEDGE.join(labels[r] for r in rows) or EMPTY_WEDGE
            rest = [labels[r] for r in range(len(labels)) if r not in rows]
            mark = '*' if rows == self.selected_rows else ' '
            prefix = '+' if sign > 0 else '-'
            lines.append(f"{mark} {prefix}({render(minor)}) {word} | {WEDGE.join(rest) or EMPTY_WEDGE}")
        return lines


def canonical_element(p: ModulePresentation) -> CanonicalElement:
    """
    r₀ ≥ r₁ 时的典范元：∧^{r₁}d₁(e₁∧⋯∧e_{r₁}) = Σ_S |M_S| g_S，
    再用互补的 g 补全到 det L₀
    """
    matrix = p.matrix
    columns = range(p.r1)
    terms = []
    for rows in combinations(range(p.r0), p.r1):
        complement = [r for r in range(p.r0) if r not in rows]
        sign = _permutation_sign(list(rows) + complement)
        terms.append((rows, matrix.submatrix(rows, columns).det(), sign))
    return CanonicalElement(p, tuple(terms), select_minor(p))


@dataclass(frozen=True)
class SplitSES:
    """分裂短正合列 0 → A →(i) B →(p) C → 0，带分裂 s: C → B"""

    a: FreeModule
    b: FreeModule
    c: FreeModule
    inclusion: ModuleMap
    projection: ModuleMap
    splitting: ModuleMap

    @classmethod
    def from_matrices(cls, context: RingContext, inclusion: Matrix, projection: Matrix,
                      splitting: Matrix, labels: Tuple[str, str, str] = ('a', 'b', 'c')) -> 'SplitSES':
        """由三个矩阵构造，模取标准基标签"""
        a = FreeModule.standard(context, inclusion.ncols, labels[0])
        b = FreeModule.standard(context, inclusion.nrows, labels[1])
        c = FreeModule.standard(context, projection.nrows, labels[2])
        return cls(a, b, c, ModuleMap(a, b, inclusion), ModuleMap(b, c, projection),
                   ModuleMap(c, b, splitting))

    @property
    def context(self) -> RingContext:
        return self.b.context

    def basis_change(self) -> Matrix:
        """[i | s]：B 的新基（先 A 的像，后 C 的分裂像）"""
        return self.inclusion.matrix.hstack(self.splitting.matrix)

    def certify(self) -> RingElem:
        """
        校验 p∘i = 0、p∘s = id，且 [i | s] 的行列式是单位

        Returns:
            [i | s] 的行列式
        """
        if self.inclusion.target != self.b or self.projection.source != self.b \
                or self.splitting.target != self.b or self.projection.target != self.c \
                or self.splitting.source != self.c or self.inclusion.source != self.a:
            raise SplitCertificationError("映射的源与靶与 A、B、C 不一致")
        if self.a.rank + self.c.rank != self.b.rank:
            raise SplitCertificationError("rank A + rank C ≠ rank B")
        if not (self.projection.matrix * self.inclusion.matrix).is_zero():
            raise SplitCertificationError("p∘i ≠ 0")
        if not (self.projection.matrix * self.splitting.matrix).is_identity():
            raise SplitCertificationError("p∘s ≠ id")
        scalar = self.basis_change().det()
        if not _is_unit_scalar(scalar):
            raise SplitCertificationError(f"i 与 s 的像不能张成 B（[i | s] 的行列式为 {scalar}）")
        return scalar


def det_ses(s: SplitSES) -> DetIso:
    """
    det(δ): det(C) ⊗ det(A) → det(B)

    生成元经分裂与包含映到 B，标量为基变换 [i | s] 的行列式（单位）
    """
    scalar = s.certify()
    source = det_free(s.c).tensor(det_free(s.a))
    return DetIso(source, det_free(s.b), scalar)
