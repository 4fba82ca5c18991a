"""
复形模块
有限秩自由模、矩阵、有界链复形、Koszul 复形、直和与两项表示

复形按同调次数索引（次数 0 在最右侧），modules[i] 是次数 i 的模，
differentials[i-1] 是次数 i → i-1 的微分
"""
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, List, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from .constants import EMPTY_WEDGE, WEDGE
from .exceptions import ContextMismatchError, DetDeformError, NotAComplexError, PresentationError
from .logger import get_logger
from .ring import ArtinAlgebra, RingContext, RingElem

logger = get_logger('complexes')


@dataclass(frozen=True)
class Matrix:
    """RingElem 矩阵（显式记录形状，允许 0×n 与 n×0）"""

    context: RingContext
    nrows: int
    ncols: int
    rows: Tuple[Tuple[RingElem, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.rows)
        object.__setattr__(self, 'rows', rows)
        if len(rows) != self.nrows or any(len(row) != self.ncols for row in rows):
            raise DetDeformError(f"矩阵形状与数据不一致: 期望 {self.nrows}×{self.ncols}")
        for row in rows:
            for entry in row:
                if not entry.context.same_ring(self.context):
                    raise ContextMismatchError("矩阵元素不在同一个环中")

    # ---- 构造 ----
    @classmethod
    def from_rows(cls, context: RingContext, rows: Sequence[Sequence], ncols: int = None) -> 'Matrix':
        """由行构造；元素可以是 RingElem 或有理数"""
        rows = [[e if isinstance(e, RingElem) else RingElem.constant(context, e) for e in row]
                for row in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(context, len(rows), ncols, rows)

    @classmethod
    def zeros(cls, context: RingContext, nrows: int, ncols: int) -> 'Matrix':
        zero = RingElem.zero(context)
        return cls(context, nrows, ncols, [[zero] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, context: RingContext, n: int) -> 'Matrix':
        zero, one = RingElem.zero(context), RingElem.one(context)
        return cls(context, n, n, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def column(cls, context: RingContext, entries: Sequence[RingElem]) -> 'Matrix':
        return cls(context, len(entries), 1, [[e] for e in entries])

    # ---- 访问 ----
    @property
    def shape(self) -> Tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, index: Tuple[int, int]) -> RingElem:
        i, j = index
        return self.rows[i][j]

    def entries(self) -> Iterable[RingElem]:
        for row in self.rows:
            yield from row

    def submatrix(self, row_indices: Sequence[int], col_indices: Sequence[int]) -> 'Matrix':
        return Matrix(self.context, len(row_indices), len(col_indices),
                      [[self.rows[i][j] for j in col_indices] for i in row_indices])

    def columns(self, start: int, stop: int) -> 'Matrix':
        return self.submatrix(range(self.nrows), range(start, stop))

    def row_block(self, start: int, stop: int) -> 'Matrix':
        return self.submatrix(range(start, stop), range(self.ncols))

    # ---- 运算 ----
    def map(self, fn: Callable[[RingElem], RingElem], context: RingContext = None) -> 'Matrix':
        return Matrix(context or self.context, self.nrows, self.ncols,
                      [[fn(e) for e in row] for row in self.rows])

    def __add__(self, other: 'Matrix') -> 'Matrix':
        self._check_shape(other)
        return Matrix(self.context, self.nrows, self.ncols,
                      [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other: 'Matrix') -> 'Matrix':
        self._check_shape(other)
        return Matrix(self.context, self.nrows, self.ncols,
                      [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def __neg__(self) -> 'Matrix':
        return self.map(lambda e: -e)

    def __mul__(self, other: 'Matrix') -> 'Matrix':
        if self.ncols != other.nrows:
            raise DetDeformError(f"矩阵乘法维数不匹配: {self.shape} · {other.shape}")
        zero = RingElem.zero(self.context)
        rows = []
        for row in self.rows:
            new_row = []
            for j in range(other.ncols):
                total = zero
                for k, entry in enumerate(row):
                    if entry and other.rows[k][j]:
                        total = total + entry * other.rows[k][j]
                new_row.append(total)
            rows.append(new_row)
        return Matrix(self.context, self.nrows, other.ncols, rows)

    def scale(self, factor: RingElem) -> 'Matrix':
        return self.map(lambda e: e * factor)

    def _check_shape(self, other: 'Matrix'):
        if self.shape != other.shape:
            raise DetDeformError(f"矩阵形状不一致: {self.shape} 与 {other.shape}")

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for a, b in zip(self.entries(), other.entries()))

    def __hash__(self):
        return hash((self.shape, self.rows))

    def is_zero(self) -> bool:
        return all(e.is_zero for e in self.entries())

    def is_identity(self) -> bool:
        return self.nrows == self.ncols and self == Matrix.identity(self.context, self.nrows)

    def transpose(self) -> 'Matrix':
        return Matrix(self.context, self.ncols, self.nrows,
                      [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)])

    def hstack(self, other: 'Matrix') -> 'Matrix':
        if self.nrows != other.nrows:
            raise DetDeformError("横向拼接要求行数相同")
        return Matrix(self.context, self.nrows, self.ncols + other.ncols,
                      [r1 + r2 for r1, r2 in zip(self.rows, other.rows)])

    def vstack(self, other: 'Matrix') -> 'Matrix':
        if self.ncols != other.ncols:
            raise DetDeformError("纵向拼接要求列数相同")
        return Matrix(self.context, self.nrows + other.nrows, self.ncols, self.rows + other.rows)

    def block_diag(self, other: 'Matrix') -> 'Matrix':
        top = self.hstack(Matrix.zeros(self.context, self.nrows, other.ncols))
        bottom = Matrix.zeros(self.context, other.nrows, self.ncols).hstack(other)
        return top.vstack(bottom)

    def augment(self) -> 'Matrix':
        """逐元素取增广"""
        return self.map(lambda e: e.augment())

    def det(self) -> RingElem:
        """
        行列式

        在不截断的多项式环中用 sympy 的 DomainMatrix（无除法消元）精确计算，再做 ε 截断；
        截断是环同态，所以结果与在 O ⊗ A 中直接展开一致
        """
        if self.nrows != self.ncols:
            raise DetDeformError(f"非方阵没有行列式: {self.shape}")
        if self.nrows == 0:
            return RingElem.one(self.context)
        ring = self.context.full_ring
        domain = ring.to_domain()
        data = [[e.poly for e in row] for row in self.rows]
        value = DomainMatrix(data, self.shape, domain).det()
        return RingElem(self.context, ring(value))

    def inverse(self) -> 'Matrix':
        """
        行列式增广为非零常数时的逆矩阵（伴随矩阵乘以行列式的逆）

        Raises:
            NotAUnitError: 行列式的增广不是非零常数
        """
        from .localization import invert_unit
        n = self.nrows
        det_inverse = invert_unit(self.det(), self.context.unlocalized())
        factor = det_inverse.numerator
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                minor = self.submatrix([r for r in range(n) if r != j], [c for c in range(n) if c != i])
                cofactor = minor.det() if (i + j) % 2 == 0 else -minor.det()
                row.append(cofactor * factor)
            rows.append(row)
        return Matrix(self.context, n, n, rows)

    def with_context(self, context: RingContext) -> 'Matrix':
        return self.map(lambda e: e.with_context(context), context)


@dataclass(frozen=True)
class FreeModule:
    """带基标签的有限秩自由模"""

    context: RingContext
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'labels', tuple(self.labels))
        if len(set(self.labels)) != len(self.labels):
            raise DetDeformError(f"基标签重复: {self.labels}")

    @property
    def rank(self) -> int:
        return len(self.labels)

    @classmethod
    def standard(cls, context: RingContext, rank: int, prefix: str = 'g') -> 'FreeModule':
        """基标签为 g1..gr 的自由模"""
        return cls(context, tuple(f'{prefix}{i}' for i in range(1, rank + 1)))

    @classmethod
    def zero(cls, context: RingContext) -> 'FreeModule':
        return cls(context, ())

    def tagged(self, tag: str) -> 'FreeModule':
        return FreeModule(self.context, tuple(f'{tag}.{label}' for label in self.labels))

    def direct_sum(self, other: 'FreeModule', tags: Tuple[str, str] = ('1', '2')) -> 'FreeModule':
        return FreeModule(self.context, self.tagged(tags[0]).labels + other.tagged(tags[1]).labels)


@dataclass(frozen=True)
class ModuleMap:
    """自由模之间的同态，矩阵为 target.rank × source.rank"""

    source: FreeModule
    target: FreeModule
    matrix: Matrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.rank, self.source.rank):
            raise DetDeformError(
                f"映射矩阵形状 {self.matrix.shape} 与模的秩 ({self.target.rank}, {self.source.rank}) 不符")
        if not (self.source.context.same_ring(self.target.context)
                and self.source.context.same_ring(self.matrix.context)):
            raise ContextMismatchError("映射的源、靶与矩阵不在同一个环中")

    def compose(self, inner: 'ModuleMap') -> 'ModuleMap':
        """self ∘ inner"""
        return ModuleMap(inner.source, self.target, self.matrix * inner.matrix)

    @classmethod
    def identity(cls, module: FreeModule) -> 'ModuleMap':
        return cls(module, module, Matrix.identity(module.context, module.rank))


@dataclass(frozen=True)
class ChainComplex:
    """有界自由复形 0 → F_n → ⋯ → F_1 → F_0 → 0"""

    modules: Tuple[FreeModule, ...]
    differentials: Tuple[ModuleMap, ...]

    def __post_init__(self):
        object.__setattr__(self, 'modules', tuple(self.modules))
        object.__setattr__(self, 'differentials', tuple(self.differentials))
        if not self.modules:
            raise DetDeformError("复形至少包含次数 0 的模")
        if len(self.differentials) != len(self.modules) - 1:
            raise DetDeformError("微分个数必须比模的个数少 1")
        for i, d in enumerate(self.differentials, start=1):
            if d.source.rank != self.modules[i].rank or d.target.rank != self.modules[i - 1].rank:
                raise DetDeformError(f"次数 {i} 的微分与相邻模的秩不匹配")
        context = self.modules[0].context
        if any(not m.context.same_ring(context) for m in self.modules):
            raise ContextMismatchError("复形中的模不在同一个环中")

    @property
    def context(self) -> RingContext:
        return self.modules[0].context

    @property
    def length(self) -> int:
        """最高次数 n"""
        return len(self.modules) - 1

    def ranks(self) -> Tuple[int, ...]:
        """按次数 0..n 列出秩"""
        return tuple(m.rank for m in self.modules)

    def differential(self, degree: int) -> ModuleMap:
        """次数 degree → degree-1 的微分"""
        return self.differentials[degree - 1]

    @classmethod
    def two_term(cls, matrix: Matrix, source: FreeModule = None, target: FreeModule = None) -> 'ChainComplex':
        """0 → L₁ →(matrix) L₀，默认基标签为 e1..e_{r₁} 与 g1..g_{r₀}"""
        context = matrix.context
        source = source or FreeModule.standard(context, matrix.ncols, 'e')
        target = target or FreeModule.standard(context, matrix.nrows, 'g')
        return cls((target, source), (ModuleMap(source, target, matrix),))


def koszul(seq: Sequence[RingElem], context: RingContext = None) -> ChainComplex:
    """
    序列 (f₁..f_q) 的 Koszul 复形

    次数 p 的模是 Λ^p，基标签 e_{j₁}∧⋯∧e_{j_p}；
    微分 e_{j₁}∧⋯∧e_{j_p} ↦ Σ_m (−1)^{p−m} f_{j_m}·(去掉 e_{j_m})，m 从 1 计数；
    于是 koszul([x, y]) 的二次微分为 e1∧e2 ↦ y·e1 − x·e2

    Args:
        seq: 非零环元素
        context: 环上下文，默认取第一个元素的上下文
    """
    if not seq:
        raise DetDeformError("Koszul 序列不能为空")
    context = context or seq[0].context
    for index, f in enumerate(seq, start=1):
        if not f.context.same_ring(context):
            raise ContextMismatchError("Koszul 序列的元素不在同一个环中")
        if f.is_zero:
            raise DetDeformError(f"Koszul 序列的第 {index} 个元素为零")
    q = len(seq)
    subsets = [list(combinations(range(q), p)) for p in range(q + 1)]

    def label(subset) -> str:
        return WEDGE.join(f'e{j + 1}' for j in subset) if subset else EMPTY_WEDGE

    modules = [FreeModule(context, tuple(label(s) for s in subsets[p])) for p in range(q + 1)]
    zero = RingElem.zero(context)
    differentials = []
    for p in range(1, q + 1):
        row_index = {s: r for r, s in enumerate(subsets[p - 1])}
        rows = [[zero] * len(subsets[p]) for _ in subsets[p - 1]]
        for c, subset in enumerate(subsets[p]):
            for m, j in enumerate(subset):
                rest = subset[:m] + subset[m + 1:]
                # 符号取 (-1)^(p-m)（m 从 1 计），不是 (-1)^(m+1)：d2(e1∧e2) = y·e1 - x·e2
                rows[row_index[rest]][c] = seq[j] if (p - 1 - m) % 2 == 0 else -seq[j]
        matrix = Matrix(context, len(subsets[p - 1]), len(subsets[p]), rows)
        differentials.append(ModuleMap(modules[p], modules[p - 1], matrix))
    return ChainComplex(tuple(modules), tuple(differentials))


def verify_complex(c: ChainComplex) -> bool:
    """相邻微分的复合是否全为零矩阵"""
    for degree in range(2, c.length + 1):
        composite = c.differential(degree - 1).matrix * c.differential(degree).matrix
        if not composite.is_zero():
            logger.debug(f"次数 {degree} 处 d∘d ≠ 0")
            return False
    return True


def require_complex(c: ChainComplex):
    if not verify_complex(c):
        raise NotAComplexError("相邻微分的复合不为零，输入不是复形")


def direct_sum(c1: ChainComplex, c2: ChainComplex) -> ChainComplex:
    """逐次数直和，微分为分块对角；基标签加上来源前缀 1. / 2."""
    if not c1.context.same_ring(c2.context):
        raise ContextMismatchError("直和的两个复形不在同一个环中")
    context = c1.context
    length = max(c1.length, c2.length)

    def padded(c: ChainComplex, degree: int) -> FreeModule:
        return c.modules[degree] if degree <= c.length else FreeModule.zero(context)

    def padded_matrix(c: ChainComplex, degree: int) -> Matrix:
        if degree <= c.length:
            return c.differential(degree).matrix
        return Matrix.zeros(context, padded(c, degree - 1).rank, padded(c, degree).rank)

    modules = [padded(c1, i).direct_sum(padded(c2, i)) for i in range(length + 1)]
    differentials = [
        ModuleMap(modules[i], modules[i - 1], padded_matrix(c1, i).block_diag(padded_matrix(c2, i)))
        for i in range(1, length + 1)
    ]
    return ChainComplex(tuple(modules), tuple(differentials))


@dataclass(frozen=True)
class ModulePresentation:
    """
    两项单射复形 0 → L₁ → L₀，表示余核 M

    只能通过 present() 构造（带单射性证书）
    """

    complex: ChainComplex

    @property
    def context(self) -> RingContext:
        return self.complex.context

    @property
    def matrix(self) -> Matrix:
        """r₀ × r₁ 表示矩阵 M₁"""
        return self.complex.differential(1).matrix

    @property
    def r0(self) -> int:
        return self.complex.modules[0].rank

    @property
    def r1(self) -> int:
        return self.complex.modules[1].rank


def augmented_rank(matrix: Matrix) -> int:
    """增广矩阵在 ℚ(x₁..x_d) 上的秩"""
    if matrix.nrows == 0 or matrix.ncols == 0:
        return 0
    pure_ring = matrix.context.pure_ring
    domain = pure_ring.to_domain()
    data = [[e.augment().to_pure() for e in row] for row in matrix.rows]
    return DomainMatrix(data, matrix.shape, domain).to_field().rank()


def present(c: ChainComplex) -> ModulePresentation:
    """
    把两项复形认证为模的表示

    Raises:
        PresentationError: 不是两项复形，r₁ > r₀，或增广矩阵在分式域上不满列秩
    """
    if c.length != 1:
        raise PresentationError(f"表示必须是两项复形，实际长度为 {c.length}")
    r0, r1 = c.modules[0].rank, c.modules[1].rank
    if r1 > r0:
        raise PresentationError(f"r₁ = {r1} 大于 r₀ = {r0}，不可能是单射")
    rank = augmented_rank(c.differential(1).matrix)
    if rank != r1:
        raise PresentationError(f"增广矩阵的秩为 {rank}，小于 r₁ = {r1}，表示不是单射")
    return ModulePresentation(c)


def _augment_elem(elem: RingElem, residue: RingContext) -> RingElem:
    return RingElem.from_pure(residue, elem.augment().to_pure())


def residue_context(context: RingContext) -> RingContext:
    """同样的变量与局部化，Artin 代数换成 k"""
    return context.with_artinian(ArtinAlgebra())


def augment_complex(c: ChainComplex) -> ChainComplex:
    """
    沿 A → k 约化复形（逐元素取增广，换到 A = k 的上下文）

    对表示而言这就是 K₀(O_{X_A,y} on y) → K₀(O_{X,y} on y) 的约化映射
    """
    residue = residue_context(c.context)
    modules = tuple(FreeModule(residue, m.labels) for m in c.modules)
    differentials = tuple(
        ModuleMap(modules[i], modules[i - 1],
                  c.differential(i).matrix.map(lambda e: _augment_elem(e, residue), residue))
        for i in range(1, c.length + 1)
    )
    return ChainComplex(modules, differentials)


def augment_presentation(p: ModulePresentation) -> ModulePresentation:
    return present(augment_complex(p.complex))


# ---- 规范文本渲染 ----

def render_matrix(matrix: Matrix) -> List[str]:
    """逐行渲染，元素为规范多项式文本"""
    from .poly_parser import render
    if matrix.nrows == 0:
        return [f'[] ({matrix.nrows}×{matrix.ncols})']
    return ['[' + ', '.join(render(e) for e in row) + ']' for row in matrix.rows]


def render_complex(c: ChainComplex) -> List[str]:
    """从最高次数到 0 渲染模与微分"""
    lines = []
    for degree in range(c.length, -1, -1):
        module = c.modules[degree]
        lines.append(f"F{degree}: rank {module.rank} [{', '.join(module.labels)}]")
        if degree >= 1:
            lines.append(f"d{degree}:")
            lines.extend('  ' + row for row in render_matrix(c.differential(degree).matrix))
    return lines
