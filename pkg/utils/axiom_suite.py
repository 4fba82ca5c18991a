"""
行列式函子公理的随机检验
在 ℚ[x,y] ⊗ k[e]/(e²) 上随机生成分裂正合列、可容许滤链与直和对，
沿交换图的两条路径比较 DetIso 标量（精确相等）

每个用例有独立的随机源 Random("{seed}:{axiom}:{index}")，
所以报告与并发调度顺序无关
"""
import asyncio
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Tuple

from .complexes import Matrix
from .constants import AXIOM_MAX_RANK, AXIOMS
from .determinant import SplitSES, det_ses
from .localization import invert_unit
from .logger import get_logger
from .ring import ArtinAlgebra, RingContext, RingElem

logger = get_logger('axiom_suite')

AXIOM_CONTEXT = RingContext(('x', 'y'), ArtinAlgebra(('e',), 2))


# ---- 随机对象 ----

def random_element(rng: random.Random, context: RingContext = AXIOM_CONTEXT,
                   max_degree: int = 1, max_terms: int = 2) -> RingElem:
    """系数在 −2..2、变量次数 ≤ max_degree 的随机元素（可能含 ε 项）"""
    nvars = context.nvars
    neps = len(context.artinian.generators)
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        xmon = [0] * nvars
        for _ in range(rng.randint(0, max_degree)):
            xmon[rng.randrange(nvars)] += 1
        emon = [0] * neps
        if neps and rng.random() < 0.5:
            emon[rng.randrange(neps)] = 1
        terms[(tuple(xmon), tuple(emon))] = rng.choice((-2, -1, 1, 2))
    return RingElem.from_terms(context, terms)


def random_unit(rng: random.Random, context: RingContext = AXIOM_CONTEXT) -> Tuple[RingElem, RingElem]:
    """常数 + 幂零部分形式的单位，以及它的逆"""
    unit = RingElem.constant(context, rng.choice((-3, -2, -1, 1, 2, 3)))
    if context.artinian.generators:
        nilpotent = random_element(rng, context).rho_split()
        unit = unit + nilpotent
    inverse = invert_unit(unit, context)
    return unit, inverse.numerator


def random_matrix(rng: random.Random, nrows: int, ncols: int,
                  context: RingContext = AXIOM_CONTEXT) -> Matrix:
    return Matrix(context, nrows, ncols,
                  [[random_element(rng, context) if rng.random() < 0.6 else RingElem.zero(context)
                    for _ in range(ncols)] for _ in range(nrows)])


def random_automorphism(rng: random.Random, n: int, context: RingContext = AXIOM_CONTEXT,
                        steps: int = 3) -> Tuple[Matrix, Matrix]:
    """
    随机可逆矩阵及其逆：初等变换（加倍行）、置换与单位对角缩放的乘积

    Returns:
        (g, g⁻¹)
    """
    g = Matrix.identity(context, n)
    g_inv = Matrix.identity(context, n)
    if n == 0:
        return g, g_inv
    zero = RingElem.zero(context)
    for _ in range(steps):
        kind = rng.choice(('shear', 'swap', 'scale')) if n > 1 else 'scale'
        rows = [[RingElem.one(context) if i == j else zero for j in range(n)] for i in range(n)]
        inverse_rows = [list(row) for row in rows]
        if kind == 'shear':
            i, j = rng.sample(range(n), 2)
            r = random_element(rng, context)
            rows[i][j] = r
            inverse_rows[i][j] = -r
        elif kind == 'swap':
            i, j = rng.sample(range(n), 2)
            rows[i][i] = rows[j][j] = inverse_rows[i][i] = inverse_rows[j][j] = zero
            rows[i][j] = rows[j][i] = inverse_rows[i][j] = inverse_rows[j][i] = RingElem.one(context)
        else:
            i = rng.randrange(n)
            unit, unit_inverse = random_unit(rng, context)
            rows[i][i] = unit
            inverse_rows[i][i] = unit_inverse
        step = Matrix(context, n, n, rows)
        step_inverse = Matrix(context, n, n, inverse_rows)
        g = g * step
        g_inv = step_inverse * g_inv
    return g, g_inv


def _block(context: RingContext, blocks: List[List[Matrix]]) -> Matrix:
    rows = None
    for block_row in blocks:
        line = block_row[0]
        for block in block_row[1:]:
            line = line.hstack(block)
        rows = line if rows is None else rows.vstack(line)
    return rows


def _identity(n: int) -> Matrix:
    return Matrix.identity(AXIOM_CONTEXT, n)


def _zeros(m: int, n: int) -> Matrix:
    return Matrix.zeros(AXIOM_CONTEXT, m, n)


def random_split_ses(rng: random.Random, a: int, c: int) -> SplitSES:
    """
    0 → A → B → C → 0，B 的基经随机自同构 g 扭转，分裂带随机项 h：
    i = g[I; 0]，s = g[h; I]，p = [0 I]g⁻¹
    """
    g, g_inv = random_automorphism(rng, a + c)
    h = random_matrix(rng, a, c)
    inclusion = g * _identity(a).vstack(_zeros(c, a))
    splitting = g * h.vstack(_identity(c))
    projection = _zeros(c, a).hstack(_identity(c)) * g_inv
    return SplitSES.from_matrices(AXIOM_CONTEXT, inclusion, projection, splitting)


# ---- 三条公理 ----

def check_naturality(rng: random.Random) -> Tuple[bool, str]:
    """
    同构 (α, β, γ) 把 δ 搬到 δ′ = (β i α⁻¹, γ p β⁻¹, β s γ⁻¹)，
    检验 det(δ′)·(det γ ⊗ det α) = det β · det(δ)
    """
    a = rng.randint(0, AXIOM_MAX_RANK - 1)
    c = rng.randint(0, AXIOM_MAX_RANK - a)
    delta = random_split_ses(rng, a, c)
    alpha, alpha_inv = random_automorphism(rng, a)
    beta, beta_inv = random_automorphism(rng, a + c)
    gamma, gamma_inv = random_automorphism(rng, c)
    moved = SplitSES.from_matrices(
        AXIOM_CONTEXT,
        beta * delta.inclusion.matrix * alpha_inv,
        gamma * delta.projection.matrix * beta_inv,
        beta * delta.splitting.matrix * gamma_inv,
    )
    left = det_ses(moved).scalar * alpha.det() * gamma.det()
    right = beta.det() * det_ses(delta).scalar
    return left == right, f"ranks (A, C) = ({a}, {c}): {left} ≠ {right}"


def check_associativity(rng: random.Random) -> Tuple[bool, str]:
    """
    可容许滤链 A ⊂ B ⊂ C 给出四个正合列
    δ₁: A → B → B/A，δ₂: B → C → C/B，δ₁₂: A → C → C/A，δ̃: B/A → C/A → C/B，
    检验 det(δ₂)·det(δ₁) = det(δ₁₂)·det(δ̃)
    """
    a = rng.randint(0, 1)
    p = rng.randint(0, AXIOM_MAX_RANK - a)
    q = rng.randint(0, AXIOM_MAX_RANK - a - p)
    n = a + p + q
    g, g_inv = random_automorphism(rng, n)
    w, w_inv = random_automorphism(rng, a + p)
    alpha, alpha_inv = random_automorphism(rng, a)
    gamma1, gamma1_inv = random_automorphism(rng, p)
    beta1, beta1_inv = random_automorphism(rng, q)
    k, k_inv = random_automorphism(rng, p + q)
    x, y, z = random_matrix(rng, a, p), random_matrix(rng, a, q), random_matrix(rng, p, q)

    # C 的适配基 T = E·D：前 a 列张成 A，前 a+p 列张成 B
    unipotent = _block(AXIOM_CONTEXT, [[_identity(a), x, y], [_zeros(p, a), _identity(p), z],
                                       [_zeros(q, a), _zeros(q, p), _identity(q)]])
    unipotent_inv = _block(AXIOM_CONTEXT, [[_identity(a), -x, x * z - y],
                                           [_zeros(p, a), _identity(p), -z],
                                           [_zeros(q, a), _zeros(q, p), _identity(q)]])
    diagonal = alpha.block_diag(gamma1).block_diag(beta1)
    diagonal_inv = alpha_inv.block_diag(gamma1_inv).block_diag(beta1_inv)
    t = unipotent * diagonal
    t_inv = diagonal_inv * unipotent_inv
    gt = g * t

    # δ₁: A → B → B/A
    h = random_matrix(rng, a, p)
    i_ab = w_inv * _identity(a).vstack(_zeros(p, a))
    s_ab = w_inv * h.vstack(_identity(p))
    p_ab = _zeros(p, a).hstack(_identity(p)) * w
    delta1 = SplitSES.from_matrices(AXIOM_CONTEXT, i_ab, p_ab, s_ab)

    # δ₂: B → C → C/B
    i_bc = gt.columns(0, a + p) * w
    s_bc = gt.columns(a + p, n)
    p_bc = _zeros(q, a + p).hstack(beta1_inv) * g_inv
    delta2 = SplitSES.from_matrices(AXIOM_CONTEXT, i_bc, p_bc, s_bc)

    # δ₁₂: A → C → C/A
    i_ac = gt.columns(0, a)
    s_ac = gt.columns(a, n) * k_inv
    p_ac = k * _zeros(p + q, a).hstack(_identity(p + q)) * t_inv * g_inv
    delta12 = SplitSES.from_matrices(AXIOM_CONTEXT, i_ac, p_ac, s_ac)

    # δ̃: 由上面的映射诱导
    delta_tilde = SplitSES.from_matrices(AXIOM_CONTEXT, p_ac * i_bc * s_ab, p_bc * s_ac, p_ac * s_bc)

    left = det_ses(delta2).scalar * det_ses(delta1).scalar
    right = det_ses(delta12).scalar * det_ses(delta_tilde).scalar
    return left == right, f"ranks (A, B/A, C/B) = ({a}, {p}, {q}): {left} ≠ {right}"


def check_commutativity(rng: random.Random) -> Tuple[bool, str]:
    """
    A ⊕ B 的两种分解 δ₁: A → A⊕B → B 与 δ₂: B → A⊕B → A，
    检验 det(δ₁) = (−1)^{ab}·det(δ₂)（交换 A、B 的符号显式计算）
    """
    a = rng.randint(1, AXIOM_MAX_RANK - 1)
    b = rng.randint(1, AXIOM_MAX_RANK - a)
    g, g_inv = random_automorphism(rng, a + b)
    h1, h2 = random_matrix(rng, a, b), random_matrix(rng, b, a)
    delta1 = SplitSES.from_matrices(
        AXIOM_CONTEXT,
        g * _identity(a).vstack(_zeros(b, a)),
        _zeros(b, a).hstack(_identity(b)) * g_inv,
        g * h1.vstack(_identity(b)),
    )
    delta2 = SplitSES.from_matrices(
        AXIOM_CONTEXT,
        g * _zeros(a, b).vstack(_identity(b)),
        _identity(a).hstack(_zeros(a, b)) * g_inv,
        g * _identity(a).vstack(h2),
    )
    sign = -1 if (a * b) % 2 else 1
    left = det_ses(delta1).scalar
    right = det_ses(delta2).scalar * sign
    return left == right, f"ranks (A, B) = ({a}, {b}): {left} ≠ {right}"


AXIOM_CHECKS: Dict[str, Callable[[random.Random], Tuple[bool, str]]] = {
    'naturality': check_naturality,
    'associativity': check_associativity,
    'commutativity': check_commutativity,
}


# ---- 报告 ----

@dataclass(frozen=True)
class AxiomCase:
    axiom: str
    index: int
    passed: bool
    witness: str = ''

    def line(self) -> str:
        if self.passed:
            return f"{self.axiom} #{self.index}: PASS"
        return f"{self.axiom} #{self.index}: FAIL {self.witness}"


@dataclass
class AxiomReport:
    seed: int
    cases: int
    results: List[AxiomCase] = field(default_factory=list)

    def passed_count(self, axiom: str) -> int:
        return sum(1 for r in self.results if r.axiom == axiom and r.passed)

    def suite_passed(self, axiom: str) -> bool:
        return self.passed_count(axiom) == self.cases

    @property
    def all_passed(self) -> bool:
        return all(self.suite_passed(axiom) for axiom in AXIOMS)

    def failures(self) -> List[AxiomCase]:
        return [r for r in self.results if not r.passed]

    def lines(self) -> List[str]:
        lines = [r.line() for r in self.results]
        for axiom in AXIOMS:
            lines.append(f"{axiom}: {self.passed_count(axiom)}/{self.cases} passed")
        suites = sum(1 for axiom in AXIOMS if self.suite_passed(axiom))
        lines.append(f"axioms: {suites}/{len(AXIOMS)} suites passed, {self.cases} cases")
        return lines


def run_case(seed: int, axiom: str, index: int) -> AxiomCase:
    """运行单个用例；检验失败写进报告，不抛异常"""
    rng = random.Random(f"{seed}:{axiom}:{index}")
    passed, witness = AXIOM_CHECKS[axiom](rng)
    if not passed:
        logger.warning(f"✗ {axiom} #{index} 未通过: {witness}")
    return AxiomCase(axiom, index, passed, '' if passed else witness)


def axiom_suite(seed: int, cases: int) -> AxiomReport:
    """
    顺序运行三条公理各 cases 个随机用例

    Args:
        seed: 随机种子
        cases: 每条公理的用例数（≥ 1）

    Returns:
        AxiomReport
    """
    if cases < 1:
        raise ValueError(f"用例数必须 ≥ 1，实际为 {cases}")
    report = AxiomReport(seed, cases)
    for axiom in AXIOMS:
        for index in range(1, cases + 1):
            report.results.append(run_case(seed, axiom, index))
    logger.info(f"公理检验完成: seed={seed}, cases={cases}, 全部通过={report.all_passed}")
    return report


async def axiom_suite_async(seed: int, cases: int) -> AxiomReport:
    """与 axiom_suite 相同，但用例在线程中并发运行，报告按 (公理, 序号) 排序"""
    if cases < 1:
        raise ValueError(f"用例数必须 ≥ 1，实际为 {cases}")
    tasks = [asyncio.to_thread(run_case, seed, axiom, index)
             for axiom in AXIOMS for index in range(1, cases + 1)]
    results = await asyncio.gather(*tasks)
    order = {axiom: k for k, axiom in enumerate(AXIOMS)}
    report = AxiomReport(seed, cases, sorted(results, key=lambda r: (order[r.axiom], r.index)))
    logger.info(f"公理检验完成: seed={seed}, cases={cases}, 全部通过={report.all_passed}")
    return report
