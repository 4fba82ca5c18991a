"""
Gröbner 基模块
Buchberger 算法（Gebauer–Möller 判据）、约化 Gröbner 基、范式与理想成员判定，
以及用于交叉验证的次数有界线性代数预言机和 f-进赋值
"""
import math
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Dict, List, Sequence, Set, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import PolyElement

from .exceptions import GroebnerInputError
from .logger import get_logger
from .ring import Monomial, RingContext, RingElem, pure_total_degree

logger = get_logger('groebner')

Pair = Tuple[int, int]


def spoly(f: PolyElement, g: PolyElement) -> PolyElement:
    """首一多项式 f、g 的 S-多项式"""
    R = f.ring
    lcm = R.monomial_lcm(f.LM, g.LM)
    return f.mul_monom(R.monomial_div(lcm, f.LM)) - g.mul_monom(R.monomial_div(lcm, g.LM))


def _select(G: List[PolyElement], P: Set[Pair]) -> Pair:
    # normal 策略：lcm 最小者优先，下标决定平局
    R = G[0].ring
    return min(P, key=lambda p: (R.order(R.monomial_lcm(G[p[0]].LM, G[p[1]].LM)), p))


def _update(G: List[PolyElement], P: Set[Pair], f: PolyElement) -> Tuple[List[PolyElement], Set[Pair]]:
    """把 f 加入基 G，并按 Gebauer–Möller 判据更新待处理的对"""
    R = f.ring
    lcm, mul, div = R.monomial_lcm, R.monomial_mul, R.monomial_div
    lmf = f.LM
    lmG = [g.LM for g in G]

    P = {p for p in P if (not div(lcm(lmG[p[0]], lmG[p[1]]), lmf) or
                          lcm(lmG[p[0]], lmG[p[1]]) == lcm(lmG[p[0]], lmf) or
                          lcm(lmG[p[0]], lmG[p[1]]) == lcm(lmG[p[1]], lmf))}
    lcm_groups: Dict[Monomial, List[int]] = {}
    for i in range(len(G)):
        lcm_groups.setdefault(lcm(lmG[i], lmf), []).append(i)
    minimal_lcms = []
    for L in sorted(lcm_groups, key=R.order):
        if all(not div(L, kept) for kept in minimal_lcms):
            minimal_lcms.append(L)
    new_pairs = set()
    for L in minimal_lcms:
        if not any(lcm(lmG[i], lmf) == mul(lmG[i], lmf) for i in lcm_groups[L]):
            new_pairs.add((min(lcm_groups[L]), len(G)))
    return G + [f], P | new_pairs


def _minimalize(G: List[PolyElement]) -> List[PolyElement]:
    R = G[0].ring
    minimal = []
    for f in sorted(G, key=lambda h: R.order(h.LM)):
        if all(not R.monomial_div(f.LM, g.LM) for g in minimal):
            minimal.append(f)
    return minimal


def _interreduce(G: List[PolyElement]) -> List[PolyElement]:
    return [G[i].rem(G[:i] + G[i + 1:]).monic() for i in range(len(G))]


def buchberger(F: Sequence[PolyElement]) -> List[PolyElement]:
    """
    计算约化 Gröbner 基

    Args:
        F: 同一个 ℚ[x] 中的多项式（零多项式被忽略，但不能全为零）

    Returns:
        约化 Gröbner 基，按首项单项式降序排列
    """
    F = [f for f in F if f]
    if not F:
        raise GroebnerInputError("生成元全为零或为空")
    R = F[0].ring
    G: List[PolyElement] = []
    P: Set[Pair] = set()
    for f in F:
        G, P = _update(G, P, f.monic())
    while P:
        i, j = _select(G, P)
        P.remove((i, j))
        r = spoly(G[i], G[j]).rem(G)
        if r:
            G, P = _update(G, P, r.monic())
    reduced = _interreduce(_minimalize(G))
    return sorted(reduced, key=lambda g: R.order(g.LM), reverse=True)


@lru_cache(maxsize=512)
def _cached_basis(generators: Tuple[PolyElement, ...]) -> Tuple[PolyElement, ...]:
    basis = tuple(buchberger(generators))
    logger.debug(f"Gröbner 基：{len(generators)} 个生成元 → {len(basis)} 个元素")
    return basis


def pure_basis(generators: Sequence[PolyElement]) -> Tuple[PolyElement, ...]:
    """纯多项式生成元的约化 Gröbner 基（按生成元元组缓存，缓存对调用方不可见）"""
    return _cached_basis(tuple(generators))


def _pure_generators(gens: Sequence[RingElem]) -> List[PolyElement]:
    if not gens:
        raise GroebnerInputError("生成元列表为空")
    pure = []
    for g in gens:
        if not g.is_pure:
            raise GroebnerInputError(f"生成元必须是纯多项式（不含 ε），实际为 {g}")
        pure.append(g.to_pure())
    if not any(pure):
        raise GroebnerInputError("生成元全为零")
    return pure


def groebner_basis(gens: Sequence[RingElem], context: RingContext = None) -> List[RingElem]:
    """
    计算理想 (gens) ⊂ ℚ[x₁..x_d] 在 context 单项式序下的约化 Gröbner 基

    Args:
        gens: 纯多项式（ε 次数为 0）
        context: 环上下文，默认取第一个生成元的上下文

    Returns:
        RingElem 列表，按首项单项式降序
    """
    pure = _pure_generators(gens)
    context = context or gens[0].context
    basis = pure_basis([context.pure_ring.from_dict(dict(p.items())) for p in pure])
    return [RingElem.from_pure(context, g) for g in basis]


def normal_form(poly: PolyElement, basis: Sequence[PolyElement]) -> PolyElement:
    """关于 Gröbner 基的范式（余式）"""
    return poly.rem(list(basis)) if basis else poly


def pure_membership(poly: PolyElement, generators: Sequence[PolyElement]) -> bool:
    """纯多项式是否属于 (generators)"""
    if not poly:
        return True
    return not normal_form(poly, pure_basis(generators))


def ideal_membership(a: RingElem, gens: Sequence[RingElem]) -> bool:
    """
    判定 a ∈ (gens)·(O ⊗ A)

    Args:
        a: 可含 ε 项，按 ε 单项式逐个系数检验
        gens: 纯多项式

    Returns:
        每个 ε 系数对 Gröbner 基的范式都为零时为 True
    """
    basis = pure_basis(_pure_generators(gens))
    return all(not normal_form(coeff, basis) for coeff in a.eps_coefficients().values())


# ---- 次数有界的线性代数预言机 ----

@lru_cache(maxsize=64)
def monomials_up_to(nvars: int, bound: int) -> Tuple[Monomial, ...]:
    """全部总次数 ≤ bound 的单项式指数（确定性顺序）"""
    result = []
    for degree in range(bound + 1):
        for combo in combinations_with_replacement(range(nvars), degree):
            exps = [0] * nvars
            for index in combo:
                exps[index] += 1
            result.append(tuple(exps))
    return tuple(result)


def _oracle_pure(poly: PolyElement, generators: Sequence[PolyElement], degree_bound: int) -> bool:
    if not poly:
        return True
    if pure_total_degree(poly) > degree_bound:
        return False
    nvars = poly.ring.ngens
    rows = monomials_up_to(nvars, degree_bound)
    row_index = {m: k for k, m in enumerate(rows)}
    columns = []
    for g in generators:
        room = degree_bound - pure_total_degree(g)
        for m in monomials_up_to(nvars, room) if room >= 0 else ():
            columns.append(g.mul_monom(m))
    if not columns:
        return False
    width = len(columns)
    matrix = [[QQ.zero] * (width + 1) for _ in rows]
    for c, column in enumerate(columns):
        for monom, coeff in column.items():
            matrix[row_index[monom]][c] = coeff
    for monom, coeff in poly.items():
        matrix[row_index[monom]][width] = coeff
    augmented = DomainMatrix(matrix, (len(rows), width + 1), QQ)
    plain = DomainMatrix([row[:width] for row in matrix], (len(rows), width), QQ)
    return plain.rank() == augmented.rank()


def oracle_membership(a: RingElem, gens: Sequence[RingElem], degree_bound: int) -> bool:
    """
    用线性代数判定成员资格：在总次数 ≤ degree_bound 的单项式张成空间中求余因子

    True 是确定的结论；False 只表示在该次数上界内找不到余因子
    """
    pure = _pure_generators(gens)
    return all(_oracle_pure(coeff, pure, degree_bound) for coeff in a.eps_coefficients().values())


# ---- f-进赋值 ----

def split_valuation(poly: PolyElement, f: PolyElement) -> Tuple[int, PolyElement]:
    """
    反复精确除以 f，返回 (m, cofactor)，使 poly = f^m·cofactor 且 f ∤ cofactor

    f 须为非常数的不可约多项式；poly 必须非零
    """
    if not poly:
        raise GroebnerInputError("零多项式的赋值为无穷，没有余因子")
    if pure_total_degree(f) < 1:
        raise GroebnerInputError("赋值只对非常数多项式定义")
    m = 0
    while True:
        quotient, remainder = poly.div(f)
        if remainder:
            return m, poly
        poly = quotient
        m += 1


def f_valuation(poly: PolyElement, f: PolyElement) -> float:
    """ord_f(poly)；零多项式返回 math.inf"""
    if not poly:
        return math.inf
    return split_valuation(poly, f)[0]
