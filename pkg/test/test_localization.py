"""
局部化测试：单位判定、精确除法、求逆
"""
import random
import sys
from pathlib import Path

import pytest

# 添加项目根目录到 Python 路径，以便导入根目录的模块
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from utils.exceptions import NotAUnitError
from utils.localization import LocalFraction, divide, invert_unit, is_unit_local
from utils.poly_parser import parse_poly
from utils.ring import ArtinAlgebra, RingContext, RingElem

DUAL = RingContext(('x', 'y'), ArtinAlgebra(('e',), 2))
CUBIC = RingContext(('x', 'y'), ArtinAlgebra(('e',), 3))


def p(text, ctx=DUAL):
    return parse_poly(text, ctx)


AWAY_FROM_X = DUAL.localized_at_primes([[p('x')]])
INVERT_X = DUAL.localized_at_elements([p('x')])


def test_unit_away_from_prime():
    """素理想 (x) 之外的元素可逆"""
    assert is_unit_local(p('y'), AWAY_FROM_X)
    assert is_unit_local(p('y + e*x'), AWAY_FROM_X)
    assert not is_unit_local(p('x'), AWAY_FROM_X)
    assert not is_unit_local(p('x*y + e'), AWAY_FROM_X)


def test_one_plus_nilpotent_is_always_unit():
    for ctx in (DUAL, AWAY_FROM_X, INVERT_X):
        assert is_unit_local(p('1 + e*x'), ctx)


def test_unit_in_multiplicative_set():
    assert is_unit_local(p('x^3'), INVERT_X)
    assert is_unit_local(p('2*x + e*y'), INVERT_X)
    assert not is_unit_local(p('y'), INVERT_X)
    assert not is_unit_local(p('x + 1'), INVERT_X)


def test_unlocalized_units_are_constants():
    assert is_unit_local(p('3'), DUAL)
    assert not is_unit_local(p('x'), DUAL)
    assert not is_unit_local(p('e'), DUAL)


def test_invert_lifting():
    """(x + e*y)⁻¹ = (x − e*y)/x²"""
    inverse = invert_unit(p('x + e*y'), INVERT_X)
    assert inverse.numerator == p('x - e*y')
    assert inverse.denominator == p('x^2')
    assert (inverse.numerator * p('x + e*y')) == inverse.denominator


def test_invert_one_and_geometric_series():
    one = invert_unit(RingElem.one(DUAL))
    assert one.numerator == 1 and one.denominator == 1
    series = invert_unit(p('1 + e', CUBIC))
    assert series.numerator == p('1 - e + e^2', CUBIC)
    assert series.denominator == 1


def test_invert_non_unit_raises():
    with pytest.raises(NotAUnitError):
        invert_unit(p('x'), AWAY_FROM_X)
    with pytest.raises(NotAUnitError):
        invert_unit(p('e'))


def test_random_units_invert_exactly():
    """(纯单位) + (幂零部分) 的逆乘回去恰好为 1"""
    rng = random.Random(5)
    for _ in range(40):
        unit = p(f"{rng.randint(1, 4)}*x^{rng.randint(0, 3)}", CUBIC)
        nilpotent = p(f"{rng.randint(-3, 3)}*e*y^{rng.randint(0, 2)} + {rng.randint(-3, 3)}*e^2*x", CUBIC)
        a = unit + nilpotent
        ctx = CUBIC.localized_at_elements([p('x', CUBIC)])
        inverse = invert_unit(a, ctx)
        assert a * inverse.numerator == inverse.denominator


def test_divide_cancels_common_factors():
    """x·(1 + e) / x 约分为 (1 + e)/1"""
    quotient = divide(p('x + e*x'), p('x'), INVERT_X)
    assert quotient.numerator == p('1 + e')
    assert quotient.denominator == 1


def test_divide_by_non_unit_denominator_fails():
    with pytest.raises(NotAUnitError):
        divide(p('x'), p('y'), INVERT_X)
    with pytest.raises(NotAUnitError):
        divide(p('x'), p('e*y'), INVERT_X)


def test_fraction_requires_unit_denominator():
    with pytest.raises(NotAUnitError):
        LocalFraction(p('1'), p('y'))
    with pytest.raises(NotAUnitError):
        LocalFraction(p('1').with_context(INVERT_X), p('x + e').with_context(INVERT_X))


def test_fraction_arithmetic():
    a = divide(p('x + e*y'), p('x'), INVERT_X)
    b = divide(p('x'), p('x + e*y'), INVERT_X)
    assert (a * b).is_one()
    assert a.is_unit()
    assert (a.inverse() * a).is_one()
    assert a.equals(divide(p('x^2 + e*x*y'), p('x^2'), INVERT_X))
