"""
环运算测试：截断、增广/投影分解、代换
"""
import random
import sys
from pathlib import Path

import pytest

# 添加项目根目录到 Python 路径，以便导入根目录的模块
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from sympy.polys.domains import QQ

from utils.exceptions import ContextMismatchError, DetDeformError, MorphismError, PolySyntaxError
from utils.poly_parser import parse_poly
from utils.ring import (ArtinAlgebra, ArtinMorphism, RingContext, RingElem, augment, rho_split,
                        ring_arith, to_rational)

DUAL = RingContext(('x', 'y'), ArtinAlgebra(('e',), 2))
CUBIC = RingContext(('x', 'y'), ArtinAlgebra(('e',), 3))


def p(text, ctx=DUAL):
    return parse_poly(text, ctx)


def random_elem(rng, ctx):
    terms = {}
    for _ in range(rng.randint(1, 4)):
        xmon = (rng.randint(0, 2), rng.randint(0, 2))
        emon = (rng.randint(0, ctx.artinian.truncation_order - 1),)
        terms[(xmon, emon)] = rng.randint(-5, 5)
    return RingElem.from_terms(ctx, terms)


def test_to_rational_normalizes():
    """有理数规范化：分母为正且既约"""
    assert to_rational('6/4') == QQ(3, 2)
    assert to_rational((2, -4)) == QQ(-1, 2)
    assert to_rational(0) == QQ(0)
    with pytest.raises(DetDeformError):
        to_rational((1, 0))


@pytest.mark.parametrize('text, position', [('3/', 2), ('/4', 0), ('  7/ ', 2)])
def test_to_rational_rejects_missing_part(text, position):
    with pytest.raises(PolySyntaxError) as info:
        to_rational(text)
    assert info.value.position == position


def test_artin_algebra_basis():
    assert ArtinAlgebra(('e',), 3).basis() == [(0,), (1,), (2,)]
    assert ArtinAlgebra(('a', 'b'), 2).basis() == [(0, 0), (1, 0), (0, 1)]
    assert ArtinAlgebra().is_field
    with pytest.raises(DetDeformError):
        ArtinAlgebra(('e',), 0)


def test_context_rejects_clashing_names():
    with pytest.raises(DetDeformError):
        RingContext(('x', 'e'), ArtinAlgebra(('e',), 2))
    with pytest.raises(DetDeformError):
        RingContext(())
    with pytest.raises(DetDeformError):
        RingContext(('x',), order='weird')


def test_addition_identity_and_square():
    """加零不变；(x + e*y)² 在 e³ = 0 中展开"""
    a = p('x + e*y', CUBIC)
    assert a + RingElem.zero(CUBIC) == a
    assert a * a == p('x^2 + 2*e*x*y + e^2*y^2', CUBIC)


def test_truncation_drops_high_eps_terms():
    a = p('x + e*y')
    assert a * a == p('x^2 + 2*e*x*y')
    assert p('e^2') == 0
    assert (p('e') ** 2).is_zero


def test_augment_and_rho_split():
    a = p('x + e*y')
    assert augment(a) == p('x')
    assert rho_split(a) == p('e*y')
    assert augment(p('e*y')).is_zero
    assert rho_split(p('x^2 + y')).is_zero
    b = p('e*x + e^2*y', CUBIC)
    assert rho_split(b) == b


def test_projection_laws_on_random_elements():
    """augment + rho_split = id；augment 幂等；augment 是环同态"""
    rng = random.Random(11)
    for _ in range(50):
        a, b = random_elem(rng, CUBIC), random_elem(rng, CUBIC)
        assert augment(a) + rho_split(a) == a
        assert augment(augment(a)) == augment(a)
        assert rho_split(augment(a)).is_zero
        assert augment(a * b) == augment(a) * augment(b)


def test_ring_arith_dispatch():
    a, b = p('x'), p('e*y')
    assert ring_arith('add', a, b) == p('x + e*y')
    assert ring_arith('sub', a, b) == p('x - e*y')
    assert ring_arith('mul', a, b) == p('e*x*y')
    assert ring_arith('neg', a, b) == p('-x')
    assert ring_arith('eq', a, a) is True
    with pytest.raises(DetDeformError):
        ring_arith('div', a, b)


def test_context_mismatch():
    with pytest.raises(ContextMismatchError):
        p('x') + p('x', CUBIC)


def test_localized_context_shares_ring():
    """局部化只改变单位判定，元素之间仍可运算"""
    local = DUAL.localized_at_elements([p('y')])
    assert local.same_ring(DUAL)
    assert p('x').with_context(local) * p('y') == p('x*y')


def test_eps_coefficients_and_degrees():
    a = p('x^2 + e*y + 3*e*x')
    coefficients = a.eps_coefficients()
    assert set(coefficients) == {(0,), (1,)}
    assert a.eps_degree() == 1
    assert a.total_degree() == 2
    assert not a.is_pure
    assert p('x*y - 2').is_pure


def test_exquo_pure():
    a = p('x^2 + e*x*y')
    quotient = a.exquo_pure(p('x').to_pure())
    assert quotient == p('x + e*y')
    assert a.exquo_pure(p('y').to_pure()) is None


def test_truncation_morphism():
    """k[e]/(e³) → k[e]/(e²)，e ↦ e"""
    morphism = ArtinMorphism.truncation(CUBIC, 2)
    assert morphism.apply(p('x + e*y + e^2*y^2', CUBIC)) == p('x + e*y')


def test_augmentation_morphism():
    morphism = ArtinMorphism.augmentation(DUAL)
    image = morphism.apply(p('x + e*y'))
    assert image.context.artinian.is_field
    assert image == RingElem.symbol(image.context, 'x')


def test_substitution_morphism():
    """k[e]/(e²) → k[t]/(t³)，e ↦ t²"""
    target = DUAL.with_artinian(ArtinAlgebra(('e',), 3))
    morphism = ArtinMorphism(DUAL, target, {'e': parse_poly('e^2', target)})
    assert morphism.apply(p('x + e*y')) == parse_poly('x + e^2*y', target)


def test_morphism_must_be_well_defined():
    """e ↦ 1 + e 不落在极大理想中；e² = 0 必须映到零"""
    with pytest.raises(MorphismError):
        ArtinMorphism(DUAL, DUAL, {'e': p('1 + e')})
    with pytest.raises(MorphismError):
        ArtinMorphism(DUAL, CUBIC, {'e': p('e', CUBIC)})
    with pytest.raises(MorphismError):
        ArtinMorphism(DUAL, DUAL, {'e': p('e*x')})
    with pytest.raises(MorphismError):
        ArtinMorphism(DUAL, DUAL, {})


def test_elements_are_immutable():
    a = p('x')
    with pytest.raises(AttributeError):
        a.poly = None
    with pytest.raises(DetDeformError):
        a ** -1
