"""
表达式解析与规范渲染测试
"""
import sys
from pathlib import Path

import pytest

# 添加项目根目录到 Python 路径，以便导入根目录的模块
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from hypothesis import given, settings, strategies as st

from utils.exceptions import PolySyntaxError, UnknownSymbolError
from utils.localization import divide
from utils.poly_parser import parse_many, parse_poly, render, render_pure, tokenize
from utils.ring import ArtinAlgebra, RingContext, RingElem

CTX = RingContext(('x', 'y'), ArtinAlgebra(('e',), 2))


def canonical(text, ctx=CTX):
    return render(parse_poly(text, ctx))


def test_tokenize_appends_eof():
    kinds = [t.kind for t in tokenize('3/2*x^2')]
    assert kinds == ['NUMBER', 'SLASH', 'NUMBER', 'TIMES', 'SYMBOL', 'POWER', 'NUMBER', 'EOF']


@pytest.mark.parametrize('text, expected', [
    ('x + e*y', 'x + e*y'),
    ('y*e + x', 'x + e*y'),
    ('e*y^2', 'e*y^2'),
    ('2*x - 3/2*y', '2*x - 3/2*y'),
    ('-x', '-x'),
    ('(x + y)^2', 'x^2 + 2*x*y + y^2'),
    ('x - x', '0'),
    ('  7  ', '7'),
    ('6/4', '3/2'),
    ('-(x - 1)', '-x + 1'),
    ('x*y*e', 'e*x*y'),
])
def test_canonical_rendering(text, expected):
    """项按单项式序降序，系数为 a 或 a/b，因子间显式 '*'"""
    assert canonical(text) == expected


def test_unary_minus_binds_looser_than_power():
    assert parse_poly('-x^2', CTX) == -(parse_poly('x', CTX) ** 2)


def test_truncation_applies_while_parsing():
    assert canonical('(x + e*y)^2') == 'x^2 + 2*e*x*y'


@pytest.mark.parametrize('text', ['x +', 'x + * y', '(x + y', 'x^-1', 'x/2', 'x^y', '', '1/0', 'x $ y'])
def test_syntax_errors(text):
    with pytest.raises(PolySyntaxError):
        parse_poly(text, CTX)


def test_syntax_error_carries_position():
    with pytest.raises(PolySyntaxError) as info:
        parse_poly('x + * y', CTX)
    assert info.value.position == 4


def test_unknown_symbol():
    with pytest.raises(UnknownSymbolError) as info:
        parse_poly('x + z', CTX)
    assert info.value.name == 'z'
    assert info.value.position == 4


def test_parse_many():
    x, y = parse_many(['x', 'y'], CTX)
    assert x * y == parse_poly('x*y', CTX)


def test_render_pure():
    poly = parse_poly('x^2 - y', CTX).to_pure()
    assert render_pure(poly, CTX) == 'x^2 - y'


def test_render_fraction():
    fraction = divide(RingElem.one(CTX), parse_poly('x + e*y', CTX),
                      CTX.localized_at_elements([parse_poly('x', CTX)]))
    assert str(fraction) == '(x - e*y) / (x^2)'


def test_grevlex_rendering_order():
    ctx = RingContext(('x', 'y', 'z'), ArtinAlgebra(('e',), 2), 'grevlex')
    assert canonical('x + e*y*z', ctx) == 'e*y*z + x'


_atoms = st.sampled_from(['x', 'y', 'e', '1', '2', '3/2', '0'])


def _expressions():
    return st.recursive(
        _atoms,
        lambda inner: st.one_of(
            st.tuples(inner, st.sampled_from([' + ', ' - ', '*']), inner).map(lambda t: f"({t[0]}){t[1]}({t[2]})"),
            st.tuples(inner, st.integers(0, 3)).map(lambda t: f"({t[0]})^{t[1]}"),
            inner.map(lambda t: f"-({t})"),
        ),
        max_leaves=6,
    )


@settings(max_examples=100, deadline=None)
@given(_expressions())
def test_render_parse_round_trip(text):
    """render(parse(t)) 再解析后渲染不变"""
    once = canonical(text)
    assert canonical(once) == once
    assert parse_poly(once, CTX) == parse_poly(text, CTX)
