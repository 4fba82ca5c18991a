"""
多项式表达式解析与规范渲染模块

文法：整数与有理数字面量（"3"、"3/2"）、已声明的符号、'+'、'-'、'*'、
'^'（指数为非负整数字面量）、括号；空白无意义。
解析采用 Pratt（自顶向下运算符优先）方法，结果直接是 RingElem
"""
import re
from typing import Iterable, List, NamedTuple, Optional

from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement

from .constants import BINDING_POWER, TOKEN_PATTERNS, UNARY_MINUS_POWER
from .exceptions import PolySyntaxError, UnknownSymbolError
from .ring import Monomial, RingContext, RingElem

_MASTER_PATTERN = re.compile('|'.join(f'(?P<{name}>{pattern})' for name, pattern in TOKEN_PATTERNS))


class Token(NamedTuple):
    kind: str
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    """把表达式切分为记号序列（末尾附加 EOF）"""
    tokens = []
    position = 0
    while position < len(text):
        match = _MASTER_PATTERN.match(text, position)
        if match is None:
            raise PolySyntaxError(f"无法识别的字符 '{text[position]}'", position, text)
        if match.lastgroup != 'SPACE':
            tokens.append(Token(match.lastgroup, match.group(), position))
        position = match.end()
    tokens.append(Token('EOF', '', len(text)))
    return tokens


class PolyParser:
    """单个表达式的 Pratt 解析器"""

    def __init__(self, text: str, context: RingContext):
        self.text = text
        self.context = context
        self.tokens = tokenize(text)
        self.index = 0
        self.symbols = set(context.variables) | set(context.artinian.generators)

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def error(self, message: str, token: Optional[Token] = None) -> PolySyntaxError:
        token = token or self.current
        return PolySyntaxError(message, token.position, self.text)

    def expect(self, kind: str, message: str) -> Token:
        if self.current.kind != kind:
            raise self.error(message)
        return self.advance()

    def parse(self) -> RingElem:
        if self.current.kind == 'EOF':
            raise self.error("空表达式")
        result = self.expression(0)
        if self.current.kind == 'SLASH':
            raise self.error("'/' 只能出现在两个整数之间（有理数字面量）")
        if self.current.kind != 'EOF':
            raise self.error(f"多余的记号 '{self.current.text}'")
        return result

    def expression(self, rbp: int) -> RingElem:
        left = self.nud(self.advance())
        while BINDING_POWER.get(self.current.kind, 0) > rbp:
            left = self.led(self.advance(), left)
        if self.current.kind == 'SLASH':
            raise self.error("'/' 只能出现在两个整数之间（有理数字面量）")
        return left

    def nud(self, token: Token) -> RingElem:
        """前缀位置：字面量、符号、一元正负号、括号"""
        if token.kind == 'NUMBER':
            numerator = int(token.text)
            if self.current.kind != 'SLASH':
                return RingElem.constant(self.context, numerator)
            self.advance()
            den_token = self.expect('NUMBER', "'/' 只能出现在两个整数之间（有理数字面量）")
            denominator = int(den_token.text)
            if denominator == 0:
                raise self.error("有理数字面量的分母为零", den_token)
            return RingElem.constant(self.context, (numerator, denominator))
        if token.kind == 'SYMBOL':
            if token.text not in self.symbols:
                raise UnknownSymbolError(token.text, token.position, self.text)
            return RingElem.symbol(self.context, token.text)
        if token.kind == 'MINUS':
            return -self.expression(UNARY_MINUS_POWER)
        if token.kind == 'PLUS':
            return self.expression(UNARY_MINUS_POWER)
        if token.kind == 'LPAREN':
            inner = self.expression(0)
            self.expect('RPAREN', "缺少右括号 ')'")
            return inner
        if token.kind == 'EOF':
            raise self.error("表达式意外结束", token)
        raise self.error(f"意外的记号 '{token.text}'", token)

    def led(self, token: Token, left: RingElem) -> RingElem:
        """中缀位置：二元运算"""
        if token.kind == 'PLUS':
            return left + self.expression(BINDING_POWER['PLUS'])
        if token.kind == 'MINUS':
            return left - self.expression(BINDING_POWER['MINUS'])
        if token.kind == 'TIMES':
            return left * self.expression(BINDING_POWER['TIMES'])
        if token.kind == 'POWER':
            exponent = self.expect('NUMBER', "'^' 之后必须是非负整数字面量")
            return left ** int(exponent.text)
        raise self.error(f"意外的记号 '{token.text}'", token)


def parse_poly(text: str, context: RingContext) -> RingElem:
    """
    解析多项式表达式

    Args:
        text: 表达式文本
        context: 环上下文（声明变量与 ε 生成元）

    Returns:
        规范形式的 RingElem（ε 次数达到截断阶的项已被丢弃）
    """
    return PolyParser(text, context).parse()


def parse_many(texts: Iterable[str], context: RingContext) -> List[RingElem]:
    return [parse_poly(text, context) for text in texts]


# ---- 规范渲染 ----

def render_rational(value) -> str:
    """有理数渲染为 "a" 或 "a/b" """
    numerator, denominator = int(QQ.numer(value)), int(QQ.denom(value))
    return str(numerator) if denominator == 1 else f"{numerator}/{denominator}"


def _render_factor(name: str, exponent: int) -> str:
    return name if exponent == 1 else f"{name}^{exponent}"


def _render_terms(terms, variables, generators) -> str:
    pieces = []
    for xmon, emon, coeff in terms:
        # ε 因子在前，变量在后，例如 e*y^2
        factors = [_render_factor(g, k) for g, k in zip(generators, emon) if k]
        factors += [_render_factor(v, k) for v, k in zip(variables, xmon) if k]
        if not factors:
            piece = render_rational(coeff)
        elif coeff == 1:
            piece = '*'.join(factors)
        elif coeff == -1:
            piece = '-' + '*'.join(factors)
        else:
            piece = render_rational(coeff) + '*' + '*'.join(factors)
        pieces.append(piece)
    if not pieces:
        return '0'
    text = pieces[0]
    for piece in pieces[1:]:
        text += f" - {piece[1:]}" if piece.startswith('-') else f" + {piece}"
    return text


def render(elem: RingElem) -> str:
    """RingElem 的规范文本：按单项式序降序，系数为 "a" 或 "a/b"，因子间显式 '*'"""
    ctx = elem.context
    return _render_terms(elem.terms(), ctx.variables, ctx.artinian.generators)


def render_pure(poly: PolyElement, context: RingContext) -> str:
    """渲染 ℚ[x] 中的多项式"""
    empty: Monomial = ()
    terms = [(m, empty, c) for m, c in poly.terms()]
    return _render_terms(terms, context.variables, ())


def render_fraction(fraction) -> str:
    """LocalFraction 渲染为 "(分子) / (分母)" """
    return f"({render(fraction.numerator)}) / ({render(fraction.denominator)})"
