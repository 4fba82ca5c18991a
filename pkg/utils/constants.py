"""
常量配置模块
包含单项式序、表达式文法记号、命令表、退出码与报告键名
"""
from sympy.polys.orderings import grevlex, grlex, lex

# 单项式序（场景文件中按名称选择）
MONOMIAL_ORDERS = {
    'lex': lex,
    'grlex': grlex,
    'grevlex': grevlex,
}

# 表达式文法的记号（便于后期调整）
TOKEN_PATTERNS = [
    ('NUMBER', r'\d+'),
    ('SYMBOL', r'[A-Za-z_][A-Za-z_0-9]*'),
    ('PLUS', r'\+'),
    ('MINUS', r'-'),
    ('TIMES', r'\*'),
    ('POWER', r'\^'),
    ('SLASH', r'/'),
    ('LPAREN', r'\('),
    ('RPAREN', r'\)'),
    ('SPACE', r'\s+'),
]

# 记号的左结合力（Pratt 解析）
BINDING_POWER = {
    'PLUS': 10,
    'MINUS': 10,
    'TIMES': 20,
    'POWER': 30,
}
UNARY_MINUS_POWER = 25

# 外积、张量与对偶记号
WEDGE = '∧'
TENSOR = ' ⊗ '
DUAL_SUFFIX = '^∨'
EMPTY_WEDGE = '1'

# 命令行命令
COMMANDS = (
    'check-axioms',
    'koszul',
    'det',
    'alpha',
    'map-p',
    'cycle-check',
    'cech',
    'functorial',
    'oracle-membership',
)
# 不需要场景文件的命令
SCENELESS_COMMANDS = ('check-axioms',)

# 退出码约定
EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2

# json-lines 报告的稳定键名
RECORD_KEYS = ('command', 'chart', 'direction', 'class', 'verdict')

# 行列式函子的三条公理
AXIOMS = ('naturality', 'associativity', 'commutativity')

# 公理随机用例的规模上界
AXIOM_MAX_RANK = 4
