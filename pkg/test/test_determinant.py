"""
行列式函子测试：分次线、复形与表示的行列式、分裂短正合列
"""
import random
import sys
from pathlib import Path

import pytest

# 添加项目根目录到 Python 路径，以便导入根目录的模块
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from utils.complexes import ChainComplex, FreeModule, Matrix, direct_sum, koszul, present
from utils.determinant import (DetIso, GradedLine, SplitSES, canonical_element, det_complex,
                               det_free, det_presentation, det_ses, select_minor, submatrix_det)
from utils.exceptions import DetDeformError, NotAUnitError, PresentationError, SplitCertificationError
from utils.poly_parser import parse_many, parse_poly
from utils.ring import ArtinAlgebra, RingContext

CTX = RingContext(('x', 'y', 'z'), ArtinAlgebra(('e',), 2))


def p(text):
    return parse_poly(text, CTX)


def matrix(rows):
    return Matrix.from_rows(CTX, [[p(e) for e in row] for row in rows])


def test_det_free():
    line = det_free(FreeModule.standard(CTX, 2))
    assert (line.symbol, line.grade) == ('g1∧g2', 2)
    assert str(line) == '(g1∧g2, 2)'
    empty = det_free(FreeModule.zero(CTX))
    assert (empty.symbol, empty.grade) == ('1', 0)


def test_graded_line_tensor_and_dual():
    a = GradedLine('a1', 1, CTX)
    b = GradedLine('b1∧b2', 2, CTX)
    assert a.tensor(b).symbol == 'a1 ⊗ b1∧b2'
    assert a.tensor(b).grade == 3
    assert a.tensor(GradedLine('1', 0, CTX)).same_as(a)
    assert a.dual().grade == -1
    assert a.dual().symbol == '(a1)^∨'


def test_det_complex_grades():
    """交错和：单元素 Koszul 复形分次为 0，三元素亦然"""
    single = det_complex(koszul([p('x + e*y')]))
    assert single.grade == 0
    assert single.symbol == '(e1)^∨ ⊗ (1)'
    assert det_complex(koszul(parse_many(['x', 'y', 'z'], CTX))).grade == 0


def test_det_presentation_scalar_is_lifting():
    presentation = present(koszul([p('x + e*y')]))
    line, iso = det_presentation(presentation)
    assert iso.scalar == p('x + e*y')
    assert iso.source.same_as(line)
    assert iso.target.symbol == '1'


def test_module_determinant_of_direct_sum():
    """koszul([x]) ⊕ koszul([x]) 的子式行列式为 x²"""
    presentation = present(direct_sum(koszul([p('x')]), koszul([p('x')])))
    assert submatrix_det(presentation) == p('x^2')


def test_stabilization_and_multiplicativity():
    """p ⊕ T_id 不改变行列式；p ⊕ q 的行列式是乘积"""
    rng = random.Random(50)
    identity = ChainComplex.two_term(Matrix.identity(CTX, 1))
    for _ in range(50):
        f = p(f"{rng.randint(1, 4)}*x^{rng.randint(1, 2)} + {rng.randint(-2, 2)}*e*y")
        g = p(f"{rng.randint(1, 4)}*y + {rng.randint(-2, 2)}*e*z^{rng.randint(0, 2)}")
        pf, pg = koszul([f]), koszul([g])
        assert submatrix_det(present(direct_sum(pf, identity))) == submatrix_det(present(pf))
        assert submatrix_det(present(direct_sum(pf, pg))) == f * g


def test_select_minor_is_lex_first_nonsingular():
    presentation = present(ChainComplex.two_term(matrix([['0'], ['e'], ['y']])))
    assert select_minor(presentation) == (2,)
    assert submatrix_det(presentation) == p('y')


def test_canonical_element_expansion():
    presentation = present(ChainComplex.two_term(matrix([['x'], ['y']])))
    element = canonical_element(presentation)
    assert element.selected_rows == (0,)
    assert element.coefficient() == p('x')
    assert [(rows, sign) for rows, _, sign in element.terms] == [((0,), 1), ((1,), -1)]
    assert element.render() == ['* +(x) g1 | g2', '  -(y) g2 | g1']


def test_canonical_element_signs_alternate_for_three_generators():
    """g_S ∧ g_{S^c} 重排到 g1∧g2∧g3：(2, 0, 1) 是三轮换，符号为正"""
    presentation = present(ChainComplex.two_term(matrix([['x'], ['y'], ['x*y']])))
    element = canonical_element(presentation)
    assert [sign for _, _, sign in element.terms] == [1, -1, 1]


def test_det_iso_compose_and_inverse():
    line = GradedLine('g1', 1, CTX)
    iso = DetIso(line, line, p('1 + e'))
    assert iso.is_unit()
    assert iso.compose(iso.inverse()).scalar == 1
    with pytest.raises(NotAUnitError):
        DetIso(line, line, p('x')).inverse()
    with pytest.raises(DetDeformError):
        DetIso(line, GradedLine('1', 0, CTX), p('1'))


def test_det_ses_scalar():
    ses = SplitSES.from_matrices(CTX, matrix([['1 + e'], ['0']]), matrix([['0', '1']]), matrix([['0'], ['1']]))
    iso = det_ses(ses)
    assert iso.scalar == p('1 + e')
    assert iso.source.symbol == 'c1 ⊗ a1'
    assert iso.target.symbol == 'b1∧b2'


def test_split_certificate_failures():
    with pytest.raises(SplitCertificationError):
        SplitSES.from_matrices(CTX, matrix([['1'], ['0']]), matrix([['1', '0']]), matrix([['0'], ['1']])).certify()
    with pytest.raises(SplitCertificationError):
        SplitSES.from_matrices(CTX, matrix([['x'], ['0']]), matrix([['0', '1']]), matrix([['0'], ['1']])).certify()


def test_singular_presentation_has_no_minor():
    with pytest.raises(PresentationError):
        present(ChainComplex.two_term(matrix([['e'], ['0']])))
