"""
工具模块包
包含环运算、表达式解析、Gröbner 基、复形与行列式、局部上同调和形变计算
"""

# 从子模块导入所有公共接口，便于外部使用
from .exceptions import DetDeformError, SceneError
from .logger import Logger, get_logger, default_logger
from .ring import ArtinAlgebra, ArtinMorphism, RingContext, RingElem, augment, rho_split, ring_arith
from .poly_parser import parse_poly, parse_many, render, render_fraction
from .groebner import (groebner_basis, normal_form, ideal_membership, oracle_membership,
                       split_valuation, f_valuation)
from .localization import LocalFraction, divide, invert_unit, is_unit_local
from .complexes import (Matrix, FreeModule, ModuleMap, ChainComplex, ModulePresentation, koszul,
                        verify_complex, direct_sum, present, augment_complex, render_complex)
from .determinant import (GradedLine, DetIso, SplitSES, det_free, det_complex, det_presentation,
                          det_ses, submatrix_det, canonical_element)
from .axiom_suite import axiom_suite, axiom_suite_async
from .localcoh import (H1yClassRep, Ext2ClassRep, h1y_equal, h1y_is_zero, h1y_add, h1y_scale,
                       h1y_rescale, boundary_to_ext2, ext2_is_zero, render_class)
from .deformation import (Chart, Overlap, Scene, SceneOptions, alpha, alpha_reduced, map_p,
                          deform_class, cycle_check, cech_transitions, push_scene, functoriality_check)

__all__ = [
    'DetDeformError',
    'SceneError',
    'Logger',
    'get_logger',
    'default_logger',
    'ArtinAlgebra',
    'ArtinMorphism',
    'RingContext',
    'RingElem',
    'augment',
    'rho_split',
    'ring_arith',
    'parse_poly',
    'parse_many',
    'render',
    'render_fraction',
    'groebner_basis',
    'normal_form',
    'ideal_membership',
    'oracle_membership',
    'split_valuation',
    'f_valuation',
    'LocalFraction',
    'divide',
    'invert_unit',
    'is_unit_local',
    'Matrix',
    'FreeModule',
    'ModuleMap',
    'ChainComplex',
    'ModulePresentation',
    'koszul',
    'verify_complex',
    'direct_sum',
    'present',
    'augment_complex',
    'render_complex',
    'GradedLine',
    'DetIso',
    'SplitSES',
    'det_free',
    'det_complex',
    'det_presentation',
    'det_ses',
    'submatrix_det',
    'canonical_element',
    'axiom_suite',
    'axiom_suite_async',
    'H1yClassRep',
    'Ext2ClassRep',
    'h1y_equal',
    'h1y_is_zero',
    'h1y_add',
    'h1y_scale',
    'h1y_rescale',
    'boundary_to_ext2',
    'ext2_is_zero',
    'render_class',
    'Chart',
    'Overlap',
    'Scene',
    'SceneOptions',
    'alpha',
    'alpha_reduced',
    'map_p',
    'deform_class',
    'cycle_check',
    'cech_transitions',
    'push_scene',
    'functoriality_check',
]
