"""
场景管理模块
负责场景文件（TOML）的读取、校验与规范渲染

场景文件格式：
    [ring]              variables = ["x", "y"]
    [artinian]          generators = ["e"]，order = 2（截断阶）
    [options]           monomial_order、degree_bound、seed
    [chart.<名称>]      parameters = ["x", "y"]，lifting = "x + e*y"
    [overlap.<i>.<j>]   invert = ["y"]
    [morphism]          generators、order、images = { e = "e" }（可选，用于函子性检验）
"""
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional

import aiofiles

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from config import MONOMIAL_ORDER, ORACLE_DEGREE_BOUND, DEFAULT_SEED
from utils.constants import MONOMIAL_ORDERS
from utils.deformation import Chart, Overlap, Scene, SceneOptions
from utils.exceptions import DetDeformError, SceneError
from utils.helpers import find_key_line, parse_seed, toml_list, toml_string
from utils.logger import get_logger
from utils.poly_parser import parse_poly, render
from utils.ring import ArtinAlgebra, ArtinMorphism, RingContext

logger = get_logger('scene')

KNOWN_TABLES = ('ring', 'artinian', 'options', 'chart', 'overlap', 'morphism')
NAME_PATTERN = re.compile(r'^[A-Za-z0-9_\-]+$')


@dataclass(frozen=True)
class SceneFile:
    """已解析的场景文件"""

    path: Path
    text: str
    scene: Scene
    morphism: Optional[ArtinMorphism] = None


class SceneManager:
    """场景管理器类"""

    def __init__(self, scene_path: Path):
        """
        初始化场景管理器

        Args:
            scene_path: 场景文件路径
        """
        self.scene_path = Path(scene_path)
        self.scene_file: Optional[SceneFile] = None

    async def load_scene(self) -> SceneFile:
        """
        异步读取并解析场景文件

        Returns:
            SceneFile

        Raises:
            SceneError: 文件不存在、TOML 语法错误或内容不合法（带文件、行号、键名）
        """
        if not self.scene_path.exists():
            raise SceneError("场景文件不存在", self.scene_path)
        async with aiofiles.open(self.scene_path, 'r', encoding='utf-8') as f:
            text = await f.read()
        return self.parse_text(text)

    def load_scene_sync(self) -> SceneFile:
        """同步读取并解析场景文件"""
        if not self.scene_path.exists():
            raise SceneError("场景文件不存在", self.scene_path)
        return self.parse_text(self.scene_path.read_text(encoding='utf-8'))

    # ---- 解析 ----
    def parse_text(self, text: str) -> SceneFile:
        """解析场景文本（文件路径只用于诊断信息）"""
        try:
            data = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            match = re.search(r'line (\d+)', str(exc))
            raise SceneError(f"TOML 语法错误: {exc}", self.scene_path,
                             int(match.group(1)) if match else 0, '') from exc

        self._text = text
        for table in data:
            if table not in KNOWN_TABLES:
                self._fail(f"未知的表 [{table}]", table)

        options = self._options(data.get('options', {}))
        context = self._context(data, options)
        charts = self._charts(data.get('chart', {}), context)
        overlaps = self._overlaps(data.get('overlap', {}), context)
        try:
            scene = Scene(context, charts, overlaps, options)
            scene.certify_parameters()
        except SceneError:
            raise
        except DetDeformError as exc:
            self._fail(str(exc), 'chart')
        morphism = self._morphism(data['morphism'], context) if 'morphism' in data else None

        self.scene_file = SceneFile(self.scene_path, text, scene, morphism)
        logger.info(f"✓ 场景已加载: {self.scene_path}（{len(charts)} 个图卡，{len(overlaps)} 个交）")
        return self.scene_file

    def _fail(self, message: str, table: str, key: Optional[str] = None):
        line = find_key_line(self._text, table, key)
        full_key = f"{table}.{key}" if key else table
        raise SceneError(message, self.scene_path, line, full_key)

    def _require(self, table_data: Dict[str, Any], table: str, key: str, kind: type):
        if key not in table_data:
            self._fail(f"缺少键 '{key}'", table)
        value = table_data[key]
        if kind is list:
            if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
                self._fail("必须是字符串列表", table, key)
        elif kind is int:
            if not isinstance(value, int) or isinstance(value, bool):
                self._fail("必须是整数", table, key)
        elif not isinstance(value, kind):
            self._fail(f"类型错误，期望 {kind.__name__}", table, key)
        return value

    def _options(self, table: Dict[str, Any]) -> SceneOptions:
        order = table.get('monomial_order', MONOMIAL_ORDER)
        if order not in MONOMIAL_ORDERS:
            self._fail(f"未知的单项式序 '{order}'，可选: {sorted(MONOMIAL_ORDERS)}",
                       'options', 'monomial_order')
        degree_bound = table.get('degree_bound', ORACLE_DEGREE_BOUND)
        if not isinstance(degree_bound, int) or degree_bound < 0:
            self._fail("次数上界必须是非负整数", 'options', 'degree_bound')
        try:
            seed = parse_seed(table.get('seed', DEFAULT_SEED))
        except ValueError as exc:
            self._fail(str(exc), 'options', 'seed')
        return SceneOptions(order, degree_bound, seed)

    def _artinian(self, table: Dict[str, Any], name: str) -> ArtinAlgebra:
        generators = self._require(table, name, 'generators', list) if 'generators' in table else []
        order = self._require(table, name, 'order', int) if generators else table.get('order', 1)
        try:
            return ArtinAlgebra(tuple(generators), order)
        except DetDeformError as exc:
            self._fail(str(exc), name, 'order')

    def _context(self, data: Dict[str, Any], options: SceneOptions) -> RingContext:
        if 'ring' not in data:
            self._fail("缺少 [ring] 表", 'ring')
        variables = self._require(data['ring'], 'ring', 'variables', list)
        artinian = self._artinian(data.get('artinian', {}), 'artinian')
        try:
            return RingContext(tuple(variables), artinian, options.monomial_order)
        except DetDeformError as exc:
            self._fail(str(exc), 'ring', 'variables')

    def _parse(self, text: str, context: RingContext, table: str, key: str):
        try:
            return parse_poly(text, context)
        except DetDeformError as exc:
            self._fail(f"表达式 '{text}' 解析失败: {exc}", table, key)

    def _charts(self, table: Dict[str, Any], context: RingContext) -> tuple:
        if not table:
            self._fail("至少需要一个 [chart.<名称>] 表", 'chart')
        charts = []
        for name, body in table.items():
            full = f"chart.{name}"
            if not NAME_PATTERN.match(name) or not isinstance(body, dict):
                self._fail(f"非法的图卡名 '{name}'", full)
            parameters = self._require(body, full, 'parameters', list)
            if not parameters:
                self._fail("参数列表不能为空", full, 'parameters')
            lifting = self._require(body, full, 'lifting', str)
            params = tuple(self._parse(p, context, full, 'parameters') for p in parameters)
            charts.append(Chart(name, params, self._parse(lifting, context, full, 'lifting')))
        return tuple(charts)

    def _overlaps(self, table: Dict[str, Any], context: RingContext) -> tuple:
        overlaps = []
        for first, inner in table.items():
            if not isinstance(inner, dict):
                self._fail("交必须写成 [overlap.<i>.<j>]", f"overlap.{first}")
            for second, body in inner.items():
                full = f"overlap.{first}.{second}"
                if not isinstance(body, dict):
                    self._fail("交必须写成 [overlap.<i>.<j>]", full)
                invert = self._require(body, full, 'invert', list) if 'invert' in body else []
                elements = tuple(self._parse(g, context, full, 'invert') for g in invert)
                if any(not g.is_pure or g.is_zero for g in elements):
                    self._fail("被求逆的元素必须是非零纯多项式", full, 'invert')
                overlaps.append(Overlap(first, second, elements))
        return tuple(overlaps)

    def _morphism(self, table: Dict[str, Any], source: RingContext) -> ArtinMorphism:
        artinian = self._artinian(table, 'morphism')
        target = source.with_artinian(artinian)
        images = table.get('images', {})
        if not isinstance(images, dict) or not all(isinstance(v, str) for v in images.values()):
            self._fail("images 必须是 { 生成元 = \"表达式\" } 形式的内联表", 'morphism', 'images')
        unknown = sorted(set(images) - set(source.artinian.generators))
        if unknown:
            self._fail(f"images 中有未知的生成元: {unknown}", 'morphism', 'images')
        parsed = {name: self._parse(text, target, 'morphism', 'images') for name, text in images.items()}
        try:
            return ArtinMorphism(source, target, parsed)
        except DetDeformError as exc:
            self._fail(str(exc), 'morphism', 'images')


# ---- 规范渲染 ----

def render_scene(scene: Scene, morphism: Optional[ArtinMorphism] = None) -> str:
    """
    把场景渲染为规范 TOML 文本；再次解析后渲染结果不变

    Args:
        scene: 场景
        morphism: 可选的 Artin 代数同态（写入 [morphism] 表）

    Returns:
        str: TOML 文本
    """
    ctx = scene.ring_context
    lines: List[str] = ['[ring]', f"variables = {toml_list(ctx.variables)}", '']
    if ctx.artinian.generators:
        lines += ['[artinian]', f"generators = {toml_list(ctx.artinian.generators)}",
                  f"order = {ctx.artinian.truncation_order}", '']
    lines += ['[options]', f"monomial_order = {toml_string(scene.options.monomial_order)}",
              f"degree_bound = {scene.options.degree_bound}", f"seed = {scene.options.seed}", '']
    for chart in scene.charts:
        lines += [f"[chart.{chart.name}]",
                  f"parameters = {toml_list(render(p) for p in chart.parameters)}",
                  f"lifting = {toml_string(render(chart.lifting))}", '']
    for overlap in scene.overlaps:
        lines += [f"[overlap.{overlap.first}.{overlap.second}]",
                  f"invert = {toml_list(render(g) for g in overlap.inverted)}", '']
    if morphism is not None:
        target = morphism.target.artinian
        images = ', '.join(f"{name} = {toml_string(render(image))}"
                           for name, image in zip(morphism.source.artinian.generators, morphism.images))
        lines += ['[morphism]', f"generators = {toml_list(target.generators)}",
                  f"order = {target.truncation_order}", f"images = {{ {images} }}", '']
    return '\n'.join(lines)
