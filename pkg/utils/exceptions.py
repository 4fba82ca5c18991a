"""
异常模块
所有输入错误与前置条件失败都以 DetDeformError 的子类抛出；
数学检验的失败（公理、闭链、上闭链）属于报告内容，不抛异常
"""
from typing import Optional


class DetDeformError(ValueError):
    """本项目所有异常的基类"""


class PolySyntaxError(DetDeformError):
    """多项式表达式语法错误，带出错位置"""

    def __init__(self, message: str, position: int, text: str = ''):
        self.position = position
        self.text = text
        super().__init__(f"{message}（位置 {position}）")


class UnknownSymbolError(PolySyntaxError):
    """表达式中出现未声明的符号"""

    def __init__(self, name: str, position: int, text: str = ''):
        self.name = name
        super().__init__(f"未声明的符号 '{name}'", position, text)


class ContextMismatchError(DetDeformError):
    """参与运算的元素不属于同一个环"""


class NotAUnitError(DetDeformError):
    """元素在给定局部化中不是单位"""


class GroebnerInputError(DetDeformError):
    """Gröbner 基的输入不合法（空生成元、含 ε 项等）"""


class NotAComplexError(DetDeformError):
    """相邻微分的复合不为零"""


class PresentationError(DetDeformError):
    """两项复形不是单射表示（没有非奇异的极大子式）"""


class SplitCertificationError(DetDeformError):
    """分裂短正合列的证书校验失败"""


class SupportConditionError(DetDeformError):
    """增广行列式在 f 处的赋值不满足 map_p 的支撑条件"""


class ParameterSystemError(DetDeformError):
    """参数组不是正则参数系（f_j 落在 (f_1) 中）"""

    def __init__(self, message: str, direction: Optional[int] = None):
        self.direction = direction
        super().__init__(message)


class LevelNotSupportedError(DetDeformError):
    """边界映射只在余极限第 1 层实现"""


class GluingError(DetDeformError):
    """各图卡上的提升不能通过单位粘合"""


class MorphismError(DetDeformError):
    """Artin 代数之间的代换不是良定义的局部同态"""


class SceneError(DetDeformError):
    """场景文件错误，带文件、行号和键名"""

    def __init__(self, message: str, path: str = '', line: int = 0, key: str = ''):
        self.path = str(path)
        self.line = line
        self.key = key
        location = f"{self.path}:{line}" if self.path else f"line {line}"
        super().__init__(f"{location} [{key}] {message}")


class UsageError(DetDeformError):
    """命令行参数错误"""
