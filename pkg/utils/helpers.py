"""
辅助函数模块
包含场景文件定位、种子解析与报告记录格式化等通用工具函数
"""
import json
import re
from typing import Any, Dict, Iterable, Optional

from .constants import RECORD_KEYS

_HEADER_PATTERN = re.compile(r'^\s*\[\s*([^\[\]]+?)\s*\]\s*(#.*)?$')
_KEY_PATTERN = re.compile(r'^\s*"?([A-Za-z0-9_\-]+)"?\s*=')

U64_MAX = 2 ** 64 - 1


def find_key_line(text: str, table: str, key: Optional[str] = None) -> int:
    """
    在场景文件文本中定位表头或表内键所在的行号

    Args:
        text: 场景文件全文
        table: 表名，例如 "chart.U1"
        key: 表内的键名，为 None 时返回表头所在行

    Returns:
        int: 1 起始的行号，找不到时返回 0
    """
    in_table = False
    header_line = 0
    wanted = table.replace(' ', '')
    for number, line in enumerate(text.splitlines(), start=1):
        header = _HEADER_PATTERN.match(line)
        if header:
            name = header.group(1).replace(' ', '').replace('"', '')
            in_table = name == wanted
            if in_table:
                header_line = number
                if key is None:
                    return number
            continue
        if in_table and key is not None:
            match = _KEY_PATTERN.match(line)
            if match and match.group(1) == key:
                return number
    return header_line


def parse_seed(value: Any) -> int:
    """
    解析 64 位无符号随机种子

    Args:
        value: 整数或十进制字符串

    Returns:
        int: 种子

    Raises:
        ValueError: 不是 0..2⁶⁴−1 之间的整数
    """
    try:
        seed = int(str(value).strip())
    except (TypeError, ValueError):
        raise ValueError(f"种子必须是非负整数，实际为 {value!r}")
    if not 0 <= seed <= U64_MAX:
        raise ValueError(f"种子超出 64 位无符号整数范围: {seed}")
    return seed


def make_record(command: str, chart: Optional[str] = None, direction: Optional[str] = None,
                class_text: Optional[str] = None, verdict: Optional[str] = None) -> Dict[str, Any]:
    """按固定键名构造一条报告记录"""
    return dict(zip(RECORD_KEYS, (command, chart, direction, class_text, verdict)))


def format_records(records: Iterable[Dict[str, Any]]) -> str:
    """json-lines 格式：每条记录一行，键名排序，保证输出逐字节确定"""
    return '\n'.join(json.dumps(r, sort_keys=True, ensure_ascii=False) for r in records)


def toml_string(text: str) -> str:
    """渲染为 TOML 基本字符串"""
    return json.dumps(text, ensure_ascii=False)


def toml_list(items: Iterable[str]) -> str:
    return '[' + ', '.join(toml_string(item) for item in items) + ']'
