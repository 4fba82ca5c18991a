"""
配置文件模块
用于管理项目的配置信息（随机种子、预言机次数上界、单项式序、日志等）
"""
import os
from pathlib import Path
from dotenv import load_dotenv

# 加载环境变量
load_dotenv()

# 基础路径配置
BASE_DIR = Path(__file__).parent

# 随机性质检验配置（所有检验在给定种子下确定性运行）
DEFAULT_SEED = int(os.getenv('DETDEFORM_SEED', 7))
DEFAULT_CASES = int(os.getenv('DETDEFORM_CASES', 100))

# 线性代数成员资格预言机的次数上界
ORACLE_DEGREE_BOUND = int(os.getenv('ORACLE_DEGREE_BOUND', 6))

# 单项式序：'lex'、'grlex'、'grevlex'，场景文件 [options] 可覆盖
MONOMIAL_ORDER = os.getenv('MONOMIAL_ORDER', 'lex')

# 报告输出格式：'text' 或 'json-lines'
REPORT_FORMAT = os.getenv('REPORT_FORMAT', 'text')

# 日志配置
LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
# 文件日志默认关闭，命令行输出只走 stdout，日志走 stderr
LOG_TO_FILE = os.getenv('LOG_TO_FILE', 'False').lower() == 'true'
LOG_DIR = Path(os.getenv('LOG_DIR', str(BASE_DIR / 'logs')))
