import os
import json
import logging
from datetime import datetime
import pytz

from config import DEFAULT_BASE_URL, DEFAULT_CACHE_DIR

# 配置文件路径
CONFIG_FILE = "./config/config.json"

# 环境变量（仅缓存目录和下载地址允许覆盖）
ENV_CACHE_DIR = "HDGRAPH_CACHE_DIR"
ENV_BASE_URL = "HDGRAPH_BASE_URL"

# 默认配置
DEFAULT_CONFIG = {
    "cache_dir": DEFAULT_CACHE_DIR,
    "base_url": DEFAULT_BASE_URL,
    "request_timeout": 60,
    "max_concurrent_workers": os.cpu_count() or 4,
    "enable_logging": True,
    "log_level": "INFO",
    "log_file": "logs/hdgraph.log",
    "max_log_lines": 5000,
    "keep_log_lines": 2000,
    "timezone": "Asia/Shanghai"
}

# 全局变量
_config = None
_logger = None
_log_check_counter = 0  # 日志检查计数器


class LocalTimeFormatter(logging.Formatter):
    """使用配置时区的日志时间格式化器"""

    def __init__(self, fmt=None, datefmt=None, tz_name: str = 'Asia/Shanghai'):
        super().__init__(fmt, datefmt)
        self.tz = pytz.timezone(tz_name)

    def formatTime(self, record, datefmt=None):
        dt = datetime.fromtimestamp(record.created, self.tz)
        if datefmt:
            return dt.strftime(datefmt)
        return dt.strftime('%Y-%m-%d %H:%M:%S')


def get_log_formatter():
    """获取统一的日志格式化器"""
    tz_name = (_config or DEFAULT_CONFIG).get('timezone', 'Asia/Shanghai')
    return LocalTimeFormatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
        tz_name=tz_name
    )


def now_timestamp():
    """按配置时区返回当前时间字符串，用于实验报告"""
    tz_name = get_config().get('timezone', 'Asia/Shanghai')
    return datetime.now(pytz.timezone(tz_name)).strftime('%Y-%m-%d %H:%M:%S')


def load_config():
    """加载配置文件"""
    global _config
    try:
        if os.path.exists(CONFIG_FILE):
            with open(CONFIG_FILE, 'r', encoding='utf-8') as f:
                _config = {**DEFAULT_CONFIG, **json.load(f)}
        else:
            _config = DEFAULT_CONFIG.copy()
            save_config()
    except Exception as e:
        print(f"⚠️ 配置文件加载失败，使用默认配置: {e}")
        _config = DEFAULT_CONFIG.copy()


def save_config():
    """保存配置文件"""
    try:
        os.makedirs(os.path.dirname(CONFIG_FILE), exist_ok=True)
        with open(CONFIG_FILE, 'w', encoding='utf-8') as f:
            json.dump(_config, f, indent=2, ensure_ascii=False)
    except Exception as e:
        print(f"⚠️ 配置文件保存失败: {e}")


def setup_logger():
    """设置日志器"""
    global _logger
    if _config is None:
        load_config()

    _logger = logging.getLogger('hdgraph')
    _logger.setLevel(getattr(logging, _config.get('log_level', 'INFO')))
    _logger.propagate = False

    # 清除现有的处理器
    _logger.handlers.clear()

    # 控制台处理器
    formatter = get_log_formatter()
    console_handler = logging.StreamHandler()
    console_handler.setLevel(logging.INFO)
    console_handler.setFormatter(formatter)
    _logger.addHandler(console_handler)

    # 文件处理器
    if _config.get('enable_logging', True):
        log_file = _config.get('log_file', 'logs/hdgraph.log')
        try:
            os.makedirs(os.path.dirname(log_file) or '.', exist_ok=True)
            file_handler = logging.FileHandler(log_file, encoding='utf-8')
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(formatter)
            _logger.addHandler(file_handler)
        except OSError as e:
            _logger.warning(f"⚠️ 无法写入日志文件 {log_file}: {e}")

        # 启动时检查日志文件大小
        check_and_truncate_log()


def check_and_truncate_log():
    """检查日志文件行数，超过配置的最大行数则只保留末尾部分"""
    if _config is None:
        return

    log_file_path = _config.get('log_file', 'logs/hdgraph.log')
    if os.path.exists(log_file_path):
        try:
            with open(log_file_path, 'r', encoding='utf-8') as f:
                lines = f.readlines()
                line_count = len(lines)

            max_lines = _config.get('max_log_lines', 5000)
            keep_lines = _config.get('keep_log_lines', 2000)

            if line_count > max_lines:
                with open(log_file_path, 'w', encoding='utf-8') as f:
                    f.writelines(lines[-keep_lines:])
                if _logger:
                    _logger.info(
                        f"日志文件已自动清理，从 {line_count} 行减少到 {keep_lines} 行")
        except Exception as e:
            if _logger:
                _logger.error(f"检查日志文件时出错: {e}")


def log_message(level, message):
    """统一的日志记录函数"""
    global _log_check_counter

    if _logger:
        getattr(_logger, level.lower())(message)
    else:
        logging.getLogger('hdgraph').log(
            getattr(logging, level.upper(), logging.INFO), message)

    # 每100次日志写入后检查一次文件大小，避免频繁IO操作
    _log_check_counter += 1
    if _log_check_counter >= 100:
        check_and_truncate_log()
        _log_check_counter = 0


def get_config():
    """获取当前配置"""
    if _config is None:
        load_config()
    return _config.copy()


def update_config(new_config):
    """更新配置"""
    global _config
    if _config is None:
        load_config()

    _config.update(new_config)
    save_config()

    # 如果日志相关配置发生变化，重新设置日志器
    if any(key in new_config for key in ['enable_logging', 'log_level', 'log_file', 'timezone']):
        setup_logger()

    log_message('info', "⚙️ 配置已更新")


def resolve_cache_dir(flag_value=None):
    """解析缓存目录：命令行参数 > 环境变量 > 配置文件 > 默认值"""
    if flag_value:
        return flag_value
    return os.environ.get(ENV_CACHE_DIR) or get_config().get('cache_dir', DEFAULT_CACHE_DIR)


def resolve_base_url(flag_value=None):
    """解析下载地址：命令行参数 > 环境变量 > 配置文件 > 默认值"""
    if flag_value:
        return flag_value
    return os.environ.get(ENV_BASE_URL) or get_config().get('base_url', DEFAULT_BASE_URL)
