# Utils module
# 配置与日志相关功能
from .settings import (
    get_config, save_config, update_config, load_config, setup_logger, log_message,
    resolve_cache_dir, resolve_base_url, now_timestamp
)

# 并发处理相关功能
from .concurrent_processor import (
    ConcurrentProcessor, get_concurrent_processor, shutdown_concurrent_processor
)

__all__ = [
    # 配置与日志相关功能
    'get_config', 'save_config', 'update_config', 'load_config', 'setup_logger', 'log_message',
    'resolve_cache_dir', 'resolve_base_url', 'now_timestamp',

    # 并发处理相关功能
    'ConcurrentProcessor', 'get_concurrent_processor', 'shutdown_concurrent_processor'
]
