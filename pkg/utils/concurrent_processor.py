import os
import threading
import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Any, Callable, Dict, List, Optional, Sequence
from dataclasses import dataclass

logger = logging.getLogger('hdgraph.concurrent_processor')


@dataclass
class BatchTask:
    """批处理任务数据结构"""
    index: int
    item: Any
    error: Optional[str] = None


class ConcurrentProcessor:
    """并发处理器，结果按输入顺序返回，与工作线程数无关"""

    def __init__(self, max_workers: int = 4):
        self.max_workers = max(1, int(max_workers))
        self.executor = ThreadPoolExecutor(max_workers=self.max_workers)
        self._lock = threading.Lock()
        self._active_batches = 0

    def shutdown(self):
        """关闭处理器"""
        self.executor.shutdown(wait=True)

    def map_ordered(self, fn: Callable[[Any], Any], items: Sequence[Any]) -> List[Any]:
        """并发执行 fn，结果放回各自的原始位置

        Args:
            fn: 对单个元素执行的函数
            items: 输入序列

        Returns:
            List: 与 items 一一对应的结果列表

        Raises:
            第一个失败任务（按输入顺序）抛出的异常
        """
        if not items:
            return []

        # 单线程时直接顺序执行，省去线程池开销
        if self.max_workers == 1 or len(items) == 1:
            return [fn(item) for item in items]

        # 检查线程池是否已关闭
        if self.executor._shutdown:
            raise RuntimeError("线程池已关闭，无法提交任务")

        with self._lock:
            self._active_batches += 1

        try:
            results: List[Any] = [None] * len(items)
            failed: Dict[int, BaseException] = {}

            # 提交所有任务到线程池
            future_to_task = {}
            for index, item in enumerate(items):
                future = self.executor.submit(fn, item)
                future_to_task[future] = BatchTask(index=index, item=item)

            # 等待所有任务完成
            for future in as_completed(future_to_task):
                task = future_to_task[future]
                try:
                    results[task.index] = future.result()
                except Exception as e:
                    task.error = str(e)
                    failed[task.index] = e
                    logger.debug(f"❌ 批处理任务失败 (序号 {task.index}): {e}")

            if failed:
                raise failed[min(failed)]
            return results
        finally:
            with self._lock:
                self._active_batches -= 1

    def get_status(self) -> Dict[str, Any]:
        """获取处理器状态"""
        return {
            'active_batches': self._active_batches,
            'max_workers': self.max_workers
        }


# 全局并发处理器实例
_concurrent_processor: Optional[ConcurrentProcessor] = None


def get_concurrent_processor(max_workers: Optional[int] = None) -> ConcurrentProcessor:
    """获取全局并发处理器实例

    Args:
        max_workers: 工作线程数，None 时读取配置 max_concurrent_workers
    """
    global _concurrent_processor
    if max_workers is None:
        # 延迟导入避免循环导入
        from .settings import get_config
        max_workers = get_config().get('max_concurrent_workers', os.cpu_count() or 4)
    max_workers = max(1, int(max_workers))

    # 如果处理器不存在，创建新的
    if _concurrent_processor is None:
        _concurrent_processor = ConcurrentProcessor(max_workers=max_workers)
        logger.debug(f"🚀 并发处理器已启动，工作线程数: {max_workers}")
    # 如果并发数配置发生变化，重新创建
    elif _concurrent_processor.max_workers != max_workers:
        logger.debug(
            f"🔄 并发数配置变更 ({_concurrent_processor.max_workers} -> {max_workers})，重新初始化处理器")
        old_processor = _concurrent_processor
        _concurrent_processor = ConcurrentProcessor(max_workers=max_workers)
        old_processor.shutdown()

    return _concurrent_processor


def shutdown_concurrent_processor():
    """关闭全局并发处理器"""
    global _concurrent_processor
    if _concurrent_processor:
        _concurrent_processor.shutdown()
        _concurrent_processor = None
