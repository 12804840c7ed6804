#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
TUDataset 下载客户端
下载 {base_url}/{name}.zip，校验并解压到缓存目录
"""

import io
import os
import logging
import threading
import zipfile
from typing import Any, Dict, List, Optional

import requests

from config import ANTICANCER_DATASETS, DEFAULT_BASE_URL
from errors import FetchError
from dataset.graph_data import MANDATORY_SUFFIXES, OPTIONAL_SUFFIXES
from version import __version__


class DatasetClient:
    """数据集下载客户端

    缓存布局：
    - 压缩包: {cache_dir}/{name}.zip
    - 解压目录: {cache_dir}/{name}/
    同名数据集的下载按名称加锁串行执行，已缓存时不访问网络。
    """

    def __init__(self, cache_dir: str, base_url: str = DEFAULT_BASE_URL,
                 session: Optional[requests.Session] = None, timeout: int = 60):
        """初始化下载客户端

        Args:
            cache_dir: 缓存目录
            base_url: 下载地址前缀
            session: 可注入的 HTTP 会话（测试时替换传输层）
            timeout: 请求超时（秒）
        """
        self.logger = logging.getLogger('hdgraph.dataset_client')
        self.cache_dir = cache_dir
        self.base_url = base_url.rstrip('/')
        self.timeout = timeout
        self.session = session or requests.Session()
        self.session.headers.update({
            'User-Agent': f'hdgraph/{__version__}',
            'Accept': 'application/zip, application/octet-stream'
        })
        self._locks: Dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()
        self.download_count = 0

    def _lock_for(self, name: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(name, threading.Lock())

    def archive_path(self, name: str) -> str:
        return os.path.join(self.cache_dir, f"{name}.zip")

    def extracted_path(self, name: str) -> str:
        return os.path.join(self.cache_dir, name)

    def is_cached(self, name: str) -> bool:
        """解压目录中必需文件齐全即视为已缓存"""
        root = self.extracted_path(name)
        return all(os.path.isfile(os.path.join(root, f"{name}{suffix}"))
                   for suffix in MANDATORY_SUFFIXES)

    def _make_request(self, url: str) -> bytes:
        """发送HTTP请求，返回响应内容

        Raises:
            requests.exceptions.RequestException: 网络或 HTTP 状态错误
        """
        try:
            response = self.session.get(url, timeout=self.timeout)
            response.raise_for_status()
            return response.content
        except requests.exceptions.RequestException as e:
            self.logger.error(f"请求失败: {url}, 错误: {e}")
            raise

    def _extract(self, name: str, payload: bytes) -> str:
        """校验压缩包并解压数据集文件

        压缩包内文件可以位于根目录或 {name}/ 子目录，只提取以 {name}_ 开头的文件。
        """
        try:
            archive = zipfile.ZipFile(io.BytesIO(payload))
        except zipfile.BadZipFile as e:
            raise FetchError(name, f"压缩包损坏: {e}") from e

        wanted = {f"{name}{suffix}" for suffix in MANDATORY_SUFFIXES + OPTIONAL_SUFFIXES}
        members = {}
        for info in archive.infolist():
            basename = os.path.basename(info.filename)
            if basename in wanted and not info.is_dir():
                members[basename] = info

        missing = [f"{name}{suffix}" for suffix in MANDATORY_SUFFIXES
                   if f"{name}{suffix}" not in members]
        if missing:
            raise FetchError(name, f"压缩包缺少必需文件: {', '.join(missing)}")

        root = self.extracted_path(name)
        os.makedirs(root, exist_ok=True)
        try:
            for basename, info in members.items():
                with archive.open(info) as source, \
                        open(os.path.join(root, basename), 'wb') as target:
                    target.write(source.read())
        except (zipfile.BadZipFile, OSError) as e:
            raise FetchError(name, f"解压失败: {e}") from e
        return root

    def fetch(self, name: str) -> str:
        """获取数据集目录，未缓存时下载并解压（幂等）

        Args:
            name: 数据集名称，例如 MCF-7

        Returns:
            str: 解压后的数据集目录

        Raises:
            FetchError: HTTP 失败、压缩包损坏或缺少必需文件
        """
        with self._lock_for(name):
            if self.is_cached(name):
                self.logger.debug(f"使用缓存的数据集: {name}")
                return self.extracted_path(name)

            os.makedirs(self.cache_dir, exist_ok=True)
            archive = self.archive_path(name)

            # 已有压缩包时直接解压
            if os.path.isfile(archive):
                self.logger.info(f"📦 从本地压缩包解压数据集: {archive}")
                with open(archive, 'rb') as f:
                    return self._extract(name, f.read())

            url = f"{self.base_url}/{name}.zip"
            self.logger.info(f"⬇️ 下载数据集: {url}")
            try:
                payload = self._make_request(url)
            except requests.exceptions.RequestException as e:
                raise FetchError(name, f"下载失败: {e}") from e
            self.download_count += 1

            root = self._extract(name, payload)
            with open(archive, 'wb') as f:
                f.write(payload)
            self.logger.info(f"✅ 数据集已缓存: {root}")
            return root

    # ===== 缓存辅助方法 =====

    def clear_cache(self, name: Optional[str] = None) -> int:
        """删除缓存的压缩包与解压目录

        Args:
            name: 数据集名称，None 表示清空所有目录内数据集

        Returns:
            int: 删除的数据集数量
        """
        names = [name] if name else self.cached_names()
        removed = 0
        for item in names:
            targets = [self.archive_path(item), self.extracted_path(item)]
            hit = False
            for target in targets:
                if os.path.isfile(target):
                    os.remove(target)
                    hit = True
                elif os.path.isdir(target):
                    for entry in os.listdir(target):
                        os.remove(os.path.join(target, entry))
                    os.rmdir(target)
                    hit = True
            removed += int(hit)
        self.logger.info(f"🗑️ 已清空 {removed} 个数据集缓存")
        return removed

    def cached_names(self) -> List[str]:
        if not os.path.isdir(self.cache_dir):
            return []
        names = set()
        for entry in os.listdir(self.cache_dir):
            if entry.endswith('.zip'):
                names.add(entry[:-4])
            elif os.path.isdir(os.path.join(self.cache_dir, entry)):
                names.add(entry)
        return sorted(n for n in names if self.is_cached(n) or os.path.isfile(self.archive_path(n)))

    def get_cache_stats(self) -> Dict[str, Any]:
        """获取缓存统计信息

        Returns:
            Dict: 缓存统计信息
        """
        archives = {}
        for name in self.cached_names():
            path = self.archive_path(name)
            archives[name] = os.path.getsize(path) if os.path.isfile(path) else 0
        return {
            'cache_dir': os.path.abspath(self.cache_dir),
            'cached_count': len(archives),
            'archive_bytes': archives,
            'download_count': self.download_count
        }


def fetch_dataset(name: str, cache_dir: str, base_url: str = DEFAULT_BASE_URL,
                  session: Optional[requests.Session] = None) -> str:
    """下载（或命中缓存）数据集并返回解压目录"""
    return DatasetClient(cache_dir, base_url, session=session).fetch(name)


def list_datasets(cache_dir: str) -> List[Dict[str, Any]]:
    """列出抗癌筛选数据集目录及缓存状态"""
    client = DatasetClient(cache_dir)
    rows = []
    for name, (size, description) in ANTICANCER_DATASETS.items():
        rows.append({
            'name': name,
            'graphs': size,
            'description': description,
            'cached': client.is_cached(name)
        })
    return rows
