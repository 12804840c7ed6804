#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
超维向量空间与四种基本运算

支持三种向量符号架构（VSA），对外提供统一接口：
- MAP: 乘-加-置换，原子向量取值 ±1，捆绑后为实数累加
- FHRR: 复数相位向量，绑定为相位相加
- VTB: 向量导出变换绑定，d = m²，按 m×m 块变换绑定

运算：bind / unbind / bundle / permute / similarity，全部为纯函数。
"""

import math
import struct
import hashlib
import threading
import logging
from dataclasses import dataclass
from typing import Dict, Tuple, Union

import numpy as np

from config import VSA_BACKENDS
from errors import ConfigurationError, DomainError

logger = logging.getLogger('hdgraph.vsa_core')

Token = Union[str, int]

# 序列化头部：后端标记 1 字节 + 维度 8 字节（小端）
_HEADER = struct.Struct('<BQ')

_TAG_TO_BACKEND = {tag: name for name, tag in VSA_BACKENDS.items()}


@dataclass(frozen=True, eq=False)
class Hypervector:
    """超维空间中的一个点

    Attributes:
        backend: 架构名称（map / fhrr / vtb）
        data: 长度为 d 的分量数组，MAP/VTB 为 float64，FHRR 为 complex128
    """
    backend: str
    data: np.ndarray

    def __post_init__(self):
        self.data.setflags(write=False)

    @property
    def dimensions(self) -> int:
        return int(self.data.shape[0])

    def __len__(self):
        return self.dimensions

    def __repr__(self):
        return f"Hypervector(backend={self.backend!r}, d={self.dimensions})"


def validate_dimensions(backend: str, dimensions: int) -> int:
    """校验维度是否满足架构约束

    Raises:
        ConfigurationError: 未知架构、d < 4，或 VTB 下 d 不是完全平方数
    """
    if backend not in VSA_BACKENDS:
        raise ConfigurationError(f"未知的向量架构: {backend}，可选: {list(VSA_BACKENDS)}")
    dimensions = int(dimensions)
    if dimensions < 4:
        raise ConfigurationError(f"维度必须 ≥ 4，当前为 {dimensions}")
    if backend == 'vtb' and math.isqrt(dimensions) ** 2 != dimensions:
        raise ConfigurationError(
            f"VTB 架构要求维度为完全平方数，{dimensions} 不是完全平方数"
            f"（可用 {math.isqrt(dimensions) ** 2}）")
    return dimensions


def largest_square_at_most(dimensions: int) -> int:
    """返回不超过 dimensions 的最大完全平方数"""
    return math.isqrt(int(dimensions)) ** 2


class VSABackend:
    """架构后端基类，只处理原始数组，类型与维度检查由模块级函数负责"""

    name = ''
    dtype = np.float64

    def random(self, rng: np.random.Generator, dimensions: int) -> np.ndarray:
        raise NotImplementedError

    def bind(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def unbind(self, c: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def inner(self, a: np.ndarray, b: np.ndarray) -> float:
        return float(np.dot(a, b))


class MAPBackend(VSABackend):
    """MAP：逐元素乘法绑定，自逆"""

    name = 'map'

    def random(self, rng, dimensions):
        bits = rng.integers(0, 2, size=dimensions, dtype=np.int8)
        return bits.astype(np.float64) * 2.0 - 1.0

    def bind(self, a, b):
        return a * b

    def unbind(self, c, b):
        return c * b


class FHRRBackend(VSABackend):
    """FHRR：单位模复数相位，绑定为逐元素复数乘法"""

    name = 'fhrr'
    dtype = np.complex128

    def random(self, rng, dimensions):
        phases = rng.random(dimensions) * (2.0 * math.pi)
        return np.exp(1j * phases)

    def bind(self, a, b):
        return a * b

    def unbind(self, c, b):
        return c * np.conj(b)

    def inner(self, a, b):
        # Re(Σ a·conj(b))
        return float(np.vdot(b, a).real)


class VTBBackend(VSABackend):
    """VTB：x 按行切成 m 个长度为 m 的块，每块左乘 √m·Y（Y 为 y 重排的 m×m 矩阵）

    原子向量取 Haar 随机正交矩阵 Q 除以 √m 后展平，范数为 1，
    此时绑定变换 blockdiag(Q) 为正交阵，解绑（转置）精确恢复。
    """

    name = 'vtb'

    def random(self, rng, dimensions):
        m = math.isqrt(dimensions)
        gaussian = rng.standard_normal((m, m))
        q, r = np.linalg.qr(gaussian)
        signs = np.sign(np.diag(r))
        signs[signs == 0] = 1.0
        q = q * signs
        return q.ravel() / math.sqrt(m)

    def bind(self, a, b):
        m = math.isqrt(a.shape[0])
        x = a.reshape(m, m)
        y = b.reshape(m, m)
        return (math.sqrt(m) * (x @ y.T)).ravel()

    def unbind(self, c, b):
        m = math.isqrt(c.shape[0])
        z = c.reshape(m, m)
        y = b.reshape(m, m)
        return (math.sqrt(m) * (z @ y)).ravel()


_BACKENDS: Dict[str, VSABackend] = {
    'map': MAPBackend(),
    'fhrr': FHRRBackend(),
    'vtb': VTBBackend()
}


def get_backend(name: str) -> VSABackend:
    """按名称获取架构后端"""
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ConfigurationError(f"未知的向量架构: {name}，可选: {list(_BACKENDS)}") from None


def _check_pair(a: Hypervector, b: Hypervector) -> VSABackend:
    if a.backend != b.backend:
        raise ConfigurationError(f"向量架构不一致: {a.backend} vs {b.backend}")
    if a.dimensions != b.dimensions:
        raise ConfigurationError(f"向量维度不一致: {a.dimensions} vs {b.dimensions}")
    return get_backend(a.backend)


def make_hypervector(backend: str, data) -> Hypervector:
    """从数组构造超维向量（复制并转换为架构对应的数据类型）"""
    impl = get_backend(backend)
    array = np.array(data, dtype=impl.dtype, copy=True).reshape(-1)
    return Hypervector(backend, array)


def zeros(backend: str, dimensions: int) -> Hypervector:
    """零向量：捆绑运算的单位元，也是空捆绑的规范表示"""
    impl = get_backend(backend)
    return Hypervector(backend, np.zeros(int(dimensions), dtype=impl.dtype))


def identity(backend: str, dimensions: int) -> Hypervector:
    """绑定运算的单位元（MAP/FHRR 为全 1，VTB 为单位矩阵展平后除以 √m）"""
    impl = get_backend(backend)
    if backend == 'vtb':
        m = math.isqrt(int(dimensions))
        return Hypervector(backend, np.eye(m).ravel() / math.sqrt(m))
    return Hypervector(backend, np.ones(int(dimensions), dtype=impl.dtype))


def is_zero(a: Hypervector) -> bool:
    return not np.any(a.data)


def bind(a: Hypervector, b: Hypervector) -> Hypervector:
    """绑定：结果与两个输入都不相似"""
    impl = _check_pair(a, b)
    return Hypervector(a.backend, impl.bind(a.data, b.data))


def unbind(c: Hypervector, b: Hypervector) -> Hypervector:
    """解绑：MAP 自逆，FHRR 乘共轭，VTB 作用转置变换（近似逆）"""
    impl = _check_pair(c, b)
    return Hypervector(c.backend, impl.unbind(c.data, b.data))


def bundle(a: Hypervector, b: Hypervector) -> Hypervector:
    """叠加：逐元素相加，不做量化"""
    _check_pair(a, b)
    return Hypervector(a.backend, a.data + b.data)


def bundle_all(vectors, backend: str, dimensions: int) -> Hypervector:
    """捆绑一组向量，空序列返回零向量"""
    total = zeros(backend, dimensions).data.copy()
    for vector in vectors:
        if vector.backend != backend or vector.dimensions != dimensions:
            raise ConfigurationError(
                f"向量 {vector} 与目标空间 ({backend}, {dimensions}) 不一致")
        total += vector.data
    return Hypervector(backend, total)


def scale(a: Hypervector, weight: float) -> Hypervector:
    return Hypervector(a.backend, a.data * float(weight))


def negate(a: Hypervector) -> Hypervector:
    """加法逆元"""
    return Hypervector(a.backend, -a.data)


def permute(a: Hypervector, shift: int = 1) -> Hypervector:
    """循环移位，permute(permute(a, s), -s) 精确还原 a"""
    return Hypervector(a.backend, np.roll(a.data, int(shift)))


def similarity(a: Hypervector, b: Hypervector) -> float:
    """余弦相似度（FHRR 取归一化埃尔米特内积的实部），取值 [-1, 1]

    Raises:
        DomainError: 任一向量范数为 0
    """
    impl = _check_pair(a, b)
    norm_a = float(np.linalg.norm(a.data))
    norm_b = float(np.linalg.norm(b.data))
    if norm_a == 0.0 or norm_b == 0.0:
        raise DomainError("零向量的相似度无定义")
    value = impl.inner(a.data, b.data) / (norm_a * norm_b)
    return min(1.0, max(-1.0, value))


def similarity_or_zero(a: Hypervector, b: Hypervector) -> float:
    """与零向量的相似度约定为 0（“无证据”）"""
    if is_zero(a) or is_zero(b):
        _check_pair(a, b)
        return 0.0
    return similarity(a, b)


# ===== 规范序列化 =====

def to_bytes(a: Hypervector) -> bytes:
    """规范序列化：头部（架构标记 1 字节，维度 8 字节小端）+ 小端 float64 分量，
    FHRR 按 (re, im) 交错存储"""
    header = _HEADER.pack(VSA_BACKENDS[a.backend], a.dimensions)
    if a.backend == 'fhrr':
        payload = np.ascontiguousarray(a.data, dtype='<c16').view('<f8').tobytes()
    else:
        payload = np.ascontiguousarray(a.data, dtype='<f8').tobytes()
    return header + payload


def serialized_size(backend: str, dimensions: int) -> int:
    width = 16 if backend == 'fhrr' else 8
    return _HEADER.size + width * int(dimensions)


def from_bytes(buffer: bytes, offset: int = 0) -> Tuple[Hypervector, int]:
    """反序列化，返回 (向量, 下一个读取位置)

    Raises:
        DomainError: 缓冲区长度不足或架构标记未知
    """
    if len(buffer) - offset < _HEADER.size:
        raise DomainError("超维向量序列化数据头部不完整")
    tag, dimensions = _HEADER.unpack_from(buffer, offset)
    backend = _TAG_TO_BACKEND.get(tag)
    if backend is None:
        raise DomainError(f"未知的架构标记: {tag}")
    end = offset + serialized_size(backend, dimensions)
    if len(buffer) < end:
        raise DomainError("超维向量序列化数据不完整")
    raw = np.frombuffer(buffer, dtype='<f8', count=(end - offset - _HEADER.size) // 8,
                        offset=offset + _HEADER.size)
    if backend == 'fhrr':
        data = raw.view('<c16').astype(np.complex128)
    else:
        data = raw.astype(np.float64)
    return Hypervector(backend, data), end


# ===== 码本 =====

def token_to_bytes(token: Token) -> bytes:
    """记号序列化：字符串为 b's:' + UTF-8，整数为 b'i:' + 十进制"""
    if isinstance(token, bool) or not isinstance(token, (str, int, np.integer)):
        raise ConfigurationError(f"码本记号必须是字符串或整数: {token!r}")
    if isinstance(token, str):
        return b's:' + token.encode('utf-8')
    return b'i:' + str(int(token)).encode('ascii')


def token_seed(seed: int, token: Token) -> int:
    """64 位记号种子：BLAKE2b(digest_size=8, key=种子的 8 字节小端表示) 作用于记号字节，
    结果按小端解释为无符号整数"""
    key = (int(seed) & 0xFFFFFFFFFFFFFFFF).to_bytes(8, 'little')
    digest = hashlib.blake2b(token_to_bytes(token), digest_size=8, key=key).digest()
    return int.from_bytes(digest, 'little')


class Codebook:
    """确定性的记号 → 原子超维向量映射（φ 的原子层）

    每个记号的向量由 numpy PCG64 生成器产生，生成器种子为 token_seed(seed, token)。
    相同的 (seed, backend, d, token) 在任何进程中都得到逐位相同的向量。

    Attributes:
        seed: 64 位种子
        backend: 架构名称
        dimensions: 维度
    """

    def __init__(self, seed: int, backend: str, dimensions: int):
        self.seed = int(seed)
        self.backend = backend
        self.dimensions = validate_dimensions(backend, dimensions)
        self._impl = get_backend(backend)
        self._entries: Dict[Token, Hypervector] = {}
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._entries)

    def _generate(self, token: Token) -> Hypervector:
        rng = np.random.Generator(np.random.PCG64(token_seed(self.seed, token)))
        return Hypervector(self.backend, self._impl.random(rng, self.dimensions))

    def random_hv(self, token: Token, memoize: bool = True) -> Hypervector:
        """获取记号对应的原子向量，首次请求时确定性生成

        Args:
            token: 字符串或整数记号
            memoize: 是否缓存；一次性记号（如每图节点身份）可关闭以节省内存
        """
        cached = self._entries.get(token)
        if cached is not None:
            return cached
        vector = self._generate(token)
        if not memoize:
            return vector
        # 并发首次访问时只保留一个规范向量
        with self._lock:
            return self._entries.setdefault(token, vector)

    def zeros(self) -> Hypervector:
        return zeros(self.backend, self.dimensions)

    def __repr__(self):
        return (f"Codebook(seed={self.seed}, backend={self.backend!r}, "
                f"d={self.dimensions}, entries={len(self._entries)})")


def random_hv(codebook: Codebook, token: Token) -> Hypervector:
    return codebook.random_hv(token)
