#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
关联记忆分类器

训练：逐样本按更新策略修改类别原型向量 C_1…C_k
- add: 无条件叠加
- adapthd: 只在误分类时更新（正类加、误判类减）
- onlinehd: 误分类时按 (1 - 相似度) 加权更新
- refinehd: 误分类同 onlinehd 并记录正类相似度；正确分类但相似度低于 t·μ 时也加权叠加
推理：与各类原型求相似度取最大者，并列时取最小的类别标签。
"""

import io
import json
import struct
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from config import DEFAULT_THRESHOLD, MEMORY_FORMAT_VERSION, STRATEGIES
from errors import ConfigurationError, DomainError, ModelFormatError
from hdc.vsa_core import Hypervector, bundle, from_bytes, is_zero, negate, scale, \
    similarity_or_zero, to_bytes, validate_dimensions, zeros
from version import __version__

logger = logging.getLogger('hdgraph.learner')

_MAGIC = b'HDM\x01'


@dataclass
class MisclassificationStats:
    """误分类样本与正确类别相似度的运行统计"""
    count: int = 0
    mean: float = 0.0
    history: List[float] = field(default_factory=list)

    def record(self, value: float):
        self.count += 1
        self.mean += (value - self.mean) / self.count
        self.history.append(value)


@dataclass
class Prediction:
    """推理结果

    Attributes:
        label: 预测类别
        scores: 每个类别的相似度
        margin: 第一名与第二名分数之差（只有一个类别时为第一名分数）
    """
    label: int
    scores: Dict[int, float]
    margin: float


class AssociativeMemory:
    """关联记忆：每个类别一个累加超维向量，外加策略状态

    Attributes:
        backend: 向量架构
        dimensions: 维度
        strategy: 更新策略名称
        threshold: RefineHD 阈值系数 t
        classes: 类别标签 -> 累加向量
        mis_stats: 误分类相似度统计
    """

    def __init__(self, backend: str, dimensions: int, strategy: str = 'refinehd',
                 threshold: float = DEFAULT_THRESHOLD, class_values: Iterable[int] = ()):
        self.backend = backend
        self.dimensions = validate_dimensions(backend, dimensions)
        if strategy not in STRATEGIES:
            raise ConfigurationError(f"未知的训练策略: {strategy}，可选: {STRATEGIES}")
        if strategy == 'refinehd' and not threshold > 0:
            raise ConfigurationError(f"RefineHD 阈值系数必须 > 0，当前为 {threshold}")
        self.strategy = strategy
        self.threshold = float(threshold)
        self.classes: Dict[int, Hypervector] = {}
        self.mis_stats = MisclassificationStats()
        for value in class_values:
            self.ensure_class(value)

    def ensure_class(self, label: int) -> Hypervector:
        """未见过的类别以零向量加入（开放类别）"""
        label = int(label)
        if label not in self.classes:
            self.classes[label] = zeros(self.backend, self.dimensions)
        return self.classes[label]

    def is_untrained(self) -> bool:
        return all(is_zero(c) for c in self.classes.values())

    def check_sample(self, vector: Hypervector):
        if vector.backend != self.backend or vector.dimensions != self.dimensions:
            raise ConfigurationError(
                f"样本向量 ({vector.backend}, {vector.dimensions}) 与记忆 "
                f"({self.backend}, {self.dimensions}) 不一致")

    def add(self, label: int, vector: Hypervector, weight: float = 1.0):
        current = self.ensure_class(label)
        self.classes[label] = bundle(current, vector if weight == 1.0 else scale(vector, weight))

    def subtract(self, label: int, vector: Hypervector, weight: float = 1.0):
        current = self.ensure_class(label)
        self.classes[label] = bundle(current, negate(vector if weight == 1.0 else scale(vector, weight)))

    def __repr__(self):
        return (f"AssociativeMemory(backend={self.backend!r}, d={self.dimensions}, "
                f"strategy={self.strategy!r}, classes={sorted(self.classes)})")


# ===== 推理 =====

def _scores(memory: AssociativeMemory, vector: Hypervector) -> Dict[int, float]:
    return {label: similarity_or_zero(vector, memory.classes[label])
            for label in sorted(memory.classes)}


def _argmax(scores: Dict[int, float]) -> Tuple[int, float]:
    ranked = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    top = ranked[0][1]
    margin = top - ranked[1][1] if len(ranked) > 1 else top
    return ranked[0][0], margin


def predict(memory: AssociativeMemory, vector: Hypervector) -> Prediction:
    """推理：对每个类别求 δ(H, C_i)，零累加器得 0，取最大者（并列取最小标签）

    Raises:
        DomainError: 所有累加器均为零（记忆未训练）
    """
    memory.check_sample(vector)
    if not memory.classes or memory.is_untrained():
        raise DomainError("关联记忆尚未训练，所有类别向量均为零")
    scores = _scores(memory, vector)
    label, margin = _argmax(scores)
    return Prediction(label=label, scores=scores, margin=margin)


def score_binary(memory: AssociativeMemory, vector: Hypervector,
                 positive: int, negative: int) -> float:
    """二分类打分：δ(H, C_positive) - δ(H, C_negative)，用于计算 AUC

    Raises:
        DomainError: 类别不在记忆中
    """
    memory.check_sample(vector)
    for label in (positive, negative):
        if label not in memory.classes:
            raise DomainError(f"类别 {label} 不在关联记忆中")
    return (similarity_or_zero(vector, memory.classes[positive])
            - similarity_or_zero(vector, memory.classes[negative]))


# ===== 更新策略 =====

class UpdateStrategy:
    """更新策略接口

    冷启动：所有累加器都为零时没有有效预测，强制加入该样本（不计入误分类统计）。
    只要有一个类别非零，就按常规规则更新，零累加器的 δ 记为 0。
    """

    name = ''

    def update(self, memory: AssociativeMemory, vector: Hypervector, label: int):
        memory.ensure_class(label)
        if memory.is_untrained():
            memory.add(label, vector)
            return
        scores = _scores(memory, vector)
        predicted, _ = _argmax(scores)
        self.apply(memory, vector, label, predicted, scores)

    def apply(self, memory, vector, label, predicted, scores):
        raise NotImplementedError


class AddStrategy(UpdateStrategy):
    name = 'add'

    def update(self, memory, vector, label):
        memory.add(label, vector)


class AdaptHDStrategy(UpdateStrategy):
    name = 'adapthd'

    def apply(self, memory, vector, label, predicted, scores):
        if predicted != label:
            memory.add(label, vector)
            memory.subtract(predicted, vector)


class OnlineHDStrategy(UpdateStrategy):
    name = 'onlinehd'

    def apply(self, memory, vector, label, predicted, scores):
        if predicted != label:
            memory.add(label, vector, 1.0 - scores[label])
            memory.subtract(predicted, vector, 1.0 - scores[predicted])


class RefineHDStrategy(UpdateStrategy):
    """阈值门控：正确分类且 s_y < t·μ 时叠加，μ 为误分类样本相似度均值；
    尚无误分类记录时门控关闭"""

    name = 'refinehd'

    def gate(self, memory: AssociativeMemory, similarity_to_label: float) -> bool:
        stats = memory.mis_stats
        if stats.count == 0:
            return False
        return similarity_to_label < memory.threshold * stats.mean

    def apply(self, memory, vector, label, predicted, scores):
        s_y = scores[label]
        if predicted != label:
            memory.mis_stats.record(s_y)
            memory.add(label, vector, 1.0 - s_y)
            memory.subtract(predicted, vector, 1.0 - scores[predicted])
        elif self.gate(memory, s_y):
            memory.add(label, vector, 1.0 - s_y)


_STRATEGIES = {
    'add': AddStrategy(),
    'adapthd': AdaptHDStrategy(),
    'onlinehd': OnlineHDStrategy(),
    'refinehd': RefineHDStrategy()
}


def get_strategy(name: str) -> UpdateStrategy:
    try:
        return _STRATEGIES[name]
    except KeyError:
        raise ConfigurationError(f"未知的训练策略: {name}，可选: {STRATEGIES}") from None


def update_add(memory: AssociativeMemory, vector: Hypervector, label: int) -> AssociativeMemory:
    _STRATEGIES['add'].update(memory, vector, label)
    return memory


def update_adapthd(memory: AssociativeMemory, vector: Hypervector, label: int) -> AssociativeMemory:
    _STRATEGIES['adapthd'].update(memory, vector, label)
    return memory


def update_onlinehd(memory: AssociativeMemory, vector: Hypervector, label: int) -> AssociativeMemory:
    _STRATEGIES['onlinehd'].update(memory, vector, label)
    return memory


def update_refinehd(memory: AssociativeMemory, vector: Hypervector, label: int) -> AssociativeMemory:
    if not memory.threshold > 0:
        raise ConfigurationError(f"RefineHD 阈值系数必须 > 0，当前为 {memory.threshold}")
    _STRATEGIES['refinehd'].update(memory, vector, label)
    return memory


def train(memory: AssociativeMemory, samples, epochs: int = 1) -> AssociativeMemory:
    """按顺序逐样本训练

    Args:
        memory: 关联记忆（原地更新）
        samples: (超维向量, 类别) 序列
        epochs: 遍历次数，≥ 1

    Returns:
        AssociativeMemory: 更新后的记忆
    """
    if epochs < 1:
        raise ConfigurationError(f"epochs 必须 ≥ 1，当前为 {epochs}")
    samples = list(samples)
    strategy = get_strategy(memory.strategy)
    for vector, _ in samples:
        memory.check_sample(vector)
    for epoch in range(epochs):
        for vector, label in samples:
            strategy.update(memory, vector, int(label))
        logger.debug(f"第 {epoch + 1}/{epochs} 轮训练完成，样本数 {len(samples)}，"
                     f"误分类记录 {memory.mis_stats.count}")
    return memory


# ===== 记忆文件（.hdm）=====

def save_memory(memory: AssociativeMemory, path: str, encoder: Optional[dict] = None,
                epochs: int = 1) -> str:
    """写出训练好的关联记忆

    格式：b'HDM\\x01' + 4 字节小端头部长度 + UTF-8 JSON 头部（键排序）
    + 每个类别（int64 小端标签 + 规范序列化向量），类别按标签升序。
    """
    header = {
        'format_version': MEMORY_FORMAT_VERSION,
        'backend': memory.backend,
        'dimensions': memory.dimensions,
        'strategy': memory.strategy,
        'threshold': memory.threshold,
        'class_count': len(memory.classes),
        'mis_stats': {'count': memory.mis_stats.count, 'mean': memory.mis_stats.mean},
        'encoder': encoder or {},
        'epochs': epochs,
        'version': __version__
    }
    encoded = json.dumps(header, sort_keys=True, ensure_ascii=False).encode('utf-8')
    buffer = io.BytesIO()
    buffer.write(_MAGIC)
    buffer.write(struct.pack('<I', len(encoded)))
    buffer.write(encoded)
    for label in sorted(memory.classes):
        buffer.write(struct.pack('<q', label))
        buffer.write(to_bytes(memory.classes[label]))
    with open(path, 'wb') as f:
        f.write(buffer.getvalue())
    logger.info(f"💾 关联记忆已保存: {path} ({len(memory.classes)} 个类别)")
    return path


def load_memory(path: str) -> Tuple[AssociativeMemory, dict]:
    """读取关联记忆文件

    Returns:
        (AssociativeMemory, header): header 中含编码器配置

    Raises:
        ModelFormatError: 文件不是合法的 .hdm 文件
    """
    try:
        with open(path, 'rb') as f:
            payload = f.read()
    except OSError as e:
        raise ModelFormatError(f"无法读取模型文件 {path}: {e}") from e

    if payload[:4] != _MAGIC or len(payload) < 8:
        raise ModelFormatError(f"{path} 不是 hdgraph 模型文件")
    (length,) = struct.unpack_from('<I', payload, 4)
    try:
        header = json.loads(payload[8:8 + length].decode('utf-8'))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise ModelFormatError(f"模型文件头部损坏: {e}") from e
    if header.get('format_version') != MEMORY_FORMAT_VERSION:
        raise ModelFormatError(f"不支持的模型格式版本: {header.get('format_version')}")

    memory = AssociativeMemory(header['backend'], header['dimensions'],
                               header['strategy'], header['threshold'])
    memory.mis_stats.count = int(header['mis_stats']['count'])
    memory.mis_stats.mean = float(header['mis_stats']['mean'])

    offset = 8 + length
    try:
        for _ in range(int(header['class_count'])):
            (label,) = struct.unpack_from('<q', payload, offset)
            vector, offset = from_bytes(payload, offset + 8)
            memory.check_sample(vector)
            memory.classes[int(label)] = vector
    except (struct.error, DomainError, ConfigurationError) as e:
        raise ModelFormatError(f"模型文件类别数据损坏: {e}") from e
    return memory, header
