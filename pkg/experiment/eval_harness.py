#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""实验运行器

该模块复现图分类实验流程：
1. 每个种子做一次分层划分（默认 80/20）
2. 以种子构建码本，编码训练集并按策略训练关联记忆
3. 编码测试集并打分，计算 AUC 与准确率
4. 可选记录每样本训练/推理耗时（毫秒，含编码）
5. 汇总各次重复的均值与标准差

另外支持按单一轴扫描（维度、阈值、策略、向量架构、编码器）以及多数据集基准测试。
"""

import time
import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import DEFAULT_EPOCHS, DEFAULT_REPETITIONS, DEFAULT_STRATEGY, DEFAULT_THRESHOLD, \
    DEFAULT_TRAIN_FRACTION, ENCODERS, SWEEP_AXES, STRATEGIES, CENTRALITIES
from errors import ConfigurationError, ExperimentError
from dataset.graph_data import Dataset, stratified_split
from hdc.encoders import EncoderConfig, check_dataset_compatible, encode_graph
from hdc.learner import AssociativeMemory, predict, score_binary, train
from hdc.vsa_core import largest_square_at_most
from experiment.metrics import accuracy, auc
from utils.concurrent_processor import get_concurrent_processor
from utils.settings import log_message, now_timestamp
from version import __version__

logger = logging.getLogger('hdgraph.eval_harness')

# 扫描轴别名
_AXIS_ALIASES = {
    'dims': 'dimensions',
    'd': 'dimensions',
    't': 'threshold',
    'vsabackend': 'vsa',
    'backend': 'vsa'
}

METRICS = ['auc', 'accuracy', 'train_ms_per_sample', 'infer_ms_per_sample']


@dataclass(frozen=True)
class ExperimentConfig:
    """实验配置

    Attributes:
        dataset: 数据集名称
        encoder: 编码器配置（含向量架构、维度）
        strategy: 训练策略
        threshold: RefineHD 阈值系数
        seeds: 每次重复使用的种子
        repetitions: 重复次数，必须等于 len(seeds)
        train_fraction: 训练集比例
        timing: 是否记录耗时
        epochs: 训练轮数
    """
    dataset: str
    encoder: EncoderConfig = field(default_factory=EncoderConfig)
    strategy: str = DEFAULT_STRATEGY
    threshold: float = DEFAULT_THRESHOLD
    seeds: Tuple[int, ...] = tuple(range(DEFAULT_REPETITIONS))
    repetitions: Optional[int] = None
    train_fraction: float = DEFAULT_TRAIN_FRACTION
    timing: bool = True
    epochs: int = DEFAULT_EPOCHS

    def __post_init__(self):
        object.__setattr__(self, 'seeds', tuple(int(s) for s in self.seeds))
        if self.repetitions is None:
            object.__setattr__(self, 'repetitions', len(self.seeds))
        if self.repetitions < 1 or self.repetitions != len(self.seeds):
            raise ConfigurationError(
                f"重复次数 {self.repetitions} 必须 ≥ 1 且等于种子数量 {len(self.seeds)}")
        if self.strategy not in STRATEGIES:
            raise ConfigurationError(f"未知的训练策略: {self.strategy}，可选: {STRATEGIES}")
        if self.strategy == 'refinehd' and not self.threshold > 0:
            raise ConfigurationError(f"RefineHD 阈值系数必须 > 0，当前为 {self.threshold}")
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigurationError(f"train_fraction 必须在 (0, 1) 内，当前为 {self.train_fraction}")
        if self.epochs < 1:
            raise ConfigurationError(f"epochs 必须 ≥ 1，当前为 {self.epochs}")

    @property
    def dimensions(self) -> int:
        return self.encoder.dimensions

    @property
    def backend(self) -> str:
        return self.encoder.backend

    def experiment_id(self) -> str:
        parts = [self.dataset, self.encoder.label(), self.encoder.keying, self.backend,
                 self.strategy]
        if self.strategy == 'refinehd':
            parts.append(f"t{self.threshold:g}")
        parts.append(f"d{self.dimensions}")
        return '-'.join(parts)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'dataset': self.dataset,
            'encoder': self.encoder.to_dict(),
            'strategy': self.strategy,
            'threshold': self.threshold,
            'dimensions': self.dimensions,
            'seeds': list(self.seeds),
            'repetitions': self.repetitions,
            'train_fraction': self.train_fraction,
            'timing': self.timing,
            'epochs': self.epochs
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ExperimentConfig':
        enc = data['encoder']
        encoder = EncoderConfig(kind=enc['kind'], keying=enc['keying'],
                                centrality=enc.get('centrality'), backend=enc['backend'],
                                dimensions=enc['dimensions'], seed=enc.get('seed', 0))
        return cls(dataset=data['dataset'], encoder=encoder, strategy=data['strategy'],
                   threshold=data['threshold'], seeds=tuple(data['seeds']),
                   repetitions=data['repetitions'], train_fraction=data['train_fraction'],
                   timing=data['timing'], epochs=data['epochs'])


@dataclass
class RepetitionResult:
    """单次重复的结果，auc 在 [0, 1] 内（多于两个类别时为 None）"""
    seed: int
    auc: Optional[float]
    accuracy: float
    train_ms_per_sample: Optional[float]
    infer_ms_per_sample: Optional[float]
    train_size: int
    test_size: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            'seed': self.seed,
            'auc': self.auc,
            'accuracy': self.accuracy,
            'train_ms_per_sample': self.train_ms_per_sample,
            'infer_ms_per_sample': self.infer_ms_per_sample,
            'train_size': self.train_size,
            'test_size': self.test_size
        }


@dataclass
class ExperimentResult:
    """一个实验（一组配置 × 全部种子）的结果

    Attributes:
        experiment_id: 实验标识
        config: 实验配置
        repetitions: 每次重复的结果
        aggregate: 指标 -> {'mean', 'std'}（总体标准差）
        started_at / finished_at: 运行时间戳
        version: 软件版本
    """
    experiment_id: str
    config: ExperimentConfig
    repetitions: List[RepetitionResult]
    aggregate: Dict[str, Dict[str, Optional[float]]]
    started_at: str = ''
    finished_at: str = ''
    version: str = __version__

    def to_dict(self) -> Dict[str, Any]:
        return {
            'experiment_id': self.experiment_id,
            'config': self.config.to_dict(),
            'repetitions': [r.to_dict() for r in self.repetitions],
            'aggregate': self.aggregate,
            'started_at': self.started_at,
            'finished_at': self.finished_at,
            'version': self.version
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ExperimentResult':
        return cls(
            experiment_id=data['experiment_id'],
            config=ExperimentConfig.from_dict(data['config']),
            repetitions=[RepetitionResult(**r) for r in data['repetitions']],
            aggregate=data['aggregate'],
            started_at=data.get('started_at', ''),
            finished_at=data.get('finished_at', ''),
            version=data.get('version', '')
        )


def aggregate_repetitions(repetitions: Sequence[RepetitionResult]) -> Dict[str, Dict[str, Optional[float]]]:
    """各指标的均值与总体标准差（ddof=0），缺失值不参与统计"""
    summary = {}
    for metric in METRICS:
        values = [getattr(r, metric) for r in repetitions if getattr(r, metric) is not None]
        if values:
            array = np.asarray(values, dtype=np.float64)
            summary[metric] = {'mean': float(array.mean()), 'std': float(array.std(ddof=0))}
        else:
            summary[metric] = {'mean': None, 'std': None}
    return summary


def training_order(seed: int, count: int) -> List[int]:
    """训练样本顺序：与划分独立的种子化打乱，避免按类别成块输入"""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed) & 0xFFFFFFFF, 1])))
    return [int(i) for i in rng.permutation(count)]


def _run_repetition(config: ExperimentConfig, dataset: Dataset, seed: int,
                    processor) -> RepetitionResult:
    split = stratified_split(dataset, config.train_fraction, seed)
    if not split.train_indices or not split.test_indices:
        raise ConfigurationError(
            f"划分后训练集 ({len(split.train_indices)}) 或测试集 ({len(split.test_indices)}) 为空")
    codebook = config.encoder.make_codebook(seed)
    memory = AssociativeMemory(config.backend, config.dimensions, config.strategy,
                               config.threshold, class_values=dataset.class_values)

    train_graphs = [dataset.graphs[i] for i in split.train_indices]
    order = training_order(seed, len(train_graphs))
    train_graphs = [train_graphs[i] for i in order]

    def encode(graph):
        return encode_graph(config.encoder, codebook, graph)

    start = time.perf_counter()
    train_vectors = processor.map_ordered(encode, train_graphs)
    train(memory, zip(train_vectors, (g.label for g in train_graphs)), epochs=config.epochs)
    train_seconds = time.perf_counter() - start

    test_graphs = [dataset.graphs[i] for i in split.test_indices]
    binary = len(dataset.class_values) == 2
    negative, positive = (dataset.class_values[0], dataset.class_values[-1]) if binary else (None, None)

    def infer(graph):
        vector = encode(graph)
        prediction = predict(memory, vector)
        score = score_binary(memory, vector, positive, negative) if binary else None
        return prediction.label, score

    start = time.perf_counter()
    outcomes = processor.map_ordered(infer, test_graphs)
    infer_seconds = time.perf_counter() - start

    actual = [g.label for g in test_graphs]
    predicted = [label for label, _ in outcomes]
    area = None
    if binary:
        area = auc([score for _, score in outcomes], [y == positive for y in actual])

    return RepetitionResult(
        seed=seed,
        auc=area,
        accuracy=accuracy(predicted, actual),
        train_ms_per_sample=train_seconds * 1000.0 / len(train_graphs) if config.timing else None,
        infer_ms_per_sample=infer_seconds * 1000.0 / len(test_graphs) if config.timing else None,
        train_size=len(train_graphs),
        test_size=len(test_graphs)
    )


def run_experiment(config: ExperimentConfig, dataset: Dataset,
                   max_workers: Optional[int] = None,
                   experiment_id: Optional[str] = None) -> ExperimentResult:
    """按配置运行全部重复

    Args:
        config: 实验配置
        dataset: 已解析的数据集
        max_workers: 编码/推理线程数，None 时读取配置
        experiment_id: 实验标识，默认由配置生成

    Raises:
        ConfigurationError: 配置与数据集不兼容（在任何重复开始之前）
        ExperimentError: 某次重复失败，携带种子
    """
    check_dataset_compatible(config.encoder, dataset.graphs)
    processor = get_concurrent_processor(max_workers)
    experiment_id = experiment_id or config.experiment_id()
    started_at = now_timestamp()
    log_message('info', f"🧪 开始实验 {experiment_id}：{len(dataset)} 个图，{config.repetitions} 次重复")

    repetitions = []
    for index, seed in enumerate(config.seeds, start=1):
        try:
            result = _run_repetition(config, dataset, seed, processor)
        except Exception as e:
            log_message('error', f"❌ 实验 {experiment_id} 种子 {seed} 失败: {e}")
            raise ExperimentError(seed, e) from e
        repetitions.append(result)
        auc_text = f"{result.auc * 100:.2f}" if result.auc is not None else '-'
        log_message('info', f"📈 [{index}/{config.repetitions}] 种子 {seed}: AUC {auc_text}，"
                            f"准确率 {result.accuracy * 100:.2f}%")

    aggregate = aggregate_repetitions(repetitions)
    mean_auc = aggregate['auc']['mean']
    if mean_auc is not None:
        log_message('info', f"✅ 实验 {experiment_id} 完成：平均 AUC {mean_auc * 100:.2f} "
                            f"± {aggregate['auc']['std'] * 100:.2f}")
    else:
        log_message('info', f"✅ 实验 {experiment_id} 完成")
    return ExperimentResult(
        experiment_id=experiment_id,
        config=config,
        repetitions=repetitions,
        aggregate=aggregate,
        started_at=started_at,
        finished_at=now_timestamp()
    )


# ===== 扫描 =====

def normalize_axis(axis: str) -> str:
    name = axis.strip().lower().replace('-', '').replace('_', '')
    name = _AXIS_ALIASES.get(name, name)
    if name not in SWEEP_AXES:
        raise ConfigurationError(f"未知的扫描轴: {axis}，可选: {SWEEP_AXES}")
    return name


def parse_encoder_value(value: str) -> Tuple[str, Optional[str]]:
    """解析编码器取值，例如 star / gayler_levy / graphhd:pagerank"""
    kind, _, centrality = str(value).strip().partition(':')
    if kind not in ENCODERS:
        raise ConfigurationError(f"未知的编码器: {value}，可选: {ENCODERS}")
    if kind == 'graphhd':
        centrality = centrality or CENTRALITIES[0]
        if centrality not in CENTRALITIES:
            raise ConfigurationError(f"未知的中心性指标: {centrality}，可选: {CENTRALITIES}")
        return kind, centrality
    if centrality:
        raise ConfigurationError(f"编码器 {kind} 不接受中心性参数: {value}")
    return kind, None


def apply_axis(template: ExperimentConfig, axis: str, value) -> ExperimentConfig:
    """把扫描轴上的一个取值应用到配置模板，返回新配置（构造时完成校验）"""
    axis = normalize_axis(axis)
    encoder = template.encoder
    try:
        if axis == 'dimensions':
            return replace(template, encoder=replace(encoder, dimensions=int(value)))
        if axis == 'threshold':
            if template.strategy != 'refinehd':
                raise ConfigurationError("阈值扫描只适用于 refinehd 策略")
            return replace(template, threshold=float(value))
        if axis == 'strategy':
            return replace(template, strategy=str(value).strip().lower())
        if axis == 'vsa':
            backend = str(value).strip().lower()
            dimensions = encoder.dimensions
            if backend == 'vtb':
                dimensions = largest_square_at_most(dimensions)
            return replace(template, encoder=replace(encoder, backend=backend, dimensions=dimensions))
        kind, centrality = parse_encoder_value(value)
        return replace(template, encoder=replace(encoder, kind=kind,
                                                 centrality=centrality or encoder.centrality))
    except ConfigurationError:
        raise
    except (TypeError, ValueError) as e:
        raise ConfigurationError(f"扫描轴 {axis} 的取值非法: {value!r} ({e})") from e


def sweep(template: ExperimentConfig, axis: str, values: Sequence, dataset: Dataset,
          max_workers: Optional[int] = None) -> List[ExperimentResult]:
    """沿一个轴扫描，所有取值共用相同种子（配对比较）

    所有取值在运行前全部校验，任何非法值都不会启动实验。

    Raises:
        ConfigurationError: 轴或取值非法
    """
    axis = normalize_axis(axis)
    if not values:
        raise ConfigurationError(f"扫描轴 {axis} 的取值列表为空")
    configs = [apply_axis(template, axis, value) for value in values]
    for config in configs:
        check_dataset_compatible(config.encoder, dataset.graphs)

    log_message('info', f"🔁 开始扫描 {axis}：{len(configs)} 个取值 {list(values)}")
    results = []
    for value, config in zip(values, configs):
        results.append(run_experiment(config, dataset, max_workers=max_workers,
                                      experiment_id=f"{config.experiment_id()}@{axis}={value}"))
    return results


# ===== 多数据集基准 =====

def run_benchmark(template: ExperimentConfig, datasets: Sequence[Dataset],
                  max_workers: Optional[int] = None) -> List[ExperimentResult]:
    """在多个数据集上运行同一配置"""
    results = []
    for dataset in datasets:
        config = replace(template, dataset=dataset.name)
        results.append(run_experiment(config, dataset, max_workers=max_workers))
    return results


def summarize(results: Sequence[ExperimentResult]) -> List[Dict[str, Any]]:
    """按配置（不含数据集）分组，给出跨数据集的平均值

    Returns:
        List[Dict]: 每组一行，含 datasets 数量与各指标的均值/标准差
    """
    groups: Dict[Tuple, List[ExperimentResult]] = {}
    for result in results:
        c = result.config
        key = (c.encoder.label(), c.encoder.keying, c.backend, c.strategy,
               c.threshold if c.strategy == 'refinehd' else None, c.dimensions)
        groups.setdefault(key, []).append(result)

    rows = []
    for key, members in groups.items():
        encoder, keying, backend, strategy, threshold, dimensions = key
        row = {
            'encoder': encoder,
            'keying': keying,
            'backend': backend,
            'strategy': strategy,
            'threshold': threshold,
            'dimensions': dimensions,
            'datasets': [m.config.dataset for m in members]
        }
        for metric in METRICS:
            means = [m.aggregate[metric]['mean'] for m in members
                     if m.aggregate[metric]['mean'] is not None]
            if means:
                row[metric] = {'mean': float(np.mean(means)), 'std': float(np.std(means))}
            else:
                row[metric] = {'mean': None, 'std': None}
        rows.append(row)
    return rows
