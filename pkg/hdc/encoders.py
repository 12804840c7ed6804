#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
图编码器

把一个图映射为单个超维向量：
- star: 星型子图直方图，每个节点与其全部邻居绑定后叠加
- gayler_levy: 每条边绑定两端节点向量后叠加
- graphhd: 按中心性排名为节点取向量，边编码同 gayler_levy

中心性指标只支持 PageRank 与度中心性。
"""

import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
import scipy.sparse as sp

from config import CENTRALITIES, DEFAULT_CENTRALITY, DEFAULT_DIMENSIONS, DEFAULT_ENCODER, \
    DEFAULT_KEYING, DEFAULT_SEED, DEFAULT_VSA, ENCODERS, KEYINGS
from errors import ConfigurationError, DomainError
from dataset.graph_data import Graph
from hdc.vsa_core import Codebook, Hypervector, bind, bundle_all, validate_dimensions

logger = logging.getLogger('hdgraph.encoders')

_pagerank_warned = False


@dataclass(frozen=True)
class EncoderConfig:
    """编码器配置

    Attributes:
        kind: star / gayler_levy / graphhd
        keying: node_label / degree / node_id_random（φ 的原子参数）
        centrality: pagerank / degree，仅 graphhd 使用
        backend: 向量架构
        dimensions: 维度
        seed: 码本种子
    """
    kind: str = DEFAULT_ENCODER
    keying: str = DEFAULT_KEYING
    centrality: Optional[str] = DEFAULT_CENTRALITY
    backend: str = DEFAULT_VSA
    dimensions: int = DEFAULT_DIMENSIONS
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.kind not in ENCODERS:
            raise ConfigurationError(f"未知的编码器: {self.kind}，可选: {ENCODERS}")
        if self.keying not in KEYINGS:
            raise ConfigurationError(f"未知的节点键控方式: {self.keying}，可选: {KEYINGS}")
        if self.kind == 'graphhd' and self.centrality not in CENTRALITIES:
            raise ConfigurationError(f"graphhd 编码器需要中心性指标，可选: {CENTRALITIES}")
        if self.kind != 'graphhd':
            object.__setattr__(self, 'centrality', None)
        object.__setattr__(self, 'dimensions', validate_dimensions(self.backend, self.dimensions))
        object.__setattr__(self, 'seed', int(self.seed))

    def label(self) -> str:
        """报告中使用的编码器名称"""
        if self.kind == 'graphhd':
            return f"graphhd:{self.centrality}"
        return self.kind

    def to_dict(self):
        return {
            'kind': self.kind,
            'keying': self.keying,
            'centrality': self.centrality,
            'backend': self.backend,
            'dimensions': self.dimensions,
            'seed': self.seed
        }

    def make_codebook(self, seed: Optional[int] = None) -> Codebook:
        return Codebook(self.seed if seed is None else seed, self.backend, self.dimensions)


def _check_graph(graph: Graph):
    if graph.num_nodes == 0:
        raise DomainError(f"图 {graph.ordinal} 为空图，无法编码")


def phi(codebook: Codebook, keying: str, graph: Graph, v: int) -> Hypervector:
    """节点 v 的原子向量 φ(v)

    Raises:
        ConfigurationError: node_label 键控作用于无节点标签的图
    """
    if not 0 <= v < graph.num_nodes:
        raise DomainError(f"节点 {v} 不在图 {graph.ordinal} 中")
    if keying == 'node_label':
        if graph.node_labels is None:
            raise ConfigurationError(f"图 {graph.ordinal} 没有节点标签，无法使用 node_label 键控")
        return codebook.random_hv(f"L:{graph.node_labels[v]}")
    if keying == 'degree':
        degree = sum(1 for u, w in graph.edges if u == v or w == v)
        return codebook.random_hv(f"D:{degree}")
    if keying == 'node_id_random':
        return codebook.random_hv(f"G:{graph.ordinal}:N:{v}", memoize=False)
    raise ConfigurationError(f"未知的节点键控方式: {keying}")


def _node_vectors(codebook: Codebook, keying: str, graph: Graph) -> List[Hypervector]:
    """一次性计算所有节点的 φ(v)，度键控只遍历一次边表"""
    if keying == 'degree':
        return [codebook.random_hv(f"D:{d}") for d in graph.degrees()]
    return [phi(codebook, keying, graph, v) for v in range(graph.num_nodes)]


def encode_star(config: EncoderConfig, codebook: Codebook, graph: Graph) -> Hypervector:
    """星型子图编码

    H_v = φ(v) 依次与每个邻居 φ(u) 绑定（邻居按升序，VTB 下顺序属于约定），
    H_g = 所有 H_v 的叠加；孤立节点贡献未绑定的 φ(v)。
    """
    _check_graph(graph)
    vectors = _node_vectors(codebook, config.keying, graph)
    stars = []
    for v, neighbors in enumerate(graph.neighbors()):
        star = vectors[v]
        for u in neighbors:
            star = bind(star, vectors[u])
        stars.append(star)
    return bundle_all(stars, codebook.backend, codebook.dimensions)


def _encode_edges(codebook: Codebook, graph: Graph, vectors: List[Hypervector]) -> Hypervector:
    if not graph.edges:
        return bundle_all(vectors, codebook.backend, codebook.dimensions)
    return bundle_all((bind(vectors[u], vectors[v]) for u, v in graph.edges),
                      codebook.backend, codebook.dimensions)


def encode_gayler_levy(codebook: Codebook, graph: Graph) -> Hypervector:
    """Gayler & Levy 编码：节点取随机身份向量，每条边贡献 bind(φ(u), φ(v))

    无边图退化为节点向量的叠加。
    """
    _check_graph(graph)
    vectors = _node_vectors(codebook, 'node_id_random', graph)
    return _encode_edges(codebook, graph, vectors)


def degree_centrality(graph: Graph) -> np.ndarray:
    """度中心性 deg(v) / (n - 1)，单节点图为 1.0"""
    _check_graph(graph)
    if graph.num_nodes == 1:
        return np.ones(1)
    return np.asarray(graph.degrees(), dtype=np.float64) / (graph.num_nodes - 1)


def pagerank(graph: Graph, damping: float = 0.85, tol: float = 1e-8,
             max_iter: int = 100) -> np.ndarray:
    """无向图 PageRank（幂迭代，均匀跳转）

    转移矩阵按列随机，孤立节点的质量均匀分配；L1 变化小于 tol 视为收敛。
    超过 max_iter 仍未收敛时记录警告并返回最后一次迭代结果。
    """
    _check_graph(graph)
    n = graph.num_nodes
    if not graph.edges:
        return np.full(n, 1.0 / n)

    rows = [v for u, v in graph.edges] + [u for u, v in graph.edges]
    cols = [u for u, v in graph.edges] + [v for u, v in graph.edges]
    adjacency = sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    out_degree = np.asarray(adjacency.sum(axis=0)).ravel()
    dangling = out_degree == 0
    inverse = np.zeros(n)
    inverse[~dangling] = 1.0 / out_degree[~dangling]
    transition = adjacency @ sp.diags(inverse)

    x = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        previous = x
        dangling_mass = previous[dangling].sum()
        x = damping * (transition @ previous + dangling_mass / n) + (1.0 - damping) / n
        x = x / x.sum()
        if np.abs(x - previous).sum() < tol:
            return x

    # 二部图（如多数分子骨架）收敛较慢，只对首次未收敛发出警告
    global _pagerank_warned
    level = logging.DEBUG if _pagerank_warned else logging.WARNING
    _pagerank_warned = True
    logger.log(level, f"⚠️ PageRank 在 {max_iter} 次迭代内未收敛 (图 {graph.ordinal})，返回最后一次迭代结果")
    return x


def centrality_ranks(graph: Graph, centrality: str) -> List[int]:
    """按中心性降序排名（并列按节点编号升序），返回每个节点的名次"""
    if centrality == 'pagerank':
        scores = pagerank(graph)
    elif centrality == 'degree':
        scores = degree_centrality(graph)
    else:
        raise ConfigurationError(f"未知的中心性指标: {centrality}，可选: {CENTRALITIES}")
    # 消除浮点噪声造成的伪差异，使对称节点严格并列
    rounded = np.round(scores, 12)
    order = sorted(range(graph.num_nodes), key=lambda v: (-rounded[v], v))
    ranks = [0] * graph.num_nodes
    for rank, v in enumerate(order):
        ranks[v] = rank
    return ranks


def encode_graphhd(codebook: Codebook, graph: Graph, centrality: str) -> Hypervector:
    """GraphHD 编码：节点向量为名次记号 "R:<rank>" 的码本向量，边编码同 gayler_levy"""
    _check_graph(graph)
    ranks = centrality_ranks(graph, centrality)
    vectors = [codebook.random_hv(f"R:{rank}") for rank in ranks]
    return _encode_edges(codebook, graph, vectors)


def encode_graph(config: EncoderConfig, codebook: Codebook, graph: Graph) -> Hypervector:
    """按配置选择编码器"""
    if codebook.backend != config.backend or codebook.dimensions != config.dimensions:
        raise ConfigurationError(
            f"码本 ({codebook.backend}, {codebook.dimensions}) 与编码器配置 "
            f"({config.backend}, {config.dimensions}) 不一致")
    if config.kind == 'star':
        return encode_star(config, codebook, graph)
    if config.kind == 'gayler_levy':
        return encode_gayler_levy(codebook, graph)
    return encode_graphhd(codebook, graph, config.centrality)


def check_dataset_compatible(config: EncoderConfig, graphs) -> None:
    """node_label 键控要求所有图都带节点标签

    Raises:
        ConfigurationError: 存在无节点标签的图
    """
    if config.kind == 'star' and config.keying == 'node_label':
        for graph in graphs:
            if graph.node_labels is None:
                raise ConfigurationError(
                    f"图 {graph.ordinal} 没有节点标签，star 编码器的 node_label 键控不可用")
