#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
图与数据集模型

负责 TUDataset 文本格式的解析与写出、分层训练/测试划分。
TUDataset 目录包含：
1. {name}_A.txt              每行一条边，逗号分隔的 1 起始全局节点编号
2. {name}_graph_indicator.txt 第 i 行为全局节点 i 所属图的 1 起始编号
3. {name}_graph_labels.txt   每行一个图标签
4. {name}_node_labels.txt    （可选）每行一个节点标签
5. {name}_edge_labels.txt    （可选）与 A 文件逐行对应的边标签
"""

import os
import math
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from config import ANTICANCER_DATASETS
from errors import ConfigurationError, DomainError, ParseError

logger = logging.getLogger('hdgraph.graph_data')

MANDATORY_SUFFIXES = ['_A.txt', '_graph_indicator.txt', '_graph_labels.txt']
OPTIONAL_SUFFIXES = ['_node_labels.txt', '_edge_labels.txt']


@dataclass(frozen=True)
class Graph:
    """单个图样本（无向简单图）

    Attributes:
        num_nodes: 节点数
        edges: 无向边列表，(u, v) 且 u < v，0 起始，按字典序排列
        node_labels: 可选的节点整数标签，长度等于 num_nodes
        label: 图的类别标签（预测输入可为 None）
        ordinal: 图在数据集中的 0 起始序号
        edge_labels: 可选的边标签，键为无向边
    """
    num_nodes: int
    edges: Tuple[Tuple[int, int], ...]
    node_labels: Optional[Tuple[int, ...]] = None
    label: Optional[int] = None
    ordinal: int = 0
    edge_labels: Optional[Dict[Tuple[int, int], int]] = field(default=None, compare=False)

    def __post_init__(self):
        seen = set()
        for u, v in self.edges:
            if not (0 <= u < self.num_nodes and 0 <= v < self.num_nodes):
                raise DomainError(f"边 ({u}, {v}) 超出节点范围 [0, {self.num_nodes})")
            if u == v:
                raise DomainError(f"图中不允许自环: ({u}, {v})")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise DomainError(f"重复的无向边: {key}")
            seen.add(key)
        if self.node_labels is not None and len(self.node_labels) != self.num_nodes:
            raise DomainError(
                f"节点标签数量 {len(self.node_labels)} 与节点数 {self.num_nodes} 不一致")

    @classmethod
    def build(cls, num_nodes, edges, node_labels=None, label=None, ordinal=0, edge_labels=None):
        """规范化构造：去掉自环与重复边，边按 (小, 大) 排序"""
        normalized = sorted({(min(u, v), max(u, v)) for u, v in edges if u != v})
        return cls(
            num_nodes=int(num_nodes),
            edges=tuple(normalized),
            node_labels=tuple(int(x) for x in node_labels) if node_labels is not None else None,
            label=None if label is None else int(label),
            ordinal=int(ordinal),
            edge_labels=edge_labels
        )

    def neighbors(self) -> List[List[int]]:
        """邻接表，每个节点的邻居按升序排列"""
        adjacency = [[] for _ in range(self.num_nodes)]
        for u, v in self.edges:
            adjacency[u].append(v)
            adjacency[v].append(u)
        for row in adjacency:
            row.sort()
        return adjacency

    def degrees(self) -> List[int]:
        degree = [0] * self.num_nodes
        for u, v in self.edges:
            degree[u] += 1
            degree[v] += 1
        return degree

    def relabel(self, permutation: List[int]) -> 'Graph':
        """按 permutation（旧编号 -> 新编号）重排节点，标签随节点移动"""
        if sorted(permutation) != list(range(self.num_nodes)):
            raise DomainError("permutation 必须是 0..n-1 的排列")
        labels = None
        if self.node_labels is not None:
            moved = [0] * self.num_nodes
            for old, new in enumerate(permutation):
                moved[new] = self.node_labels[old]
            labels = moved
        edges = [(permutation[u], permutation[v]) for u, v in self.edges]
        return Graph.build(self.num_nodes, edges, labels, self.label, self.ordinal)


@dataclass(frozen=True)
class Dataset:
    """图数据集

    Attributes:
        name: 数据集名称
        graphs: 图列表
        class_values: 排序后的不同类别标签
    """
    name: str
    graphs: Tuple[Graph, ...]
    class_values: Tuple[int, ...]

    def __post_init__(self):
        if not self.graphs:
            raise DomainError(f"数据集 {self.name} 为空")
        labels = {g.label for g in self.graphs if g.label is not None}
        missing = labels - set(self.class_values)
        if missing:
            raise DomainError(f"图标签 {sorted(missing)} 不在类别集合 {self.class_values} 中")

    def __len__(self):
        return len(self.graphs)

    @property
    def labels(self) -> List[Optional[int]]:
        return [g.label for g in self.graphs]

    @property
    def is_labeled(self) -> bool:
        return all(g.node_labels is not None for g in self.graphs)

    def class_counts(self) -> Dict[int, int]:
        counts = {c: 0 for c in self.class_values}
        for g in self.graphs:
            if g.label is not None:
                counts[g.label] += 1
        return counts

    @classmethod
    def from_graphs(cls, name, graphs):
        graphs = tuple(graphs)
        values = tuple(sorted({g.label for g in graphs if g.label is not None}))
        return cls(name=name, graphs=graphs, class_values=values)


@dataclass(frozen=True)
class Split:
    """训练/测试划分

    Attributes:
        train_indices: 训练集图序号（升序）
        test_indices: 测试集图序号（升序）
        seed: 划分种子
        train_fraction: 训练比例
    """
    train_indices: Tuple[int, ...]
    test_indices: Tuple[int, ...]
    seed: int
    train_fraction: float


# ===== 解析 =====

def _dataset_file(root, name, suffix):
    return os.path.join(root, f"{name}{suffix}")


def _read_lines(path):
    """读取文件的非空行，兼容 LF 与 CRLF，返回 (行号, 内容) 列表"""
    with open(path, 'r', encoding='utf-8') as f:
        text = f.read()
    rows = []
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if line:
            rows.append((number, line))
    return rows


def _parse_int(token, path, line_number):
    try:
        return int(token.strip())
    except ValueError:
        try:
            value = float(token.strip())
        except ValueError:
            raise ParseError(f"非整数记号: {token.strip()!r}", path, line_number) from None
        if not value.is_integer():
            raise ParseError(f"非整数记号: {token.strip()!r}", path, line_number)
        return int(value)


def _read_int_column(path):
    return [(_parse_int(line, path, number), number) for number, line in _read_lines(path)]


def parse_tudataset(root: str, name: str, require_labels: bool = True,
                    allow_empty: bool = False) -> Dataset:
    """解析 TUDataset 目录

    Args:
        root: 数据集文件所在目录
        name: 数据集名称（文件名前缀）
        require_labels: 是否要求图标签文件（预测输入可不带标签）
        allow_empty: 是否保留 0 节点的图（仅供预测时逐图报错）

    Returns:
        Dataset: 0 起始节点编号的数据集

    Raises:
        ParseError: 缺少必需文件、节点越界或非整数记号
    """
    mandatory = MANDATORY_SUFFIXES if require_labels else MANDATORY_SUFFIXES[:2]
    for suffix in mandatory:
        path = _dataset_file(root, name, suffix)
        if not os.path.isfile(path):
            raise ParseError(f"缺少必需文件 {name}{suffix}", path)

    indicator_path = _dataset_file(root, name, '_graph_indicator.txt')
    indicator = _read_int_column(indicator_path)
    num_global_nodes = len(indicator)

    labels_path = _dataset_file(root, name, '_graph_labels.txt')
    graph_labels = None
    if os.path.isfile(labels_path):
        graph_labels = [value for value, _ in _read_int_column(labels_path)]

    num_graphs = max((g for g, _ in indicator), default=0)
    if graph_labels is not None:
        if len(graph_labels) < num_graphs:
            raise ParseError(
                f"图标签数量 {len(graph_labels)} 少于指示文件中的图数量 {num_graphs}", labels_path)
        num_graphs = len(graph_labels)

    # 全局节点 -> (图序号, 图内序号)
    graph_of_node = []
    local_index = []
    nodes_per_graph = [0] * num_graphs
    for value, number in indicator:
        if value < 1 or value > num_graphs:
            raise ParseError(f"图编号 {value} 超出范围 [1, {num_graphs}]", indicator_path, number)
        gid = value - 1
        graph_of_node.append(gid)
        local_index.append(nodes_per_graph[gid])
        nodes_per_graph[gid] += 1

    node_labels_path = _dataset_file(root, name, '_node_labels.txt')
    node_labels = None
    if os.path.isfile(node_labels_path):
        rows = _read_int_column(node_labels_path)
        if len(rows) != num_global_nodes:
            raise ParseError(
                f"节点标签数量 {len(rows)} 与节点数量 {num_global_nodes} 不一致", node_labels_path)
        node_labels = [value for value, _ in rows]

    edge_labels_path = _dataset_file(root, name, '_edge_labels.txt')
    edge_label_rows = None
    if os.path.isfile(edge_labels_path):
        edge_label_rows = [value for value, _ in _read_int_column(edge_labels_path)]

    edges_path = _dataset_file(root, name, '_A.txt')
    edges_per_graph: List[set] = [set() for _ in range(num_graphs)]
    edge_labels_per_graph: List[Dict[Tuple[int, int], int]] = [dict() for _ in range(num_graphs)]
    self_loops = 0
    for row_index, (number, line) in enumerate(_read_lines(edges_path)):
        parts = line.split(',')
        if len(parts) != 2:
            raise ParseError(f"边应为两个逗号分隔的编号: {line!r}", edges_path, number)
        u = _parse_int(parts[0], edges_path, number)
        v = _parse_int(parts[1], edges_path, number)
        for node in (u, v):
            if node < 1 or node > num_global_nodes:
                raise ParseError(f"节点编号 {node} 超出范围 [1, {num_global_nodes}]",
                                 edges_path, number)
        gu, gv = graph_of_node[u - 1], graph_of_node[v - 1]
        if gu != gv:
            raise ParseError(f"边 ({u}, {v}) 跨越了图 {gu + 1} 和 {gv + 1}", edges_path, number)
        if u == v:
            self_loops += 1
            continue
        a, b = local_index[u - 1], local_index[v - 1]
        key = (min(a, b), max(a, b))
        edges_per_graph[gu].add(key)
        if edge_label_rows is not None and row_index < len(edge_label_rows):
            edge_labels_per_graph[gu].setdefault(key, edge_label_rows[row_index])

    if self_loops:
        logger.warning(f"⚠️ 数据集 {name} 中丢弃了 {self_loops} 条自环")

    # 按图切分节点标签
    labels_per_graph: List[List[int]] = [[] for _ in range(num_graphs)]
    if node_labels is not None:
        for global_index, gid in enumerate(graph_of_node):
            labels_per_graph[gid].append(node_labels[global_index])

    graphs = []
    for gid in range(num_graphs):
        if nodes_per_graph[gid] == 0 and not allow_empty:
            raise ParseError(f"图 {gid + 1} 没有任何节点", indicator_path)
        graphs.append(Graph(
            num_nodes=nodes_per_graph[gid],
            edges=tuple(sorted(edges_per_graph[gid])),
            node_labels=tuple(labels_per_graph[gid]) if node_labels is not None else None,
            label=graph_labels[gid] if graph_labels is not None else None,
            ordinal=gid,
            edge_labels=edge_labels_per_graph[gid] if edge_label_rows is not None else None
        ))

    if not graphs:
        raise ParseError(f"数据集 {name} 中没有任何图", indicator_path)

    dataset = Dataset.from_graphs(name, graphs)

    expected = ANTICANCER_DATASETS.get(name)
    if expected and expected[0] != len(dataset):
        logger.warning(f"⚠️ 数据集 {name} 解析得到 {len(dataset)} 个图，目录记录为 {expected[0]}")

    logger.info(f"📊 数据集 {name} 解析完成: {len(dataset)} 个图，"
                f"{num_global_nodes} 个节点，类别 {list(dataset.class_values)}")
    return dataset


def write_tudataset(dataset: Dataset, root: str) -> str:
    """把数据集写成 TUDataset 文本文件（每条无向边写两个方向）

    Returns:
        str: 写出的目录
    """
    os.makedirs(root, exist_ok=True)
    name = dataset.name
    edges_lines, indicator_lines, label_lines, node_label_lines = [], [], [], []
    offset = 0
    for gid, graph in enumerate(dataset.graphs):
        indicator_lines.extend([str(gid + 1)] * graph.num_nodes)
        label_lines.append(str(graph.label))
        if graph.node_labels is not None:
            node_label_lines.extend(str(x) for x in graph.node_labels)
        for u, v in graph.edges:
            edges_lines.append(f"{u + offset + 1}, {v + offset + 1}")
            edges_lines.append(f"{v + offset + 1}, {u + offset + 1}")
        offset += graph.num_nodes

    def _write(suffix, lines):
        with open(_dataset_file(root, name, suffix), 'w', encoding='utf-8', newline='\n') as f:
            f.write('\n'.join(lines) + ('\n' if lines else ''))

    _write('_A.txt', edges_lines)
    _write('_graph_indicator.txt', indicator_lines)
    if all(g.label is not None for g in dataset.graphs):
        _write('_graph_labels.txt', label_lines)
    if dataset.is_labeled:
        _write('_node_labels.txt', node_label_lines)
    return root


# ===== 划分 =====

def stratified_split(dataset: Dataset, train_fraction: float, seed: int) -> Split:
    """分层划分：每个类别用种子化的 PCG64 打乱，前 ⌈fraction·n_c⌉ 个进入训练集

    Raises:
        ConfigurationError: train_fraction 不在 (0, 1) 内
    """
    if not 0.0 < train_fraction < 1.0:
        raise ConfigurationError(f"train_fraction 必须在 (0, 1) 内，当前为 {train_fraction}")

    rng = np.random.Generator(np.random.PCG64(int(seed) & 0xFFFFFFFFFFFFFFFF))
    train, test = [], []
    for value in dataset.class_values:
        members = [i for i, g in enumerate(dataset.graphs) if g.label == value]
        if len(members) == 1:
            logger.warning(f"⚠️ 类别 {value} 只有 1 个样本，放入训练集")
        order = rng.permutation(len(members))
        shuffled = [members[i] for i in order]
        cut = min(len(members), math.ceil(train_fraction * len(members) - 1e-9))
        train.extend(shuffled[:cut])
        test.extend(shuffled[cut:])

    return Split(
        train_indices=tuple(sorted(train)),
        test_indices=tuple(sorted(test)),
        seed=int(seed),
        train_fraction=float(train_fraction)
    )
