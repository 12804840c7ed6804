#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
图编码器测试脚本

星型编码与手工展开公式逐位对照，并检查节点重排不变性、基线编码器和中心性
"""

import os
import sys

import numpy as np

# 添加项目根目录到Python路径
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from errors import ConfigurationError, DomainError
from dataset.graph_data import Graph
from hdc.encoders import EncoderConfig, centrality_ranks, degree_centrality, encode_gayler_levy, \
    encode_graph, encode_graphhd, encode_star, pagerank, phi
from hdc.vsa_core import Codebook, similarity

D = 2048


def star_config(keying='node_label', backend='map', dimensions=D, seed=0):
    return EncoderConfig(kind='star', keying=keying, backend=backend, dimensions=dimensions, seed=seed)


def test_star_path_matches_formula():
    """3 节点路径 a-b-c：H = φa⊗φb + φb⊗φa⊗φc + φc⊗φb（逐位相同）"""
    config = star_config()
    codebook = config.make_codebook()
    graph = Graph.build(3, [(0, 1), (1, 2)], node_labels=[10, 20, 30])
    a, b, c = (codebook.random_hv(f"L:{x}").data for x in (10, 20, 30))
    expected = np.zeros(D) + a * b + b * a * c + c * b
    assert np.array_equal(encode_star(config, codebook, graph).data, expected)


def test_star_hub_matches_formula():
    """中心节点 0 连接 3 个叶子"""
    config = star_config()
    codebook = config.make_codebook()
    graph = Graph.build(4, [(0, 1), (0, 2), (0, 3)], node_labels=[1, 2, 3, 4])
    v = [codebook.random_hv(f"L:{x}").data for x in (1, 2, 3, 4)]
    expected = np.zeros(D) + v[0] * v[1] * v[2] * v[3] + v[1] * v[0] + v[2] * v[0] + v[3] * v[0]
    assert np.array_equal(encode_graph(config, codebook, graph).data, expected)


def test_star_isolated_and_single_node():
    """孤立节点贡献未绑定的 φ(v)；单节点图 H = φ(v)"""
    config = star_config()
    codebook = config.make_codebook()
    single = Graph.build(1, [], node_labels=[5])
    assert np.array_equal(encode_star(config, codebook, single).data, codebook.random_hv('L:5').data)

    graph = Graph.build(3, [(0, 1)], node_labels=[1, 2, 3])
    x, y, z = (codebook.random_hv(f"L:{i}").data for i in (1, 2, 3))
    assert np.array_equal(encode_star(config, codebook, graph).data, np.zeros(D) + x * y + y * x + z)


def test_star_permutation_invariance():
    """带标签随机图在节点重排后编码不变（100 个图）"""
    rng = np.random.default_rng(12)
    config = star_config()
    codebook = config.make_codebook()
    for ordinal in range(100):
        n = int(rng.integers(2, 12))
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.3]
        labels = [int(x) for x in rng.integers(0, 4, size=n)]
        graph = Graph.build(n, edges, labels, ordinal=ordinal)
        permutation = [int(x) for x in rng.permutation(n)]
        moved = graph.relabel(permutation)
        assert np.array_equal(encode_star(config, codebook, graph).data,
                              encode_star(config, codebook, moved).data)


def test_star_map_cancellation():
    """MAP：节点的两个邻居标签相同时，其绑定相互抵消，星项退化为 φ(v)"""
    config = star_config()
    codebook = config.make_codebook()
    graph = Graph.build(3, [(0, 1), (1, 2)], node_labels=[5, 7, 5])
    a, b = codebook.random_hv('L:5').data, codebook.random_hv('L:7').data
    encoded = encode_star(config, codebook, graph).data
    assert np.array_equal(encoded, np.zeros(D) + a * b + b + a * b)
    center = encoded - 2 * a * b
    assert np.array_equal(center, b)


def test_star_locality():
    """改变一个节点的标签只影响包含它的星项：cos ≥ 1 - (deg(v)+1)/|V| - 0.1"""
    rng = np.random.default_rng(31)
    config = star_config(dimensions=10000)
    codebook = config.make_codebook()
    for ordinal in range(50):
        n = int(rng.integers(6, 15))
        edges = [(u, w) for u in range(n) for w in range(u + 1, n) if rng.random() < 0.3]
        labels = [int(x) for x in rng.integers(0, 1000, size=n)]
        graph = Graph.build(n, edges, labels, ordinal=ordinal)
        v = int(rng.integers(0, n))
        changed = list(labels)
        changed[v] = 10 ** 6 + ordinal
        moved = Graph.build(n, edges, changed, ordinal=ordinal)

        old = encode_star(config, codebook, graph)
        new = encode_star(config, codebook, moved)
        bound = 1.0 - (graph.degrees()[v] + 1) / n - 0.1
        assert similarity(old, new) >= bound


def test_keying_variants():
    """度键控适用于无标签图；node_label 作用于无标签图报配置错误；节点身份键控按图区分"""
    graph = Graph.build(3, [(0, 1), (1, 2)], ordinal=4)
    degree_config = star_config(keying='degree')
    codebook = degree_config.make_codebook()
    d1, d2 = codebook.random_hv('D:1').data, codebook.random_hv('D:2').data
    assert np.array_equal(encode_star(degree_config, codebook, graph).data,
                          np.zeros(D) + d1 * d2 + d2 * d1 * d1 + d1 * d2)

    try:
        encode_star(star_config(), codebook, graph)
        assert False, "无标签图使用 node_label 键控应该报错"
    except ConfigurationError:
        pass

    random_config = star_config(keying='node_id_random')
    codebook = random_config.make_codebook()
    first = encode_star(random_config, codebook, graph).data
    assert np.array_equal(first, encode_star(random_config, codebook, graph).data)
    other = Graph.build(3, [(0, 1), (1, 2)], ordinal=5)
    assert not np.array_equal(first, encode_star(random_config, codebook, other).data)
    assert np.array_equal(phi(codebook, 'node_id_random', graph, 2).data,
                          codebook.random_hv('G:4:N:2').data)


def test_gayler_levy():
    """Gayler & Levy：边绑定求和；无边图为节点向量之和"""
    codebook = Codebook(3, 'map', D)
    triangle = Graph.build(3, [(0, 1), (0, 2), (1, 2)], ordinal=7)
    n = [codebook.random_hv(f"G:7:N:{v}").data for v in range(3)]
    expected = np.zeros(D) + n[0] * n[1] + n[0] * n[2] + n[1] * n[2]
    assert np.array_equal(encode_gayler_levy(codebook, triangle).data, expected)

    edgeless = Graph.build(2, [], ordinal=8)
    m = [codebook.random_hv(f"G:8:N:{v}").data for v in range(2)]
    assert np.array_equal(encode_gayler_levy(codebook, edgeless).data, np.zeros(D) + m[0] + m[1])


def test_pagerank_and_degree_centrality():
    """PageRank 和为 1，对称节点相等，中心节点最高；度中心性 deg/(n-1)"""
    hub = Graph.build(5, [(0, v) for v in range(1, 5)])
    scores = pagerank(hub)
    assert abs(scores.sum() - 1.0) < 1e-9
    assert scores[0] == max(scores)
    assert np.allclose(scores[1:], scores[1])

    isolated = Graph.build(3, [])
    assert np.allclose(pagerank(isolated), 1.0 / 3)

    assert np.allclose(degree_centrality(hub), [1.0, 0.25, 0.25, 0.25, 0.25])
    assert np.allclose(degree_centrality(Graph.build(1, [])), [1.0])

    # 并列按节点编号升序
    assert centrality_ranks(hub, 'pagerank') == [0, 1, 2, 3, 4]
    path = Graph.build(3, [(0, 1), (1, 2)])
    assert centrality_ranks(path, 'degree') == [1, 0, 2]


def test_pagerank_reference_values():
    """4 环全部为 0.25；单节点为 1.0；3 节点路径与 Google 矩阵特征向量一致"""
    cycle = Graph.build(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    assert np.allclose(pagerank(cycle), 0.25, atol=1e-9)
    assert centrality_ranks(cycle, 'pagerank') == [0, 1, 2, 3]
    assert np.allclose(pagerank(Graph.build(1, [])), [1.0])

    path = Graph.build(3, [(0, 1), (1, 2)])
    scores = pagerank(path)
    damping = 0.85
    transition = np.array([[0.0, 0.5, 0.0],
                           [1.0, 0.0, 1.0],
                           [0.0, 0.5, 0.0]])
    google = damping * transition + (1.0 - damping) / 3
    values, vectors = np.linalg.eig(google)
    stationary = np.real(vectors[:, np.argmin(np.abs(values - 1.0))])
    stationary = stationary / stationary.sum()
    assert np.allclose(scores, stationary, atol=1e-6)
    assert abs(scores[0] - scores[2]) < 1e-9
    assert scores[1] > scores[0]
    assert abs(scores.sum() - 1.0) < 1e-6


def test_graphhd_uses_rank_tokens():
    """GraphHD：节点向量为名次记号，边编码同 Gayler & Levy"""
    codebook = Codebook(0, 'map', D)
    path = Graph.build(3, [(0, 1), (1, 2)])
    r = [codebook.random_hv(f"R:{i}").data for i in range(3)]
    # 名次: 节点 1 -> 0, 节点 0 -> 1, 节点 2 -> 2
    expected = np.zeros(D) + r[1] * r[0] + r[0] * r[2]
    assert np.array_equal(encode_graphhd(codebook, path, 'degree').data, expected)

    config = EncoderConfig(kind='graphhd', keying='degree', centrality='pagerank', dimensions=D)
    assert config.label() == 'graphhd:pagerank'
    assert encode_graph(config, config.make_codebook(), path).dimensions == D


def test_encoder_errors():
    """空图、未知配置、码本与配置不一致"""
    config = star_config()
    codebook = config.make_codebook()
    try:
        encode_star(config, codebook, Graph(num_nodes=0, edges=()))
        assert False, "空图应该报错"
    except DomainError:
        pass

    for kwargs in ({'kind': 'wl'}, {'keying': 'color'}, {'backend': 'vtb', 'dimensions': 10000 + 1},
                   {'kind': 'graphhd', 'centrality': 'betweenness'}):
        try:
            EncoderConfig(**kwargs)
            assert False, f"非法配置 {kwargs} 应该报错"
        except ConfigurationError:
            pass

    assert EncoderConfig(kind='star', centrality='pagerank').centrality is None

    try:
        encode_graph(config, Codebook(0, 'map', D // 2), Graph.build(1, [], [0]))
        assert False, "码本维度不一致应该报错"
    except ConfigurationError:
        pass


def test_vsa_backends_encode():
    """三种架构都能完成星型编码，维度保持不变"""
    graph = Graph.build(4, [(0, 1), (1, 2), (2, 3)], node_labels=[0, 1, 0, 1])
    for backend, dimensions in (('map', 1024), ('fhrr', 1024), ('vtb', 1024)):
        config = star_config(backend=backend, dimensions=dimensions)
        hv = encode_graph(config, config.make_codebook(), graph)
        assert hv.backend == backend and hv.dimensions == dimensions
        assert np.any(hv.data)


def main():
    """主测试函数"""
    print("开始测试图编码器...")
    tests = [
        test_star_path_matches_formula, test_star_hub_matches_formula,
        test_star_isolated_and_single_node, test_star_permutation_invariance, test_star_map_cancellation,
        test_star_locality, test_keying_variants,
        test_gayler_levy, test_pagerank_and_degree_centrality, test_pagerank_reference_values,
        test_graphhd_uses_rank_tokens,
        test_encoder_errors, test_vsa_backends_encode
    ]
    for test in tests:
        test()
        print(f"✓ {test.__name__}")
    print("\n=== 测试完成 ===")


if __name__ == "__main__":
    main()
