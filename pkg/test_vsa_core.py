#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
超维向量运算测试脚本

测试三种架构的绑定/解绑、叠加、置换、相似度、序列化与码本确定性
"""

import sys
import os
import math
import threading

import numpy as np

# 添加项目根目录到Python路径
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from errors import ConfigurationError, DomainError
from hdc.vsa_core import Codebook, bind, bundle, bundle_all, from_bytes, identity, \
    make_hypervector, permute, similarity, similarity_or_zero, to_bytes, token_seed, unbind, \
    validate_dimensions, zeros, largest_square_at_most


def test_map_bind_self_inverse():
    """MAP 绑定自逆：unbind(bind(x, y), y) 与 x 逐位相同"""
    codebook = Codebook(7, 'map', 10000)
    for i in range(20):
        x = codebook.random_hv(f"x{i}")
        y = codebook.random_hv(f"y{i}")
        recovered = unbind(bind(x, y), y)
        assert np.array_equal(recovered.data, x.data)
        assert set(np.unique(x.data)) <= {-1.0, 1.0}


def test_fhrr_unbind_recovery():
    """FHRR 解绑恢复相似度 ≥ 0.999"""
    codebook = Codebook(7, 'fhrr', 10000)
    for i in range(20):
        x = codebook.random_hv(f"x{i}")
        y = codebook.random_hv(f"y{i}")
        assert similarity(unbind(bind(x, y), y), x) >= 0.999
        assert np.allclose(np.abs(x.data), 1.0)


def test_vtb_unbind_recovery():
    """VTB 在 d=10000 下 100 对随机向量的解绑恢复相似度 ≥ 0.90"""
    codebook = Codebook(3, 'vtb', 10000)
    worst = 1.0
    for i in range(100):
        x = codebook.random_hv(f"x{i}")
        y = codebook.random_hv(f"y{i}")
        worst = min(worst, similarity(unbind(bind(x, y), y), x))
    print(f"VTB 最差恢复相似度: {worst:.6f}")
    assert worst >= 0.90


def test_vtb_identity_and_dissimilarity():
    """VTB 单位元绑定不改变向量，绑定结果与输入不相似"""
    codebook = Codebook(3, 'vtb', 2500)
    x = codebook.random_hv('x')
    y = codebook.random_hv('y')
    e = identity('vtb', 2500)
    assert np.allclose(bind(x, e).data, x.data)
    assert abs(similarity(bind(x, y), x)) < 0.1


def test_bind_dissimilar_to_inputs():
    """MAP/FHRR 绑定结果与两个输入近似正交"""
    for backend in ('map', 'fhrr'):
        codebook = Codebook(11, backend, 10000)
        x = codebook.random_hv('x')
        y = codebook.random_hv('y')
        z = bind(x, y)
        assert abs(similarity(z, x)) < 0.05
        assert abs(similarity(z, y)) < 0.05


def test_bind_similarity_mean_near_zero():
    """三种架构下 100 次随机绑定与输入的平均相似度 |mean| < 3/√d"""
    d = 10000
    for backend in ('map', 'fhrr', 'vtb'):
        codebook = Codebook(21, backend, d)
        values = [similarity(bind(codebook.random_hv(f"x{i}"), codebook.random_hv(f"y{i}")),
                             codebook.random_hv(f"x{i}")) for i in range(100)]
        mean = float(np.mean(values))
        print(f"{backend} 绑定相似度均值: {mean:+.5f}")
        assert abs(mean) < 3.0 / math.sqrt(d)


def test_vtb_norm_preservation():
    """VTB 与单位范数原子绑定保持范数：‖bind(x, y)‖ = ‖x‖"""
    codebook = Codebook(8, 'vtb', 400)
    rng = np.random.default_rng(8)
    ratios = []
    for i in range(50):
        y = codebook.random_hv(f"y{i}")
        assert abs(np.linalg.norm(y.data) - 1.0) < 1e-9
        for x in (codebook.random_hv(f"x{i}"), make_hypervector('vtb', rng.normal(size=400))):
            ratios.append(np.linalg.norm(bind(x, y).data) / np.linalg.norm(x.data))
    assert np.allclose(ratios, 1.0, atol=1e-9)


def test_bind_distributes_over_bundle():
    """MAP/FHRR：bind(x + y, z) 与 bind(x, z) + bind(y, z) 的相似度 ≥ 0.999"""
    for backend in ('map', 'fhrr'):
        codebook = Codebook(13, backend, 10000)
        x, y, z = (codebook.random_hv(t) for t in 'xyz')
        left = bind(bundle(x, y), z)
        right = bundle(bind(x, z), bind(y, z))
        assert similarity(left, right) >= 0.999


def test_map_bundle_similarity():
    """两个随机 MAP 向量叠加后与任一输入的余弦约为 1/√2"""
    codebook = Codebook(5, 'map', 10000)
    x = codebook.random_hv('x')
    y = codebook.random_hv('y')
    value = similarity(bundle(x, y), x)
    assert abs(value - 1.0 / math.sqrt(2.0)) < 0.05


def test_bundle_identity_and_commutativity():
    """零向量是叠加单位元，叠加满足交换律"""
    codebook = Codebook(5, 'fhrr', 1000)
    x = codebook.random_hv('x')
    y = codebook.random_hv('y')
    assert np.array_equal(bundle(x, zeros('fhrr', 1000)).data, x.data)
    assert np.array_equal(bundle(x, y).data, bundle(y, x).data)
    empty = bundle_all([], 'map', 64)
    assert not np.any(empty.data)

    # 结合律（浮点重排容差 1e-6）
    for backend, d in (('map', 1000), ('fhrr', 1000), ('vtb', 900)):
        codebook = Codebook(6, backend, d)
        a, b, c = (codebook.random_hv(t) for t in 'abc')
        assert np.allclose(bundle(bundle(a, b), c).data, bundle(a, bundle(b, c)).data,
                           rtol=1e-6, atol=1e-12)


def test_permute_invertible():
    """置换可逆且结果与原向量近似正交"""
    codebook = Codebook(1, 'map', 10000)
    x = codebook.random_hv('x')
    for shift in (1, 5, 9999):
        assert np.array_equal(permute(permute(x, shift), -shift).data, x.data)
    assert abs(similarity(permute(x, 1), x)) < 0.05


def test_codebook_quasi_orthogonality():
    """1000 对原子向量的 |cos| 在 99.9 百分位 < 0.05"""
    codebook = Codebook(42, 'map', 10000)
    values = []
    for i in range(1000):
        a = codebook.random_hv(f"a{i}", memoize=False)
        b = codebook.random_hv(f"b{i}", memoize=False)
        values.append(abs(similarity(a, b)))
    percentile = float(np.percentile(values, 99.9))
    print(f"|cos| 99.9 百分位: {percentile:.4f}")
    assert percentile < 0.05


def test_codebook_determinism():
    """相同 (seed, backend, d, token) 在不同码本实例中逐位相同"""
    for backend in ('map', 'fhrr', 'vtb'):
        first = Codebook(2024, backend, 400)
        second = Codebook(2024, backend, 400)
        assert to_bytes(first.random_hv('L:6')) == to_bytes(second.random_hv('L:6'))
        assert to_bytes(first.random_hv(6)) == to_bytes(second.random_hv(6))
        other_seed = Codebook(2025, backend, 400)
        assert to_bytes(first.random_hv('L:6')) != to_bytes(other_seed.random_hv('L:6'))

    # 字符串记号与整数记号互不冲突
    assert token_seed(0, '1') != token_seed(0, 1)
    codebook = Codebook(0, 'map', 64)
    assert codebook.random_hv('x') is codebook.random_hv('x')
    assert len(codebook) == 1


def test_codebook_concurrent_first_access():
    """多个线程同时首次请求同一记号，只得到一个规范向量"""
    codebook = Codebook(77, 'vtb', 2500)
    workers = 8
    barrier = threading.Barrier(workers)
    results = [None] * workers

    def fetch(index):
        barrier.wait()
        results[index] = codebook.random_hv('shared')

    threads = [threading.Thread(target=fetch, args=(i,)) for i in range(workers)]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()

    assert all(result is results[0] for result in results)
    assert codebook.random_hv('shared') is results[0]
    assert len(codebook) == 1


def test_serialization_round_trip():
    """规范序列化：头部 + 小端 float64，反序列化逐位还原"""
    for backend, d in (('map', 100), ('fhrr', 100), ('vtb', 100)):
        hv = Codebook(9, backend, d).random_hv('t')
        payload = to_bytes(hv)
        width = 16 if backend == 'fhrr' else 8
        assert len(payload) == 9 + width * d
        restored, offset = from_bytes(payload)
        assert offset == len(payload)
        assert restored.backend == backend
        assert np.array_equal(restored.data, hv.data)

    try:
        from_bytes(b'\x01\x00')
        assert False, "不完整的数据应该报错"
    except DomainError:
        pass


def test_similarity_errors():
    """零向量相似度报错，架构或维度不一致报配置错误"""
    x = Codebook(1, 'map', 64).random_hv('x')
    try:
        similarity(x, zeros('map', 64))
        assert False, "零向量相似度应该报错"
    except DomainError:
        pass
    assert similarity_or_zero(x, zeros('map', 64)) == 0.0

    for other in (Codebook(1, 'map', 100).random_hv('x'), Codebook(1, 'fhrr', 64).random_hv('x')):
        try:
            bind(x, other)
            assert False, "不一致的向量应该报错"
        except ConfigurationError:
            pass

    value = similarity(x, make_hypervector('map', -x.data))
    assert value == -1.0


def test_vtb_dimension_constraint():
    """VTB 要求 d 为完全平方数"""
    try:
        validate_dimensions('vtb', 10000 + 1)
        assert False, "非完全平方数应该报错"
    except ConfigurationError as e:
        assert '完全平方数' in str(e)
    assert validate_dimensions('vtb', 9801) == 9801
    assert largest_square_at_most(10000) == 10000
    assert largest_square_at_most(9999) == 9801
    try:
        validate_dimensions('map', 3)
        assert False, "d < 4 应该报错"
    except ConfigurationError:
        pass


def main():
    """主测试函数"""
    print("开始测试超维向量运算...")
    tests = [
        test_map_bind_self_inverse, test_fhrr_unbind_recovery, test_vtb_unbind_recovery,
        test_vtb_identity_and_dissimilarity, test_bind_dissimilar_to_inputs,
        test_bind_similarity_mean_near_zero, test_vtb_norm_preservation, test_bind_distributes_over_bundle,
        test_map_bundle_similarity, test_bundle_identity_and_commutativity, test_permute_invertible,
        test_codebook_quasi_orthogonality, test_codebook_determinism, test_codebook_concurrent_first_access,
        test_serialization_round_trip,
        test_similarity_errors, test_vtb_dimension_constraint
    ]
    for test in tests:
        test()
        print(f"✓ {test.__name__}")
    print("\n=== 测试完成 ===")


if __name__ == "__main__":
    main()
