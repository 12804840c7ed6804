#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
命令行测试脚本

在合成数据集上验证各子命令的输出与退出码
"""

import io
import os
import csv
import sys
import json
import tempfile
from contextlib import redirect_stdout

# 添加项目根目录到Python路径
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from app import run
from dataset.graph_data import parse_tudataset
from dataset.synthetic import create_test_dataset
from hdc.encoders import EncoderConfig, encode_graph
from hdc.learner import load_memory, predict


def run_cli(argv):
    """执行命令行，返回 (退出码, 标准输出)"""
    buffer = io.StringIO()
    with redirect_stdout(buffer):
        try:
            code = run(argv)
        except SystemExit as e:
            code = e.code
    return code, buffer.getvalue()


def test_train_is_deterministic():
    """同样的参数训练两次，模型文件逐字节相同且可重新加载"""
    with tempfile.TemporaryDirectory() as tmp:
        data = create_test_dataset(tmp, 120, seed=1)
        paths = [os.path.join(tmp, f"model{i}.hdm") for i in range(2)]
        for path in paths:
            code, output = run_cli(['train', data, '--dims', '1000', '--seed', '3', '--out', path,
                                    '--threads', '2'])
            assert code == 0
            assert output.strip() == path
        with open(paths[0], 'rb') as f0, open(paths[1], 'rb') as f1:
            assert f0.read() == f1.read()
        memory, header = load_memory(paths[0])
        assert sorted(memory.classes) == [0, 1]
        assert header['encoder'] == {'kind': 'star', 'keying': 'node_label', 'centrality': None, 'seed': 3}


def test_usage_and_configuration_errors():
    """用法错误与非法参数组合退出码为 1"""
    with tempfile.TemporaryDirectory() as tmp:
        data = create_test_dataset(tmp, 20)
        out = os.path.join(tmp, 'm.hdm')
        assert run_cli(['train', data, '--vsa', 'vtb', '--dims', '10001', '--out', out])[0] == 1
        assert run_cli(['train', data, '--strategy', 'add', '--threshold', '1.5', '--out', out])[0] == 1
        assert run_cli(['train'])[0] == 1
        assert run_cli(['train', data, '--threads', '0'])[0] == 1
        assert run_cli(['sweep', data, '--axis', 'colour', '--values', '1'])[0] == 1
        assert not os.path.exists(out)

        # 完全平方数维度的 VTB 正常训练
        square = os.path.join(tmp, 'vtb.hdm')
        assert run_cli(['train', data, '--vsa', 'vtb', '--dims', '400', '--out', square])[0] == 0
        assert load_memory(square)[0].backend == 'vtb'


def test_predict_output():
    """预测输出每行：序号、标签、各类别分数（6 位小数），与库调用一致"""
    with tempfile.TemporaryDirectory() as tmp:
        data = create_test_dataset(tmp, 60, seed=2)
        model = os.path.join(tmp, 'model.hdm')
        assert run_cli(['train', data, '--dims', '1000', '--out', model])[0] == 0

        code, output = run_cli(['predict', model, data])
        assert code == 0
        lines = output.strip().split('\n')
        dataset = parse_tudataset(data, 'MOTIF')
        assert len(lines) == len(dataset)

        memory, header = load_memory(model)
        encoder = EncoderConfig(kind='star', keying='node_label', dimensions=1000, seed=0)
        codebook = encoder.make_codebook()
        for line, graph in zip(lines, dataset.graphs):
            index, label, scores = line.split('\t')
            assert int(index) == graph.ordinal
            assert int(label) == graph.label
            expected = predict(memory, encode_graph(encoder, codebook, graph))
            assert scores == ' '.join(f"{c}:{s:.6f}" for c, s in expected.scores.items())


def test_predict_empty_graph():
    """输入中的空图输出错误行，退出码为 2"""
    with tempfile.TemporaryDirectory() as tmp:
        data = create_test_dataset(tmp, 20)
        model = os.path.join(tmp, 'model.hdm')
        assert run_cli(['train', data, '--dims', '1000', '--out', model])[0] == 0

        holes = os.path.join(tmp, 'HOLES')
        os.makedirs(holes)
        files = {
            '_A.txt': ['1, 2', '2, 1'],
            '_graph_indicator.txt': ['1', '1', '3'],
            '_graph_labels.txt': ['0', '1', '0'],
            '_node_labels.txt': ['1', '2', '1']
        }
        for suffix, lines in files.items():
            with open(os.path.join(holes, f"HOLES{suffix}"), 'w', encoding='utf-8') as f:
                f.write('\n'.join(lines) + '\n')

        code, output = run_cli(['predict', model, holes])
        assert code == 2
        lines = output.strip().split('\n')
        assert len(lines) == 3
        assert lines[1].split('\t')[:2] == ['1', 'error']
        assert lines[0].split('\t')[0] == '0' and lines[2].split('\t')[0] == '2'


def test_fetch_command():
    """缓存命中时不访问网络；下载失败退出码为 2"""
    with tempfile.TemporaryDirectory() as tmp:
        cache = os.path.join(tmp, 'cache')
        create_test_dataset(cache, 10)
        code, output = run_cli(['fetch', 'MOTIF', '--cache-dir', cache,
                                '--base-url', 'http://127.0.0.1:9'])
        assert code == 0
        assert output.strip() == os.path.join(cache, 'MOTIF')

        code, _ = run_cli(['fetch', 'NOPE', '--cache-dir', cache, '--base-url', 'http://127.0.0.1:9'])
        assert code == 2

        code, output = run_cli(['list-datasets', '--cache-dir', cache])
        assert code == 0
        assert 'MCF-7' in output


def test_eval_and_sweep_reports():
    """eval 写出 重复数 + 1 行的 CSV；sweep 阈值轴写出 4 个实验的 JSON 报告"""
    with tempfile.TemporaryDirectory() as tmp:
        data = create_test_dataset(tmp, 60, seed=5)
        report = os.path.join(tmp, 'eval.csv')
        code, output = run_cli(['eval', data, '--dims', '1000', '--reps', '2', '--out', report])
        assert code == 0
        assert 'MOTIF' in output
        with open(report, 'r', encoding='utf-8', newline='') as f:
            rows = list(csv.DictReader(f))
        assert len(rows) == 3
        assert [r['seed'] for r in rows[:2]] == ['0', '1']

        sweep_report = os.path.join(tmp, 'sweep.json')
        code, _ = run_cli(['sweep', data, '--axis', 'threshold', '--values', '1,1.5,1.8,2',
                           '--dims', '1000', '--reps', '1', '--out', sweep_report])
        assert code == 0
        with open(sweep_report, 'r', encoding='utf-8') as f:
            document = json.load(f)
        assert document['schema'] == 1
        assert [e['config']['threshold'] for e in document['experiments']] == [1.0, 1.5, 1.8, 2.0]


def main():
    """主测试函数"""
    print("开始测试命令行...")
    tests = [
        test_train_is_deterministic, test_usage_and_configuration_errors, test_predict_output,
        test_predict_empty_graph, test_fetch_command, test_eval_and_sweep_reports
    ]
    for test in tests:
        test()
        print(f"✓ {test.__name__}")
    print("\n=== 测试完成 ===")


if __name__ == "__main__":
    main()
