#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
hdgraph 命令行入口

子命令：
- fetch          下载并缓存 TUDataset 数据集
- list-datasets  列出抗癌筛选数据集及缓存状态
- train          在完整数据集上训练关联记忆并写出 .hdm 文件
- predict        用 .hdm 文件对图数据逐个预测
- eval           按种子重复实验（可多个数据集），写出报告
- sweep          沿一个轴扫描配置，写出合并报告

退出码：0 成功，1 用法/配置错误，2 数据错误，3 运行错误
"""

import os
import sys
import argparse
from typing import List, Optional

from config import CENTRALITIES, DEFAULT_CENTRALITY, DEFAULT_DIMENSIONS, DEFAULT_ENCODER, \
    DEFAULT_EPOCHS, DEFAULT_KEYING, DEFAULT_REPETITIONS, DEFAULT_SEED, DEFAULT_STRATEGY, \
    DEFAULT_THRESHOLD, DEFAULT_TRAIN_FRACTION, DEFAULT_VSA, ENCODERS, KEYINGS, STRATEGIES, \
    SWEEP_AXES, VSA_BACKENDS
from errors import ConfigurationError, DomainError, ExperimentError, FetchError, \
    ModelFormatError, ParseError
from dataset import fetch_dataset, list_datasets, parse_tudataset
from hdc.encoders import EncoderConfig, check_dataset_compatible, encode_graph
from hdc.learner import AssociativeMemory, load_memory, predict, save_memory, train
from experiment.eval_harness import ExperimentConfig, run_benchmark, run_experiment, summarize, \
    sweep, training_order
from experiment.report_writer import emit_report, format_from_path
from utils import get_concurrent_processor, log_message, resolve_base_url, resolve_cache_dir, \
    setup_logger, shutdown_concurrent_processor
from version import get_version_info


class CliArgumentParser(argparse.ArgumentParser):
    """用法错误以退出码 1 结束（argparse 默认为 2）"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: 错误: {message}\n")


# ===== 数据集参数 =====

def load_dataset_arg(value: str, args, require_labels: bool = True, allow_empty: bool = False):
    """数据集参数可以是 TUDataset 目录（目录名即数据集名），也可以是需要下载的数据集名称"""
    if os.path.isdir(value):
        root = value
        name = os.path.basename(os.path.normpath(value))
    else:
        name = value
        root = fetch_dataset(name, resolve_cache_dir(args.cache_dir), resolve_base_url(args.base_url))
    return parse_tudataset(root, name, require_labels=require_labels, allow_empty=allow_empty)


def build_encoder_config(args) -> EncoderConfig:
    return EncoderConfig(kind=args.encoder, keying=args.keying, centrality=args.centrality,
                         backend=args.vsa, dimensions=args.dims, seed=args.seed)


def resolve_threshold(args) -> float:
    """--threshold 只对 refinehd 有意义，与其他策略同时出现视为配置错误"""
    if args.threshold is None:
        return DEFAULT_THRESHOLD
    if args.strategy != 'refinehd':
        raise ConfigurationError(f"--threshold 只适用于 refinehd 策略，当前策略为 {args.strategy}")
    return args.threshold


def build_experiment_config(args, dataset_name: str) -> ExperimentConfig:
    seeds = tuple(args.seed + i for i in range(args.reps))
    return ExperimentConfig(
        dataset=dataset_name,
        encoder=build_encoder_config(args),
        strategy=args.strategy,
        threshold=resolve_threshold(args),
        seeds=seeds,
        repetitions=args.reps,
        train_fraction=args.train_fraction,
        timing=not args.no_timing,
        epochs=args.epochs
    )


# ===== 输出表格 =====

def _fmt(summary, factor=1.0, digits=2):
    if summary['mean'] is None:
        return '-'
    return f"{summary['mean'] * factor:.{digits}f} ± {summary['std'] * factor:.{digits}f}"


def print_results_table(results):
    print(f"{'实验':<56} {'AUC':>16} {'准确率%':>16} {'训练 ms/样本':>18} {'推理 ms/样本':>18}")
    for result in results:
        agg = result.aggregate
        print(f"{result.experiment_id:<56} {_fmt(agg['auc'], 100):>16} "
              f"{_fmt(agg['accuracy'], 100):>16} {_fmt(agg['train_ms_per_sample'], 1, 3):>18} "
              f"{_fmt(agg['infer_ms_per_sample'], 1, 3):>18}")


def print_summary_table(rows):
    print()
    print("跨数据集平均：")
    for row in rows:
        label = f"{row['encoder']}/{row['keying']}/{row['backend']}/{row['strategy']}/d{row['dimensions']}"
        print(f"{label:<56} {_fmt(row['auc'], 100):>16} {_fmt(row['accuracy'], 100):>16} "
              f"{_fmt(row['train_ms_per_sample'], 1, 3):>18} {_fmt(row['infer_ms_per_sample'], 1, 3):>18}"
              f"  ({len(row['datasets'])} 个数据集)")


# ===== 子命令 =====

def cmd_fetch(args) -> int:
    path = fetch_dataset(args.name, resolve_cache_dir(args.cache_dir), resolve_base_url(args.base_url))
    print(path)
    return 0


def cmd_list_datasets(args) -> int:
    rows = list_datasets(resolve_cache_dir(args.cache_dir))
    print(f"{'名称':<10} {'图数量':>8}  {'已缓存':<6} 描述")
    for row in rows:
        print(f"{row['name']:<10} {row['graphs']:>8}  {'是' if row['cached'] else '否':<6} {row['description']}")
    return 0


def cmd_train(args) -> int:
    encoder = build_encoder_config(args)
    threshold = resolve_threshold(args)
    dataset = load_dataset_arg(args.dataset, args)
    check_dataset_compatible(encoder, dataset.graphs)

    codebook = encoder.make_codebook()
    processor = get_concurrent_processor(args.threads)
    graphs = [dataset.graphs[i] for i in training_order(args.seed, len(dataset))]
    vectors = processor.map_ordered(lambda g: encode_graph(encoder, codebook, g), graphs)

    memory = AssociativeMemory(encoder.backend, encoder.dimensions, args.strategy, threshold,
                               class_values=dataset.class_values)
    train(memory, zip(vectors, (g.label for g in graphs)), epochs=args.epochs)
    save_memory(memory, args.out, encoder={
        'kind': encoder.kind,
        'keying': encoder.keying,
        'centrality': encoder.centrality,
        'seed': encoder.seed
    }, epochs=args.epochs)
    log_message('info', f"✅ 训练完成: {len(graphs)} 个图，误分类记录 {memory.mis_stats.count} 次")
    print(args.out)
    return 0


def cmd_predict(args) -> int:
    memory, header = load_memory(args.model)
    saved = header.get('encoder') or {}
    try:
        encoder = EncoderConfig(kind=saved['kind'], keying=saved['keying'],
                                centrality=saved.get('centrality') or DEFAULT_CENTRALITY,
                                backend=memory.backend, dimensions=memory.dimensions,
                                seed=saved['seed'])
    except (KeyError, ConfigurationError) as e:
        raise ModelFormatError(f"模型文件中的编码器配置无效: {e}") from e

    dataset = load_dataset_arg(args.graphs, args, require_labels=False, allow_empty=True)
    try:
        check_dataset_compatible(encoder, [g for g in dataset.graphs if g.num_nodes > 0])
    except ConfigurationError as e:
        raise ModelFormatError(f"输入图与模型的键控方式不匹配: {e}") from e

    codebook = encoder.make_codebook()

    def classify(graph):
        if graph.num_nodes == 0:
            return None
        return predict(memory, encode_graph(encoder, codebook, graph))

    processor = get_concurrent_processor(args.threads)
    predictions = processor.map_ordered(classify, list(dataset.graphs))

    failures = 0
    for graph, prediction in zip(dataset.graphs, predictions):
        if prediction is None:
            failures += 1
            print(f"{graph.ordinal}\terror\t图 {graph.ordinal} 为空图，无法编码")
            continue
        scores = ' '.join(f"{label}:{score:.6f}" for label, score in prediction.scores.items())
        print(f"{graph.ordinal}\t{prediction.label}\t{scores}")
    if failures:
        log_message('error', f"❌ {failures} 个图预测失败")
        return 2
    return 0


def _write_report(results, args):
    fmt = args.format or format_from_path(args.out)
    emit_report(results, fmt, args.out)


def cmd_eval(args) -> int:
    datasets = [load_dataset_arg(value, args) for value in args.datasets]
    template = build_experiment_config(args, datasets[0].name)
    if len(datasets) == 1:
        results = [run_experiment(template, datasets[0], max_workers=args.threads)]
    else:
        results = run_benchmark(template, datasets, max_workers=args.threads)
    _write_report(results, args)
    print_results_table(results)
    if len(datasets) > 1:
        print_summary_table(summarize(results))
    return 0


def cmd_sweep(args) -> int:
    values = [v.strip() for v in args.values.split(',') if v.strip()]
    if not values:
        raise ConfigurationError("--values 不能为空")
    dataset = load_dataset_arg(args.dataset, args)
    template = build_experiment_config(args, dataset.name)
    results = sweep(template, args.axis, values, dataset, max_workers=args.threads)
    _write_report(results, args)
    print_results_table(results)
    return 0


# ===== 参数解析 =====

def _add_source_flags(parser):
    parser.add_argument('--cache-dir', default=None,
                        help='数据集缓存目录（默认: 环境变量 HDGRAPH_CACHE_DIR 或配置文件）')
    parser.add_argument('--base-url', default=None,
                        help='数据集下载地址（默认: 环境变量 HDGRAPH_BASE_URL 或配置文件）')


def _add_threads_flag(parser):
    parser.add_argument('--threads', type=int, default=None,
                        help='工作线程数上限（默认: 配置 max_concurrent_workers，即 CPU 核数）')


def _add_model_flags(parser):
    parser.add_argument('--encoder', choices=ENCODERS, default=DEFAULT_ENCODER,
                        help='图编码器 (默认: %(default)s)')
    parser.add_argument('--keying', choices=KEYINGS, default=DEFAULT_KEYING,
                        help='star 编码器的节点键控方式 (默认: %(default)s)')
    parser.add_argument('--centrality', choices=CENTRALITIES, default=DEFAULT_CENTRALITY,
                        help='graphhd 编码器的中心性指标 (默认: %(default)s)')
    parser.add_argument('--vsa', choices=list(VSA_BACKENDS), default=DEFAULT_VSA,
                        help='向量符号架构 (默认: %(default)s)')
    parser.add_argument('--strategy', choices=STRATEGIES, default=DEFAULT_STRATEGY,
                        help='训练策略 (默认: %(default)s)')
    parser.add_argument('--threshold', type=float, default=None,
                        help=f'RefineHD 阈值系数 t，仅 refinehd 可用 (默认: {DEFAULT_THRESHOLD})')
    parser.add_argument('--dims', type=int, default=DEFAULT_DIMENSIONS,
                        help='超维向量维度，vtb 需为完全平方数 (默认: %(default)s)')
    parser.add_argument('--seed', type=int, default=DEFAULT_SEED,
                        help='码本种子；eval/sweep 中为首个重复的种子 (默认: %(default)s)')
    parser.add_argument('--epochs', type=int, default=DEFAULT_EPOCHS,
                        help='训练轮数 (默认: %(default)s)')


def _add_experiment_flags(parser, default_out):
    parser.add_argument('--reps', type=int, default=DEFAULT_REPETITIONS,
                        help='重复次数，种子为 seed..seed+reps-1 (默认: %(default)s)')
    parser.add_argument('--train-fraction', type=float, default=DEFAULT_TRAIN_FRACTION,
                        help='训练集比例 (默认: %(default)s)')
    parser.add_argument('--no-timing', action='store_true', help='不记录每样本耗时')
    parser.add_argument('--out', default=default_out, help='报告路径 (默认: %(default)s)')
    parser.add_argument('--format', choices=['csv', 'json'], default=None,
                        help='报告格式（默认按 --out 扩展名推断）')


def build_parser() -> argparse.ArgumentParser:
    parser = CliArgumentParser(prog='hdgraph', description='基于超维计算的图分类工具')
    parser.add_argument('--version', action='version',
                        version=f"hdgraph {get_version_info()['version']}")
    subparsers = parser.add_subparsers(dest='command', metavar='<command>')
    subparsers.required = True

    p = subparsers.add_parser('fetch', help='下载并缓存数据集')
    p.add_argument('name', help='数据集名称，例如 MCF-7')
    _add_source_flags(p)
    p.set_defaults(handler=cmd_fetch)

    p = subparsers.add_parser('list-datasets', help='列出抗癌筛选数据集')
    p.add_argument('--cache-dir', default=None, help='数据集缓存目录')
    p.set_defaults(handler=cmd_list_datasets)

    p = subparsers.add_parser('train', help='在完整数据集上训练并写出模型')
    p.add_argument('dataset', help='数据集目录或名称')
    _add_model_flags(p)
    p.add_argument('--out', default='model.hdm', help='模型文件路径 (默认: %(default)s)')
    _add_source_flags(p)
    _add_threads_flag(p)
    p.set_defaults(handler=cmd_train)

    p = subparsers.add_parser('predict', help='用模型预测图的类别')
    p.add_argument('model', help='.hdm 模型文件')
    p.add_argument('graphs', help='TUDataset 目录或名称（可不带图标签）')
    _add_source_flags(p)
    _add_threads_flag(p)
    p.set_defaults(handler=cmd_predict)

    p = subparsers.add_parser('eval', help='重复实验并写出报告')
    p.add_argument('datasets', nargs='+', help='一个或多个数据集目录或名称')
    _add_model_flags(p)
    _add_experiment_flags(p, 'report.csv')
    _add_source_flags(p)
    _add_threads_flag(p)
    p.set_defaults(handler=cmd_eval)

    p = subparsers.add_parser('sweep', help='沿一个轴扫描配置')
    p.add_argument('dataset', help='数据集目录或名称')
    p.add_argument('--axis', required=True,
                   help=f'扫描轴: {", ".join(SWEEP_AXES)}（dims 为 dimensions 的别名）')
    p.add_argument('--values', required=True, help='逗号分隔的取值，例如 1,1.5,1.8,2')
    _add_model_flags(p)
    _add_experiment_flags(p, 'sweep.csv')
    _add_source_flags(p)
    _add_threads_flag(p)
    p.set_defaults(handler=cmd_sweep)

    return parser


def run(argv: Optional[List[str]] = None) -> int:
    """解析参数并执行子命令，返回退出码"""
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, 'threads', None) is not None and args.threads < 1:
        parser.error('--threads 必须 ≥ 1')
    setup_logger()

    try:
        return args.handler(args)
    except ConfigurationError as e:
        print(f"❌ 配置错误: {e}", file=sys.stderr)
        return 1
    except (ParseError, FetchError, ModelFormatError, DomainError) as e:
        print(f"❌ 数据错误: {e}", file=sys.stderr)
        return 2
    except ExperimentError as e:
        print(f"❌ 实验失败: {e}", file=sys.stderr)
        return 3
    except OSError as e:
        print(f"❌ 运行错误: {e}", file=sys.stderr)
        return 3
    except Exception as e:
        log_message('error', f"❌ 未预期的错误: {e}")
        print(f"❌ 运行错误: {e}", file=sys.stderr)
        return 3
    finally:
        shutdown_concurrent_processor()


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()
