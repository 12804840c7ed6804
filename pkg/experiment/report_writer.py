#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
实验报告输出工具
将实验结果写成 CSV（每次重复一行 + 每个实验一行汇总）或 JSON（完整结构）
"""

import csv
import json
import os
import logging
from typing import Any, Dict, List, Sequence

from config import REPORT_FORMATS, REPORT_SCHEMA_VERSION
from errors import ConfigurationError
from experiment.eval_harness import ExperimentResult
from version import __version__

# 规定列在前，其后是补充的配置回显列
CSV_COLUMNS = [
    'experiment_id', 'dataset', 'encoder', 'keying', 'backend', 'strategy', 'threshold',
    'dimensions', 'seed', 'agg', 'auc', 'accuracy', 'train_ms_per_sample', 'infer_ms_per_sample',
    'auc_std', 'accuracy_std', 'train_ms_per_sample_std', 'infer_ms_per_sample_std',
    'train_fraction', 'epochs', 'repetitions', 'version'
]


class ReportWriter:
    """实验报告写出器"""

    def __init__(self):
        self.logger = logging.getLogger('hdgraph.report_writer')

    def _config_columns(self, result: ExperimentResult) -> Dict[str, Any]:
        config = result.config
        return {
            'experiment_id': result.experiment_id,
            'dataset': config.dataset,
            'encoder': config.encoder.label(),
            'keying': config.encoder.keying,
            'backend': config.backend,
            'strategy': config.strategy,
            'threshold': config.threshold if config.strategy == 'refinehd' else '',
            'dimensions': config.dimensions,
            'train_fraction': config.train_fraction,
            'epochs': config.epochs,
            'repetitions': config.repetitions,
            'version': result.version or __version__
        }

    @staticmethod
    def _cell(value):
        return '' if value is None else value

    def build_rows(self, results: Sequence[ExperimentResult]) -> List[Dict[str, Any]]:
        """展开为 CSV 行：每次重复一行（agg=none），随后一行汇总（agg=mean，标准差放在 *_std 列）"""
        rows = []
        for result in results:
            base = self._config_columns(result)
            for repetition in result.repetitions:
                row = dict(base, seed=repetition.seed, agg='none')
                for metric in ('auc', 'accuracy', 'train_ms_per_sample', 'infer_ms_per_sample'):
                    row[metric] = self._cell(getattr(repetition, metric))
                rows.append(row)
            row = dict(base, seed='', agg='mean')
            for metric, summary in result.aggregate.items():
                row[metric] = self._cell(summary['mean'])
                row[f"{metric}_std"] = self._cell(summary['std'])
            rows.append(row)
        return rows

    def write_csv(self, results: Sequence[ExperimentResult], path: str) -> str:
        with open(path, 'w', encoding='utf-8', newline='') as f:
            writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS)
            writer.writeheader()
            for row in self.build_rows(results):
                writer.writerow(row)
        return path

    def write_json(self, results: Sequence[ExperimentResult], path: str) -> str:
        document = {
            'schema': REPORT_SCHEMA_VERSION,
            'version': __version__,
            'experiments': [r.to_dict() for r in results]
        }
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(document, f, indent=2, ensure_ascii=False)
        return path


def emit_report(results: Sequence[ExperimentResult], fmt: str, path: str) -> str:
    """写出实验报告

    Args:
        results: 实验结果列表
        fmt: csv 或 json
        path: 输出文件路径

    Returns:
        str: 写出的文件路径

    Raises:
        ConfigurationError: 未知格式
        OSError: 路径不可写
    """
    fmt = fmt.lower()
    if fmt not in REPORT_FORMATS:
        raise ConfigurationError(f"未知的报告格式: {fmt}，可选: {REPORT_FORMATS}")
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    writer = ReportWriter()
    if fmt == 'csv':
        writer.write_csv(results, path)
    else:
        writer.write_json(results, path)
    writer.logger.info(f"📝 报告已写出: {path} ({len(results)} 个实验)")
    return path


def load_json_report(path: str) -> List[ExperimentResult]:
    """读取 JSON 报告并还原为 ExperimentResult 列表"""
    with open(path, 'r', encoding='utf-8') as f:
        document = json.load(f)
    if document.get('schema') != REPORT_SCHEMA_VERSION:
        raise ConfigurationError(f"不支持的报告结构版本: {document.get('schema')}")
    return [ExperimentResult.from_dict(item) for item in document['experiments']]


def format_from_path(path: str) -> str:
    """按扩展名推断报告格式，默认 csv"""
    return 'json' if path.lower().endswith('.json') else 'csv'
