#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
评估指标
"""

from typing import Sequence

import numpy as np
from scipy.stats import rankdata

from errors import DomainError


def auc(scores: Sequence[float], labels: Sequence[bool]) -> float:
    """ROC 曲线下面积（Mann-Whitney 秩统计，并列取平均秩）

    AUC = (R_pos - n_pos(n_pos+1)/2) / (n_pos·n_neg)

    Args:
        scores: 每个样本的打分，越大越倾向正类
        labels: 每个样本是否为正类

    Returns:
        float: [0, 1] 内的 AUC

    Raises:
        DomainError: 只有一个类别或长度不一致
    """
    scores = np.asarray(scores, dtype=np.float64)
    positive = np.asarray(labels, dtype=bool)
    if scores.shape != positive.shape:
        raise DomainError(f"打分数量 {scores.shape[0]} 与标签数量 {positive.shape[0]} 不一致")
    n_pos = int(positive.sum())
    n_neg = int(positive.size - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise DomainError("AUC 需要同时存在正类与负类样本")
    ranks = rankdata(scores, method='average')
    rank_sum = float(ranks[positive].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def accuracy(predicted: Sequence[int], actual: Sequence[int]) -> float:
    if len(predicted) != len(actual):
        raise DomainError("预测数量与真实标签数量不一致")
    if not actual:
        raise DomainError("没有可评估的样本")
    hits = sum(1 for p, a in zip(predicted, actual) if p == a)
    return hits / len(actual)
