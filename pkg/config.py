#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
项目公共配置文件
统一管理超维向量架构、训练策略、编码器和数据集目录等公共变量
"""

# 超维向量架构（VSA）配置，值为序列化头部中的后端标记
VSA_BACKENDS = {
    'map': 1,
    'fhrr': 2,
    'vtb': 3
}

# 关联记忆训练策略
STRATEGIES = ['add', 'adapthd', 'onlinehd', 'refinehd']

# 图编码器
ENCODERS = ['star', 'gayler_levy', 'graphhd']

# 节点键控方式（φ 的原子参数）
KEYINGS = ['node_label', 'degree', 'node_id_random']

# GraphHD 中心性指标
CENTRALITIES = ['pagerank', 'degree']

# 扫描实验支持的轴
SWEEP_AXES = ['dimensions', 'threshold', 'strategy', 'vsa', 'encoder']

# 默认配置
DEFAULT_VSA = 'map'
DEFAULT_ENCODER = 'star'
DEFAULT_KEYING = 'node_label'
DEFAULT_CENTRALITY = 'pagerank'
DEFAULT_STRATEGY = 'refinehd'
DEFAULT_THRESHOLD = 1.8
DEFAULT_DIMENSIONS = 10000
DEFAULT_REPETITIONS = 10
DEFAULT_TRAIN_FRACTION = 0.8
DEFAULT_EPOCHS = 1
DEFAULT_SEED = 0

# TUDataset 下载地址
DEFAULT_BASE_URL = 'https://www.chrsmrrs.com/graphkerneldatasets'

# 数据集缓存目录
DEFAULT_CACHE_DIR = './data'

# 抗癌筛选数据集目录：名称 -> (图数量, 描述)
ANTICANCER_DATASETS = {
    'MCF-7': (28972, 'Breast'),
    'MOLT-4': (41810, 'Leukemia'),
    'NCI-H23': (42164, 'Non-small Cell lung'),
    'OVCAR-8': (42386, 'Ovarian'),
    'PC-3': (28679, 'Prostate'),
    'P388': (46440, 'Leukemia'),
    'SF-295': (40350, 'Central nervous system'),
    'SN12C': (41855, 'Renal'),
    'SW-620': (42405, 'Colon'),
    'UACC-257': (41864, 'Melanoma'),
    'Yeast': (83933, 'Yeast anticancer')
}

# 报告格式
REPORT_FORMATS = ['csv', 'json']

# 报告 JSON 结构版本
REPORT_SCHEMA_VERSION = 1

# 训练好的关联记忆文件格式版本
MEMORY_FORMAT_VERSION = 1
