#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
项目异常定义
命令行根据异常类型映射退出码：配置错误 1，数据错误 2，运行错误 3
"""


class ConfigurationError(ValueError):
    """配置错误：后端或维度不匹配、非法参数组合等"""
    pass


class DomainError(ValueError):
    """定义域错误：零向量相似度、空图、未训练的记忆等"""
    pass


class ParseError(ValueError):
    """TUDataset 文件解析错误，携带文件路径和行号"""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        location = ''
        if path is not None:
            location = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(f"{location}{message}")


class FetchError(RuntimeError):
    """数据集下载或解压失败"""

    def __init__(self, name, message):
        self.name = name
        super().__init__(f"数据集 {name} 获取失败: {message}")


class ModelFormatError(ValueError):
    """关联记忆文件格式错误或与输入数据不匹配"""
    pass


class ExperimentError(RuntimeError):
    """实验某次重复失败，携带失败的种子"""

    def __init__(self, seed, cause):
        self.seed = seed
        self.cause = cause
        super().__init__(f"种子 {seed} 的重复实验失败: {cause}")
