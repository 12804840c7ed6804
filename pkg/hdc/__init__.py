# HDC module
from .vsa_core import (
    Hypervector, Codebook, bind, unbind, bundle, bundle_all, permute, similarity,
    random_hv, to_bytes, from_bytes
)
from .encoders import EncoderConfig, encode_graph, encode_star, encode_gayler_levy, encode_graphhd
from .learner import AssociativeMemory, Prediction, train, predict, score_binary, save_memory, load_memory

__all__ = [
    # 向量空间
    'Hypervector', 'Codebook', 'bind', 'unbind', 'bundle', 'bundle_all', 'permute',
    'similarity', 'random_hv', 'to_bytes', 'from_bytes',

    # 图编码器
    'EncoderConfig', 'encode_graph', 'encode_star', 'encode_gayler_levy', 'encode_graphhd',

    # 关联记忆
    'AssociativeMemory', 'Prediction', 'train', 'predict', 'score_binary',
    'save_memory', 'load_memory'
]
