# Dataset module
from .graph_data import Graph, Dataset, Split, parse_tudataset, write_tudataset, stratified_split
from .dataset_client import DatasetClient, fetch_dataset, list_datasets
from .synthetic import make_motif_dataset, create_test_dataset

__all__ = [
    'Graph', 'Dataset', 'Split', 'parse_tudataset', 'write_tudataset', 'stratified_split',
    'DatasetClient', 'fetch_dataset', 'list_datasets',
    'make_motif_dataset', 'create_test_dataset'
]
