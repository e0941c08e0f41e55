from .graph_io import Graph, count_conflicts, read_graph_file, write_coloring_file
from .model import GnnConfig, GraphSageColorer, SoftAssignment, potts_loss
from .pipeline import attack, dsatur, postprocess, pretrain, reduce_to_k, train

__all__ = [
    "Graph",
    "GnnConfig",
    "GraphSageColorer",
    "SoftAssignment",
    "attack",
    "count_conflicts",
    "dsatur",
    "postprocess",
    "potts_loss",
    "pretrain",
    "read_graph_file",
    "reduce_to_k",
    "train",
    "write_coloring_file",
]
