"""tsnet-ranker: trainable GNN ranking of super-spreaders.

Consumes spreadnet network files and ground-truth dataset CSVs, trains the
TopSpreadersNetwork model, and emits rankings in the shared CSV format.
"""

from tsnet.config import TsNetConfig
from tsnet.model import TsNet, WiseAverage, list_mle, training_loss
from tsnet.data import NetworkGraph, load_graph, load_targets

__all__ = [
    "TsNetConfig", "TsNet", "WiseAverage", "list_mle", "training_loss",
    "NetworkGraph", "load_graph", "load_targets",
]

__version__ = "0.1.0"
