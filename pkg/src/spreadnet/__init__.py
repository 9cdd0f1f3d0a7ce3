"""spreadnet: super-spreader ground truth for multilayer networks.

Builds spreading-potential datasets by simulating the multilayer
independent cascade model, ranks actors with heuristic predictors, and
evaluates rankings with relative cumulated score metrics.
"""

__version__ = "0.1.0"

from spreadnet.mln import MultilayerNetwork, NotFoundError
from spreadnet.micm import MicmConfig, Protocol, SpreadingPotential, simulate, simulate_avg
from spreadnet.pipeline import GridSpec, SpsTable, build_sps_table, sps
from spreadnet.rankers import Ranking
from spreadnet.evaluation import EvalReport, evaluate

__all__ = [
    "MultilayerNetwork",
    "NotFoundError",
    "MicmConfig",
    "Protocol",
    "SpreadingPotential",
    "simulate",
    "simulate_avg",
    "GridSpec",
    "SpsTable",
    "build_sps_table",
    "sps",
    "Ranking",
    "EvalReport",
    "evaluate",
]
