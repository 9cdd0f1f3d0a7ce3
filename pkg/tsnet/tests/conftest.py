import numpy as np
import pytest
import torch

from spreadnet import mln, netgen
from spreadnet import pipeline as pl
from spreadnet.micm import Protocol

from tsnet.config import TsNetConfig
from tsnet.data import graph_from_network


def small_config(**overrides):
    base = dict(hidden_dim=32, head_hidden=16)
    base.update(overrides)
    return TsNetConfig(**base)


def pa_graph(n=40, layers=3, seed=1, m=4):
    net = netgen.generate(netgen.GenSpec("pa", layers, n, seed=seed,
                                         pa_attach_m=m))
    return net, graph_from_network(net, f"pa{seed}")


def build_table(net, name, seed=1, reps=5):
    grid = pl.GridSpec(protocols=(Protocol.AND,), pis=pl.FEASIBLE_AND,
                       repetitions=reps,
                       feasible_pis={Protocol.AND: pl.FEASIBLE_AND})
    return pl.build_sps_table(net, grid, Protocol.AND, seed, name)


@pytest.fixture(autouse=True)
def _torch_seed():
    torch.manual_seed(0)
    np.random.seed(0)


def make_dataset(tmp_path, count, n_actors, net_seed0, table_seed,
                 reps=5, m=5, prefix="n"):
    """Write a corpus + dataset directory pair; returns (corpus, dataset)."""
    corpus = tmp_path / f"{prefix}corpus"
    dataset = tmp_path / f"{prefix}dataset"
    corpus.mkdir()
    dataset.mkdir()
    for i in range(count):
        net = netgen.generate(netgen.GenSpec("pa", 3, n_actors,
                                             seed=net_seed0 + i,
                                             pa_attach_m=m))
        mln.save_network(net, str(corpus / f"{prefix}{i}.mln"))
        table = build_table(net, f"{prefix}{i}", seed=table_seed, reps=reps)
        pl.write_sps_csv(table, str(dataset / f"{prefix}{i}__and.csv"))
    return corpus, dataset
