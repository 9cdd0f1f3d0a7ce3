"""Bridging spreadnet artifacts into tensors.

Networks are read from the spreadnet text format; targets come from the
ground-truth dataset CSVs (the max-normalized potential columns), optionally
passed through the scatter transform before ranking losses see them.
"""

from dataclasses import dataclass, field

import numpy as np
import torch

from spreadnet import mln
from spreadnet import pipeline as pl

# sps(p) = 1/3 + SPS_SIGNED . p  (decreasing coordinates enter negated)
SPS_SIGNED = np.array([0.5, -1.0 / 6.0, 1.0 / 6.0, -1.0 / 6.0])
SPS_OFFSET = 1.0 / 3.0


@dataclass
class NetworkGraph:
    """One multilayer network as per-layer undirected edge indices."""

    name: str
    n_actors: int
    edge_indices: list = field(default_factory=list)  # per layer, [2, 2E] long
    degrees: torch.Tensor = None                      # [A, L] float

    @property
    def n_layers(self):
        return len(self.edge_indices)


def graph_from_network(net, name=None):
    edge_indices = []
    degs = np.zeros((net.n_actors, net.n_layers))
    for l in range(net.n_layers):
        arr = net.edges[l]
        if len(arr):
            src = np.concatenate([arr[:, 0], arr[:, 1]])
            dst = np.concatenate([arr[:, 1], arr[:, 0]])
            ei = torch.from_numpy(np.stack([src, dst]).astype(np.int64))
            np.add.at(degs[:, l], arr.ravel(), 1)
        else:
            ei = torch.zeros((2, 0), dtype=torch.long)
        edge_indices.append(ei)
    return NetworkGraph(name or "net", net.n_actors, edge_indices,
                        torch.tensor(degs, dtype=torch.float32))


def load_graph(path, name=None):
    net = mln.load_network(str(path))
    if name is None:
        import pathlib

        name = pathlib.Path(path).stem
    return graph_from_network(net, name)


def apply_transform(norm, kind):
    """Transform max-normalized potential columns for use as targets."""
    norm = np.asarray(norm, dtype=float)
    if kind == "none":
        return norm
    if kind in ("scatter", "norm_max_scatter"):
        # columns are already max-normalized, so both names coincide here
        return pl.scatter(norm)
    raise ValueError(f"unsupported transform: {kind}")


def load_targets(csv_path, kind="scatter"):
    """Read a dataset CSV; return (targets [A,4] float64, sps [A])."""
    table = pl.read_sps_csv(str(csv_path))
    return apply_transform(table.norm, kind), np.asarray(table.sps)


def target_scalar(targets):
    """Collapse 4-component targets to the ranked scalar (sps weighting)."""
    t = torch.as_tensor(targets, dtype=torch.float64)
    w = torch.tensor(SPS_SIGNED, dtype=t.dtype)
    return SPS_OFFSET + t @ w


def sample_subgraph(graph, seeds, fanouts, rng):
    """Induced neighbor-sampled subgraph around the seed actors.

    Expands the seed set hop by hop: at hop h, each frontier actor keeps at
    most fanouts[h] of its union-graph neighbors. Returns (subgraph,
    local_ids) where local_ids maps each seed to its row in the subgraph.
    """
    adj = [[] for _ in range(graph.n_actors)]
    for ei in graph.edge_indices:
        for a, b in ei.t().tolist():
            adj[a].append(b)
    keep = list(dict.fromkeys(int(s) for s in seeds))
    known = set(keep)
    frontier = list(keep)
    for fanout in fanouts:
        nxt = []
        for a in frontier:
            nbrs = sorted(set(adj[a]) - known)
            if len(nbrs) > fanout:
                nbrs = list(rng.choice(nbrs, size=fanout, replace=False))
            for b in nbrs:
                known.add(int(b))
                keep.append(int(b))
                nxt.append(int(b))
        frontier = nxt
        if not frontier:
            break
    local = {a: i for i, a in enumerate(keep)}
    sub = NetworkGraph(graph.name + ":sub", len(keep), [])
    for ei in graph.edge_indices:
        pairs = [(local[a], local[b]) for a, b in ei.t().tolist()
                 if a in local and b in local]
        if pairs:
            sub.edge_indices.append(torch.tensor(pairs, dtype=torch.long).t())
        else:
            sub.edge_indices.append(torch.zeros((2, 0), dtype=torch.long))
    deg = torch.zeros((len(keep), graph.n_layers))
    for l, ei in enumerate(sub.edge_indices):
        if ei.numel():
            deg[:, l] = torch.bincount(ei[0], minlength=len(keep)).float() / 2
    sub.degrees = deg
    seed_local = [local[int(s)] for s in seeds]
    return sub, seed_local
