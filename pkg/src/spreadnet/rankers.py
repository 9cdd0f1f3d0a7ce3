"""Heuristic ranking predictors and the shared Ranking representation.

All rankers break ties by ascending actor id, so every ranking is a
deterministic function of (network, parameters, seed).
"""

import json
import os
from dataclasses import dataclass, field

import numpy as np

from spreadnet.pipeline import ranking_order
from spreadnet.rng import make_rng


@dataclass(frozen=True)
class Ranking:
    network: str
    predictor: str
    actors: tuple  # actor ids, best first
    scores: tuple  # non-increasing
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.actors) != len(self.scores):
            raise ValueError("actors and scores length mismatch")
        if any(s1 < s2 for s1, s2 in zip(self.scores, self.scores[1:])):
            raise ValueError("scores must be non-increasing")
        if len(set(self.actors)) != len(self.actors):
            raise ValueError("duplicate actors in ranking")


def _from_scores(net, scores, predictor, metadata=None):
    order = ranking_order(scores)
    return Ranking(
        network="",
        predictor=predictor,
        actors=tuple(int(a) for a in order),
        scores=tuple(float(scores[a]) for a in order),
        metadata=metadata or {},
    )


def rank_degree(net):
    """deg-c: actor degree summed over layers."""
    scores = net.degrees().sum(axis=0).astype(float)
    return _from_scores(net, scores, "deg-c")


def rank_neighborhood(net):
    """nghb-s: one-hop neighborhood size (union over layers)."""
    scores = np.array([len(net.neighborhood(a)) for a in range(net.n_actors)], float)
    return _from_scores(net, scores, "nghb-s")


def _discount_loop(initial, decrement_for, predictor):
    """Greedy selection: pick the best remaining actor, then discount the
    others for their ties to it.  Emitted score = value at selection time."""
    n = len(initial)
    scores = np.asarray(initial, dtype=float).copy()
    remaining = np.ones(n, dtype=bool)
    picked, emitted = [], []
    for _ in range(n):
        ids = np.flatnonzero(remaining)
        best = ids[np.argmax(scores[ids])]  # argmax takes the lowest id on ties
        picked.append(int(best))
        emitted.append(float(scores[best]))
        remaining[best] = False
        for b, dec in decrement_for(best):
            if remaining[b]:
                scores[b] -= dec
    return Ranking("", predictor, tuple(picked), tuple(emitted))


def rank_degree_discount(net):
    """deg-cd: degree discount; the decrement is the number of multilayer
    edges (summed over layers) joining a candidate to the selected actor."""
    initial = net.degrees().sum(axis=0)

    def decrement_for(sel):
        counts = {}
        for l in range(net.n_layers):
            for b in net.neighbors(sel, l):
                counts[b] = counts.get(b, 0) + 1
        return counts.items()

    return _discount_loop(initial, decrement_for, "deg-cd")


def rank_neighborhood_discount(net):
    """nghb-sd: neighborhood-size discount; decrement 1 per selected actor
    in the candidate's (union) neighborhood."""
    initial = [len(net.neighborhood(a)) for a in range(net.n_actors)]

    def decrement_for(sel):
        return ((b, 1) for b in net.neighborhood(sel))

    return _discount_loop(initial, decrement_for, "nghb-sd")


def rank_random(net, seed):
    """Uniform random permutation, deterministic per seed."""
    rng = make_rng(seed, "rank-random")
    perm = rng.permutation(net.n_actors)
    n = net.n_actors
    return Ranking(
        "",
        "random",
        tuple(int(a) for a in perm),
        tuple(float(n - i) for i in range(n)),
        metadata={"seed": seed},
    )


def rank_ground_truth(sps_table):
    """The reference ranking R: actors by sps descending."""
    order = ranking_order(sps_table.sps)
    return Ranking(
        sps_table.network,
        "ground-truth",
        tuple(int(a) for a in order),
        tuple(float(sps_table.sps[a]) for a in order),
        metadata={"protocol": sps_table.protocol.value if sps_table.protocol else None},
    )


# -- shared ranking file format: rank,actor,score + sidecar JSON ----------


def write_ranking(ranking, path):
    lines = ["rank,actor,score"]
    for i, (a, s) in enumerate(zip(ranking.actors, ranking.scores), 1):
        lines.append(f"{i},{a},{format(float(s), '.9g')}")
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, path)
    meta = {
        "network": ranking.network,
        "predictor": ranking.predictor,
        "metadata": ranking.metadata,
    }
    with open(path + ".meta.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_ranking(path):
    meta = {"network": "", "predictor": "", "metadata": {}}
    meta_path = path + ".meta.json"
    if os.path.exists(meta_path):
        with open(meta_path, encoding="utf-8") as fh:
            meta.update(json.load(fh))
    actors, scores = [], []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "rank,actor,score":
            raise ValueError(f"{path}: unexpected header {header!r}")
        for lineno, line in enumerate(fh, 2):
            parts = line.strip().split(",")
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected rank,actor,score")
            actors.append(int(parts[1]))
            scores.append(float(parts[2]))
    return Ranking(meta["network"], meta["predictor"], tuple(actors), tuple(scores),
                   meta.get("metadata", {}))
