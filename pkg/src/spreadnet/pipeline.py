"""Spreading-potential dataset pipeline.

Runs the simulation grid per network, averages potentials over the
feasible activation probabilities of each protocol, normalizes them
coordinate-wise by the per-network maximum, scores actors with the
weighted spreading-potential score, and persists one CSV table per
(network, protocol) together with a provenance manifest.
"""

import hashlib
import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from spreadnet import __version__, mln
from spreadnet.micm import Protocol, grid_means
from spreadnet.rng import ALGORITHM_ID

SPS_WEIGHTS_DEFAULT = (0.5, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0)

DEFAULT_PIS = tuple(round(0.05 * i, 2) for i in range(1, 21))
FEASIBLE_AND = (0.80, 0.85, 0.90, 0.95)
FEASIBLE_OR = (0.05, 0.10, 0.15, 0.20)

CSV_HEADER = "actor,p_ex,p_sl,p_pi,p_pl,p_ex_n,p_sl_n,p_pi_n,p_pl_n,sps"


class DegenerateNetworkError(ValueError):
    """Network too small for ranking (fewer than 2 actors)."""


@dataclass(frozen=True)
class GridSpec:
    protocols: tuple = (Protocol.AND, Protocol.OR)
    pis: tuple = DEFAULT_PIS
    repetitions: int = 40
    feasible_pis: dict = field(
        default_factory=lambda: {Protocol.AND: FEASIBLE_AND, Protocol.OR: FEASIBLE_OR}
    )

    def __post_init__(self):
        if self.repetitions <= 0:
            raise ValueError("repetitions must be positive")
        grid = {round(p, 6) for p in self.pis}
        for proto, feas in self.feasible_pis.items():
            missing = [p for p in feas if round(p, 6) not in grid]
            if missing:
                raise ValueError(f"feasible pis {missing} for {proto} not in the pi grid")


@dataclass(frozen=True)
class SpsTable:
    network: str
    protocol: Protocol
    raw: np.ndarray  # (n_actors, 4) averaged potentials
    norm: np.ndarray  # (n_actors, 4) coordinate-wise max-normalized
    sps: np.ndarray  # (n_actors,)
    saddle_value: float
    saddle_rank: int  # number of actors at or above the saddle cutoff

    @property
    def n_actors(self):
        return len(self.sps)


def sps(p_tilde, weights=SPS_WEIGHTS_DEFAULT):
    """Weighted score of a normalized potential vector, in [0, 1].

    Rewards many exposed actors and an early, high activation peak while
    penalizing long cascades: w0*ex + w1*(1-sl) + w2*pi + w3*(1-pl).
    """
    p = np.asarray(p_tilde, dtype=float)
    if p.shape[-1] != 4:
        raise ValueError("expected 4 coordinates")
    if np.any(p < 0) or np.any(p > 1):
        raise ValueError("normalized potentials must lie in [0, 1]")
    w = np.asarray(weights, dtype=float)
    return p[..., 0] * w[0] + (1 - p[..., 1]) * w[1] + p[..., 2] * w[2] + (1 - p[..., 3]) * w[3]


def normalize_potentials(raw):
    """Divide each coordinate by its maximum over actors; an all-zero
    coordinate stays zero instead of producing 0/0."""
    raw = np.asarray(raw, dtype=float)
    maxima = raw.max(axis=0)
    safe = np.where(maxima > 0, maxima, 1.0)
    return raw / safe


def ranking_order(scores):
    """Actor ids sorted by score descending, ties by ascending id."""
    scores = np.asarray(scores)
    return np.lexsort((np.arange(len(scores)), -scores))


def saddle_point(sps_values):
    """Nearest-rank 80th-percentile cutoff.

    Returns (value, k_s) where k_s = ceil(0.2*|A|) actors rank at or
    above the cutoff value.
    """
    n = len(sps_values)
    k_s = max(1, math.ceil(0.2 * n))
    order = ranking_order(sps_values)
    return float(np.asarray(sps_values)[order[k_s - 1]]), k_s


def build_sps_table(net, grid, protocol, master_seed, network_name="", jobs=1,
                    weights=SPS_WEIGHTS_DEFAULT):
    """Simulate every actor over the protocol's feasible pi values and
    derive the per-actor score table."""
    if net.n_actors < 2:
        raise DegenerateNetworkError("ranking is undefined for networks with < 2 actors")
    if protocol not in grid.protocols:
        raise ValueError(f"protocol {protocol} not in grid")
    feasible = grid.feasible_pis[protocol]
    means = grid_means(
        net, protocol, feasible,
        repetitions=grid.repetitions, master_seed=master_seed, jobs=jobs,
    )
    raw = means.mean(axis=1)  # average raw p over feasible pi, then normalize
    norm = normalize_potentials(raw)
    scores = sps(norm, weights)
    value, k_s = saddle_point(scores)
    return SpsTable(network_name, protocol, raw, norm, scores, value, k_s)


# -- transformations -------------------------------------------------------

TRANSFORM_KINDS = (
    "none",
    "norm_max",
    "norm_act",
    "norm_act_diam",
    "log",
    "log_norm_max",
    "scatter",
    "norm_max_scatter",
)


def scatter(x):
    """exp(3x)/exp(3); amplifies high-potential spreaders, order-preserving."""
    return np.exp(3.0 * np.asarray(x, dtype=float) - 3.0)


def inverse_scatter(x):
    return (np.log(np.asarray(x, dtype=float)) + 3.0) / 3.0


def network_context(net):
    """(n_actors, diameter, connected) of the flattened network.

    The diameter is taken over the largest connected component; callers
    should flag records from disconnected networks.
    """
    flat = net.flatten()
    indptr, indices = flat.csr(0)
    n = flat.n_actors
    comp = np.full(n, -1, dtype=np.int64)
    sizes = []
    for start in range(n):
        if comp[start] >= 0:
            continue
        cid = len(sizes)
        stack = [start]
        comp[start] = cid
        size = 1
        while stack:
            u = stack.pop()
            for v in indices[indptr[u]:indptr[u + 1]]:
                if comp[v] < 0:
                    comp[v] = cid
                    size += 1
                    stack.append(v)
        sizes.append(size)
    largest = int(np.argmax(sizes))
    members = np.flatnonzero(comp == largest)
    diameter = 0
    for src in members:
        dist = np.full(n, -1, dtype=np.int64)
        dist[src] = 0
        frontier = [src]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for u in frontier:
                for v in indices[indptr[u]:indptr[u + 1]]:
                    if dist[v] < 0:
                        dist[v] = d
                        nxt.append(v)
            frontier = nxt
        diameter = max(diameter, int(dist[members].max()))
    return n, diameter, len(sizes) == 1


def transform(p, kind, n_actors=None, diameter=None):
    """Apply a label transformation to an (n, 4) potential array or a
    score column.  Composite kinds apply norm_max first."""
    p = np.asarray(p, dtype=float)
    if kind == "none":
        return p.copy()
    if kind == "norm_max":
        if p.ndim == 1:
            m = p.max()
            return p / m if m > 0 else p.copy()
        return normalize_potentials(p)
    if kind == "norm_act":
        if n_actors is None:
            raise ValueError("norm_act requires n_actors")
        return p / n_actors
    if kind == "norm_act_diam":
        if p.ndim != 2 or p.shape[1] != 4:
            raise ValueError("norm_act_diam applies to (n, 4) potential arrays")
        if n_actors is None or diameter is None:
            raise ValueError("norm_act_diam requires n_actors and diameter")
        out = p.copy()
        out[:, [0, 2]] /= n_actors
        out[:, [1, 3]] /= max(diameter, 1)
        return out
    if kind == "log":
        return np.log(p + 1.0)
    if kind == "log_norm_max":
        return np.log(transform(p, "norm_max") + 1.0)
    if kind == "scatter":
        return scatter(p)
    if kind == "norm_max_scatter":
        return scatter(transform(p, "norm_max"))
    raise ValueError(f"unknown transform {kind!r}")


# -- persistence -----------------------------------------------------------


def _fmt(x):
    # 9 significant digits; correctly-rounded decimal shortest form
    return format(float(x), ".9g")


def write_sps_csv(table, path):
    lines = [CSV_HEADER]
    for a in range(table.n_actors):
        row = [str(a)]
        row.extend(_fmt(v) for v in table.raw[a])
        row.extend(_fmt(v) for v in table.norm[a])
        row.append(_fmt(table.sps[a]))
        lines.append(",".join(row))
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, path)


def read_sps_csv(path, network="", protocol=None):
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {header!r}")
        raw, norm, scores = [], [], []
        for lineno, line in enumerate(fh, 2):
            parts = line.strip().split(",")
            if len(parts) != 10:
                raise ValueError(f"{path}:{lineno}: expected 10 columns")
            if int(parts[0]) != lineno - 2:
                raise ValueError(f"{path}:{lineno}: actor ids must be dense and ordered")
            raw.append([float(v) for v in parts[1:5]])
            norm.append([float(v) for v in parts[5:9]])
            scores.append(float(parts[9]))
    scores = np.array(scores)
    value, k_s = saddle_point(scores)
    if network == "":
        network = os.path.basename(path).split("__")[0]
    if protocol is None:
        stem = os.path.splitext(os.path.basename(path))[0]
        if "__" in stem:
            protocol = Protocol(stem.rsplit("__", 1)[1])
    return SpsTable(network, protocol, np.array(raw), np.array(norm), scores, value, k_s)


def sha256_file(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


DECISION_FLAGS = {
    "seed_counts_as_iteration0": True,
    "p_sl_excludes_terminating_empty_iteration": True,
    "peak_tie_break": "earliest-iteration",
    "and_gate_scope": "presence-layers",
    "pi_averaging": "average-raw-then-normalize",
    "saddle_estimator": "nearest-rank, k_s = ceil(0.2*|A|)",
    "diameter": "largest-component eccentricity of flattened network",
}


def run_pipeline(corpus_dir, grid, out_dir, master_seed, jobs=1, force=False,
                 progress=None):
    """Build all (network, protocol) score tables under out_dir.

    Idempotent: outputs already listed in the manifest with matching
    checksums are not recomputed unless ``force``.  Returns the manifest.
    """
    names = sorted(
        os.path.splitext(f)[0] for f in os.listdir(corpus_dir) if f.endswith(".mln")
    )
    if not names:
        raise ValueError(f"no .mln networks in {corpus_dir}")
    os.makedirs(out_dir, exist_ok=True)
    manifest_path = os.path.join(out_dir, "manifest.json")
    previous = {}
    if not force and os.path.exists(manifest_path):
        with open(manifest_path, encoding="utf-8") as fh:
            for entry in json.load(fh).get("tables", []):
                previous[entry["file"]] = entry["sha256"]

    tables = []
    flags = {}
    for name in names:
        net = mln.load_network(os.path.join(corpus_dir, f"{name}.mln"))
        _, _, connected = network_context(net)
        flags[name] = {"flattened_connected": connected}
        for protocol in grid.protocols:
            fname = f"{name}__{protocol.value}.csv"
            fpath = os.path.join(out_dir, fname)
            if (
                fname in previous
                and os.path.exists(fpath)
                and sha256_file(fpath) == previous[fname]
            ):
                tables.append({"file": fname, "network": name,
                               "protocol": protocol.value, "sha256": previous[fname]})
                continue
            if progress:
                progress(f"simulating {name} ({protocol.value})")
            table = build_sps_table(net, grid, protocol, master_seed,
                                    network_name=name, jobs=jobs)
            write_sps_csv(table, fpath)
            tables.append({"file": fname, "network": name,
                           "protocol": protocol.value, "sha256": sha256_file(fpath)})

    manifest = {
        "version": __version__,
        "rng_algorithm": ALGORITHM_ID,
        "master_seed": master_seed,
        "grid": {
            "protocols": [p.value for p in grid.protocols],
            "pis": list(grid.pis),
            "repetitions": grid.repetitions,
            "feasible_pis": {p.value: list(v) for p, v in grid.feasible_pis.items()},
        },
        "decisions": DECISION_FLAGS,
        "network_flags": flags,
        "tables": tables,
    }
    tmp = manifest_path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, manifest_path)
    return manifest
