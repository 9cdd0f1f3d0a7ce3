"""Multilayer independent cascade model (MICM) simulator.

Discrete-time cascade from a single seed actor.  At iteration t every
actor activated at t-1 attempts, in each layer where it is present, to
activate each still-inactive neighbor; each directed (activator, target,
layer) attempt is one Bernoulli(pi) trial and is never repeated.  The
per-layer success signals of a target are combined by the protocol
function: OR activates on any positive layer, AND requires a positive
signal in every layer where the target is present.

A run records the spreading-potential vector of its seed:
  p_ex  total activated actors, seed included
  p_sl  last iteration with at least one new activation
  p_pi  maximum new activations in a single iteration
  p_pl  earliest iteration attaining p_pi
The seed itself counts as one new activation at iteration 0.
"""

import concurrent.futures as cf
from dataclasses import dataclass
from enum import Enum

import numpy as np

from spreadnet.rng import derive_seed


class Protocol(str, Enum):
    AND = "and"
    OR = "or"


@dataclass(frozen=True)
class MicmConfig:
    pi: float
    protocol: Protocol
    seed_actor: int
    rng_seed: int

    def __post_init__(self):
        if not 0.0 <= self.pi <= 1.0:
            raise ValueError(f"pi={self.pi} outside [0, 1]")


@dataclass(frozen=True)
class SpreadingPotential:
    p_ex: int
    p_sl: int
    p_pi: int
    p_pl: int

    def as_array(self):
        return np.array([self.p_ex, self.p_sl, self.p_pi, self.p_pl], dtype=float)


@dataclass(frozen=True)
class AveragedPotential:
    p_ex: float
    p_sl: float
    p_pi: float
    p_pl: float
    repetitions: int

    def as_array(self):
        return np.array([self.p_ex, self.p_sl, self.p_pi, self.p_pl])


class _SimContext:
    """Per-network scratch-free state shared by repeated runs."""

    def __init__(self, net):
        self.n = net.n_actors
        self.layers = [net.csr(l) for l in range(net.n_layers)]
        self.presence = net.presence
        self.presence_count = net.presence.sum(axis=0).astype(np.int64)


def _gather_targets(indptr, indices, frontier):
    starts = indptr[frontier]
    counts = indptr[frontier + 1] - starts
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64), counts
    pos = np.arange(total) + np.repeat(starts - np.concatenate(([0], counts.cumsum()[:-1])), counts)
    return indices[pos], counts


def _run(ctx, cfg, record_trace=False):
    rng = np.random.Generator(np.random.PCG64(cfg.rng_seed))
    n = ctx.n
    active = np.zeros(n, dtype=bool)
    active[cfg.seed_actor] = True
    frontier = np.array([cfg.seed_actor], dtype=np.int64)
    new_counts = [1]
    hit_layers = np.zeros(n, dtype=np.int64)
    is_and = cfg.protocol is Protocol.AND
    trace = [(0, [cfg.seed_actor])] if record_trace else None
    attempts = [] if record_trace else None
    iteration = 0

    while frontier.size:
        iteration += 1
        touched = []
        for l, (indptr, indices) in enumerate(ctx.layers):
            present = ctx.presence[l, frontier]
            f = frontier if present.all() else frontier[present]
            if f.size == 0:
                continue
            targets, counts = _gather_targets(indptr, indices, f)
            inactive = ~active[targets]
            targets = targets[inactive]
            if record_trace:
                activators = np.repeat(f, counts)[inactive]
                attempts.extend(
                    (iteration, int(u), int(v), l)
                    for u, v in zip(activators.tolist(), targets.tolist())
                )
            if targets.size == 0:
                continue
            if cfg.pi >= 1.0:
                successes = targets
            elif cfg.pi <= 0.0:
                continue
            else:
                successes = targets[rng.random(targets.size) < cfg.pi]
            if successes.size:
                hit = np.unique(successes)
                hit_layers[hit] += 1
                touched.append(hit)

        if not touched:
            break
        candidates = np.unique(np.concatenate(touched))
        if is_and:
            newly = candidates[hit_layers[candidates] == ctx.presence_count[candidates]]
        else:
            newly = candidates
        hit_layers[candidates] = 0
        if newly.size == 0:
            break
        active[newly] = True
        new_counts.append(int(newly.size))
        if record_trace:
            trace.append((iteration, newly.tolist()))
        frontier = newly

    counts = np.array(new_counts)
    peak = int(counts.argmax())  # argmax is the earliest maximizer
    sp = SpreadingPotential(
        p_ex=int(counts.sum()),
        p_sl=len(counts) - 1,
        p_pi=int(counts.max()),
        p_pl=peak,
    )
    if record_trace:
        return sp, trace, attempts
    return sp


def simulate(net, cfg, record_trace=False):
    """Run one MICM cascade; deterministic for a fixed cfg.rng_seed.

    With ``record_trace`` returns (potential, trace, attempts) where
    trace lists (iteration, newly_active_ids) and attempts lists every
    (iteration, activator, target, layer) Bernoulli trial.
    """
    net._check_actor(cfg.seed_actor)
    return _run(_SimContext(net), cfg, record_trace=record_trace)


def simulate_avg(net, pi, protocol, seed_actor, repetitions, master_seed):
    """Mean potential over independent runs; run r is seeded by
    derive_seed(master_seed, r), so results are order-independent."""
    if repetitions <= 0:
        raise ValueError("repetitions must be positive")
    net._check_actor(seed_actor)
    ctx = _SimContext(net)
    acc = np.zeros(4)
    for r in range(repetitions):
        cfg = MicmConfig(pi, protocol, seed_actor, derive_seed(master_seed, r))
        acc += _run(ctx, cfg).as_array()
    acc /= repetitions
    return AveragedPotential(acc[0], acc[1], acc[2], acc[3], repetitions)


def _grid_chunk(net, protocol, pis, actors, repetitions, master_seed):
    ctx = _SimContext(net)
    out = np.zeros((len(actors), len(pis), 4))
    for i, actor in enumerate(actors):
        for j, pi in enumerate(pis):
            acc = np.zeros(4)
            for r in range(repetitions):
                seed = derive_seed(master_seed, protocol.value, f"{pi:.6f}", actor, r)
                acc += _run(ctx, MicmConfig(pi, protocol, actor, seed)).as_array()
            out[i, j] = acc / repetitions
    return out


def grid_means(net, protocol, pis, actors=None, repetitions=40, master_seed=0, jobs=1):
    """Averaged potentials for a (actor, pi) grid.

    Returns an (len(actors), len(pis), 4) array of per-configuration mean
    potential vectors.  Every run's seed is derived from (master_seed,
    protocol, pi, actor, repetition), so the result is identical no
    matter how the grid is chunked or scheduled.
    """
    if actors is None:
        actors = list(range(net.n_actors))
    actors = list(actors)
    pis = list(pis)
    if jobs is None or jobs <= 1 or len(actors) < 2:
        return _grid_chunk(net, protocol, pis, actors, repetitions, master_seed)
    chunks = np.array_split(np.array(actors), min(jobs * 4, len(actors)))
    out = np.zeros((len(actors), len(pis), 4))
    offsets = np.cumsum([0] + [len(c) for c in chunks])
    with cf.ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [
            pool.submit(_grid_chunk, net, protocol, pis, chunk.tolist(), repetitions, master_seed)
            for chunk in chunks
        ]
        for i, fut in enumerate(futures):
            out[offsets[i]:offsets[i + 1]] = fut.result()
    return out
