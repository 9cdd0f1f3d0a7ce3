"""Seed derivation for reproducible, order-independent experiments.

Every stochastic task derives its own 64-bit seed from the master seed
and a path of identifiers (protocol, pi index, actor, repetition, ...).
The derivation is a SHA-256 hash, so results never depend on the order
in which tasks are scheduled, and corpora are reproducible across
machines.  The generator algorithm is numpy's PCG64.
"""

import hashlib

import numpy as np

# Recorded in manifests so datasets declare how their streams were built.
ALGORITHM_ID = "sha256/pcg64"


def derive_seed(master_seed: int, *path) -> int:
    """Derive a 64-bit seed from a master seed and a path of identifiers."""
    h = hashlib.sha256()
    h.update(str(int(master_seed)).encode())
    for part in path:
        h.update(b"/")
        h.update(str(part).encode())
    return int.from_bytes(h.digest()[:8], "little")


def make_rng(master_seed: int, *path) -> np.random.Generator:
    """A PCG64 generator seeded from derive_seed(master_seed, *path)."""
    return np.random.Generator(np.random.PCG64(derive_seed(master_seed, *path)))
