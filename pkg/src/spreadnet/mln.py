"""Multilayer network representation, validation and file formats.

A network is a set of actors shared across layers; each layer holds an
undirected, unweighted simple graph over the actors present in it.  No
edge crosses layers.  Instances are immutable after construction and can
be shared freely between workers.

Actors and layers use dense integer ids internally; string names from
input files are resolved to ids at parse time and kept for round-trips.
Adjacency is stored per layer as CSR-style sorted neighbor arrays, since
sequential neighbor scans dominate the simulation loop.
"""

import os
from dataclasses import dataclass, field

import numpy as np


class NotFoundError(KeyError):
    """Unknown actor or layer id/name."""


class NetworkFormatError(ValueError):
    """Malformed network file."""


@dataclass(frozen=True, eq=False)
class MultilayerNetwork:
    actor_names: tuple
    layer_names: tuple
    # per layer: (m, 2) int array of canonical (min, max) actor pairs, row-sorted
    edges: tuple
    # (n_layers, n_actors) bool
    presence: np.ndarray
    _csr: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n_actors(self):
        return len(self.actor_names)

    @property
    def n_layers(self):
        return len(self.layer_names)

    @staticmethod
    def build(actor_names, layer_names, layer_edges, presence=None):
        """Construct a network from per-layer edge pair lists.

        ``layer_edges`` maps layer index -> iterable of (a, b) id pairs.
        Pairs are canonicalized to (min, max) and deduplicated; self-loops
        are kept so that validate() can report them.  ``presence`` is an
        optional (n_layers, n_actors) bool array; when omitted it is
        inferred as "actor appears in some edge of the layer".
        """
        actor_names = tuple(actor_names)
        layer_names = tuple(layer_names)
        n, nl = len(actor_names), len(layer_names)
        if len(set(actor_names)) != n:
            raise NetworkFormatError("duplicate actor names")
        if len(set(layer_names)) != nl:
            raise NetworkFormatError("duplicate layer names")
        packed = []
        for l in range(nl):
            pairs = {(min(a, b), max(a, b)) for a, b in layer_edges.get(l, ())}
            for a, b in pairs:
                if not (0 <= a < n and 0 <= b < n):
                    raise NotFoundError(f"edge endpoint out of range in layer {l}: ({a}, {b})")
            arr = np.array(sorted(pairs), dtype=np.int64).reshape(-1, 2)
            packed.append(arr)
        if presence is None:
            presence = np.zeros((nl, n), dtype=bool)
            for l, arr in enumerate(packed):
                presence[l, arr.ravel()] = True
        else:
            presence = np.asarray(presence, dtype=bool).copy()
            if presence.shape != (nl, n):
                raise NetworkFormatError(f"presence shape {presence.shape} != {(nl, n)}")
        presence.setflags(write=False)
        return MultilayerNetwork(actor_names, layer_names, tuple(packed), presence)

    # -- id checks ---------------------------------------------------------

    def _check_actor(self, a):
        if not 0 <= a < self.n_actors:
            raise NotFoundError(f"actor {a} not in network (|A|={self.n_actors})")

    def _check_layer(self, l):
        if not 0 <= l < self.n_layers:
            raise NotFoundError(f"layer {l} not in network (|L|={self.n_layers})")

    def actor_id(self, name):
        try:
            return self.actor_names.index(name)
        except ValueError:
            raise NotFoundError(f"actor {name!r} not in network") from None

    def layer_id(self, name):
        try:
            return self.layer_names.index(name)
        except ValueError:
            raise NotFoundError(f"layer {name!r} not in network") from None

    # -- adjacency ---------------------------------------------------------

    def csr(self, l):
        """(indptr, indices) sorted-neighbor CSR of layer ``l``."""
        self._check_layer(l)
        cached = self._csr.get(l)
        if cached is not None:
            return cached
        n = self.n_actors
        arr = self.edges[l]
        src = np.concatenate([arr[:, 0], arr[:, 1]])
        dst = np.concatenate([arr[:, 1], arr[:, 0]])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        np.cumsum(indptr, out=indptr)
        indices = dst.astype(np.int64)
        indptr.setflags(write=False)
        indices.setflags(write=False)
        self._csr[l] = (indptr, indices)
        return self._csr[l]

    def neighbors(self, a, l):
        """Actors sharing an edge with ``a`` in layer ``l``, as a set."""
        self._check_actor(a)
        indptr, indices = self.csr(l)
        return set(indices[indptr[a]:indptr[a + 1]].tolist())

    def degree(self, a, l):
        self._check_actor(a)
        indptr, _ = self.csr(l)
        return int(indptr[a + 1] - indptr[a])

    def actor_degree(self, a):
        return sum(self.degree(a, l) for l in range(self.n_layers))

    def neighborhood(self, a):
        """Union of per-layer neighbor sets; never contains ``a``."""
        self._check_actor(a)
        out = set()
        for l in range(self.n_layers):
            out |= self.neighbors(a, l)
        out.discard(a)
        return out

    def degrees(self):
        """(n_layers, n_actors) per-layer degree matrix."""
        d = np.zeros((self.n_layers, self.n_actors), dtype=np.int64)
        for l in range(self.n_layers):
            indptr, _ = self.csr(l)
            d[l] = np.diff(indptr)
        return d

    def structurally_equal(self, other):
        return (
            self.actor_names == other.actor_names
            and self.layer_names == other.layer_names
            and np.array_equal(self.presence, other.presence)
            and all(np.array_equal(a, b) for a, b in zip(self.edges, other.edges))
        )

    def flatten(self, layer_name=None):
        """Single-layer network with an edge wherever >=1 layer has one."""
        if layer_name is None:
            layer_name = self.layer_names[0] if self.n_layers == 1 else "flat"
        merged = set()
        for arr in self.edges:
            merged.update(map(tuple, arr.tolist()))
        presence = self.presence.any(axis=0)[None, :]
        return MultilayerNetwork.build(
            self.actor_names, (layer_name,), {0: merged}, presence=presence
        )

    def validate(self):
        """Return a list of invariant violations; empty means well-formed."""
        violations = []
        for l, arr in enumerate(self.edges):
            lname = self.layer_names[l]
            for a, b in arr.tolist():
                if a == b:
                    violations.append(f"self-loop on actor {a} in layer {lname!r}")
                    continue
                for end in (a, b):
                    if not self.presence[l, end]:
                        violations.append(
                            f"node not in V: actor {end} has an edge but no presence "
                            f"in layer {lname!r}"
                        )
        return violations

    def total_edges(self):
        return sum(len(arr) for arr in self.edges)

    def node_count(self):
        """Number of (actor, layer) nodes, i.e. presence flags set."""
        return int(self.presence.sum())


# -- file format -----------------------------------------------------------
#
#   #actors          one actor name per line
#   #layers          one layer name per line
#   #edges           layer_name,actor_name,actor_name
#   #presence        layer_name,actor_name      (optional; overrides inference)

_SECTIONS = ("#actors", "#layers", "#edges", "#presence")


def parse_network(text):
    sections = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line not in _SECTIONS:
                raise NetworkFormatError(f"line {lineno}: unknown section {line!r}")
            current = line
            sections.setdefault(current, [])
            continue
        if current is None:
            raise NetworkFormatError(f"line {lineno}: content before any section header")
        sections[current].append((lineno, line))

    for required in ("#actors", "#layers"):
        if required not in sections:
            raise NetworkFormatError(f"missing {required} section")

    actor_names = [line for _, line in sections["#actors"]]
    layer_names = [line for _, line in sections["#layers"]]
    aid = {name: i for i, name in enumerate(actor_names)}
    lid = {name: i for i, name in enumerate(layer_names)}
    if len(aid) != len(actor_names):
        raise NetworkFormatError("duplicate actor names")
    if len(lid) != len(layer_names):
        raise NetworkFormatError("duplicate layer names")

    layer_edges = {}
    for lineno, line in sections.get("#edges", []):
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 3:
            raise NetworkFormatError(f"line {lineno}: expected layer,actor,actor")
        lname, a, b = parts
        for key, table, kind in ((lname, lid, "layer"), (a, aid, "actor"), (b, aid, "actor")):
            if key not in table:
                raise NetworkFormatError(f"line {lineno}: unknown {kind} {key!r}")
        layer_edges.setdefault(lid[lname], []).append((aid[a], aid[b]))

    presence = None
    if "#presence" in sections:
        presence = np.zeros((len(layer_names), len(actor_names)), dtype=bool)
        for lineno, line in sections["#presence"]:
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 2:
                raise NetworkFormatError(f"line {lineno}: expected layer,actor")
            lname, a = parts
            if lname not in lid or a not in aid:
                raise NetworkFormatError(f"line {lineno}: unknown layer or actor")
            presence[lid[lname], aid[a]] = True

    return MultilayerNetwork.build(actor_names, layer_names, layer_edges, presence=presence)


def serialize_network(net):
    """Canonical text form; stable byte-for-byte for equal networks."""
    lines = ["#actors"]
    lines.extend(net.actor_names)
    lines.append("#layers")
    lines.extend(net.layer_names)
    lines.append("#edges")
    for l in range(net.n_layers):
        lname = net.layer_names[l]
        for a, b in net.edges[l].tolist():
            lines.append(f"{lname},{net.actor_names[a]},{net.actor_names[b]}")
    # presence always written explicitly so isolates survive round-trips
    lines.append("#presence")
    for l in range(net.n_layers):
        for a in np.flatnonzero(net.presence[l]).tolist():
            lines.append(f"{net.layer_names[l]},{net.actor_names[a]}")
    return "\n".join(lines) + "\n"


def load_network(path):
    with open(path, encoding="utf-8") as fh:
        return parse_network(fh.read())


def save_network(net, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_network(net))


def load_edgelist_dir(path, extensions=(".edges", ".txt", ".csv")):
    """Load a third-party dataset stored as one edge-list file per layer.

    Each file becomes a layer named by its stem; lines hold two actor
    names separated by comma, tab or whitespace.
    """
    files = sorted(
        f for f in os.listdir(path) if os.path.splitext(f)[1].lower() in extensions
    )
    if not files:
        raise NetworkFormatError(f"no edge-list files in {path}")
    actor_ids = {}
    layer_names = []
    layer_edges = {}
    for l, fname in enumerate(files):
        layer_names.append(os.path.splitext(fname)[0])
        pairs = []
        with open(os.path.join(path, fname), encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                for sep in (",", "\t", None):
                    parts = line.split(sep)
                    if len(parts) >= 2:
                        break
                if len(parts) < 2:
                    raise NetworkFormatError(f"{fname}:{lineno}: expected two actor names")
                a, b = parts[0].strip(), parts[1].strip()
                for name in (a, b):
                    actor_ids.setdefault(name, len(actor_ids))
                pairs.append((actor_ids[a], actor_ids[b]))
        layer_edges[l] = pairs
    actor_names = [None] * len(actor_ids)
    for name, i in actor_ids.items():
        actor_names[i] = name
    return MultilayerNetwork.build(actor_names, layer_names, layer_edges)
