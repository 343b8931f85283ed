"""Per-snapshot community detection and the statistics used to pick a window size."""
from __future__ import annotations

import math
import random
from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import EmptySnapshotError, IncompletePartitionError, UndefinedModularityError
from .temporal import Snapshot, sorted_nodes

# gains closer than this are treated as ties
_GAIN_EPS = 1e-12


@dataclass(frozen=True, eq=True)
class Partition(Mapping):
    """Node -> community label, optionally tagged with the window it came from.

    Behaves as a read-only mapping, so a plain ``dict`` can be used anywhere a
    ``Partition`` is accepted.
    """

    assignment: dict = field(default_factory=dict)
    window: tuple | None = None

    def __getitem__(self, node):
        return self.assignment[node]

    def __iter__(self):
        return iter(self.assignment)

    def __len__(self):
        return len(self.assignment)

    __hash__ = None

    @property
    def nodes(self) -> frozenset:
        return frozenset(self.assignment)

    @property
    def community_count(self) -> int:
        return len(set(self.assignment.values()))

    def canonical(self) -> "Partition":
        """Relabel to 0..C-1 by first appearance over sorted node ids."""
        return Partition(canonical_labels(self.assignment), self.window)

    def communities(self) -> list[set]:
        groups: dict = {}
        for node, label in self.assignment.items():
            groups.setdefault(label, set()).add(node)
        return list(groups.values())


def canonical_labels(assignment: Mapping) -> dict:
    remap: dict = {}
    out = {}
    for node in sorted_nodes(assignment):
        out[node] = remap.setdefault(assignment[node], len(remap))
    return out


@dataclass(frozen=True)
class SnapshotStats:
    window: tuple
    node_count: int
    edge_count: int
    edge_node_ratio: float
    lcc_proportion: float
    modularity: float  # nan when the snapshot has no edges
    community_count: int


def _edge_weights(s: Snapshot):
    return s.weights if s.weights is not None else (1.0,) * len(s.edges)


def modularity(s: Snapshot, p: Mapping, resolution: float = 1.0) -> float:
    """Newman modularity of ``p`` on the simple undirected snapshot ``s``.

    Computed per community as ``L_c/m - resolution * (D_c / 2m)**2`` where
    ``L_c`` is the internal edge weight and ``D_c`` the summed degree.
    """
    if not s.edges:
        raise UndefinedModularityError("modularity is undefined on an edgeless snapshot")
    missing = [v for v in s.nodes if v not in p]
    if missing:
        raise IncompletePartitionError(f"{len(missing)} node(s) lack a label, e.g. {missing[0]!r}")
    internal: dict = {}
    degree: dict = {}
    m = 0.0
    for (u, v), w in zip(s.edges, _edge_weights(s)):
        cu, cv = p[u], p[v]
        m += w
        degree[cu] = degree.get(cu, 0.0) + w
        degree[cv] = degree.get(cv, 0.0) + w
        if cu == cv:
            internal[cu] = internal.get(cu, 0.0) + w
    terms = []
    for c, d in degree.items():
        terms.append(internal.get(c, 0.0) / m)
        terms.append(-resolution * (d / (2.0 * m)) ** 2)
    return math.fsum(terms)


def singleton_partition(s: Snapshot) -> Partition:
    return Partition({v: i for i, v in enumerate(s.nodes)}, s.window)


def _move_nodes(adj, k, two_m, resolution, order):
    """Local moving phase on one level. Returns (community per node, moved?)."""
    n = len(adj)
    comm = list(range(n))
    tot = list(k)
    any_move = False
    while True:
        moves = 0
        for i in order:
            ci = comm[i]
            ki = k[i]
            links: dict[int, float] = {}
            for j, w in adj[i].items():
                cj = comm[j]
                links[cj] = links.get(cj, 0.0) + w
            tot[ci] -= ki
            scale = resolution * ki / two_m
            best = ci
            best_gain = links.get(ci, 0.0) - tot[ci] * scale
            # staying wins ties; otherwise the smallest label among equal gains
            for c in sorted(links):
                if c == ci:
                    continue
                gain = links[c] - tot[c] * scale
                if gain > best_gain + _GAIN_EPS:
                    best, best_gain = c, gain
            tot[best] += ki
            if best != ci:
                comm[i] = best
                moves += 1
        if moves == 0:
            return comm, any_move
        any_move = True


def _aggregate(adj, loops, comm):
    labels = {}
    for c in comm:
        labels.setdefault(c, len(labels))
    new = [labels[c] for c in comm]
    size = len(labels)
    new_adj = [dict() for _ in range(size)]
    new_loops = [0.0] * size
    for i, nbrs in enumerate(adj):
        ci = new[i]
        new_loops[ci] += loops[i]
        for j, w in nbrs.items():
            cj = new[j]
            if ci == cj:
                # each internal edge is seen from both endpoints
                new_loops[ci] += w / 2.0
            else:
                new_adj[ci][cj] = new_adj[ci].get(cj, 0.0) + w
    return new_adj, new_loops, new


def louvain(s: Snapshot, resolution: float = 1.0, seed: int = 0) -> Partition:
    """Classic two-phase Louvain modularity maximisation.

    Each level visits nodes in an order drawn from ``random.Random(seed)``.
    A level ends after a full pass without moves; the run ends when a level
    makes no move at all.  Isolated nodes stay in singleton communities.
    The result is canonicalised, so equal seeds give equal partitions.
    """
    if s.is_empty:
        raise EmptySnapshotError("cannot detect communities in a snapshot with no nodes")
    index = {v: i for i, v in enumerate(s.nodes)}
    n = len(s.nodes)
    adj = [dict() for _ in range(n)]
    for (u, v), w in zip(s.edges, _edge_weights(s)):
        iu, iv = index[u], index[v]
        adj[iu][iv] = adj[iu].get(iv, 0.0) + w
        adj[iv][iu] = adj[iv].get(iu, 0.0) + w
    loops = [0.0] * n
    membership = list(range(n))
    rng = random.Random(seed)

    two_m = 2.0 * sum(_edge_weights(s))
    if two_m > 0:
        while True:
            k = [sum(nbrs.values()) + 2.0 * lp for nbrs, lp in zip(adj, loops)]
            order = list(range(len(adj)))
            rng.shuffle(order)
            comm, moved = _move_nodes(adj, k, two_m, resolution, order)
            if not moved:
                break
            adj, loops, new = _aggregate(adj, loops, comm)
            membership = [new[c] for c in membership]

    return Partition(canonical_labels(dict(zip(s.nodes, membership))), s.window)


def lcc_proportion(s: Snapshot) -> float:
    """Size of the largest connected component over the node count."""
    if s.is_empty:
        raise EmptySnapshotError("LCC proportion needs at least one node")
    n = s.node_count
    if not s.edges:
        return 1.0 / n
    index = {v: i for i, v in enumerate(s.nodes)}
    rows = np.fromiter((index[u] for u, _ in s.edges), dtype=np.int64, count=len(s.edges))
    cols = np.fromiter((index[v] for _, v in s.edges), dtype=np.int64, count=len(s.edges))
    graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    _, labels = connected_components(graph, directed=False)
    return int(np.bincount(labels).max()) / n


def edge_node_ratio(s: Snapshot) -> float:
    if s.is_empty:
        raise EmptySnapshotError("edge/node ratio needs at least one node")
    return s.edge_count / s.node_count


def snapshot_stats(s: Snapshot, resolution: float = 1.0, seed: int = 0, detector=louvain) -> SnapshotStats:
    part = detector(s, resolution=resolution, seed=seed)
    q = modularity(s, part, resolution) if s.edges else float("nan")
    return SnapshotStats(
        window=s.window,
        node_count=s.node_count,
        edge_count=s.edge_count,
        edge_node_ratio=edge_node_ratio(s),
        lcc_proportion=lcc_proportion(s),
        modularity=q,
        community_count=part.community_count,
    )
