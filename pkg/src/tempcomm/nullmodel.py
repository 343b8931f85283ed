"""Degree-preserving null graphs and the modularity Z-score."""
from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .community import louvain, modularity
from .errors import CannotRewireError, TempCommError
from .temporal import Snapshot, node_sort_key


@dataclass(frozen=True)
class ZScoreReport:
    q_observed: float
    null_mean: float
    null_std: float
    z: float  # nan when z_defined is False
    z_defined: bool
    sample_count: int
    samples: tuple[float, ...]


def degree_preserving_rewire(s: Snapshot, seed: int = 0, swap_factor: int = 10) -> Snapshot:
    """Randomise ``s`` with ``swap_factor * |E|`` attempted double-edge swaps.

    A swap takes edges (a, b), (c, d) and rewires them to (a, d), (c, b) or
    (a, c), (b, d) with equal probability.  Swaps creating a self-loop or an
    existing edge are rejected, so the result is simple and every node keeps
    its degree.  Edge weights are dropped.
    """
    if s.edge_count < 2:
        raise CannotRewireError(f"need at least 2 edges to rewire, got {s.edge_count}")
    if swap_factor < 1:
        raise ValueError("swap_factor must be a positive integer")
    rng = random.Random(seed)
    index = {v: i for i, v in enumerate(s.nodes)}
    edges = [(index[u], index[v]) for u, v in s.edges]
    present = set(edges)
    n_edges = len(edges)

    for _ in range(swap_factor * n_edges):
        i = rng.randrange(n_edges)
        j = rng.randrange(n_edges - 1)
        if j >= i:
            j += 1
        a, b = edges[i]
        c, d = edges[j]
        if rng.random() < 0.5:
            c, d = d, c
        # proposal: (a, d) and (c, b)
        if a == d or c == b:
            continue
        e1 = (a, d) if a < d else (d, a)
        e2 = (c, b) if c < b else (b, c)
        if e1 in present or e2 in present or e1 == e2:
            continue
        present.discard(edges[i])
        present.discard(edges[j])
        present.add(e1)
        present.add(e2)
        edges[i] = e1
        edges[j] = e2

    nodes = s.nodes
    out = sorted(((nodes[u], nodes[v]) for u, v in edges),
                 key=lambda e: (node_sort_key(e[0]), node_sort_key(e[1])))
    return Snapshot(s.window_start, s.window_end, nodes, tuple(out))


def _null_sample(args):
    s, sample_seed, resolution, swap_factor, detector = args
    g = degree_preserving_rewire(s, seed=sample_seed, swap_factor=swap_factor)
    return modularity(g, detector(g, resolution=resolution, seed=sample_seed), resolution)


def sample_seed(seed: int, k: int) -> int:
    """Seed of null sample ``k`` (1-based)."""
    return seed ^ k


def modularity_zscore(s: Snapshot, sample_count: int = 100, resolution: float = 1.0,
                      seed: int = 0, detector=louvain, swap_factor: int = 10,
                      workers: int = 1) -> ZScoreReport:
    """Z-score of the detected modularity against ``sample_count`` rewired graphs.

    The same detector is run on the snapshot (with ``seed``) and on each null
    graph (with that sample's seed).  The null spread uses the ``M - 1``
    divisor.  With zero spread the report carries ``z = nan`` and
    ``z_defined = False``.  ``workers > 1`` fans samples out to processes;
    the report is identical either way.
    """
    if sample_count < 2:
        raise ValueError("sample_count must be at least 2")
    if s.edge_count < 2:
        raise CannotRewireError(f"need at least 2 edges for a null model, got {s.edge_count}")
    q_obs = modularity(s, detector(s, resolution=resolution, seed=seed), resolution)

    jobs = [(s, sample_seed(seed, k), resolution, swap_factor, detector)
            for k in range(1, sample_count + 1)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            samples = list(pool.map(_null_sample, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        samples = [_null_sample(job) for job in jobs]

    arr = np.asarray(samples, dtype=float)
    mu = float(arr.mean())
    sigma = float(math.sqrt(((arr - mu) ** 2).sum() / (sample_count - 1)))
    if sigma > 0:
        z, defined = (q_obs - mu) / sigma, True
    else:
        z, defined = float("nan"), False
    return ZScoreReport(q_obs, mu, sigma, z, defined, sample_count, tuple(samples))


def zscore_or_nan(s: Snapshot, **kwargs) -> float:
    """Z-score value for summaries; nan where it is undefined or not computable."""
    try:
        report = modularity_zscore(s, **kwargs)
    except TempCommError:
        return float("nan")
    return report.z
