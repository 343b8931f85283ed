"""Synthetic dynamic communities: a node pool with churn and label flips.

A pool of ``N`` labelled nodes feeds a network of ``n`` active nodes.  Each
iteration every active node leaves with probability ``churn`` and is replaced
by a node drawn from the pool; then every active node switches to one of the
other ``k - 1`` labels with probability ``flip``.  Pool nodes keep their label
while out of the network.  There are no edges; labels are the ground truth.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .community import Partition
from .errors import InvalidConfigError

INACTIVE = -1


@dataclass(frozen=True)
class SynthConfig:
    pool_size: int = 500
    network_size: int = 400
    community_count: int = 4
    churn: float = 0.0
    flip: float = 0.0
    iterations: int = 50
    seed: int = 0

    def validate(self) -> "SynthConfig":
        if not 0 < self.network_size < self.pool_size:
            raise InvalidConfigError("need 0 < network_size < pool_size")
        if self.community_count < 2:
            raise InvalidConfigError("need at least 2 communities")
        if self.iterations < 1:
            raise InvalidConfigError("need at least 1 iteration")
        for name in ("churn", "flip"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise InvalidConfigError(f"{name} must lie in [0, 1]")
        return self


@dataclass
class SynthState:
    labels: np.ndarray  # label of every pool node, active or not
    active: np.ndarray  # sorted ids of the active nodes
    iteration: int
    rng: np.random.Generator
    departures: int = 0  # departures in the most recent step

    def partition(self) -> Partition:
        return Partition({int(v): int(self.labels[v]) for v in self.active}, (self.iteration, self.iteration + 1))


def synth_init(cfg: SynthConfig) -> SynthState:
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    labels = rng.integers(0, cfg.community_count, size=cfg.pool_size)
    active = np.sort(rng.choice(cfg.pool_size, size=cfg.network_size, replace=False))
    return SynthState(labels, active, 0, rng)


def synth_step(state: SynthState, cfg: SynthConfig) -> SynthState:
    """Advance one iteration: churn, then label flips.

    Random draws happen in a fixed order: one uniform per active node for
    departure, the replacement choice, one uniform per active node for
    flipping, then the new label offsets.  Replacements come from the nodes
    that were inactive at the start of the step; if more nodes want to leave
    than there are such candidates, only a random subset of them leaves.
    """
    rng = state.rng
    labels = state.labels.copy()
    active = state.active
    pool = np.setdiff1d(np.arange(len(labels)), active, assume_unique=True)

    leaving = active[rng.random(len(active)) < cfg.churn]
    arrivals = np.empty(0, dtype=active.dtype)
    if len(leaving):
        take = min(len(leaving), len(pool))
        arrivals = rng.choice(pool, size=take, replace=False)
        if take < len(leaving):
            leaving = rng.choice(leaving, size=take, replace=False)
        active = np.sort(np.concatenate([np.setdiff1d(active, leaving, assume_unique=True), arrivals]))

    # every node now in the network may flip, including this step's arrivals
    flips = active[rng.random(len(active)) < cfg.flip]
    if len(flips):
        offsets = rng.integers(1, cfg.community_count, size=len(flips))
        labels[flips] = (labels[flips] + offsets) % cfg.community_count
    return SynthState(labels, active, state.iteration + 1, rng, departures=len(arrivals))


@dataclass(frozen=True)
class SynthRun:
    config: SynthConfig
    partitions: list
    trace: np.ndarray  # (iterations, pool_size): label if active else INACTIVE


def synth_run(cfg: SynthConfig) -> SynthRun:
    """``cfg.iterations`` partitions: the initial state followed by ``iterations - 1`` steps."""
    state = synth_init(cfg)
    partitions = []
    trace = np.full((cfg.iterations, cfg.pool_size), INACTIVE, dtype=np.int64)
    for t in range(cfg.iterations):
        if t:
            state = synth_step(state, cfg)
        partitions.append(state.partition())
        trace[t, state.active] = state.labels[state.active]
    return SynthRun(cfg, partitions, trace)
