"""NMI and its union / intersection extensions for partitions over different node sets.

All three measures reduce to the same computation on two aligned label
vectors: ``2 I(L1; L2) / (H(L1) + H(L2))``.

* ``nmi``  requires both partitions to cover the same nodes.
* ``unmi`` aligns on the union of the node sets.  A node missing from one
  side is put in a reserved *virtual* community on that side.
* ``inmi`` aligns on the intersection and ignores nodes unique to either side.

Entropies are computed from sorted count vectors with ``math.fsum``, so two
labellings that are equal up to a bijection give exactly 1.0, and the three
measures agree bit for bit whenever the node sets coincide.
"""
from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptyIntersectionError, NodeSetMismatchError, TempCommError
from .temporal import sorted_nodes

MEASURES = ("nmi", "unmi", "inmi")


@dataclass(frozen=True)
class VirtualLabel:
    """Reserved community for nodes absent from one side of a union comparison."""

    side: int

    def __repr__(self):
        return f"m({self.side})"


@dataclass(frozen=True)
class AugmentedPair:
    union_nodes: tuple
    labels1: dict
    labels2: dict

    @property
    def virtual1(self) -> VirtualLabel:
        return VirtualLabel(1)

    @property
    def virtual2(self) -> VirtualLabel:
        return VirtualLabel(2)


@dataclass(frozen=True)
class ContingencyTable:
    """Joint label counts ``n_rs`` of two aligned labellings plus marginals."""

    row_labels: tuple
    col_labels: tuple
    joint: np.ndarray
    row_marginals: np.ndarray
    col_marginals: np.ndarray
    total: int

    @classmethod
    def from_labels(cls, labels1: Mapping, labels2: Mapping, scope=None) -> "ContingencyTable":
        """Cross-tabulate over ``scope`` (default: the shared node set)."""
        nodes = sorted_nodes(scope if scope is not None else set(labels1) & set(labels2))
        a, rows = _encode(labels1, nodes)
        b, cols = _encode(labels2, nodes)
        joint = np.zeros((len(rows), len(cols)), dtype=np.int64)
        np.add.at(joint, (a, b), 1)
        return cls(tuple(rows), tuple(cols), joint, joint.sum(axis=1), joint.sum(axis=0), len(nodes))

    def nmi(self) -> float:
        nz = self.joint[self.joint > 0]
        return _nmi_from_counts(nz, self.row_marginals, self.col_marginals, self.total)


@dataclass(frozen=True)
class SimilarityMatrix:
    """Symmetric matrix of one measure over a sequence of windows.

    ``windows`` holds the window start times (or plain indices).  Undefined
    entries (``inmi`` of disjoint node sets) are ``nan``.
    """

    measure: str
    windows: tuple
    values: np.ndarray

    def __len__(self):
        return len(self.windows)

    @property
    def undefined(self) -> np.ndarray:
        return np.isnan(self.values)

    def off_diagonal_mean(self) -> float:
        mask = ~np.eye(len(self), dtype=bool) & ~self.undefined
        return float(self.values[mask].mean()) if mask.any() else float("nan")


def _encode(labels: Mapping, nodes) -> tuple[np.ndarray, list]:
    codes: dict = {}
    arr = np.fromiter((codes.setdefault(labels[v], len(codes)) for v in nodes), dtype=np.int64,
                      count=len(nodes))
    return arr, list(codes)


def _xlogx_sum(counts) -> float:
    c = np.sort(np.asarray(counts, dtype=float))
    c = c[c > 0]
    return math.fsum((c * np.log(c)).tolist())


def _entropy(counts, total: int) -> float:
    return math.log(total) - _xlogx_sum(counts) / total


def _nmi_from_counts(joint_nonzero, rows, cols, total: int) -> float:
    h1 = _entropy(rows, total)
    h2 = _entropy(cols, total)
    if h1 + h2 == 0.0:
        # both sides are one community over the comparison scope
        return 1.0
    mutual = h1 + h2 - _entropy(joint_nonzero, total)
    return min(1.0, max(0.0, 2.0 * mutual / (h1 + h2)))


def _score_codes(a: np.ndarray, b: np.ndarray) -> float:
    """NMI of two aligned non-negative integer label vectors."""
    total = len(a)
    rows = np.bincount(a)
    cols = np.bincount(b)
    _, joint = np.unique(a * (int(b.max()) + 1) + b, return_counts=True)
    return _nmi_from_counts(joint, rows, cols, total)


def _labels_of(p) -> Mapping:
    if not isinstance(p, Mapping):
        raise TypeError(f"expected a Partition or mapping, got {type(p).__name__}")
    return p


def nmi(p1, p2) -> float:
    """Arithmetic-mean normalised mutual information of two partitions of one node set."""
    l1, l2 = _labels_of(p1), _labels_of(p2)
    nodes = set(l1)
    if nodes != set(l2):
        raise NodeSetMismatchError(
            "nmi needs identical node sets; use unmi or inmi for partitions of different nodes")
    if not nodes:
        raise TempCommError("nmi of two empty partitions is undefined")
    order = sorted_nodes(nodes)
    return _score_codes(_encode(l1, order)[0], _encode(l2, order)[0])


def augment_union(p1, p2) -> AugmentedPair:
    """Extend both labellings to ``V1 | V2`` using the virtual labels ``m(1)``, ``m(2)``."""
    l1, l2 = _labels_of(p1), _labels_of(p2)
    union = sorted_nodes(set(l1) | set(l2))
    if not union:
        raise TempCommError("both partitions are empty")
    m1, m2 = VirtualLabel(1), VirtualLabel(2)
    return AugmentedPair(
        union_nodes=tuple(union),
        labels1={v: l1.get(v, m1) for v in union},
        labels2={v: l2.get(v, m2) for v in union},
    )


def _encode_with_virtual(labels: Mapping, nodes) -> np.ndarray:
    codes: dict = {}
    raw = [codes.setdefault(labels[v], len(codes)) if v in labels else -1 for v in nodes]
    arr = np.asarray(raw, dtype=np.int64)
    arr[arr < 0] = len(codes)
    return arr


def unmi(p1, p2) -> float:
    """Union NMI: NMI over ``V1 | V2`` with absent nodes in a virtual community."""
    l1, l2 = _labels_of(p1), _labels_of(p2)
    union = sorted_nodes(set(l1) | set(l2))
    if not union:
        raise TempCommError("both partitions are empty")
    return _score_codes(_encode_with_virtual(l1, union), _encode_with_virtual(l2, union))


def restrict_to_intersection(p1, p2) -> tuple[dict, dict]:
    l1, l2 = _labels_of(p1), _labels_of(p2)
    shared = set(l1) & set(l2)
    return {v: l1[v] for v in shared}, {v: l2[v] for v in shared}


def inmi(p1, p2) -> float:
    """Intersection NMI: NMI over the nodes present in both partitions."""
    l1, l2 = _labels_of(p1), _labels_of(p2)
    shared = set(l1) & set(l2)
    if not shared:
        raise EmptyIntersectionError("inmi is undefined for partitions with no common node")
    order = sorted_nodes(shared)
    return _score_codes(_encode(l1, order)[0], _encode(l2, order)[0])


MEASURE_FUNCS = {"nmi": nmi, "unmi": unmi, "inmi": inmi}


def _global_codes(partitions: Sequence[Mapping]):
    universe = sorted_nodes(set().union(*(set(p) for p in partitions)))
    index = {v: i for i, v in enumerate(universe)}
    coded = []
    for p in partitions:
        arr = np.full(len(universe), -1, dtype=np.int64)
        codes: dict = {}
        for v in sorted_nodes(p):
            arr[index[v]] = codes.setdefault(p[v], len(codes))
        coded.append((arr, len(codes)))
    return coded


def pairwise_matrix(partitions: Sequence, measure: str, windows: Sequence | None = None) -> SimilarityMatrix:
    """All-pairs similarity matrix, diagonal included.

    Produces the same values as calling :func:`nmi` / :func:`unmi` /
    :func:`inmi` pair by pair, using a shared node index for speed.
    """
    if measure not in MEASURES:
        raise ValueError(f"unknown measure {measure!r}; choose from {MEASURES}")
    if len(partitions) < 2:
        raise ValueError("pairwise_matrix needs at least 2 partitions")
    partitions = [_labels_of(p) for p in partitions]
    if windows is None:
        windows = [p.window[0] if getattr(p, "window", None) else i for i, p in enumerate(partitions)]
    coded = _global_codes(partitions)
    t = len(partitions)
    values = np.empty((t, t), dtype=float)

    for i in range(t):
        a_all, ka = coded[i]
        present_a = a_all >= 0
        for j in range(i, t):
            b_all, kb = coded[j]
            present_b = b_all >= 0
            if measure == "nmi":
                if not np.array_equal(present_a, present_b):
                    raise NodeSetMismatchError(
                        f"partitions {i} and {j} cover different nodes; use unmi or inmi")
                if not present_a.any():
                    raise TempCommError("nmi of two empty partitions is undefined")
                val = _score_codes(a_all[present_a], b_all[present_b])
            elif measure == "inmi":
                mask = present_a & present_b
                val = _score_codes(a_all[mask], b_all[mask]) if mask.any() else float("nan")
            else:
                mask = present_a | present_b
                if not mask.any():
                    raise TempCommError("both partitions are empty")
                a = a_all[mask]
                b = b_all[mask]
                a = np.where(a < 0, ka, a)
                b = np.where(b < 0, kb, b)
                val = _score_codes(a, b)
            values[i, j] = values[j, i] = val
    return SimilarityMatrix(measure, tuple(windows), values)
