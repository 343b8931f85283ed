"""Temporal networks as event streams, and their slicing into snapshots.

A temporal network is an ordered multiset of timestamped contacts
``(src, dst, time)``.  Snapshots are the simple undirected graphs induced by
the events falling in half-open windows ``[start, start + length)``; windows
are anchored at the earliest timestamp and advance by a fixed stride, so
consecutive windows overlap whenever ``stride < length``.
"""
from __future__ import annotations

import logging
import math
import os
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidIntervalError, ParseError

log = logging.getLogger(__name__)

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

_DURATION_UNITS = {"": 1, "s": 1, "m": 60, "h": 3600, "d": 86400, "w": 7 * 86400}


def node_sort_key(node):
    """Total order over mixed int/str node ids (ints first, numerically)."""
    if isinstance(node, (int, np.integer)) and not isinstance(node, bool):
        return (0, int(node), "")
    return (1, 0, str(node))


def sorted_nodes(nodes: Iterable) -> list:
    return sorted(nodes, key=node_sort_key)


def parse_duration(text) -> int:
    """Parse ``"10d"``, ``"36h"``, ``"90"`` ... into an integer number of seconds/ticks."""
    if isinstance(text, (int, np.integer)):
        value = int(text)
    else:
        m = re.fullmatch(r"\s*(\d+(?:\.\d+)?)\s*([smhdw]?)\s*", str(text))
        if m is None:
            raise ValueError(f"cannot parse duration {text!r}")
        value = float(m.group(1)) * _DURATION_UNITS[m.group(2)]
        if value != int(value):
            raise ValueError(f"duration {text!r} is not a whole number of ticks")
        value = int(value)
    if value <= 0:
        raise ValueError(f"duration must be positive, got {text!r}")
    return value


@dataclass(frozen=True)
class TemporalEvent:
    src: object
    dst: object
    time: int
    weight: float | None = None

    def __post_init__(self):
        if self.src in ("", None) or self.dst in ("", None):
            raise ValueError("event endpoints must be non-empty tokens")
        if not INT64_MIN <= self.time <= INT64_MAX:
            raise ValueError(f"timestamp {self.time} outside int64 range")


@dataclass(frozen=True)
class TemporalGraph:
    """Events sorted by time (stable on ties).

    ``malformed_lines`` lists the 1-based input line numbers that ingestion
    skipped, so nothing is dropped without trace.
    """

    events: tuple[TemporalEvent, ...]
    malformed_lines: tuple[int, ...] = ()

    @classmethod
    def from_events(cls, events: Iterable[TemporalEvent], malformed_lines=()) -> "TemporalGraph":
        # sorted() is stable, so simultaneous events keep input order
        return cls(tuple(sorted(events, key=lambda e: e.time)), tuple(malformed_lines))

    @classmethod
    def from_tuples(cls, rows: Iterable[Sequence]) -> "TemporalGraph":
        return cls.from_events(TemporalEvent(*row) for row in rows)

    def __len__(self):
        return len(self.events)

    @cached_property
    def times(self) -> np.ndarray:
        return np.fromiter((e.time for e in self.events), dtype=np.int64, count=len(self.events))

    @property
    def t_min(self) -> int | None:
        return int(self.times[0]) if self.events else None

    @property
    def t_max(self) -> int | None:
        return int(self.times[-1]) if self.events else None

    @cached_property
    def node_universe(self) -> frozenset:
        nodes = set()
        for e in self.events:
            nodes.add(e.src)
            nodes.add(e.dst)
        return frozenset(nodes)


@dataclass(frozen=True)
class Snapshot:
    """Simple undirected graph of one window.

    ``nodes`` is sorted by :func:`node_sort_key`; ``edges`` holds each
    unordered pair once as ``(u, v)`` with ``u`` before ``v`` in that order.
    ``weights`` is ``None`` unless weight summing was requested.
    """

    window_start: int
    window_end: int
    nodes: tuple
    edges: tuple
    weights: tuple | None = None

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple], window_start=0, window_end=1,
                   nodes: Iterable = (), weights: Iterable | None = None) -> "Snapshot":
        """Collapse multi-edges, drop self-loops (their endpoints stay as nodes)."""
        node_set = set(nodes)
        summed: dict[tuple, float] = {}
        weights = iter(weights) if weights is not None else None
        for u, v in pairs:
            w = next(weights) if weights is not None else 1.0
            node_set.add(u)
            node_set.add(v)
            if u == v:
                continue
            key = (u, v) if node_sort_key(u) <= node_sort_key(v) else (v, u)
            summed[key] = summed.get(key, 0.0) + (w if w is not None else 0.0)
        keys = sorted(summed, key=lambda e: (node_sort_key(e[0]), node_sort_key(e[1])))
        return cls(
            window_start=window_start,
            window_end=window_end,
            nodes=tuple(sorted_nodes(node_set)),
            edges=tuple(keys),
            weights=tuple(summed[k] for k in keys) if weights is not None else None,
        )

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def is_empty(self) -> bool:
        return not self.nodes

    @property
    def window(self) -> tuple[int, int]:
        return (self.window_start, self.window_end)

    def degrees(self) -> dict:
        deg = dict.fromkeys(self.nodes, 0)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg


def ingest_events(source, delimiter: str | None = " ", columns: Sequence[int] = (0, 1, 2),
                  header: bool = False) -> TemporalGraph:
    """Read a delimited edge list into a :class:`TemporalGraph`.

    ``source`` is a path or a readable byte/text stream.  ``columns`` gives the
    0-based positions of src, dst, time and optionally weight.  A space
    delimiter (or ``None``) splits on runs of whitespace.  Lines starting with
    ``#`` and blank lines are ignored.  Lines with missing fields or a bad
    weight are skipped and recorded in ``malformed_lines``; a time field that
    is not an integer aborts with :class:`ParseError`.
    """
    if len(columns) not in (3, 4):
        raise ValueError("columns must map src, dst, time[, weight]")
    text = _read_text(source)
    split = str.split if delimiter in (None, " ") else (lambda s: s.split(delimiter))
    src_c, dst_c, time_c = columns[:3]
    weight_c = columns[3] if len(columns) == 4 else None
    need = max(columns) + 1

    events = []
    malformed = []
    skipped_header = not header
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not skipped_header:
            skipped_header = True
            continue
        fields = [f.strip() for f in split(line)]
        if len(fields) < need or not fields[src_c] or not fields[dst_c]:
            malformed.append(lineno)
            continue
        try:
            t = int(fields[time_c])
        except ValueError:
            raise ParseError(f"time field {fields[time_c]!r} is not an integer", lineno) from None
        if not INT64_MIN <= t <= INT64_MAX:
            raise ParseError(f"time {t} outside int64 range", lineno)
        w = None
        if weight_c is not None:
            try:
                w = float(fields[weight_c])
            except ValueError:
                w = -1.0
            if not (math.isfinite(w) and w >= 0):
                malformed.append(lineno)
                continue
        events.append(TemporalEvent(fields[src_c], fields[dst_c], t, w))

    if malformed:
        log.warning("skipped %d malformed line(s); first at line %d", len(malformed), malformed[0])
    if not events:
        raise ParseError("zero parseable events")
    return TemporalGraph.from_events(events, malformed)


def _read_text(source) -> str:
    if isinstance(source, (str, bytes, os.PathLike)):
        try:
            with open(source, "rb") as fh:
                data = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read {source!r}: {exc}") from exc
    else:
        try:
            data = source.read()
        except (OSError, AttributeError) as exc:
            raise ParseError(f"unreadable stream: {exc}") from exc
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"input is not valid UTF-8: {exc}") from exc


def restrict_time(g: TemporalGraph, start: int, end: int) -> TemporalGraph:
    """Keep the events with ``start <= time < end``."""
    if start >= end:
        raise InvalidIntervalError(f"start ({start}) must be < end ({end})")
    lo, hi = np.searchsorted(g.times, [start, end], side="left")
    return TemporalGraph(g.events[lo:hi], g.malformed_lines)


def window_starts(t_min: int, t_max: int, stride: int) -> list[int]:
    """Window starts ``t_min + k*stride`` for every k with start <= t_max."""
    return list(range(t_min, t_max + 1, stride))


def extract_snapshots(g: TemporalGraph, window_length: int, stride: int,
                      sum_weights: bool = False) -> list[Snapshot]:
    """Slice ``g`` into windows ``[t_min + k*stride, t_min + k*stride + window_length)``.

    Windows with no events come back as empty snapshots.
    """
    if window_length <= 0 or stride <= 0:
        raise ValueError("window_length and stride must be positive")
    if stride > window_length:
        raise ValueError("stride must not exceed window_length")
    if not g.events:
        return []
    starts = window_starts(g.t_min, g.t_max, stride)
    times = g.times
    los = np.searchsorted(times, starts, side="left")
    his = np.searchsorted(times, [s + window_length for s in starts], side="left")
    snaps = []
    for start, lo, hi in zip(starts, los, his):
        evs = g.events[lo:hi]
        snaps.append(Snapshot.from_pairs(
            ((e.src, e.dst) for e in evs),
            window_start=start,
            window_end=start + window_length,
            weights=(e.weight if e.weight is not None else 1.0 for e in evs) if sum_weights else None,
        ))
    return snaps
