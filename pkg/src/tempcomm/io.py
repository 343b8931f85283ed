"""On-disk formats: partition, matrix, statistics CSVs and the run manifest.

Every CSV written here may start with ``#`` comment lines naming the manifest
of the run that produced it; all readers skip them.  Floats are written in
shortest round-trip form (``repr``), undefined values as ``nan``.
"""
from __future__ import annotations

import csv
import hashlib
import io
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .community import Partition
from .similarity import SimilarityMatrix
from .temporal import node_sort_key


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return "nan" if math.isnan(x) else repr(x)
    return str(x)


def parse_number(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def _comment_lines(manifest_ref: str | None) -> str:
    return f"# manifest: {manifest_ref}\n" if manifest_ref else ""


def _write_rows(path, header: Sequence[str], rows: Iterable[Sequence], manifest_ref=None) -> Path:
    buf = io.StringIO()
    buf.write(_comment_lines(manifest_ref))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(x) for x in row])
    path = Path(path)
    path.write_text(buf.getvalue(), encoding="utf-8")
    return path


def _data_lines(path) -> list[list[str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        return [row for row in csv.reader(line for line in fh if not line.startswith("#"))]


def write_partitions(path, partitions: Sequence[Partition], manifest_ref=None) -> Path:
    rows = ((i, node, label)
            for i, p in enumerate(partitions)
            for node, label in sorted(p.items(), key=lambda kv: node_sort_key(kv[0])))
    return _write_rows(path, ["window_index", "node_id", "label"], rows, manifest_ref)


def read_partitions(path, node_type=str) -> list[Partition]:
    """Inverse of :func:`write_partitions`; node ids are converted with ``node_type``."""
    rows = _data_lines(path)[1:]
    groups: dict[int, dict] = {}
    for idx, node, label in rows:
        groups.setdefault(int(idx), {})[node_type(node)] = int(label)
    return [Partition(groups[i]) for i in sorted(groups)]


def write_matrix(path, m: SimilarityMatrix, manifest_ref=None) -> Path:
    header = [m.measure] + [fmt(w) for w in m.windows]
    rows = ([w] + list(m.values[i]) for i, w in enumerate(m.windows))
    return _write_rows(path, header, rows, manifest_ref)


def read_matrix(path) -> SimilarityMatrix:
    rows = _data_lines(path)
    header = rows[0]
    windows = tuple(parse_number(w) for w in header[1:])
    values = np.array([[float(x) for x in row[1:]] for row in rows[1:]], dtype=float)
    if values.shape != (len(windows), len(windows)):
        raise ValueError(f"{path}: matrix is not square over its header")
    return SimilarityMatrix(header[0] or "unknown", windows, values)


def write_trace(path, trace: np.ndarray, manifest_ref=None) -> Path:
    """Membership trace as ``node,iteration,label`` with ``inactive`` for pool nodes."""
    rows = ((node, t, int(trace[t, node]) if trace[t, node] >= 0 else "inactive")
            for node in range(trace.shape[1]) for t in range(trace.shape[0]))
    return _write_rows(path, ["node", "iteration", "label"], rows, manifest_ref)


def write_table(path, header, rows, manifest_ref=None) -> Path:
    return _write_rows(path, header, rows, manifest_ref)


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def run_id(params: dict) -> str:
    """Stable id of a parameter set, independent of wall-clock time."""
    text = "\n".join(f"{k}={params[k]}" for k in sorted(params))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def write_manifest(path, entries: dict) -> Path:
    lines = [f"{k}={entries[k]}" for k in entries]
    path = Path(path)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_manifest(path) -> dict:
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line and not line.startswith("#"):
            key, _, value = line.partition("=")
            out[key] = value
    return out
