"""End-to-end workflows: window-size scans, sliding-window similarity, synthetic sweeps."""
from __future__ import annotations

import datetime as _dt
import itertools
import logging
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from . import io as tio
from .community import louvain, snapshot_stats
from .heatmap import save_heatmap
from .errors import TempCommError
from .nullmodel import modularity_zscore
from .similarity import MEASURES, SimilarityMatrix, pairwise_matrix
from .synthetic import SynthConfig, synth_run
from .temporal import TemporalGraph, extract_snapshots

log = logging.getLogger(__name__)


def _map(fn, jobs, workers: int):
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, jobs))
    return [fn(job) for job in jobs]


def _nanmean(values) -> float:
    arr = np.asarray(values, dtype=float)
    if arr.size == 0 or np.isnan(arr).all():
        return float("nan")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return float(np.nanmean(arr))


# window scan ---------------------------------------------------------------

@dataclass
class WindowScanRow:
    window_length: int
    slice_starts: list = field(default_factory=list)
    lcc_proportion: list = field(default_factory=list)
    modularity: list = field(default_factory=list)
    edge_node_ratio: list = field(default_factory=list)
    zscore: list = field(default_factory=list)
    reports: list = field(default_factory=list)  # ZScoreReport or None per slice
    max_edges: int = 0
    empty_slices: int = 0

    @property
    def slice_count(self) -> int:
        return len(self.slice_starts)

    @property
    def degenerate(self) -> bool:
        return self.slice_count == 0

    @property
    def sparse(self) -> bool:
        """No slice holds more than one edge."""
        return self.max_edges <= 1

    def means(self) -> dict:
        return {
            "lcc_proportion": _nanmean(self.lcc_proportion),
            "modularity": _nanmean(self.modularity),
            "edge_node_ratio": _nanmean(self.edge_node_ratio),
            "zscore": _nanmean(self.zscore),
        }


def _slice_job(args):
    s, resolution, seed, null_samples, swap_factor = args
    st = snapshot_stats(s, resolution=resolution, seed=seed)
    report = None
    if null_samples >= 2:
        try:
            report = modularity_zscore(s, sample_count=null_samples, resolution=resolution, seed=seed,
                                       swap_factor=swap_factor)
        except TempCommError:
            pass  # too few edges to rewire or to score
    return st, report


def window_scan(g: TemporalGraph, candidate_lengths: Sequence[int], resolution: float = 1.0,
                null_samples: int = 100, seed: int = 0, swap_factor: int = 10,
                workers: int = 1) -> list[WindowScanRow]:
    """Per-slice statistics for each candidate window length.

    Slices do not overlap (stride equals the length).  For every non-empty
    slice this records the LCC proportion, the Louvain modularity (nan without
    edges), the edge/node ratio and the modularity Z-score (nan where it is
    undefined, or everywhere when ``null_samples < 2``).
    """
    if not candidate_lengths:
        raise ValueError("need at least one candidate window length")
    if not g.events:
        raise ValueError("graph has no events")
    rows = []
    for length in candidate_lengths:
        snaps = extract_snapshots(g, length, length)
        live = [s for s in snaps if not s.is_empty]
        row = WindowScanRow(window_length=length, empty_slices=len(snaps) - len(live))
        results = _map(_slice_job, [(s, resolution, seed, null_samples, swap_factor) for s in live], workers)
        for s, (st, report) in zip(live, results):
            row.slice_starts.append(s.window_start)
            row.lcc_proportion.append(st.lcc_proportion)
            row.modularity.append(st.modularity)
            row.edge_node_ratio.append(st.edge_node_ratio)
            row.zscore.append(report.z if report is not None else float("nan"))
            row.reports.append(report)
            row.max_edges = max(row.max_edges, s.edge_count)
        if row.degenerate:
            log.warning("window length %s: every slice is empty", length)
        rows.append(row)
    return rows


SCAN_HEADER = ["window_length", "slice_count", "empty_slices", "mean_lcc_proportion",
               "mean_modularity", "mean_edge_node_ratio", "mean_zscore", "degenerate", "sparse"]
SLICE_HEADER = ["window_length", "slice_start", "lcc_proportion", "modularity",
                "edge_node_ratio", "zscore"]
ZSCORE_HEADER = ["window_start", "window_end", "q_obs", "mu", "sigma", "z", "M"]


def write_window_scan(out_dir, rows: Sequence[WindowScanRow], manifest_ref=None) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = []
    for r in rows:
        m = r.means()
        summary.append([r.window_length, r.slice_count, r.empty_slices, m["lcc_proportion"],
                        m["modularity"], m["edge_node_ratio"], m["zscore"], r.degenerate, r.sparse])
    per_slice = [[r.window_length, *vals]
                 for r in rows
                 for vals in zip(r.slice_starts, r.lcc_proportion, r.modularity, r.edge_node_ratio, r.zscore)]
    zrows = [[start, start + r.window_length, rep.q_observed, rep.null_mean, rep.null_std, rep.z,
              rep.sample_count]
             for r in rows
             for start, rep in zip(r.slice_starts, r.reports) if rep is not None]
    return [
        tio.write_table(out_dir / "window_scan.csv", SCAN_HEADER, summary, manifest_ref),
        tio.write_table(out_dir / "window_scan_slices.csv", SLICE_HEADER, per_slice, manifest_ref),
        tio.write_table(out_dir / "window_scan_zscores.csv", ZSCORE_HEADER, zrows, manifest_ref),
    ]


# sliding-window similarity -------------------------------------------------

def stride_from_fraction(window_length: int, stride_fraction: float) -> int:
    """``stride_fraction * window_length`` rounded half up, at least 1."""
    if not 0 < stride_fraction <= 1:
        raise ValueError("stride_fraction must lie in (0, 1]")
    if window_length <= 0:
        raise ValueError("window_length must be positive")
    return max(1, math.floor(stride_fraction * window_length + 0.5))


@dataclass
class PipelineResult:
    snapshots: list  # non-empty snapshots, one per partition
    partitions: list
    matrices: dict  # measure -> SimilarityMatrix
    params: dict
    empty_windows: int = 0

    @property
    def run_id(self) -> str:
        return tio.run_id(self.params)


def similarity_from_partitions(partitions: Sequence, measures=("unmi", "inmi"),
                               windows: Sequence | None = None) -> dict:
    """Similarity matrices straight from stored partitions (no detection step)."""
    bad = set(measures) - set(MEASURES)
    if bad:
        raise ValueError(f"unknown measure(s): {sorted(bad)}")
    return {m: pairwise_matrix(partitions, m, windows) for m in measures}


def _louvain_job(args):
    s, resolution, seed = args
    return louvain(s, resolution=resolution, seed=seed)


def similarity_pipeline(g: TemporalGraph, window_length: int, stride_fraction: float = 0.1,
                        measures=("unmi", "inmi"), resolution: float = 1.0, seed: int = 0,
                        workers: int = 1, detector=None, extra_params: dict | None = None) -> PipelineResult:
    """Louvain on every non-empty sliding window, then all-pairs similarity matrices.

    Every window is partitioned with the same ``seed``.  ``detector`` replaces
    Louvain when given (it must be picklable for ``workers > 1``).
    """
    stride = stride_from_fraction(window_length, stride_fraction)
    snaps = extract_snapshots(g, window_length, stride)
    live = [s for s in snaps if not s.is_empty]
    if not live:
        raise ValueError("no non-empty snapshots to analyse")
    jobs = [(s, resolution, seed) for s in live]
    if detector is None:
        partitions = _map(_louvain_job, jobs, workers)
    else:
        partitions = [detector(s, resolution=resolution, seed=seed) for s in live]
    params = {
        "window_length": window_length,
        "stride_fraction": stride_fraction,
        "stride": stride,
        "resolution": resolution,
        "seed": seed,
        "measures": ",".join(measures),
        "detector": "louvain" if detector is None else getattr(detector, "__name__", "custom"),
        **(extra_params or {}),
    }
    matrices = similarity_from_partitions(partitions, measures, [s.window_start for s in live])
    return PipelineResult(live, partitions, matrices, params, empty_windows=len(snaps) - len(live))


def write_pipeline(result: PipelineResult, out_dir, render: bool = True) -> dict:
    """Write partitions, per-window counts, matrices, heatmaps and the manifest."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    ref = f"manifest.txt run={result.run_id}"
    files = {
        "partitions": tio.write_partitions(out_dir / "partitions.csv", result.partitions, ref),
        "counts": tio.write_table(
            out_dir / "window_counts.csv",
            ["window_index", "window_start", "window_end", "node_count", "edge_count"],
            ([i, s.window_start, s.window_end, s.node_count, s.edge_count]
             for i, s in enumerate(result.snapshots)),
            ref),
    }
    for measure, m in result.matrices.items():
        files[f"matrix_{measure}"] = tio.write_matrix(out_dir / f"matrix_{measure}.csv", m, ref)
        if render:
            files[f"heatmap_{measure}"] = save_heatmap(out_dir / f"heatmap_{measure}.svg", m, manifest_ref=ref)
    manifest = manifest_entries(result.params, files)
    files["manifest"] = tio.write_manifest(out_dir / "manifest.txt", manifest)
    return files


def manifest_entries(params: dict, files: dict) -> dict:
    entries = {
        "tool": "tempcomm",
        "version": __version__,
        "run_id": tio.run_id(params),
        "created_utc": _dt.datetime.now(_dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
    }
    entries.update({f"param.{k}": params[k] for k in sorted(params)})
    for name in sorted(files):
        entries[f"output.{name}"] = f"{Path(files[name]).name} sha256={tio.file_digest(files[name])}"
    return entries


# synthetic sweeps ----------------------------------------------------------

@dataclass
class SweepCell:
    churn: float
    flip: float
    seed: int
    unmi: SimilarityMatrix
    inmi: SimilarityMatrix
    run: object = None


def _sweep_job(cfg: SynthConfig) -> SweepCell:
    run = synth_run(cfg)
    mats = similarity_from_partitions(run.partitions, ("unmi", "inmi"), list(range(cfg.iterations)))
    return SweepCell(cfg.churn, cfg.flip, cfg.seed, mats["unmi"], mats["inmi"], run)


def synth_sweep(churns=(0.0, 0.001, 0.01, 0.1), flips=(0.001, 0.01, 0.1), seeds=(0,),
                base: SynthConfig | None = None, workers: int = 1) -> list[SweepCell]:
    """Run the synthetic model over a churn x flip grid and score every run."""
    base = base or SynthConfig()
    cfgs = [SynthConfig(base.pool_size, base.network_size, base.community_count, c, f, base.iterations, s)
            for c, f, s in itertools.product(churns, flips, seeds)]
    return _map(_sweep_job, cfgs, workers)


def write_sweep(cells: Sequence[SweepCell], out_dir, render: bool = True) -> Path:
    """One directory per (churn, flip, seed) cell plus a summary CSV."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = []
    for cell in cells:
        d = out_dir / f"churn={cell.churn:g}_flip={cell.flip:g}_seed={cell.seed}"
        d.mkdir(exist_ok=True)
        cfg = cell.run.config
        params = {k: getattr(cfg, k) for k in cfg.__dataclass_fields__}
        ref = f"manifest.txt run={tio.run_id(params)}"
        files = {
            "partitions": tio.write_partitions(d / "partitions.csv", cell.run.partitions, ref),
            "trace": tio.write_trace(d / "membership_trace.csv", cell.run.trace, ref),
            "matrix_unmi": tio.write_matrix(d / "matrix_unmi.csv", cell.unmi, ref),
            "matrix_inmi": tio.write_matrix(d / "matrix_inmi.csv", cell.inmi, ref),
        }
        if render:
            files["heatmap_unmi"] = save_heatmap(d / "heatmap_unmi.svg", cell.unmi, manifest_ref=ref)
            files["heatmap_inmi"] = save_heatmap(d / "heatmap_inmi.svg", cell.inmi, manifest_ref=ref)
        tio.write_manifest(d / "manifest.txt", manifest_entries(params, files))
        summary.append([cell.churn, cell.flip, cell.seed,
                        cell.unmi.off_diagonal_mean(), cell.inmi.off_diagonal_mean()])
    return tio.write_table(out_dir / "sweep_summary.csv",
                           ["churn", "flip", "seed", "mean_unmi", "mean_inmi"], summary)
