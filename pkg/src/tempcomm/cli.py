"""Command-line entry point: ``tempcomm {ingest-check,window-scan,pipeline,synth,render}``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import io as tio
from .errors import TempCommError
from .heatmap import save_heatmap
from .pipeline import (manifest_entries, similarity_from_partitions, similarity_pipeline, synth_sweep,
                       window_scan, write_pipeline, write_sweep, write_window_scan)
from .similarity import MEASURES
from .synthetic import SynthConfig
from .temporal import ingest_events, parse_duration, restrict_time


def _columns(text: str) -> tuple[int, ...]:
    cols = tuple(int(c) for c in text.split(","))
    if len(cols) not in (3, 4):
        raise argparse.ArgumentTypeError("--columns takes src,dst,time[,weight]")
    return cols


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x]


def _measures(text: str) -> list[str]:
    out = [m.strip() for m in text.split(",") if m.strip()]
    bad = set(out) - set(MEASURES)
    if bad:
        raise argparse.ArgumentTypeError(f"unknown measure(s) {sorted(bad)}")
    return out


def _delimiter(text: str) -> str:
    return {"\\t": "\t", "tab": "\t", "space": " "}.get(text, text)


def _add_input(p):
    p.add_argument("--input", required=True, type=Path, help="edge list file")
    p.add_argument("--delimiter", default=" ", type=_delimiter,
                   help="field separator (default: space = any whitespace; 'tab' for tabs)")
    p.add_argument("--columns", default=(0, 1, 2), type=_columns,
                   help="0-based column positions src,dst,time[,weight] (default 0,1,2)")
    p.add_argument("--header", action="store_true", help="skip the first data line")
    p.add_argument("--start", type=int, help="drop events before this timestamp")
    p.add_argument("--end", type=int, help="drop events at or after this timestamp")


def _add_common(p):
    p.add_argument("--resolution", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", type=Path, default=Path("out"))


def _load(args):
    g = ingest_events(args.input, delimiter=args.delimiter, columns=args.columns, header=args.header)
    if args.start is not None or args.end is not None:
        start = args.start if args.start is not None else g.t_min
        end = args.end if args.end is not None else g.t_max + 1
        g = restrict_time(g, start, end)
    return g


def _input_params(args) -> dict:
    return {
        "input": str(args.input),
        "input_sha256": tio.file_digest(args.input),
        "columns": ",".join(map(str, args.columns)),
        "trim_start": args.start,
        "trim_end": args.end,
    }


def cmd_ingest_check(args):
    g = _load(args)
    print(f"events\t{len(g)}")
    print(f"nodes\t{len(g.node_universe)}")
    print(f"t_min\t{g.t_min}")
    print(f"t_max\t{g.t_max}")
    print(f"malformed_lines\t{len(g.malformed_lines)}")


def cmd_window_scan(args):
    g = _load(args)
    lengths = [parse_duration(w) for w in args.windows.split(",")]
    rows = window_scan(g, lengths, resolution=args.resolution, null_samples=args.null_samples,
                       seed=args.seed, workers=args.workers)
    params = {**_input_params(args), "windows": args.windows, "resolution": args.resolution,
              "null_samples": args.null_samples, "seed": args.seed}
    ref = f"manifest.txt run={tio.run_id(params)}"
    files = write_window_scan(args.out, rows, ref)
    tio.write_manifest(args.out / "manifest.txt",
                       manifest_entries(params, {p.stem: p for p in files}))
    for r in rows:
        m = r.means()
        flag = " degenerate" if r.degenerate else (" sparse" if r.sparse else "")
        print(f"{r.window_length}\tslices={r.slice_count}\tlcc={m['lcc_proportion']:.3f}\t"
              f"Q={m['modularity']:.3f}\tE/N={m['edge_node_ratio']:.3f}\tZ={m['zscore']:.2f}{flag}")


def cmd_pipeline(args):
    if args.partitions is not None:
        parts = tio.read_partitions(args.partitions)
        matrices = similarity_from_partitions(parts, args.measures)
        args.out.mkdir(parents=True, exist_ok=True)
        for measure, m in matrices.items():
            tio.write_matrix(args.out / f"matrix_{measure}.csv", m)
            save_heatmap(args.out / f"heatmap_{measure}.svg", m)
        print(f"{len(parts)} partitions -> {args.out}")
        return
    if args.input is None or args.window is None:
        raise SystemExit("pipeline needs --input and --window (or --partitions)")
    g = _load(args)
    result = similarity_pipeline(
        g, parse_duration(args.window), stride_fraction=args.stride_fraction,
        measures=args.measures, resolution=args.resolution, seed=args.seed,
        workers=args.workers, extra_params=_input_params(args))
    write_pipeline(result, args.out)
    print(f"{len(result.partitions)} windows ({result.empty_windows} empty skipped) -> {args.out}")


def cmd_synth(args):
    base = SynthConfig(args.pool, args.size, args.communities, 0.0, 0.0, args.iterations, 0)
    seeds = list(range(args.seed, args.seed + args.repeats))
    cells = synth_sweep(args.churn, args.flip, seeds, base, workers=args.workers)
    summary = write_sweep(cells, args.out, render=not args.no_render)
    print(summary.read_text(), end="")


def cmd_render(args):
    m = tio.read_matrix(args.matrix)
    out = args.output or args.matrix.with_suffix(".svg")
    save_heatmap(out, m, title=args.title)
    print(out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tempcomm", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest-check", help="parse an edge list and print a summary")
    _add_input(p)
    p.set_defaults(func=cmd_ingest_check)

    p = sub.add_parser("window-scan", help="statistics of non-overlapping slices per window length")
    _add_input(p)
    _add_common(p)
    p.add_argument("--windows", required=True, help="comma-separated durations, e.g. 1d,5d,10d")
    p.add_argument("--null-samples", type=int, default=100)
    p.set_defaults(func=cmd_window_scan)

    p = sub.add_parser("pipeline", help="sliding-window Louvain + similarity matrices")
    p.add_argument("--input", type=Path)
    p.add_argument("--delimiter", default=" ", type=_delimiter)
    p.add_argument("--columns", default=(0, 1, 2), type=_columns)
    p.add_argument("--header", action="store_true")
    p.add_argument("--start", type=int)
    p.add_argument("--end", type=int)
    p.add_argument("--partitions", type=Path, help="score stored partitions instead of detecting")
    p.add_argument("--window", help="window length, e.g. 10d")
    p.add_argument("--stride-fraction", type=float, default=0.1)
    p.add_argument("--measures", type=_measures, default=["unmi", "inmi"])
    _add_common(p)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("synth", help="synthetic churn/flip sweep")
    p.add_argument("--churn", type=_floats, default=[0.0, 0.001, 0.01, 0.1])
    p.add_argument("--flip", type=_floats, default=[0.001, 0.01, 0.1])
    p.add_argument("--pool", type=int, default=500)
    p.add_argument("--size", type=int, default=400)
    p.add_argument("--communities", type=int, default=4)
    p.add_argument("--iterations", type=int, default=50)
    p.add_argument("--repeats", type=int, default=1, help="seeds seed..seed+repeats-1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", type=Path, default=Path("out"))
    p.add_argument("--no-render", action="store_true")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("render", help="matrix CSV -> SVG heatmap")
    p.add_argument("matrix", type=Path)
    p.add_argument("-o", "--output", type=Path)
    p.add_argument("--title")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except TempCommError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
