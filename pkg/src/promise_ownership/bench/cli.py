"""``bench``: time the ported programs with and without deadlock detection."""

from __future__ import annotations

import argparse
import sys

from .measure import MODES, BenchmarkAlarm, run_benchmark, run_paired
from .programs import BENCHMARKS
from .report import pair_up, plot_results, read_csv, report_table, write_csv


def _names(raw: list[str]) -> list[str]:
    names: list[str] = []
    for item in raw:
        for n in item.split(","):
            n = n.strip()
            if n == "all":
                names.extend(BENCHMARKS)
            elif n:
                names.append(n)
    unknown = [n for n in names if n not in BENCHMARKS]
    if unknown:
        raise argparse.ArgumentTypeError(
            f"unknown benchmark(s) {', '.join(unknown)}; choose from {', '.join(BENCHMARKS)} or all")
    return list(dict.fromkeys(names))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bench", description="Time the ported programs with and without deadlock detection.")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run benchmarks and print the overhead table")
    run.add_argument("--name", action="append", default=None,
                     help="benchmark name, comma list or 'all' (repeatable; default all)")
    run.add_argument("--mode", choices=[*MODES, "both"], default="both")
    run.add_argument("--iters", type=int, default=5, help="timed iterations per mode")
    run.add_argument("--warmup", type=int, default=1, help="untimed warm-up iterations per mode")
    run.add_argument("--scale", type=float, default=1.0, help="input size multiplier")
    run.add_argument("--csv", metavar="PATH", help="write per-mode results as CSV")
    run.add_argument("--plot", metavar="PATH", help="write a bar chart (needs both modes)")
    run.add_argument("--table-format", choices=["text", "csv"], default="text")

    rep = sub.add_parser("report", help="re-render a table and figure from a results CSV")
    rep.add_argument("csv", metavar="PATH")
    rep.add_argument("--plot", metavar="PATH")
    rep.add_argument("--table-format", choices=["text", "csv"], default="text")

    sub.add_parser("list", help="list available benchmarks")
    return ap


def _emit(results, args) -> int:
    try:
        pair_up(results)
    except ValueError as exc:
        if args.plot:
            print(f"bench: cannot plot: {exc}", file=sys.stderr)
            return 64
        return 0
    print(report_table(results, as_csv=args.table_format == "csv"), end="")
    if args.plot:
        print(f"wrote {plot_results(results, args.plot)}")
    return 0


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)

    if args.command == "list":
        for name, b in BENCHMARKS.items():
            print(f"{name:14s} {b.describe(1.0)}")
        return 0

    if args.command == "report":
        try:
            results = read_csv(args.csv)
        except (OSError, KeyError, ValueError) as exc:
            print(f"bench: cannot read {args.csv}: {exc}", file=sys.stderr)
            return 65
        return _emit(results, args)

    try:
        names = _names(args.name or ["all"])
    except argparse.ArgumentTypeError as exc:
        ap.error(str(exc))
    if args.iters < 1 or args.warmup < 0 or args.scale <= 0:
        ap.error("--iters must be >= 1, --warmup >= 0 and --scale > 0")
    modes = list(MODES) if args.mode == "both" else [args.mode]
    if args.plot and len(modes) < 2:
        ap.error("--plot needs --mode both")

    results = []
    for name in names:
        try:
            if len(modes) == 2:
                batch = list(run_paired(name, args.iters, args.warmup, args.scale))
            else:
                batch = [run_benchmark(name, modes[0], args.iters, args.warmup, args.scale)]
        except BenchmarkAlarm as exc:
            print(f"bench: {exc}", file=sys.stderr)
            return 1
        for r in batch:
            results.append(r)
            print(f"{name:14s} {r.mode:9s} mean={r.mean_s:.4f}s sd={r.stddev_s:.4f}s "
                  f"tasks={r.tasks} gets={r.gets} sets={r.sets} out={r.output_digest}")
    for name in names:
        digests = {r.output_digest for r in results if r.name == name}
        if len(digests) > 1:
            print(f"bench: {name}: outputs differ between modes", file=sys.stderr)
            return 1
    if args.csv:
        write_csv(results, args.csv)
        print(f"wrote {args.csv}")
    return _emit(results, args)


if __name__ == "__main__":
    sys.exit(main())
