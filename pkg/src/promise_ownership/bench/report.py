"""Overhead tables, CSV round-trips and the execution-time figure."""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path

from .measure import BenchResult

CSV_COLUMNS = ["name", "mode", "mean_s", "stddev_s", "tasks", "gets", "sets", "peak_rss_bytes"]


def pair_up(results: list[BenchResult]) -> list[tuple[BenchResult, BenchResult]]:
    """(baseline, verified) per benchmark, in first-seen order."""
    by_name: dict[str, dict[str, BenchResult]] = {}
    for r in results:
        by_name.setdefault(r.name, {})[r.mode] = r
    pairs = []
    for name, modes in by_name.items():
        missing = [m for m in ("baseline", "verified") if m not in modes]
        if missing:
            raise ValueError(f"benchmark {name!r} has no {missing[0]} result")
        pairs.append((modes["baseline"], modes["verified"]))
    if not pairs:
        raise ValueError("no results to report")
    return pairs


def overhead(base: BenchResult, verified: BenchResult) -> float:
    return verified.mean_s / base.mean_s


def geometric_mean(xs) -> float:
    xs = list(xs)
    return math.exp(sum(math.log(x) for x in xs) / len(xs))


def report_table(results: list[BenchResult], as_csv: bool = False) -> str:
    pairs = pair_up(results)
    ratios = [overhead(b, v) for b, v in pairs]
    header = ["benchmark", "baseline_s", "overhead", "tasks", "gets_per_ms", "sets_per_ms"]
    rows = [
        [b.name, f"{b.mean_s:.3f}", f"{r:.2f}", str(b.tasks), f"{b.gets_per_ms:.2f}", f"{b.sets_per_ms:.2f}"]
        for (b, _), r in zip(pairs, ratios)
    ]
    geo = geometric_mean(ratios)
    if as_csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        w.writerow(["geomean", "", f"{geo:.2f}", "", "", ""])
        return buf.getvalue()

    titles = ["Benchmark", "Baseline (s)", "Overhead", "Tasks", "Gets/ms", "Sets/ms"]
    table = [titles] + [r[:2] + [r[2] + "x"] + r[3:] for r in rows]
    widths = [max(len(row[k]) for row in table) for k in range(len(titles))]

    def fmt(row):
        return "  ".join(c.ljust(w) if k == 0 else c.rjust(w) for k, (c, w) in enumerate(zip(row, widths)))

    lines = [fmt(table[0]), "  ".join("-" * w for w in widths)]
    lines += [fmt(r) for r in table[1:]]
    lines.append(f"Geometric mean overhead: {geo:.2f}x")
    return "\n".join(lines) + "\n"


def write_csv(results: list[BenchResult], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, CSV_COLUMNS)
        w.writeheader()
        for r in results:
            w.writerow({c: getattr(r, c) for c in CSV_COLUMNS})


def read_csv(path) -> list[BenchResult]:
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            out.append(BenchResult(
                name=row["name"],
                mode=row["mode"],
                iterations=0,
                mean_s=float(row["mean_s"]),
                stddev_s=float(row["stddev_s"]),
                tasks=int(row["tasks"]),
                gets=int(row["gets"]),
                sets=int(row["sets"]),
                peak_rss_bytes=int(row["peak_rss_bytes"]),
            ))
    return out


def plot_results(results: list[BenchResult], path) -> Path:
    """Baseline vs verified mean time per benchmark with ~95% intervals."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    pairs = pair_up(results)
    fig, axes = plt.subplots(1, len(pairs), figsize=(2.2 * len(pairs) + 1, 3.0), squeeze=False)
    for ax, (base, ver) in zip(axes[0], pairs):
        means = [base.mean_s, ver.mean_s]
        # normal approximation; iterations are few, so read it as indicative
        errs = [1.96 * r.stddev_s / math.sqrt(max(r.iterations, 1)) for r in (base, ver)]
        ax.bar([0, 1], means, color=["0.65", "0.3"], width=0.6)
        ax.errorbar([0, 1], means, yerr=errs, fmt="none", ecolor="red", capsize=4)
        ax.set_xticks([0, 1], ["baseline", "verified"], fontsize=8)
        ax.set_title(f"{base.name} ({overhead(base, ver):.2f}x)", fontsize=9)
        ax.tick_params(axis="y", labelsize=8)
    axes[0][0].set_ylabel("execution time (s)")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
