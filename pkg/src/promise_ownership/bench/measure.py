from __future__ import annotations

import gc
import hashlib
import resource
import statistics
import sys
import time
from dataclasses import dataclass, field

from ..runtime import Runtime
from .programs import BENCHMARKS

MODES = ("baseline", "verified")


class BenchmarkAlarm(RuntimeError):
    """A benchmark raised an alarm; all ported benchmarks are deadlock-free."""


@dataclass
class BenchResult:
    name: str
    mode: str
    iterations: int
    mean_s: float
    stddev_s: float
    tasks: int
    gets: int
    sets: int
    peak_rss_bytes: int
    times: list[float] = field(default_factory=list)
    output_digest: str = ""

    @property
    def gets_per_ms(self) -> float:
        return self.gets / (self.mean_s * 1000)

    @property
    def sets_per_ms(self) -> float:
        return self.sets / (self.mean_s * 1000)


def peak_rss_bytes() -> int:
    """Peak resident set size of this process so far (best effort)."""
    rss = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
    return rss if sys.platform == "darwin" else rss * 1024


def digest(output) -> str:
    return hashlib.sha256(repr(output).encode()).hexdigest()[:16]


def run_once(name: str, mode: str, scale: float = 1.0):
    """One timed run; returns (seconds, output, runtime stats)."""
    bench = BENCHMARKS[name]
    rt = Runtime(verify=(mode == "verified"))
    box: dict = {}

    def main() -> None:
        box["out"] = bench.run(scale)

    gc.collect()
    start = time.perf_counter()
    report = rt.run_root(main)
    elapsed = time.perf_counter() - start
    if not report.ok:
        problems = [str(a) for a in report.alarms] or [repr(report.error)]
        raise BenchmarkAlarm(f"{name} ({mode}): " + "; ".join(problems))
    return elapsed, box["out"], dict(rt.stats)


def _check_args(name: str, modes, iterations: int) -> None:
    if name not in BENCHMARKS:
        raise ValueError(f"unknown benchmark {name!r}; choose from {sorted(BENCHMARKS)}")
    for mode in modes:
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")


def _summarise(name: str, mode: str, runs: list) -> BenchResult:
    times = [t for t, _, _ in runs]
    digests = {digest(out) for _, out, _ in runs}
    if len(digests) != 1:
        raise BenchmarkAlarm(f"{name} ({mode}) produced different outputs across runs")
    stats = runs[-1][2]
    return BenchResult(
        name=name,
        mode=mode,
        iterations=len(times),
        mean_s=statistics.fmean(times),
        stddev_s=statistics.stdev(times) if len(times) > 1 else 0.0,
        tasks=stats["tasks"],
        gets=stats["gets"],
        sets=stats["sets"],
        peak_rss_bytes=peak_rss_bytes(),
        times=times,
        output_digest=digests.pop(),
    )


def run_benchmark(name: str, mode: str, iterations: int = 5, warmup: int = 1,
                  scale: float = 1.0) -> BenchResult:
    _check_args(name, [mode], iterations)
    for _ in range(warmup):
        run_once(name, mode, scale)
    runs = [run_once(name, mode, scale) for _ in range(iterations)]
    return _summarise(name, mode, runs)


def run_paired(name: str, iterations: int = 5, warmup: int = 1,
               scale: float = 1.0) -> tuple[BenchResult, BenchResult]:
    """Baseline and verified runs alternated, so drift hits both modes alike."""
    _check_args(name, MODES, iterations)
    for _ in range(warmup):
        for mode in MODES:
            run_once(name, mode, scale)
    runs: dict[str, list] = {mode: [] for mode in MODES}
    for k in range(iterations):
        order = MODES if k % 2 == 0 else MODES[::-1]
        for mode in order:
            runs[mode].append(run_once(name, mode, scale))
    return _summarise(name, "baseline", runs["baseline"]), _summarise(name, "verified", runs["verified"])
