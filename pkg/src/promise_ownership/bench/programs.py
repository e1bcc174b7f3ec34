"""Benchmark programs written against the promise API.

Each program runs inside a root task and returns its functional output
(prime count, sorted list, checksum, alignment score), which must be
identical in baseline and verified runs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import partial
from typing import Any, Callable

from ..kit import Channel, finish
from ..runtime import Promise, new_promise, spawn


# -- Sieve: a pipeline of filter tasks connected by channels -------------------


def _sieve_stage(inbox: Channel, count: Promise) -> None:
    prime = None
    out: Channel | None = None
    downstream: Promise | None = None
    for chunk in inbox:
        if prime is None:
            prime, chunk = chunk[0], chunk[1:]
        survivors = [n for n in chunk if n % prime]
        if not survivors:
            continue
        if out is None:
            out = Channel()
            downstream = new_promise()
            spawn(partial(_sieve_stage, out, downstream), move=[downstream])
        out.send(survivors)
    if out is None:
        count.set(1)
    else:
        out.close()
        count.set(1 + downstream.get())


def sieve(limit: int = 20_000, chunk: int = 64) -> int:
    """Count primes below ``limit`` with one filter task per prime."""
    source = Channel()
    count = new_promise()
    spawn(partial(_sieve_stage, source, count), move=[count])
    for lo in range(2, limit, chunk):
        source.send(list(range(lo, min(lo + chunk, limit))))
    source.close()
    return count.get()


# -- QSort: divide and conquer joined with finish scopes -----------------------


def _partition(a: list, lo: int, hi: int) -> int:
    pivot = a[(lo + hi) // 2]
    i, j = lo, hi - 1
    while True:
        while a[i] < pivot:
            i += 1
        while a[j] > pivot:
            j -= 1
        if i >= j:
            return j + 1
        a[i], a[j] = a[j], a[i]
        i += 1
        j -= 1


def _qsort(a: list, lo: int, hi: int, cutoff: int) -> None:
    if hi - lo <= cutoff:
        a[lo:hi] = sorted(a[lo:hi])
        return
    mid = _partition(a, lo, hi)
    with finish() as scope:
        scope.spawn(partial(_qsort, a, lo, mid, cutoff))
        scope.spawn(partial(_qsort, a, mid, hi, cutoff))


def qsort(n: int = 100_000, cutoff: int = 1_000, seed: int = 7) -> list:
    rng = random.Random(seed)
    a = [rng.randrange(1 << 30) for _ in range(n)]
    _qsort(a, 0, n, cutoff)
    return a


# -- Randomized: a task tree with random cross-task waits ----------------------


@dataclass
class RandomPlan:
    parent: list[int]
    children: list[list[int]]
    owned: list[list[int]]  # promise indices set by each task
    awaits: list[int | None]  # promise awaited before doing work
    work: list[int]


def plan_randomized(tasks: int, promises: int, seed: int, branching: int = 3,
                    p_wait: float = 0.8) -> RandomPlan:
    """Draw a plan, advancing the seed until its waits form no cycle."""
    while True:
        rng = random.Random(seed)
        parent = [-1] + [(k - 1) // branching for k in range(1, tasks)]
        children: list[list[int]] = [[] for _ in range(tasks)]
        for k in range(1, tasks):
            children[parent[k]].append(k)
        owned: list[list[int]] = [[] for _ in range(tasks)]
        owner_of = []
        for p in range(promises):
            t = p if p < tasks else rng.randrange(tasks)
            owned[t].append(p)
            owner_of.append(t)
        awaits = [rng.randrange(promises) if rng.random() < p_wait else None for _ in range(tasks)]
        work = [rng.randrange(200, 2000) for _ in range(tasks)]
        if not _has_wait_cycle(awaits, owner_of):
            return RandomPlan(parent, children, owned, awaits, work)
        seed += 1_000_003


def _has_wait_cycle(awaits: list[int | None], owner_of: list[int]) -> bool:
    # each task waits on at most one other task before settling its own promises
    nxt = [None if p is None else owner_of[p] for p in awaits]
    for start in range(len(nxt)):
        seen = set()
        t = start
        while t is not None and t not in seen:
            seen.add(t)
            t = nxt[t]
        if t is not None:
            return True
    return False


def _subtree(plan: RandomPlan, t: int) -> list[int]:
    out, todo = [], [t]
    while todo:
        k = todo.pop()
        out.extend(plan.owned[k])
        todo.extend(plan.children[k])
    return out


def _random_task(plan: RandomPlan, promises: list[Promise], t: int, sink: list) -> int:
    with finish() as scope:
        for c in plan.children[t]:
            moving = [promises[p] for p in _subtree(plan, c)]
            scope.spawn(partial(_random_task, plan, promises, c, sink), move=moving)
        seen = 0
        if plan.awaits[t] is not None:
            seen = promises[plan.awaits[t]].get()
        acc = seen
        for k in range(plan.work[t]):
            acc = (acc * 31 + k) % 1_000_003
        for p in plan.owned[t]:
            promises[p].set(acc + p)
    sink.append(acc)
    return acc


def randomized(tasks: int = 254, promises: int = 500, seed: int = 2021) -> int:
    """Checksum of the payloads observed by every task."""
    plan = plan_randomized(tasks, promises, seed)
    # every promise is allocated by the root and moved down the tree
    cells = [new_promise() for _ in range(promises)]
    sink: list[int] = []
    _random_task(plan, cells, 0, sink)
    return sum(sink) % 1_000_000_007


# -- SmithWaterman: a tiled dynamic-programming wavefront ----------------------

MATCH, MISMATCH, GAP = 2, -1, -1


def _random_dna(n: int, rng: random.Random) -> str:
    return "".join(rng.choice("ACGT") for _ in range(n))


def _sw_tile(a: str, b: str, top: list, left: list, corner: int):
    """Score one tile; return (bottom row, right column, max score)."""
    rows, cols = len(a), len(b)
    prev = [corner] + top
    best = 0
    right = []
    for i in range(rows):
        cur = [left[i]]
        ai = a[i]
        diag_row = prev
        for j in range(cols):
            s = diag_row[j] + (MATCH if ai == b[j] else MISMATCH)
            up = diag_row[j + 1] + GAP
            lf = cur[j] + GAP
            v = s if s > up else up
            if lf > v:
                v = lf
            if v < 0:
                v = 0
            cur.append(v)
            if v > best:
                best = v
        right.append(cur[-1])
        prev = cur
    return prev[1:], right, best


def smithwaterman(length: int = 2_000, tile: int = 25, seed: int = 11) -> int:
    """Best local alignment score of two random sequences."""
    rng = random.Random(seed)
    a, b = _random_dna(length, rng), _random_dna(length, rng)
    nr = (len(a) + tile - 1) // tile
    nc = (len(b) + tile - 1) // tile
    # allocate the whole grid in the root, then move each cell to its task
    grid = [[new_promise() for _ in range(nc)] for _ in range(nr)]

    def cell(r: int, c: int) -> None:
        sa = a[r * tile:(r + 1) * tile]
        sb = b[c * tile:(c + 1) * tile]
        top = grid[r - 1][c].get()[0] if r else [0] * len(sb)
        left = grid[r][c - 1].get()[1] if c else [0] * len(sa)
        corner = grid[r - 1][c - 1].get()[0][-1] if r and c else 0
        bottom, right, best = _sw_tile(sa, sb, top, left, corner)
        grid[r][c].set((bottom, right, best))

    for r in range(nr):
        for c in range(nc):
            spawn(partial(cell, r, c), move=[grid[r][c]])
    return max(grid[r][c].get()[2] for r in range(nr) for c in range(nc))


@dataclass(frozen=True)
class Benchmark:
    name: str
    run: Callable[[float], Any]
    describe: Callable[[float], str]


def _scaled(x: float, s: float, floor: int) -> int:
    return max(floor, int(round(x * s)))


BENCHMARKS: dict[str, Benchmark] = {
    "sieve": Benchmark(
        "sieve",
        lambda s: sieve(_scaled(20_000, s, 100)),
        lambda s: f"primes below {_scaled(20_000, s, 100)}",
    ),
    "qsort": Benchmark(
        "qsort",
        lambda s: qsort(_scaled(100_000, s, 2_000)),
        lambda s: f"{_scaled(100_000, s, 2_000)} integers",
    ),
    "randomized": Benchmark(
        "randomized",
        lambda s: randomized(_scaled(254, s, 10), _scaled(500, s, 20)),
        lambda s: f"{_scaled(254, s, 10)} tasks, {_scaled(500, s, 20)} promises",
    ),
    "smithwaterman": Benchmark(
        "smithwaterman",
        lambda s: smithwaterman(_scaled(2_000, s, 50)),
        lambda s: f"{_scaled(2_000, s, 50)}-base sequences, 25x25 tiles",
    ),
}
