from __future__ import annotations

import threading
import time
from types import SimpleNamespace

import pytest

from promise_ownership import DeadlockDetected, current_task, new_promise, spawn
from promise_ownership.atomics import AtomicRef
from promise_ownership.detector import find_cycle
from promise_ownership.lp import oracle_cycles
from promise_ownership.reports import canonical_cycle


# -- the walk on hand-built snapshots ------------------------------------------


def snapshot(waits: dict, owns: dict):
    """Fake tasks and promises wired from name maps (None = null)."""
    tasks = {t: SimpleNamespace(name=t, waiting_on=AtomicRef()) for t in set(waits) | set(owns.values()) - {None}}
    promises = {p: SimpleNamespace(name=p, owner=AtomicRef()) for p in set(owns) | set(waits.values()) - {None}}
    for t, p in waits.items():
        tasks[t].waiting_on.store_relaxed(promises[p] if p else None)
    for p, t in owns.items():
        promises[p].owner.store_relaxed(tasks[t] if t else None)
    return tasks, promises


def names(cycle):
    return [(t.name, p.name) for t, p in cycle]


def test_walk_finds_three_cycle():
    tasks, ps = snapshot({"a": "x", "b": "y", "c": "z"}, {"x": "b", "y": "c", "z": "a"})
    assert names(find_cycle(tasks["a"], ps["x"])) == [("a", "x"), ("b", "y"), ("c", "z")]


def test_walk_stops_at_fulfilled_promise():
    tasks, ps = snapshot({"a": "x", "b": "y"}, {"x": "b", "y": None})
    assert find_cycle(tasks["a"], ps["x"]) is None


def test_walk_stops_at_running_owner():
    tasks, ps = snapshot({"a": "x", "b": None}, {"x": "b"})
    assert find_cycle(tasks["a"], ps["x"]) is None


def test_walk_self_cycle():
    tasks, ps = snapshot({"a": "x"}, {"x": "a"})
    assert names(find_cycle(tasks["a"], ps["x"])) == [("a", "x")]


def test_walk_does_not_report_foreign_cycle_when_budgeted():
    # a waits into the b<->c cycle; only b or c may raise for it
    tasks, ps = snapshot({"a": "x", "b": "y", "c": "z"}, {"x": "b", "y": "c", "z": "b"})
    assert find_cycle(tasks["a"], ps["x"], budget=50) is None


def test_walk_budget_commits_to_blocking():
    tasks, ps = snapshot({"a": "x", "b": "y", "c": "z"}, {"x": "b", "y": "c", "z": "a"})
    assert find_cycle(tasks["a"], ps["x"], budget=1) is None
    assert find_cycle(tasks["a"], ps["x"], budget=3) is not None


class FlakyRef(AtomicRef):
    """Owner cell whose value changes right after its first read."""

    __slots__ = ("_after", "_reads")

    def __init__(self, first, after):
        super().__init__(first)
        self._after = after
        self._reads = 0

    def load_relaxed(self):
        value = self._value
        self._reads += 1
        if self._reads == 1:
            self._value = self._after
        return value


def test_walk_rechecks_owner_after_reading_waiting_on():
    tasks, ps = snapshot({"a": "x", "b": "y"}, {"y": "a"})
    ps["x"].owner = FlakyRef(tasks["b"], None)
    assert find_cycle(tasks["a"], ps["x"]) is None


@pytest.mark.parametrize("n", [1, 2, 5])
def test_walk_agrees_with_oracle_on_rings(n):
    waits = {f"t{k}": f"p{k}" for k in range(n)}
    owns = {f"p{k}": f"t{(k + 1) % n}" for k in range(n)}
    tasks, ps = snapshot(waits, owns)
    found = canonical_cycle(names(find_cycle(tasks["t0"], ps["p0"])))
    assert [found] == oracle_cycles(waits, owns)


# -- verified get inside the runtime -------------------------------------------


def test_get_on_fulfilled_promise_returns_at_once(run):
    def body():
        p = new_promise()
        p.set(7)
        start = time.perf_counter()
        v = p.get()
        return v, time.perf_counter() - start, current_task().waiting_on.load_relaxed()

    v, elapsed, waiting = run(body).value
    assert v == 7 and elapsed < 0.5 and waiting is None


def test_self_get_raises_length_one_cycle(run):
    def body():
        p = new_promise()
        me = current_task()
        try:
            p.get()
        except DeadlockDetected as exc:
            p.set(None)
            return exc.report, me, p, me.waiting_on.load_relaxed()

    out = run(body)
    report, me, p, waiting = out.value
    assert report.cycle == ((me.id, p.id),)
    assert waiting is None
    assert out.registry.snapshot() == [report]


def test_get_on_running_owner_blocks_then_returns(run):
    def body():
        p = new_promise()
        spawn(lambda: (time.sleep(0.05), p.set("late")), move=[p])
        return p.get()

    out = run(body)
    assert out.value == "late" and out.report.ok


def test_two_task_cycle_raises_in_at_least_one(run):
    raised = []

    def t2(p, q):
        try:
            p.get()
        except DeadlockDetected as exc:
            raised.append(exc.report)
        q.set(None)

    def body():
        p, q = new_promise(), new_promise()
        spawn(lambda: None, name="t1")
        spawn(lambda: t2(p, q), move=[q], name="t2")
        try:
            q.get()
        except DeadlockDetected as exc:
            raised.append(exc.report)
        p.set(None)

    out = run(body)
    assert raised
    for report in raised:
        assert {n for n in report.task_names} == {"root", "t2"}
        assert len(report.cycle) == 2


class StallingRef(AtomicRef):
    """Owner cell that suspends whichever thread reads it mid-walk."""

    __slots__ = ("entered", "release")

    def __init__(self, value):
        super().__init__(value)
        self.entered = threading.Event()
        self.release = threading.Event()

    def load_relaxed(self):
        self.entered.set()
        self.release.wait(5)
        return self._value


def test_stalled_walker_does_not_block_unrelated_get(run):
    def body():
        slow, ready = new_promise(), new_promise()
        ready.set("fine")
        cell = StallingRef(current_task())
        slow.owner = cell
        spawn(lambda: slow.get(), name="walker")
        assert cell.entered.wait(5)
        start = time.perf_counter()
        got = ready.get()
        elapsed = time.perf_counter() - start
        cell.release.set()
        slow.owner = AtomicRef(current_task())
        slow.set(None)
        return got, elapsed

    got, elapsed = run(body).value
    assert got == "fine" and elapsed < 1.0
