from __future__ import annotations

import json

from hypothesis import given
from hypothesis import strategies as st

from promise_ownership import AlarmRegistry, DeadlockReport, OmittedSetReport, canonical_cycle


def test_canonical_cycle_starts_at_smallest_task():
    assert canonical_cycle([(5, 1), (2, 9), (7, 3)]) == ((2, 9), (7, 3), (5, 1))
    assert canonical_cycle([]) == ()


@given(st.lists(st.integers(), min_size=1, max_size=8, unique=True), st.integers(0, 7))
def test_canonical_cycle_ignores_rotation(tasks, shift):
    cycle = [(t, 100 + k) for k, t in enumerate(tasks)]
    k = shift % len(cycle)
    assert canonical_cycle(cycle) == canonical_cycle(cycle[k:] + cycle[:k])


def test_reports_serialise_to_one_json_line():
    reg = AlarmRegistry()
    reg.record(DeadlockReport(((3, 10), (4, 11)), ("a", "b")))
    reg.record(OmittedSetReport(4, (12, 13), "b"))
    lines = reg.to_jsonl().splitlines()
    assert len(lines) == 2
    first, second = map(json.loads, lines)
    assert first == {"kind": "deadlock", "task": 3, "promises": [10, 11], "cycle": [[3, 10], [4, 11]]}
    assert second["kind"] == "omitted-set" and second["task"] == 4 and second["promises"] == [12, 13]


def test_registry_drain_empties():
    reg = AlarmRegistry()
    reg.record(OmittedSetReport(1, (2,)))
    assert len(reg) == 1 and len(reg.snapshot()) == 1
    assert len(reg.drain()) == 1
    assert len(reg) == 0


def test_deadlock_report_views():
    r = DeadlockReport(((8, 1), (3, 2)))
    assert r.task == 8 and r.promise == 1
    assert r.tasks == {3, 8} and r.promises == {1, 2}
    assert r.canonical() == ((3, 2), (8, 1))
    assert "waits on promise 1" in str(r)
