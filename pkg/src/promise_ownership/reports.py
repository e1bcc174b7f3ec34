"""Alarm records and the process-wide alarm registry."""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from typing import Union


@dataclass(frozen=True)
class OmittedSetReport:
    """A task terminated while still owning unfulfilled promises."""

    task: int
    promises: tuple[int, ...]
    task_name: str = ""
    exceptional: bool = False

    kind = "omitted-set"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "task": self.task,
            "task_name": self.task_name,
            "promises": list(self.promises),
            "exceptional": self.exceptional,
        }

    def __str__(self) -> str:
        who = self.task_name or f"task {self.task}"
        how = " (exceptional exit)" if self.exceptional else ""
        return f"omitted set: {who} exited owning promises {list(self.promises)}{how}"


@dataclass(frozen=True)
class DeadlockReport:
    """A deadlock cycle as seen by the task that detected it.

    ``cycle`` is ``((t0, p0), (t1, p1), ...)`` where ``t_k`` waits on
    ``p_k`` and ``p_k`` is owned by ``t_{k+1}`` (indices mod length).
    The first pair belongs to the detecting task.
    """

    cycle: tuple[tuple[int, int], ...]
    task_names: tuple[str, ...] = ()

    kind = "deadlock"

    @property
    def task(self) -> int:
        return self.cycle[0][0]

    @property
    def promise(self) -> int:
        return self.cycle[0][1]

    @property
    def tasks(self) -> frozenset[int]:
        return frozenset(t for t, _ in self.cycle)

    @property
    def promises(self) -> frozenset[int]:
        return frozenset(p for _, p in self.cycle)

    def canonical(self) -> tuple[tuple[int, int], ...]:
        return canonical_cycle(self.cycle)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "task": self.task,
            "promises": [p for _, p in self.cycle],
            "cycle": [list(pair) for pair in self.cycle],
        }

    def __str__(self) -> str:
        names = self.task_names or tuple(f"task {t}" for t, _ in self.cycle)
        hops = " -> ".join(f"{n} waits on promise {p}" for n, (_, p) in zip(names, self.cycle))
        return f"deadlock cycle: {hops}"


Report = Union[OmittedSetReport, DeadlockReport]


def canonical_cycle(cycle) -> tuple[tuple[int, int], ...]:
    """Rotate a cycle of (task, promise) pairs to start at its smallest task id."""
    cycle = tuple(tuple(pair) for pair in cycle)
    if not cycle:
        return cycle
    start = min(range(len(cycle)), key=lambda i: cycle[i][0])
    return cycle[start:] + cycle[:start]


@dataclass
class AlarmRegistry:
    """Thread-safe, append-only log of alarms; drained by supervisors."""

    _records: list = field(default_factory=list)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def record(self, report: Report) -> None:
        with self._lock:
            self._records.append(report)

    def snapshot(self) -> list:
        with self._lock:
            return list(self._records)

    def drain(self) -> list:
        with self._lock:
            out, self._records = self._records, []
        return out

    def __len__(self) -> int:
        with self._lock:
            return len(self._records)

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r.to_dict(), sort_keys=True) + "\n" for r in self.snapshot())


ALARMS = AlarmRegistry()
