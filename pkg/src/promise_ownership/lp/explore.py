"""Exhaustive exploration of every sequentially consistent interleaving.

The search is a depth-first walk over the reachable state graph. States
reached twice are not re-expanded: a state fixes everything that can
happen afterwards, including which checks can still fail, so memoising
them visits every interleaving without enumerating each one. The number of
complete schedules is recovered by counting paths to terminal states.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .model import Machine, Step, Verdict, Violation
from .syntax import LpProgram

DEFAULT_MAX_STATES = 10**6
DEFAULT_MAX_STEPS = 10**4


@dataclass
class ExplorationStats:
    states: int = 0
    transitions: int = 0
    terminal_states: int = 0
    # complete schedules; None when some schedules never terminate
    # (a detector spinning on a cycle that another task will break)
    schedules: int | None = 0
    max_traversal: int = 0
    max_steps: int = 0
    verdicts: Counter = field(default_factory=Counter)

    @property
    def distinct_verdicts(self) -> set[Verdict]:
        return set(self.verdicts)

    def summary(self) -> str:
        sched = "unbounded" if self.schedules is None else str(self.schedules)
        lines = [
            f"states: {self.states}  transitions: {self.transitions}  "
            f"terminal states: {self.terminal_states}  schedules: {sched}",
            f"longest detector walk: {self.max_traversal}  longest schedule: {self.max_steps} steps",
        ]
        for verdict, n in sorted(self.verdicts.items(), key=lambda kv: str(kv[0])):
            lines.append(f"  {verdict}: {n} terminal state(s)")
        return "\n".join(lines)


class ExplorationError(Exception):
    def __init__(self, message: str, stats: ExplorationStats) -> None:
        self.stats = stats
        super().__init__(message)


class BudgetExceeded(ExplorationError):
    """Exploration stopped early; the result is inconclusive."""


class CounterexampleFound(ExplorationError):
    def __init__(self, violation: Violation, trace: list[Step], schedule: list[int], stats: ExplorationStats):
        self.violation = violation
        self.trace = trace
        self.schedule = schedule
        super().__init__(f"{violation.kind} violation: {violation.message}", stats)

    def format_trace(self) -> str:
        return "".join(f"{step}\n" for step in self.trace)


def explore(
    program: LpProgram | Machine,
    max_states: int = DEFAULT_MAX_STATES,
    max_steps: int = DEFAULT_MAX_STEPS,
    late_waiting_on: bool = False,
) -> ExplorationStats:
    """Check every interleaving against the oracle.

    Raises CounterexampleFound on the first precision, completeness or
    liveness violation and BudgetExceeded when a limit is hit.
    """
    machine = program if isinstance(program, Machine) else Machine(program, late_waiting_on)
    stats = ExplorationStats()
    init = machine.initial()
    counts: dict = {}
    on_stack: set = {init}
    cyclic = False
    # frame: [state, successors, next index, schedules so far, step into state, task]
    stack: list[list] = [[init, None, 0, 0, None, None]]
    stats.states = 1

    def fail(violation: Violation, extra: Step | None = None, task: int | None = None):
        trace = [f[4] for f in stack[1:]]
        schedule = [f[5] for f in stack[1:]]
        if extra is not None:
            trace.append(extra)
            schedule.append(task)
        raise CounterexampleFound(violation, trace, schedule, stats)

    while stack:
        frame = stack[-1]
        state = frame[0]
        if frame[1] is None:
            succ = []
            for i in machine.enabled(state):
                nxt, label, violation = machine.step(state, i)
                if violation is not None:
                    fail(violation, label, i)
                succ.append((nxt, label, i))
            frame[1] = succ
            if not succ:
                violation = machine.terminal_violation(state)
                if violation is not None:
                    fail(violation)
                stats.terminal_states += 1
                stats.verdicts[machine.verdict(state)] += 1
                depth = len(stack) - 1
                if depth > stats.max_steps:
                    stats.max_steps = depth
                frame[3] = 1
        succ = frame[1]
        if frame[2] < len(succ):
            nxt, label, i = succ[frame[2]]
            frame[2] += 1
            stats.transitions += 1
            if nxt in counts:
                frame[3] += counts[nxt]
            elif nxt in on_stack:
                cyclic = True
            else:
                stats.states += 1
                if stats.states > max_states:
                    raise BudgetExceeded(f"more than {max_states} states", stats)
                if len(stack) > max_steps:
                    raise BudgetExceeded(f"a schedule exceeded {max_steps} steps", stats)
                micro = nxt[0][i][1]
                if micro is not None and micro[0] == "G" and len(micro[5]) > stats.max_traversal:
                    stats.max_traversal = len(micro[5])
                on_stack.add(nxt)
                stack.append([nxt, None, 0, 0, label, i])
            continue
        stack.pop()
        on_stack.discard(state)
        counts[state] = frame[3]
        if stack:
            stack[-1][3] += frame[3]

    stats.schedules = None if cyclic else counts[init]
    return stats


@dataclass
class Replay:
    trace: list[Step]
    alarms: list[str]
    verdict: Verdict
    final_state: tuple
    terminal: bool


def replay(program: LpProgram | Machine, schedule: list[int], late_waiting_on: bool = False) -> Replay:
    """Re-run one schedule (a task index per step) deterministically."""
    machine = program if isinstance(program, Machine) else Machine(program, late_waiting_on)
    state = machine.initial()
    trace = []
    for i in schedule:
        if i not in machine.enabled(state):
            raise ValueError(f"task {machine.task_names[i]} is not enabled at step {len(trace)}")
        state, label, _ = machine.step(state, i)
        trace.append(label)
    return Replay(
        trace,
        [machine.describe_alarm(a) for a in state[4]],
        machine.verdict(state),
        state,
        not machine.enabled(state),
    )
