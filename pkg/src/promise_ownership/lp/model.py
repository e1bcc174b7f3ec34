"""Step semantics of L_p programs under the ownership policy and detector.

Every shared-memory action of the ownership and detection algorithms is a
separate atomic step; purely task-local bookkeeping is folded into the
adjacent shared step. Memory is sequentially consistent. The global state
is an immutable tuple so the explorer can hash it::

    (tasks, waiting_on, owner, pstate, alarms, seen_cycles)

* ``tasks[i] = (pc, micro, owned, exceptional)``; ``pc`` is -1 before the
  task is spawned and -2 once it has finished;
* ``waiting_on[i]`` is a promise index or -1;
* ``owner[p]`` is a task index, -1 (null) or -2 (not yet allocated);
* ``pstate[p]`` is 0 (unset), 1 (fulfilled) or ``2 + t`` (poisoned by an
  omitted set of task ``t``);
* ``alarms`` is the ordered tuple of alarms raised so far;
* ``seen_cycles`` is every cycle the oracle has found in any state on the
  path, which is what alarms are checked against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from ..reports import canonical_cycle
from .oracle import cycles_for_vectors
from .syntax import Async, Get, LpProgram, New, Set, WellFormednessError

NEW, SET, GET, ASYNC = range(4)

UNSPAWNED, FINISHED = -1, -2
NULL, UNALLOCATED = -1, -2
UNSET, FULFILLED = 0, 1

# phases of an in-progress get
G_OWNER, G_WAITON, G_CHANGED, G_FAIL, G_LATE_ENTER, G_RETURN, G_FINAL = range(7)


class Step(NamedTuple):
    task: str
    instruction: str
    line: str

    def __str__(self) -> str:
        return f"{self.task}\t{self.instruction}\t{self.line}"


@dataclass(frozen=True)
class Verdict:
    """Observable outcome of one complete schedule (its first alarm)."""

    kind: str  # "ok" | "deadlock" | "omitted-set" | "policy-violation"
    task: str | None = None
    promises: tuple = ()
    cycle: tuple = ()
    violation: str | None = None

    def __str__(self) -> str:
        if self.kind == "ok":
            return "Ok"
        if self.kind == "deadlock":
            return "Deadlock(" + ", ".join(f"({t},{p})" for t, p in self.cycle) + ")"
        if self.kind == "omitted-set":
            return f"OmittedSet({self.task}, [{', '.join(self.promises)}])"
        return f"PolicyViolation({self.violation}, {self.task}, {self.promises[0]})"


OK = Verdict("ok")


class Violation(NamedTuple):
    kind: str  # "precision" | "completeness" | "hang" | "well-formedness"
    message: str


class Machine:
    """Compiled program plus the transition function."""

    def __init__(self, program: LpProgram, late_waiting_on: bool = False) -> None:
        self.program = program
        self.late_waiting_on = late_waiting_on
        self.task_names: list[str] = []
        self.ops: list[tuple] = []
        self.texts: list[tuple[str, ...]] = []
        self.promise_index: dict[str, int] = {}
        self.promise_names: list[str] = []
        self._compile(program.body, "root")

    # -- compilation ----------------------------------------------------------

    def _pid(self, name: str) -> int:
        if name not in self.promise_index:
            self.promise_index[name] = len(self.promise_names)
            self.promise_names.append(name)
        return self.promise_index[name]

    def _compile(self, body, name: str) -> int:
        idx = len(self.task_names)
        self.task_names.append(name)
        self.ops.append(())
        self.texts.append(())
        ops, texts = [], []
        for ins in body:
            if isinstance(ins, Async):
                child = self._compile(ins.body, ins.label or f"t{len(self.task_names)}")
                ops.append((ASYNC, child, tuple(self._pid(p) for p in ins.moved)))
                texts.append(f"async [{', '.join(ins.moved)}] -> {self.task_names[child]}")
            else:
                code = {New: NEW, Set: SET, Get: GET}[type(ins)]
                ops.append((code, self._pid(ins.promise)))
                texts.append(f"{type(ins).__name__.lower()} {ins.promise}")
        self.ops[idx] = tuple(ops)
        self.texts[idx] = tuple(texts)
        return idx

    @property
    def n_tasks(self) -> int:
        return len(self.task_names)

    @property
    def n_promises(self) -> int:
        return len(self.promise_names)

    def initial(self) -> tuple:
        tasks = [(UNSPAWNED, None, (), False)] * self.n_tasks
        tasks[0] = self._settle((0, None, (), False), 0)
        return (
            tuple(tasks),
            (NULL,) * self.n_tasks,
            (UNALLOCATED,) * self.n_promises,
            (UNSET,) * self.n_promises,
            (),
            frozenset(),
        )

    # -- transition function --------------------------------------------------

    def _settle(self, ts: tuple, i: int) -> tuple:
        pc, micro, owned, exc = ts
        if pc == len(self.ops[i]) and micro is None and not owned:
            return (FINISHED, None, (), exc)
        return ts

    def enabled(self, state) -> list[int]:
        tasks, pstate = state[0], state[3]
        out = []
        for i, (pc, micro, _, _) in enumerate(tasks):
            if pc < 0:
                continue
            if micro is not None and micro[0] == "G" and micro[1] == G_RETURN and pstate[micro[2]] == UNSET:
                continue
            out.append(i)
        return out

    def step(self, state, i: int) -> tuple[tuple, Step, Violation | None]:
        tasks, waiting, owner, pstate, alarms, seen = state
        pc, micro, owned, exc = tasks[i]
        ops = self.ops[i]
        name = self.task_names[i]
        pn = self.promise_names
        tasks = list(tasks)
        graph_changed = False
        violation = None

        def abort() -> None:
            tasks[i] = (len(ops), None, owned, True)

        if micro is None and pc == len(ops):
            # task exit: owned list must be empty
            report = ("omitted", i, owned, exc)
            alarms = alarms + (report,)
            owner = list(owner)
            for p in owned:
                owner[p] = NULL
            owner = tuple(owner)
            graph_changed = True
            tasks[i] = (pc, ("EP", owned), (), exc)
            label = Step(name, "exit", "Exit: assert owned empty (fails)")
        elif micro is None:
            op = ops[pc]
            text = self.texts[i][pc]
            code = op[0]
            if code != ASYNC and owner[op[1]] == UNALLOCATED and code != NEW:
                violation = Violation("well-formedness", f"{name} uses {pn[op[1]]} before its new")
            if code == NEW:
                p = op[1]
                if owner[p] != UNALLOCATED:
                    violation = Violation("well-formedness", f"{pn[p]} allocated twice")
                owner = _replace(owner, p, i)
                owned = owned + (p,)
                tasks[i] = (pc + 1, None, owned, exc)
                graph_changed = True
                label = Step(name, text, "New")
            elif code == SET:
                p = op[1]
                if owner[p] != i:
                    alarms = alarms + (("policy", "not-owner", i, p),)
                    abort()
                    label = Step(name, text, "Set: assert owner (fails)")
                else:
                    owner = _replace(owner, p, NULL)
                    owned = tuple(q for q in owned if q != p)
                    tasks[i] = (pc, ("S", p), owned, exc)
                    graph_changed = True
                    label = Step(name, text, "Set: owner := null")
            elif code == GET:
                p = op[1]
                if self.late_waiting_on:
                    tasks[i] = (pc, ("G", G_OWNER, p, NULL, NULL, ((i, p),), 0), owned, exc)
                    label = Step(name, text, "Get: enter (waitingOn deferred)")
                else:
                    waiting = _replace(waiting, i, p)
                    graph_changed = True
                    tasks[i] = (pc, ("G", G_OWNER, p, NULL, NULL, ((i, p),), 0), owned, exc)
                    label = Step(name, text, "Get: waitingOn := p0 (seq_cst)")
            else:
                _, child, moved = op
                bad = [p for p in moved if owner[p] != i]
                if bad:
                    alarms = alarms + (("policy", "ownership-violation", i, bad[0]),)
                    abort()
                    label = Step(name, text, "Async: assert owner (fails)")
                else:
                    owned = tuple(q for q in owned if q not in moved)
                    owner = list(owner)
                    for p in moved:
                        owner[p] = child
                    owner = tuple(owner)
                    graph_changed = True
                    tasks[i] = (pc + 1, None, owned, exc)
                    tasks[child] = self._settle((0, None, tuple(moved), False), child)
                    label = Step(name, text, "Async: move owners, start child")
        elif micro[0] == "S":
            p = micro[1]
            pstate = _replace(pstate, p, FULFILLED)
            tasks[i] = (pc + 1, None, owned, exc)
            label = Step(name, self.texts[i][pc], "Set: set_impl")
        elif micro[0] == "EP":
            pstate = list(pstate)
            for p in micro[1]:
                pstate[p] = 2 + i
            pstate = tuple(pstate)
            tasks[i] = (FINISHED, None, (), exc)
            label = Step(name, "exit", "poison unfulfilled promises")
        else:
            _, phase, p0, t_next, p_next, path, outcome = micro
            text = self.texts[i][pc]
            p_i = path[-1][1]
            if phase == G_OWNER:
                t = owner[p_i]
                if t == i:
                    phase = G_FAIL
                    if self.late_waiting_on:
                        phase, outcome = G_LATE_ENTER, G_FAIL
                elif t == NULL:
                    phase = G_LATE_ENTER if self.late_waiting_on else G_RETURN
                else:
                    phase, t_next = G_WAITON, t
                label = Step(name, text, "Get: t_{i+1} := p_i.owner")
            elif phase == G_WAITON:
                q = waiting[t_next]
                if q == NULL:
                    phase = G_LATE_ENTER if self.late_waiting_on else G_RETURN
                else:
                    phase, p_next = G_CHANGED, q
                label = Step(name, text, "Get: p_{i+1} := t_{i+1}.waitingOn (acquire)")
            elif phase == G_CHANGED:
                if owner[p_i] != t_next:
                    phase = G_LATE_ENTER if self.late_waiting_on else G_RETURN
                else:
                    path = _extend(path, t_next, p_next)
                    phase = G_OWNER
                label = Step(name, text, "Get: recheck p_i.owner = t_{i+1}")
            elif phase == G_LATE_ENTER:
                waiting = _replace(waiting, i, p0)
                graph_changed = True
                phase, outcome = outcome or G_RETURN, 0
                label = Step(name, text, "mutant: waitingOn := p0 after traversal")
            elif phase == G_FAIL:
                cycle = canonical_cycle(path)
                alarms = alarms + (("deadlock", i, cycle),)
                waiting = _replace(waiting, i, NULL)
                graph_changed = True
                label = Step(name, text, "Get: assert fails; finally waitingOn := null")
            elif phase == G_RETURN:
                outcome = pstate[p0]
                phase = G_FINAL
                label = Step(name, text, "Get: get_impl observes completion")
            else:
                waiting = _replace(waiting, i, NULL)
                graph_changed = True
                label = Step(name, text, "Get: finally waitingOn := null (release)")
            if phase == G_FAIL and micro[1] == G_FAIL:
                abort()
            elif micro[1] == G_FINAL:
                if outcome == FULFILLED:
                    tasks[i] = (pc + 1, None, owned, exc)
                else:
                    alarms = alarms + (("poisoned", i, p0, outcome - 2),)
                    abort()
            else:
                tasks[i] = (pc, ("G", phase, p0, t_next, p_next, path, outcome), owned, exc)

        tasks[i] = self._settle(tasks[i], i)
        if graph_changed:
            now = cycles_for_vectors(waiting, owner)
            if now and not seen.issuperset(now):
                seen = seen.union(now)
        if alarms and alarms[-1][0] == "deadlock" and (not alarms is state[4]):
            reported = alarms[-1][2]
            if reported not in seen:
                violation = Violation(
                    "precision",
                    f"{name} reported {self.format_cycle(reported)} but the oracle never saw that cycle",
                )
        return (tuple(tasks), waiting, owner, pstate, alarms, seen), label, violation

    # -- terminal checks ------------------------------------------------------

    def terminal_violation(self, state) -> Violation | None:
        tasks, _, _, _, alarms, seen = state
        stuck = [self.task_names[i] for i, ts in enumerate(tasks) if ts[0] >= 0]
        alarmed = {a[2] for a in alarms if a[0] == "deadlock"}
        for cycle in sorted(seen):
            if cycle not in alarmed:
                return Violation(
                    "completeness",
                    f"cycle {self.format_cycle(cycle)} formed but no task in it raised",
                )
        if stuck:
            return Violation("hang", f"tasks blocked forever: {', '.join(stuck)}")
        return None

    # -- presentation ---------------------------------------------------------

    def format_cycle(self, cycle) -> str:
        return "[" + ", ".join(f"({self.task_names[t]},{self.promise_names[p]})" for t, p in cycle) + "]"

    def alarm_verdict(self, alarm) -> Verdict:
        kind = alarm[0]
        tn, pn = self.task_names, self.promise_names
        if kind == "deadlock":
            return Verdict("deadlock", cycle=tuple((tn[t], pn[p]) for t, p in alarm[2]))
        if kind == "omitted":
            return Verdict("omitted-set", task=tn[alarm[1]], promises=tuple(pn[p] for p in alarm[2]))
        if kind == "policy":
            return Verdict("policy-violation", task=tn[alarm[2]], promises=(pn[alarm[3]],), violation=alarm[1])
        raise ValueError(f"no verdict for {alarm!r}")

    def verdict(self, state) -> Verdict:
        for alarm in state[4]:
            if alarm[0] != "poisoned":
                return self.alarm_verdict(alarm)
        return OK

    def describe_alarm(self, alarm) -> str:
        if alarm[0] == "poisoned":
            _, t, p, blame = alarm
            return (f"PoisonedPromise: {self.task_names[t]} get {self.promise_names[p]} "
                    f"(blames {self.task_names[blame]})")
        text = str(self.alarm_verdict(alarm))
        if alarm[0] == "deadlock":
            text += f" raised by {self.task_names[alarm[1]]}"
        elif alarm[0] == "omitted" and alarm[3]:
            text += " after exceptional exit"
        return text


def _replace(vec: tuple, k: int, value) -> tuple:
    return vec[:k] + (value,) + vec[k + 1:]


def _extend(path: tuple, t: int, p: int) -> tuple:
    # A task already on the path means the walk is circling a cycle that
    # does not contain t0; that walk can never raise, so fold it back to
    # keep the state finite.
    for k in range(1, len(path)):
        if path[k][0] == t:
            return path[:k] + ((t, p),)
    return path + ((t, p),)
