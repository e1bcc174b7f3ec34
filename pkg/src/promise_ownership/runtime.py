"""Promises with single-task ownership, spawning, and omitted-set checks.

Every unfulfilled promise is owned by exactly one task. A task acquires a
promise by creating it or by having its parent move it in at spawn time,
and gives it up by fulfilling it or moving it to a child. A task that
terminates while still owning promises is reported, and those promises are
completed exceptionally so nobody waits on them forever.

A :class:`Runtime` built with ``verify=False`` skips all ownership and
waits-for bookkeeping; it is the unverified baseline used by benchmarks.
"""

from __future__ import annotations

import itertools
import logging
import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Protocol, runtime_checkable

from . import detector
from .atomics import AtomicRef
from .errors import NotOwner, OwnershipViolation, PoisonedPromise, PromiseError, UsageError
from .executor import ElasticExecutor, shared_executor
from .reports import ALARMS, AlarmRegistry, OmittedSetReport

log = logging.getLogger(__name__)

_UNSET, _FULFILLED, _POISONED = 0, 1, 2

_promise_ids = itertools.count(1)
_task_ids = itertools.count(1)
_local = threading.local()

# Guards only waiter registration against completion; never held while
# blocked and never touched by the detector.
_park_lock = threading.Lock()


class Promise:
    """Write-once payload slot.

    ``owner`` is an :class:`AtomicRef` holding the owning task while the
    promise is unset, or None once it is fulfilled or poisoned. In baseline
    runtimes ``owner`` is None throughout.
    """

    __slots__ = ("id", "owner", "_state", "_value", "_waiters", "__weakref__")

    def __init__(self, owner: Task | None = None, tracked: bool = True) -> None:
        self.id = next(_promise_ids)
        self.owner = AtomicRef(owner) if tracked else None
        self._state = _UNSET
        self._value: Any = None
        self._waiters: list | None = None

    def __repr__(self) -> str:
        return f"<Promise #{self.id}>"

    # -- public API ---------------------------------------------------------

    def set(self, value: Any = None) -> None:
        task = _require_task("set")
        task.runtime.set(task, self, value)

    def get(self) -> Any:
        task = _require_task("get")
        return task.runtime.get(task, self)

    def done(self) -> bool:
        return self._state != _UNSET

    @property
    def poisoned(self) -> bool:
        return self._state == _POISONED

    # -- completion and parking ---------------------------------------------

    def _complete(self, state: int, value: Any) -> None:
        with _park_lock:
            if self._state != _UNSET:
                raise PromiseError(f"{self!r} is already complete")
            self._value = value
            self._state = state
            waiters, self._waiters = self._waiters, None
        if waiters:
            for lock in waiters:
                lock.release()

    def wait(self) -> Any:
        """Block until complete; return the payload or raise PoisonedPromise."""
        while self._state == _UNSET:
            with _park_lock:
                if self._state != _UNSET:
                    break
                lock = threading.Lock()
                lock.acquire()
                if self._waiters is None:
                    self._waiters = [lock]
                else:
                    self._waiters.append(lock)
            lock.acquire()
        if self._state == _POISONED:
            raise PoisonedPromise(self._value)
        return self._value


@runtime_checkable
class PromiseCollection(Protocol):
    """An object that moves like the promises it currently holds."""

    def promises(self) -> Iterable[Promise]: ...


def promises_of(x) -> list[Promise]:
    """Flatten a promise, a collection, or an iterable of either."""
    if isinstance(x, Promise):
        return [x]
    if isinstance(x, PromiseCollection):
        return promises_of(list(x.promises()))
    out: list[Promise] = []
    for item in x:
        out.extend(promises_of(item))
    return out


class Task:
    __slots__ = (
        "id", "name", "runtime", "parent", "owned", "waiting_on",
        "gets", "sets", "promises_created", "error", "omitted", "_done",
        "__weakref__",
    )

    def __init__(self, runtime: Runtime, parent: Task | None, name: str | None) -> None:
        self.id = next(_task_ids)
        self.name = name or f"t{self.id}"
        self.runtime = runtime
        self.parent = parent
        # insertion-ordered set; only touched by this task, or by its
        # parent before the task is eligible to run
        self.owned: dict[Promise, None] = {}
        self.waiting_on = AtomicRef(None)
        self.gets = self.sets = self.promises_created = 0
        self.error: BaseException | None = None
        self.omitted: OmittedSetReport | None = None
        self._done = threading.Event()

    def __repr__(self) -> str:
        return f"<Task {self.name}#{self.id}>"

    def join(self, timeout: float | None = None) -> ExitReport:
        """Wait for termination from outside the task system."""
        if not self._done.wait(timeout):
            raise TimeoutError(f"{self!r} still running")
        return ExitReport(self.id, self.name, self.error, self.omitted)

    @property
    def finished(self) -> bool:
        return self._done.is_set()


@dataclass
class ExitReport:
    task: int
    task_name: str
    error: BaseException | None = None
    omitted: OmittedSetReport | None = None
    alarms: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.error is None and self.omitted is None and not self.alarms

    def omitted_sets(self) -> list[OmittedSetReport]:
        return [a for a in self.alarms if isinstance(a, OmittedSetReport)]


def current_task() -> Task | None:
    return getattr(_local, "task", None)


def _require_task(op: str) -> Task:
    task = getattr(_local, "task", None)
    if task is None:
        raise UsageError(f"{op} called outside any task")
    return task


class Runtime:
    """One task tree: its scheduler, its mode, and its alarm log.

    ``traversal_budget`` caps the number of hops a single deadlock check may
    take; running out commits the caller to blocking, never to an alarm.
    """

    def __init__(
        self,
        verify: bool = True,
        traversal_budget: int | None = None,
        executor: ElasticExecutor | None = None,
        registry: AlarmRegistry = ALARMS,
    ) -> None:
        self.verify = verify
        self.traversal_budget = traversal_budget
        self.executor = executor or shared_executor()
        self.registry = registry
        self.alarms: list = []
        self.stats = {"tasks": 0, "gets": 0, "sets": 0, "promises": 0}
        self._lock = threading.Lock()
        self._quiet = threading.Condition(self._lock)
        self._live = 0
        self._started = False

    # -- alarms ---------------------------------------------------------------

    def record(self, report) -> None:
        with self._lock:
            self.alarms.append(report)
        self.registry.record(report)

    # -- the four policy operations -------------------------------------------

    def new_promise(self, task: Task) -> Promise:
        task.promises_created += 1
        if not self.verify:
            return Promise(tracked=False)
        p = Promise(task)
        task.owned[p] = None
        return p

    def spawn(self, parent: Task | None, body: Callable[[], Any], move=(), name: str | None = None) -> Task:
        moved = list(dict.fromkeys(promises_of(move)))
        child = Task(self, parent, name)
        if self.verify:
            for p in moved:
                owner = p.owner.load_relaxed()
                if owner is not parent:
                    raise OwnershipViolation(p, parent, owner)
            child.owned = dict.fromkeys(moved)
            if parent is not None:
                for p in moved:
                    del parent.owned[p]
            for p in moved:
                p.owner.store_relaxed(child)
        with self._lock:
            self._live += 1
        self.executor.submit(lambda: self._run(child, body))
        return child

    def set(self, task: Task, p: Promise, value: Any) -> None:
        task.sets += 1
        if self.verify:
            observed = p.owner.load_relaxed()
            if observed is not task:
                raise NotOwner(p, task, observed)
            p.owner.store_relaxed(None)
            del task.owned[p]
        p._complete(_FULFILLED, value)

    def get(self, task: Task, p: Promise) -> Any:
        task.gets += 1
        if not self.verify:
            return p.wait()
        return detector.verified_get(task, p, self.traversal_budget, self.record)

    # -- task lifecycle -------------------------------------------------------

    def _run(self, task: Task, body: Callable[[], Any]) -> None:
        _local.task = task
        try:
            body()
        except Exception as exc:
            task.error = exc
            log.debug("%r ended with %r", task, exc)
        finally:
            _local.task = None
            self._exit(task)

    def _exit(self, task: Task) -> None:
        if self.verify and task.owned:
            report = OmittedSetReport(
                task.id,
                tuple(p.id for p in task.owned),
                task.name,
                exceptional=task.error is not None,
            )
            task.omitted = report
            self.record(report)
            leftovers = list(task.owned)
            task.owned.clear()
            for p in leftovers:
                p.owner.store_relaxed(None)
                p._complete(_POISONED, report)
        with self._lock:
            s = self.stats
            s["tasks"] += 1
            s["gets"] += task.gets
            s["sets"] += task.sets
            s["promises"] += task.promises_created
            self._live -= 1
            if self._live == 0:
                self._quiet.notify_all()
        task._done.set()

    def run_root(self, main: Callable[[], Any], timeout: float | None = None) -> ExitReport:
        """Run ``main`` as the root task and wait for the whole tree."""
        if current_task() is not None:
            raise UsageError("run_root called from inside a task")
        with self._lock:
            if self._started:
                raise UsageError("a Runtime runs a single root task")
            self._started = True
        root = self.spawn(None, main, (), name="root")
        with self._lock:
            if not self._quiet.wait_for(lambda: self._live == 0, timeout):
                raise TimeoutError("task tree still running")
        report = root.join()
        report.alarms = list(self.alarms)
        return report


# -- module-level API used from inside task bodies -----------------------------


def new_promise() -> Promise:
    task = _require_task("new_promise")
    return task.runtime.new_promise(task)


def spawn(body: Callable[[], Any], move=(), name: str | None = None) -> Task:
    """Start ``body`` as a child task, moving ownership of ``move`` to it."""
    task = _require_task("spawn")
    return task.runtime.spawn(task, body, move, name)


def run_root(main: Callable[[], Any], verify: bool = True, **kwargs) -> ExitReport:
    return Runtime(verify=verify, **kwargs).run_root(main)
