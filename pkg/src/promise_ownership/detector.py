"""Lock-free deadlock-cycle detection performed inside every verified ``get``.

Before blocking on ``p0`` the calling task ``t0`` publishes the waits-for
edge ``t0 -> p0`` and only then walks the chain of alternating owner and
waiting-on references::

    p0.owner = t1,  t1.waiting_on = p1,  p1.owner = t2, ...

The walk stops as soon as it finds a fulfilled promise, a task that is not
waiting, or a promise whose owner changed after its owner's waiting-on
field was read. Returning to ``t0`` means ``t0`` closed a deadlock cycle.

Ordering contract for the shared cells:

* the ``waiting_on`` store on entry is sequentially consistent, so the
  entry stores of all tasks are totally ordered and the last task to join
  a cycle sees every other member's edge;
* ``waiting_on`` loads inside the walk are acquire loads, which makes any
  owner write that happened before the loaded entry store visible to the
  owner re-read that follows;
* the ``waiting_on`` reset on exit is a release store issued only after
  the awaited promise was observed complete (or the alarm was raised);
* ``owner`` accesses are relaxed.

No lock is taken anywhere in the walk.
"""

from __future__ import annotations

from typing import Callable

from .errors import DeadlockDetected
from .reports import DeadlockReport


def find_cycle(t0, p0, budget: int | None = None):
    """Walk the waits-for chain from ``t0`` waiting on ``p0``.

    Returns the list of ``(task, promise)`` pairs forming the cycle when the
    walk comes back to ``t0``, or None when it is safe to block. Exceeding
    ``budget`` hops also returns None: running out of budget commits to
    blocking and never produces an alarm.
    """
    tasks = [t0]
    promises = [p0]
    p_i = p0
    t_next = p_i.owner.load_relaxed()
    hops = 0
    while t_next is not t0:
        if t_next is None:
            return None
        p_next = t_next.waiting_on.load_acquire()
        if p_next is None:
            return None
        if t_next is not p_i.owner.load_relaxed():
            return None
        tasks.append(t_next)
        promises.append(p_next)
        p_i = p_next
        t_next = p_i.owner.load_relaxed()
        hops += 1
        if budget is not None and hops >= budget:
            return None
    return list(zip(tasks, promises))


def verified_get(
    t0,
    p0,
    budget: int | None = None,
    on_deadlock: Callable[[DeadlockReport], None] | None = None,
):
    t0.waiting_on.store_seq_cst(p0)
    try:
        cycle = find_cycle(t0, p0, budget)
        if cycle is not None:
            report = DeadlockReport(
                tuple((t.id, p.id) for t, p in cycle),
                tuple(t.name for t, _ in cycle),
            )
            if on_deadlock is not None:
                on_deadlock(report)
            raise DeadlockDetected(report)
        return p0.wait()
    finally:
        t0.waiting_on.store_release(None)
