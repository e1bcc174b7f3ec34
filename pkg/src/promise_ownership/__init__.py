"""Task-parallel promises with ownership tracking and precise deadlock detection."""

from .errors import (
    DeadlockDetected,
    NotOwner,
    OwnershipViolation,
    PoisonedPromise,
    PromiseError,
    UsageError,
)
from .kit import Channel, ChannelClosed, FinishScope, finish, finish_scope
from .reports import ALARMS, AlarmRegistry, DeadlockReport, OmittedSetReport, canonical_cycle
from .runtime import (
    ExitReport,
    Promise,
    PromiseCollection,
    Runtime,
    Task,
    current_task,
    new_promise,
    promises_of,
    run_root,
    spawn,
)

__all__ = [
    "ALARMS",
    "AlarmRegistry",
    "Channel",
    "ChannelClosed",
    "DeadlockDetected",
    "DeadlockReport",
    "ExitReport",
    "FinishScope",
    "NotOwner",
    "OmittedSetReport",
    "OwnershipViolation",
    "PoisonedPromise",
    "Promise",
    "PromiseCollection",
    "PromiseError",
    "Runtime",
    "Task",
    "UsageError",
    "canonical_cycle",
    "current_task",
    "finish",
    "finish_scope",
    "new_promise",
    "promises_of",
    "run_root",
    "spawn",
]
