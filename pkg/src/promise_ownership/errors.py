from __future__ import annotations

from .reports import DeadlockReport, OmittedSetReport


class PromiseError(Exception):
    """Base class for every error raised by the runtime."""


class UsageError(PromiseError):
    """An operation was invoked outside the context it requires."""


class OwnershipViolation(PromiseError):
    """A task tried to move a promise it does not own."""

    def __init__(self, promise, caller, owner):
        self.promise = promise
        self.caller = caller
        self.owner = owner
        super().__init__(
            f"{caller!r} cannot move {promise!r}: its owner is {owner!r}"
        )


class NotOwner(PromiseError):
    """A task tried to fulfil a promise it does not own."""

    def __init__(self, promise, caller, observed):
        self.promise = promise
        self.caller = caller
        self.observed = observed
        super().__init__(
            f"{caller!r} cannot set {promise!r}: observed owner is {observed!r}"
        )


class DeadlockDetected(PromiseError):
    def __init__(self, report: DeadlockReport):
        self.report = report
        super().__init__(str(report))


class PoisonedPromise(PromiseError):
    """The awaited promise was completed exceptionally by the runtime."""

    def __init__(self, report: OmittedSetReport):
        self.report = report
        super().__init__(str(report))

    @property
    def blamed_task(self) -> int:
        return self.report.task
