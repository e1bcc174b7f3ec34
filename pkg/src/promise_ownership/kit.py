"""Composite promise structures: a promise-chain channel and finish scopes."""

from __future__ import annotations

from contextlib import contextmanager
from typing import Any, Callable, Iterator

from .errors import NotOwner, PromiseError
from .runtime import (
    Promise,
    PromiseCollection,
    Task,
    current_task,
    new_promise,
    promises_of,
    spawn,
)

__all__ = [
    "Channel",
    "ChannelClosed",
    "FinishScope",
    "PromiseCollection",
    "finish",
    "finish_scope",
    "promises_of",
]

_END = object()


class ChannelClosed(PromiseError):
    pass


class Channel:
    """Unbounded single-producer, single-consumer channel.

    Each link is a promise whose payload is ``(value, next_promise)``. The
    sending end is the one unfulfilled tail promise, so moving the channel
    at spawn moves the right to send. ``recv`` is an ordinary ``get`` on the
    head link and gets deadlock detection for free.
    """

    def __init__(self) -> None:
        first = new_promise()
        self._head: Promise = first
        self._tail: Promise | None = first

    def promises(self) -> list[Promise]:
        return [] if self._tail is None else [self._tail]

    def _check_sender(self) -> Promise:
        tail = self._tail
        if tail is None:
            raise ChannelClosed("send on a closed channel")
        if tail.owner is not None:
            me, owner = current_task(), tail.owner.load_relaxed()
            if owner is not me:
                raise NotOwner(tail, me, owner)
        return tail

    def send(self, value: Any) -> None:
        tail = self._check_sender()
        successor = new_promise()
        tail.set((value, successor))
        self._tail = successor

    def close(self) -> None:
        tail = self._check_sender()
        tail.set((_END, None))
        self._tail = None

    def recv(self) -> Any:
        value, successor = self._head.get()
        if value is _END:
            raise ChannelClosed("channel closed")
        self._head = successor
        return value

    def __iter__(self) -> Iterator[Any]:
        while True:
            try:
                yield self.recv()
            except ChannelClosed:
                return


class FinishScope:
    """Joins every task spawned through it, using one completion promise each."""

    def __init__(self) -> None:
        self._joins: list[Promise] = []

    def spawn(self, body: Callable[[], Any], move=(), name: str | None = None) -> Task:
        done = new_promise()

        def run() -> None:
            try:
                body()
            finally:
                done.set(None)

        try:
            task = spawn(run, move=[done, move], name=name)
        except BaseException:
            done.set(None)
            raise
        self._joins.append(done)
        return task

    def join(self) -> None:
        joins, self._joins = self._joins, []
        for done in joins:
            done.get()


@contextmanager
def finish() -> Iterator[FinishScope]:
    scope = FinishScope()
    try:
        yield scope
    finally:
        scope.join()


def finish_scope(body: Callable[[FinishScope], Any]) -> None:
    with finish() as scope:
        body(scope)
