"""Elastic thread pool: reuse idle threads, start a new one otherwise.

A task blocked in ``get`` keeps its thread, and there is no bound on how
many tasks may block at once, so the pool never queues work behind busy
threads.
"""

from __future__ import annotations

import threading
from typing import Callable


class _Worker:
    __slots__ = ("job", "ready")

    def __init__(self) -> None:
        self.job: Callable[[], None] | None = None
        self.ready = threading.Lock()
        self.ready.acquire()


class ElasticExecutor:
    def __init__(self, keepalive: float = 1.0) -> None:
        self.keepalive = keepalive
        self._lock = threading.Lock()
        self._idle: list[_Worker] = []
        self.threads_started = 0

    def submit(self, job: Callable[[], None]) -> None:
        with self._lock:
            if self._idle:
                worker = self._idle.pop()
                worker.job = job
                worker.ready.release()
                return
            self.threads_started += 1
        threading.Thread(target=self._work, args=(job,), daemon=True).start()

    def _work(self, job: Callable[[], None]) -> None:
        worker = _Worker()
        while True:
            job()
            job = None
            with self._lock:
                self._idle.append(worker)
            if not worker.ready.acquire(timeout=self.keepalive):
                with self._lock:
                    if worker in self._idle:
                        self._idle.remove(worker)
                        return
                # a job was handed over between the timeout and the lock
                worker.ready.acquire()
            job, worker.job = worker.job, None


_shared: ElasticExecutor | None = None
_shared_lock = threading.Lock()


def shared_executor() -> ElasticExecutor:
    global _shared
    with _shared_lock:
        if _shared is None:
            _shared = ElasticExecutor()
        return _shared
