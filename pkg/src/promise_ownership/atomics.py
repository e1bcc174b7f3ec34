"""Single-reference atomic cells with explicit memory-order call sites.

CPython performs every load and store of an object reference atomically,
and the interpreter lock makes those accesses sequentially consistent.
That is at least as strong as any order requested here, so each method is
a plain slot access. The method names exist so the required ordering of
every access in the detector is visible at its call site; a port to a
runtime with weaker guarantees must honour them.
"""

from __future__ import annotations

from typing import Any


class AtomicRef:
    __slots__ = ("_value",)

    def __init__(self, value: Any = None) -> None:
        self._value = value

    def load_relaxed(self) -> Any:
        return self._value

    def load_acquire(self) -> Any:
        return self._value

    def load_seq_cst(self) -> Any:
        return self._value

    def store_relaxed(self, value: Any) -> None:
        self._value = value

    def store_release(self, value: Any) -> None:
        self._value = value

    def store_seq_cst(self, value: Any) -> None:
        # Totally ordered with every other seq_cst store; also a full fence
        # on TSO hardware.
        self._value = value

    def __repr__(self) -> str:
        return f"AtomicRef({self._value!r})"
