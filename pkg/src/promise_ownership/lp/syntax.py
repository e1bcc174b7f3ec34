"""Abstract syntax, parser and printer for the L_p promise language.

One instruction per line::

    new p
    set p
    get p
    async [p, q] {        # moves p and q to the child
      ...
    }
    async [q] as t2 {     # optional task label
    }

``#`` starts a comment. An ``async`` with nothing to move may be written
``async {`` or ``async [] {``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1) -> None:
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class WellFormednessError(ValueError):
    def __init__(self, promise: str, message: str, line: int | None = None) -> None:
        self.promise = promise
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}promise {promise!r}: {message}")


@dataclass(frozen=True)
class New:
    promise: str
    line: int = 0


@dataclass(frozen=True)
class Set:
    promise: str
    line: int = 0


@dataclass(frozen=True)
class Get:
    promise: str
    line: int = 0


@dataclass(frozen=True)
class Async:
    moved: tuple[str, ...]
    body: tuple["Instr", ...]
    label: str | None = None
    line: int = 0


Instr = Union[New, Set, Get, Async]


@dataclass(frozen=True)
class LpProgram:
    body: tuple[Instr, ...]

    def text(self) -> str:
        return format_program(self)


_IDENT = r"[A-Za-z_][A-Za-z0-9_]*"
_SIMPLE = re.compile(rf"^(new|set|get)\s+({_IDENT})$")
_ASYNC = re.compile(
    rf"^async(?:\s*\[\s*(?P<moved>[^\]]*)\])?(?:\s+as\s+(?P<label>{_IDENT}))?\s*\{{$"
)
_IDENT_RE = re.compile(rf"^{_IDENT}$")


def parse_program(text: str) -> LpProgram:
    """Parse and statically check a program; raise ParseError or WellFormednessError."""
    stack: list[tuple[list, tuple[str, ...], str | None, int]] = []
    body: list = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        stripped = line.strip()
        if not stripped:
            continue
        column = len(line) - len(line.lstrip()) + 1
        if stripped == "}":
            if not stack:
                raise ParseError("unmatched '}'", lineno, column)
            parent, moved, label, start = stack.pop()
            parent.append(Async(moved, tuple(body), label, start))
            body = parent
            continue
        m = _SIMPLE.match(stripped)
        if m:
            cls = {"new": New, "set": Set, "get": Get}[m.group(1)]
            body.append(cls(m.group(2), lineno))
            continue
        m = _ASYNC.match(stripped)
        if m:
            moved = _parse_moved(m.group("moved") or "", lineno, column)
            stack.append((body, moved, m.group("label"), lineno))
            body = []
            continue
        raise ParseError(f"cannot parse {stripped!r}", lineno, column)
    if stack:
        raise ParseError("unterminated async block", stack[-1][3])
    program = LpProgram(tuple(body))
    check_well_formed(program)
    return program


def _parse_moved(spec: str, lineno: int, column: int) -> tuple[str, ...]:
    names = [n.strip() for n in spec.split(",")] if spec.strip() else []
    for n in names:
        if not _IDENT_RE.match(n):
            raise ParseError(f"bad promise name {n!r} in async list", lineno, column)
    return tuple(names)


def check_well_formed(program: LpProgram) -> None:
    """At most one ``new`` per promise; every use lexically after its ``new``.

    Lexical precedence (earlier in the same body, or earlier in an enclosing
    body before the enclosing ``async``) is exactly happens-before here,
    since there is no other control flow.
    """
    declared: set[str] = set()

    def walk(body, scope: frozenset[str]) -> None:
        visible = set(scope)
        for ins in body:
            if isinstance(ins, New):
                if ins.promise in declared:
                    raise WellFormednessError(ins.promise, "allocated more than once", ins.line)
                declared.add(ins.promise)
                visible.add(ins.promise)
            elif isinstance(ins, (Set, Get)):
                if ins.promise not in visible:
                    raise WellFormednessError(ins.promise, "used before its new", ins.line)
            else:
                for p in ins.moved:
                    if p not in visible:
                        raise WellFormednessError(p, "moved before its new", ins.line)
                walk(ins.body, frozenset(visible))

    walk(program.body, frozenset())


def format_program(program: LpProgram) -> str:
    lines: list[str] = []

    def emit(body, depth: int) -> None:
        pad = "  " * depth
        for ins in body:
            if isinstance(ins, Async):
                label = f" as {ins.label}" if ins.label else ""
                lines.append(f"{pad}async [{', '.join(ins.moved)}]{label} {{")
                emit(ins.body, depth + 1)
                lines.append(f"{pad}}}")
            else:
                lines.append(f"{pad}{type(ins).__name__.lower()} {ins.promise}")

    emit(program.body, 0)
    return "\n".join(lines) + ("\n" if lines else "")
