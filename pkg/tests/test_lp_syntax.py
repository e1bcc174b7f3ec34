from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from promise_ownership.lp import (
    LpProgram,
    ParseError,
    WellFormednessError,
    format_program,
    load_fixture,
    parse_program,
    random_program,
)
from promise_ownership.lp.syntax import Async, Get, New, Set


def shape(body):
    out = []
    for ins in body:
        if isinstance(ins, Async):
            out.append(("async", ins.moved, shape(ins.body)))
        else:
            out.append((type(ins).__name__.lower(), ins.promise))
    return out


def test_two_task_cycle_fixture_structure():
    prog = load_fixture("two_task_cycle")
    assert shape(prog.body) == [
        ("new", "p"),
        ("new", "q"),
        ("async", (), []),
        ("async", ("q",), [("get", "p"), ("set", "q")]),
        ("get", "q"),
        ("set", "p"),
    ]
    assert [ins.label for ins in prog.body if isinstance(ins, Async)] == ["t1", "t2"]


def test_duplicate_new_is_rejected():
    with pytest.raises(WellFormednessError) as info:
        parse_program("new p\nset p\nnew p\n")
    assert info.value.promise == "p" and info.value.line == 3


@pytest.mark.parametrize("text", ["get p\n", "new q\nasync [p] {\n}\n", "async {\n  new p\n}\nset p\n"])
def test_use_before_new_is_rejected(text):
    with pytest.raises(WellFormednessError):
        parse_program(text)


def test_new_in_sibling_body_counts_once():
    with pytest.raises(WellFormednessError):
        parse_program("async {\n  new p\n  set p\n}\nasync {\n  new p\n  set p\n}\n")


def test_empty_program_is_valid():
    assert parse_program("# nothing\n\n") == LpProgram(())


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("new p\n  frob p\n", 2, 3),
        ("}\n", 1, 1),
        ("async [p {\n", 1, 1),
        ("new p\nasync [p] {\n", 2, 1),
        ("new p\nasync [p, 9x] {\n}\n", 2, 1),
    ],
)
def test_parse_errors_carry_position(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_program(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_async_spellings():
    prog = parse_program("async {\n}\nasync [] {\n}\nasync as w {\n}\n")
    assert [(a.moved, a.label) for a in prog.body] == [((), None), ((), None), ((), "w")]


def test_comments_and_line_numbers():
    prog = parse_program("new p   # make it\n\nset p\n")
    assert prog.body == (New("p", 1), Set("p", 3))


def strip_lines(body):
    return tuple(
        Async(i.moved, strip_lines(i.body), i.label) if isinstance(i, Async) else type(i)(i.promise)
        for i in body
    )


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_generated_programs_round_trip(seed):
    prog = random_program(seed)
    again = parse_program(format_program(prog))
    assert strip_lines(again.body) == strip_lines(prog.body)


def test_format_is_indented():
    prog = LpProgram((New("p"), Async(("p",), (Get("p"), Set("p")), "kid")))
    assert format_program(prog) == "new p\nasync [p] as kid {\n  get p\n  set p\n}\n"
    assert prog.text() == format_program(prog)
