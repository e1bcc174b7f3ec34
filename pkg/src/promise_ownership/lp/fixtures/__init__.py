"""Regression programs: a two-task cycle, a nested omitted set, and an SDK callback bug."""

from __future__ import annotations

from pathlib import Path

from ..syntax import LpProgram, parse_program

FIXTURES = Path(__file__).parent

NAMES = ("two_task_cycle", "nested_omitted_set", "aws_prefix", "aws_postfix")


def fixture_path(name: str) -> Path:
    return FIXTURES / f"{name}.lp"


def load_fixture(name: str) -> LpProgram:
    return parse_program(fixture_path(name).read_text())
