"""Model checker for L_p programs under the ownership policy."""

from .explore import (
    BudgetExceeded,
    CounterexampleFound,
    ExplorationError,
    ExplorationStats,
    Replay,
    explore,
    replay,
)
from .fixtures import fixture_path, load_fixture
from .generate import random_program
from .model import Machine, Step, Verdict
from .oracle import oracle_cycles, oracle_verdict
from .syntax import LpProgram, ParseError, WellFormednessError, format_program, parse_program

__all__ = [
    "BudgetExceeded",
    "CounterexampleFound",
    "ExplorationError",
    "ExplorationStats",
    "LpProgram",
    "Machine",
    "ParseError",
    "Replay",
    "Step",
    "Verdict",
    "WellFormednessError",
    "explore",
    "fixture_path",
    "format_program",
    "load_fixture",
    "oracle_cycles",
    "oracle_verdict",
    "parse_program",
    "random_program",
    "replay",
]
