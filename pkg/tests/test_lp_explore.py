from __future__ import annotations

import pytest

from promise_ownership.lp import (
    BudgetExceeded,
    CounterexampleFound,
    Machine,
    explore,
    load_fixture,
    parse_program,
    random_program,
    replay,
)
from promise_ownership.lp.fixtures import NAMES, fixture_path


def verdict_strings(stats):
    return sorted(str(v) for v in stats.distinct_verdicts)


def test_straight_line_is_ok():
    stats = explore(parse_program("new p\nset p\nget p\n"))
    assert verdict_strings(stats) == ["Ok"]
    assert stats.schedules == 1


def test_empty_program_is_ok():
    stats = explore(parse_program(""))
    assert verdict_strings(stats) == ["Ok"] and stats.states == 1


def test_two_task_cycle_always_detected():
    stats = explore(load_fixture("two_task_cycle"))
    assert verdict_strings(stats) == ["Deadlock((root,q), (t2,p))"]
    assert stats.max_traversal == 2


def test_self_get_is_length_one():
    stats = explore(parse_program("new p\nget p\nset p\n"))
    assert verdict_strings(stats) == ["Deadlock((root,p))"]


def test_concurrent_walkers_on_a_three_cycle():
    prog = parse_program(
        "new a\nnew b\nnew c\n"
        "async [b] as x {\n  get c\n  set b\n}\n"
        "async [c] as y {\n  get a\n  set c\n}\n"
        "get b\nset a\n"
    )
    stats = explore(prog)
    kinds = {v.kind for v in stats.distinct_verdicts}
    assert kinds == {"deadlock"}


def test_nested_omitted_set():
    stats = explore(load_fixture("nested_omitted_set"))
    assert verdict_strings(stats) == ["OmittedSet(t4, [s])"]


def test_policy_violations_surface():
    double = explore(parse_program("new p\nset p\nset p\n"))
    assert verdict_strings(double) == ["PolicyViolation(not-owner, root, p)"]
    moved = explore(parse_program("new p\nasync [p] {\n  set p\n}\nasync [p] {\n}\n"))
    assert "PolicyViolation(ownership-violation, root, p)" in verdict_strings(moved)


def test_no_cycle_no_omission_means_no_alarm():
    prog = parse_program("new p\nnew q\nasync [p] {\n  get q\n  set p\n}\nset q\nget p\n")
    assert verdict_strings(explore(prog)) == ["Ok"]


def test_state_budget_is_reported():
    with pytest.raises(BudgetExceeded) as info:
        explore(load_fixture("two_task_cycle"), max_states=10)
    assert info.value.stats.states > 10


def test_step_budget_is_reported():
    with pytest.raises(BudgetExceeded):
        explore(load_fixture("two_task_cycle"), max_steps=5)


def test_mutant_yields_replayable_counterexample():
    prog = load_fixture("two_task_cycle")
    with pytest.raises(CounterexampleFound) as info:
        explore(prog, late_waiting_on=True)
    exc = info.value
    assert exc.violation.kind == "completeness"
    first = replay(prog, exc.schedule, late_waiting_on=True)
    second = replay(prog, exc.schedule, late_waiting_on=True)
    assert first.trace == second.trace == exc.trace
    assert first.final_state == second.final_state
    lines = exc.format_trace().splitlines()
    assert len(lines) == len(exc.schedule)
    assert all(len(line.split("\t")) == 3 for line in lines)


def test_replay_rejects_disabled_steps():
    m = Machine(load_fixture("two_task_cycle"))
    with pytest.raises(ValueError):
        replay(m, [1])


def test_replay_reaches_terminal_verdict():
    m = Machine(parse_program("new p\nasync [p] {\n  set p\n}\nget p\n"))
    state = m.initial()
    schedule = []
    while m.enabled(state):
        i = m.enabled(state)[-1]
        schedule.append(i)
        state, _, _ = m.step(state, i)
    r = replay(m, schedule)
    assert r.terminal and r.verdict.kind == "ok"


@pytest.mark.parametrize("seed", range(0, 200, 7))
def test_random_programs_agree_with_oracle(seed):
    stats = explore(random_program(seed))
    assert stats.distinct_verdicts


def test_stats_summary_mentions_every_verdict():
    stats = explore(load_fixture("aws_prefix"))
    text = stats.summary()
    assert "OmittedSet(callback, [transformFuture])" in text and "states:" in text


def test_fixtures_ship_with_the_package():
    for name in NAMES:
        assert fixture_path(name).is_file()
