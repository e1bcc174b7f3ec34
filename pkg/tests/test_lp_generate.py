from __future__ import annotations

from collections import Counter

from promise_ownership.lp import explore, format_program, random_program
from promise_ownership.lp.syntax import Async, Get, New, Set


def count(body, kind):
    n = 0
    for ins in body:
        if isinstance(ins, kind):
            n += 1
        if isinstance(ins, Async):
            n += count(ins.body, kind)
    return n


def test_seed_determinism():
    assert format_program(random_program(1234)) == format_program(random_program(1234))


def test_bounds_hold():
    for seed in range(300):
        prog = random_program(seed, max_tasks=4, max_promises=4)
        assert count(prog.body, Async) + 1 <= 4
        assert count(prog.body, New) <= 4


def test_one_task_one_promise():
    for seed in range(50):
        prog = random_program(seed, max_tasks=1, max_promises=1, p_omit=0, p_illegal=0)
        kinds = [type(i) for i in prog.body]
        if New in kinds:
            assert kinds[0] is New and Set in kinds
            assert set(kinds) <= {New, Set, Get}
            assert kinds.index(Set) > 0


def test_every_verdict_kind_appears():
    kinds = Counter()
    for seed in range(300):
        for v in explore(random_program(seed)).distinct_verdicts:
            kinds[v.kind] += 1
    assert set(kinds) == {"ok", "deadlock", "omitted-set", "policy-violation"}
