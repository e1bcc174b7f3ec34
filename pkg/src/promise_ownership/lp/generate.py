"""Seeded random L_p programs for checking the detector against the oracle."""

from __future__ import annotations

import random

from .syntax import Async, Get, LpProgram, New, Set, check_well_formed


def random_program(
    seed: int,
    max_tasks: int = 4,
    max_promises: int = 4,
    max_body: int = 4,
    p_omit: float = 0.1,
    p_illegal: float = 0.05,
) -> LpProgram:
    """Build a well-formed program with at most ``max_tasks`` tasks (root included).

    Gets are spread through the bodies while each task settles the promises
    it still owns at the end, which makes wait cycles common. With
    probability ``p_omit`` an owned promise is left unset, and with
    probability ``p_illegal`` a set or a move targets a promise the task
    does not own, so every verdict kind shows up.
    """
    rng = random.Random(seed)
    spare = {"tasks": max_tasks - 1, "promises": max_promises}
    counter = {"p": 0}

    def fresh() -> str:
        name = "pqrstuvw"[counter["p"]] if counter["p"] < 8 else f"p{counter['p']}"
        counter["p"] += 1
        return name

    def body(owned: list[str], visible: list[str], is_root: bool) -> tuple:
        out: list = []
        steps = rng.randint(1 if is_root else 0, max_body)
        for _ in range(steps):
            moves = []
            if spare["promises"]:
                moves += ["new"] * 3
            if visible:
                moves += ["get"] * 2
            if owned:
                moves += ["set"]
            if spare["tasks"]:
                moves += ["async"] * 2
            if not moves:
                break
            move = rng.choice(moves)
            if move == "new":
                spare["promises"] -= 1
                p = fresh()
                out.append(New(p))
                owned.append(p)
                visible.append(p)
            elif move == "get":
                out.append(Get(rng.choice(visible)))
            elif move == "set":
                others = [p for p in visible if p not in owned]
                if others and rng.random() < p_illegal:
                    out.append(Set(rng.choice(others)))
                else:
                    p = rng.choice(owned)
                    owned.remove(p)
                    out.append(Set(p))
            else:
                spare["tasks"] -= 1
                moved = [p for p in owned if rng.random() < 0.5]
                others = [p for p in visible if p not in owned]
                if others and rng.random() < p_illegal:
                    moved.append(rng.choice(others))
                for p in moved:
                    if p in owned:
                        owned.remove(p)
                child = body([p for p in moved], list(visible), False)
                out.append(Async(tuple(moved), child))
        for p in list(owned):
            if rng.random() >= p_omit:
                out.append(Set(p))
                owned.remove(p)
        return tuple(out)

    program = LpProgram(body([], [], True))
    check_well_formed(program)
    return program
