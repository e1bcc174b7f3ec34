"""``lp-check``: explore L_p programs exhaustively and compare with the oracle."""

from __future__ import annotations

import argparse
import sys
import time

from .explore import BudgetExceeded, CounterexampleFound, explore
from .generate import random_program
from .syntax import ParseError, WellFormednessError, format_program, parse_program

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_BUDGET = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lp-check",
        description="Exhaustively check an L_p program (or random ones) against the waits-for oracle.",
    )
    ap.add_argument("file", nargs="?", help="program file; omit with --random")
    ap.add_argument("--random", action="store_true", help="check generated programs instead of a file")
    ap.add_argument("--seed", type=int, default=0, help="first seed for --random (default 0)")
    ap.add_argument("--count", type=int, default=1, help="number of consecutive seeds for --random")
    ap.add_argument("--max-tasks", type=int, default=4)
    ap.add_argument("--max-promises", type=int, default=4)
    ap.add_argument("--max-interleavings", type=int, default=10**6,
                    help="state budget per program (default 1e6)")
    ap.add_argument("--max-steps", type=int, default=10**4, help="step budget per schedule")
    ap.add_argument("--trace-on-fail", action="store_true", help="print the counterexample schedule")
    ap.add_argument("--mutant", action="store_true",
                    help="publish waitingOn after the walk (deliberately broken detector)")
    ap.add_argument("--show", action="store_true", help="print each program before checking it")
    ap.add_argument("-q", "--quiet", action="store_true", help="only print failures and the final line")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.random == bool(args.file):
        print("lp-check: give exactly one of FILE or --random", file=sys.stderr)
        return 64

    if args.file:
        try:
            with open(args.file) as fh:
                programs = [(args.file, parse_program(fh.read()))]
        except (ParseError, WellFormednessError) as exc:
            print(f"{args.file}: {exc}", file=sys.stderr)
            return 65
    else:
        programs = (
            (f"seed {s}", random_program(s, args.max_tasks, args.max_promises))
            for s in range(args.seed, args.seed + args.count)
        )

    start = time.perf_counter()
    checked = 0
    budget_hit = False
    for label, program in programs:
        if args.show:
            print(f"--- {label}\n{format_program(program)}", end="")
        try:
            stats = explore(program, args.max_interleavings, args.max_steps, late_waiting_on=args.mutant)
        except CounterexampleFound as exc:
            print(f"{label}: COUNTEREXAMPLE {exc}")
            if args.trace_on_fail:
                print(format_program(program), end="")
                print(exc.format_trace(), end="")
            return EXIT_COUNTEREXAMPLE
        except BudgetExceeded as exc:
            print(f"{label}: INCONCLUSIVE ({exc})")
            budget_hit = True
            continue
        checked += 1
        if not args.quiet:
            verdicts = ", ".join(sorted(str(v) for v in stats.distinct_verdicts))
            print(f"{label}: ok  states={stats.states} verdicts: {verdicts}")
            if args.file:
                print(stats.summary())
    elapsed = time.perf_counter() - start
    print(f"checked {checked} program(s) in {elapsed:.1f}s; "
          f"{'budget exceeded for some' if budget_hit else 'all interleavings match the oracle'}")
    return EXIT_BUDGET if budget_hit else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
