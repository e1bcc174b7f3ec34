"""Brute-force waits-for oracle over a global state snapshot.

Builds the bipartite graph (task -> awaited promise, promise -> owner task)
and enumerates its elementary cycles with networkx. It shares nothing with
the detector's walk.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Hashable, Mapping

import networkx as nx

from ..reports import canonical_cycle


def oracle_cycles(
    waiting_on: Mapping[Hashable, Hashable | None],
    owner: Mapping[Hashable, Hashable | None],
) -> list[tuple[tuple, ...]]:
    """Every deadlock cycle in the snapshot, canonically rotated and sorted."""
    g = nx.DiGraph()
    for t, p in waiting_on.items():
        if p is not None:
            g.add_edge(("t", t), ("p", p))
    for p, t in owner.items():
        if t is not None:
            g.add_edge(("p", p), ("t", t))
    cycles = []
    for nodes in nx.simple_cycles(g):
        start = next(i for i, n in enumerate(nodes) if n[0] == "t")
        nodes = nodes[start:] + nodes[:start]
        pairs = tuple((nodes[k][1], nodes[k + 1][1]) for k in range(0, len(nodes), 2))
        cycles.append(canonical_cycle(pairs))
    return sorted(cycles)


def oracle_verdict(waiting_on, owner):
    """The deadlock verdict for a snapshot, or None when nothing is stuck in a cycle."""
    from .model import Verdict

    cycles = oracle_cycles(waiting_on, owner)
    if not cycles:
        return None
    return Verdict("deadlock", cycle=cycles[0])


@lru_cache(maxsize=1 << 16)
def cycles_for_vectors(waiting: tuple[int, ...], owner: tuple[int, ...]) -> tuple:
    """Cached oracle for the model checker's vector encoding (-1 = null, -2 = unallocated)."""
    w = {t: (p if p >= 0 else None) for t, p in enumerate(waiting)}
    o = {p: (t if t >= 0 else None) for p, t in enumerate(owner)}
    return tuple(oracle_cycles(w, o))
