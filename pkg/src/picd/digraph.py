"""Digraph construction from proximity regions, plus a brute-force oracle."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .core import CicdParams, PicdParams, TwoClassSample, intervalize
from .proximity import cicd_covers, picd_covers

__all__ = [
    "Digraph",
    "build_picd",
    "build_cicd",
    "arc_density",
    "brute_force_domination",
    "edge_list",
]


@dataclass(frozen=True)
class Digraph:
    """Vertex count, arc set (ordered index pairs), family tag, and parameters."""

    n: int
    arcs: frozenset[tuple[int, int]]
    family: str = "picd"
    params: object | None = None

    def out_neighbors(self, i: int) -> frozenset[int]:
        return frozenset(j for a, j in self.arcs if a == i)


def _interval_arcs(values, indices, covers) -> Iterator[tuple[int, int]]:
    for a, xa in zip(indices, values):
        for b, xb in zip(indices, values):
            if b != a and covers(xa, xb):
                yield (a, b)


def build_picd(sample: TwoClassSample, params: PicdParams) -> Digraph:
    """Arcs (i, j) where x_j falls in the catch region of x_i.

    Regions never leave their own interval, so arcs only join vertices
    sharing an interval of the partition.
    """
    iv = intervalize(sample)
    arcs: set[tuple[int, int]] = set()
    for bounds, members in zip(iv.bounds, iv.members):
        values = [sample.x[i] for i in members]
        arcs.update(_interval_arcs(values, members, lambda a, b: picd_covers(a, b, bounds, params)))
    return Digraph(sample.n, frozenset(arcs), "picd", params)


def build_cicd(sample: TwoClassSample, params: CicdParams) -> Digraph:
    """Central-similarity variant; end-interval vertices are isolated."""
    iv = intervalize(sample)
    arcs: set[tuple[int, int]] = set()
    last = len(iv.bounds) - 1
    for i, (bounds, members) in enumerate(zip(iv.bounds, iv.members)):
        if i == 0 or i == last:
            continue
        values = [sample.x[j] for j in members]
        arcs.update(_interval_arcs(values, members, lambda a, b: cicd_covers(a, b, bounds, params)))
    return Digraph(sample.n, frozenset(arcs), "cicd", params)


def arc_density(digraph: Digraph) -> float:
    """Arcs divided by n(n-1); zero for digraphs on fewer than two vertices."""
    if digraph.n <= 1:
        return 0.0
    return len(digraph.arcs) / (digraph.n * (digraph.n - 1))


def brute_force_domination(digraph: Digraph, cap: int = 16) -> tuple[int, tuple[int, ...]]:
    """Exact minimum dominating set by subset enumeration.

    Domination uses closed out-neighborhoods (every vertex covers itself).
    Subsets are scanned in ascending size, lexicographically within a size,
    so the witness is the first minimum dominating set in that order.
    Guarded by ``cap`` since the scan is exponential.
    """
    n = digraph.n
    if n == 0:
        return 0, ()
    if n > cap:
        raise ValueError(f"brute force capped at {cap} vertices, got {n}")
    covers = [1 << v for v in range(n)]
    for i, j in digraph.arcs:
        covers[i] |= 1 << j
    full = (1 << n) - 1
    for size in range(1, n + 1):
        for combo in itertools.combinations(range(n), size):
            mask = 0
            for v in combo:
                mask |= covers[v]
            if mask == full:
                return size, combo
    raise AssertionError("unreachable: the full vertex set always dominates")


def edge_list(digraph: Digraph) -> str:
    """Arcs as 'i j' lines, sorted, one per line."""
    return "\n".join(f"{i} {j}" for i, j in sorted(digraph.arcs))
