"""Domination numbers of interval catch digraphs without building the digraph.

Each interval of the partition is independent: its vertices can only
dominate each other. An end interval always costs one dominator (the member
nearest the finite endpoint covers the rest). A bounded interval costs one
or two, decided by whether any member lands in the interval's cover region:
the set of positions whose catch region swallows every member. Summing the
per-interval costs gives the digraph's domination number exactly.

Expansion exactly 1 is special: a point's region excludes the point itself,
so the cover-region test fails and occupied half-intervals are counted
directly instead, with value ties handled explicitly.
"""
from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from typing import Sequence

from .core import Intervalization, PicdParams, TwoClassSample, anchor_point, intervalize
from .proximity import left_of_anchor, picd_covers

__all__ = [
    "GammaOneRegion",
    "DominationResult",
    "gamma_one_region",
    "interval_gamma",
    "domination_number",
]


@dataclass(frozen=True)
class GammaOneRegion:
    """Positions whose catch region covers every member of one interval.

    Two pieces around the anchor: the left piece ``(left_lo, anchor)`` is
    open at the anchor because a point exactly there uses the right-branch
    region, which belongs to the right piece ``[anchor, right_hi)``. Either
    piece is empty when its bounds cross. The membership test characterizes
    a one-dominator interval only for expansion strictly above 1.
    """

    left_lo: float
    anchor: float
    right_hi: float

    @property
    def left_empty(self) -> bool:
        return self.left_lo >= self.anchor

    @property
    def right_empty(self) -> bool:
        return self.anchor >= self.right_hi

    def contains(self, t: float) -> bool:
        return (self.left_lo < t < self.anchor) or (self.anchor <= t < self.right_hi)


def gamma_one_region(
    values: Sequence[float], interval: tuple[float, float], params: PicdParams
) -> GammaOneRegion:
    """Cover region for a nonempty member list of one bounded interval."""
    lo, hi = interval
    if math.isinf(lo) or math.isinf(hi):
        raise ValueError("the cover region is defined on bounded intervals only")
    if not values:
        raise ValueError("need at least one member value")
    r = params.r
    mid = anchor_point(lo, hi, params.c)
    if math.isinf(r):
        return GammaOneRegion(lo, mid, hi)
    left_lo = (max(values) + lo * (r - 1.0)) / r
    right_hi = (min(values) + hi * (r - 1.0)) / r
    return GammaOneRegion(left_lo, mid, right_hi)


def _ties_low(values: Sequence[float], start: int) -> int:
    """Count of entries equal to values[start] scanning right."""
    v, i = values[start], start
    while i + 1 < len(values) and values[i + 1] == v:
        i += 1
    return i - start + 1


def _ties_high(values: Sequence[float], end: int) -> int:
    """Count of entries equal to values[end] scanning left."""
    v, i = values[end], end
    while i - 1 >= 0 and values[i - 1] == v:
        i -= 1
    return end - i + 1


def interval_gamma(
    values: Sequence[float],
    indices: Sequence[int],
    interval: tuple[float, float],
    params: PicdParams,
) -> tuple[int, tuple[int, ...]]:
    """Domination cost of one interval with a valid witness.

    ``values`` are the member positions sorted ascending, ``indices`` their
    ids in the host sample. Returns ``(0, ())`` for an empty interval, else
    the cost and the witness ids (ascending).
    """
    n_i = len(values)
    if n_i == 0:
        return 0, ()
    if any(a > b for a, b in zip(values, values[1:])):
        raise ValueError("member values must be sorted ascending")
    lo, hi = interval
    if math.isinf(lo) and math.isinf(hi):
        raise ValueError("interval must have at least one finite endpoint")
    unit = params.r == 1.0
    if math.isinf(lo):
        # Regions anchor at the right endpoint, so the smallest member
        # reaches everything; ties at it are self-cover-only when r is 1.
        t = _ties_low(values, 0) if unit else 1
        return t, tuple(indices[:t])
    if math.isinf(hi):
        t = _ties_high(values, n_i - 1) if unit else 1
        return t, tuple(indices[n_i - t :])

    mid = anchor_point(lo, hi, params.c)
    split = bisect_left(values, mid)
    # the float anchor can sit a rounding step off the exact one; reclassify
    # the values adjacent to the split so sides agree with the arc predicate
    while split > 0 and not left_of_anchor(values[split - 1], lo, hi, params.c):
        split -= 1
    while split < n_i and left_of_anchor(values[split], lo, hi, params.c):
        split += 1

    if unit:
        # A unit-expansion region excludes its own point, so every vertex
        # tied at the extreme value of its occupied half dominates only
        # itself and must join the witness.
        witness: list[int] = []
        gamma = 0
        if split > 0:
            t = _ties_high(values, split - 1)
            gamma += t
            witness.extend(indices[split - t : split])
        if split < n_i:
            t = _ties_low(values, split)
            gamma += t
            witness.extend(indices[split : split + t])
        return gamma, tuple(witness)

    # Candidates are the members nearest the anchor on each side: catch
    # regions are nested toward the anchor, so theirs are maximal. A vertex
    # covers itself by membership, not by arc, so a candidate's own value is
    # exempt from the containment test; tied copies still need the arc. The
    # tests use the same exact arc predicate as the digraph builder, so the
    # decision agrees with brute force even when r is within rounding of 1.
    best: int | None = None
    best_dist = math.inf
    for k in (split - 1, split):
        if not 0 <= k < n_i:
            continue
        lo_probe = values[0] if k > 0 else (values[1] if n_i > 1 else None)
        hi_probe = values[n_i - 1] if k < n_i - 1 else (values[n_i - 2] if n_i > 1 else None)
        if any(
            p is not None and not picd_covers(values[k], p, interval, params)
            for p in (lo_probe, hi_probe)
        ):
            continue
        dist = abs(values[k] - mid)
        if dist < best_dist:
            best_dist = dist
            first = k - (_ties_high(values, k) - 1) if k == split - 1 else k
            best = indices[first]
    if best is not None:
        return 1, (best,)
    # No single cover exists: two members nearest the anchor jointly cover
    # the interval, one per occupied side when both are.
    if 0 < split < n_i:
        left_id = indices[split - 1 - (_ties_high(values, split - 1) - 1)]
        return 2, (left_id, indices[split])
    a = 0 if split == 0 else n_i - 2
    return 2, (indices[a], indices[a + 1])


@dataclass(frozen=True)
class DominationResult:
    """Total domination number with its per-interval split and a witness."""

    gamma: int
    by_interval: tuple[int, ...]
    witness: tuple[int, ...]


def domination_number(sample: TwoClassSample, params: PicdParams) -> DominationResult:
    """Domination number of the catch digraph on ``sample`` under ``params``."""
    iv = intervalize(sample)
    gammas: list[int] = []
    witness: list[int] = []
    for bounds, members in zip(iv.bounds, iv.members):
        values = [sample.x[i] for i in members]
        g, w = interval_gamma(values, members, bounds, params)
        gammas.append(g)
        witness.extend(w)
    return DominationResult(sum(gammas), tuple(gammas), tuple(witness))
