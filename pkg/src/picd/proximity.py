"""Proximity regions: the interval each point's catch region spans.

A region is always an open subinterval of the line (or a single point, for
vertices sitting exactly on a partition point). The expansion parameter
stretches the region away from the near interval endpoint; the centrality
parameter places the anchor that decides which endpoint counts as near.
Points exactly at the anchor use the right-branch formula, one convention
applied everywhere in this package.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .core import CicdParams, PicdParams, anchor_point

__all__ = [
    "Region",
    "picd_region",
    "cicd_region",
    "picd_covers",
    "cicd_covers",
    "left_of_anchor",
    "transformed_region",
]

# Region endpoints are algebraic in the inputs, and evaluating them in floats
# can round an endpoint exactly onto a member value, flipping an open-interval
# membership. Comparisons whose float margin falls inside this relative band
# are re-run in rational arithmetic, so arc decisions match the algebra even
# for tied points and expansions within rounding distance of 1.
_NEAR = 1e-12


def _lt_gap(p: float, q: float, r: float, u: float, v: float) -> bool:
    """Exact truth of p - q < r * (u - v) for finite float inputs."""
    lhs = p - q
    rhs = r * (u - v)
    scale = abs(p) + abs(q) + r * (abs(u) + abs(v))
    if math.isfinite(scale) and abs(lhs - rhs) > _NEAR * scale:
        return lhs < rhs
    return Fraction(p) - Fraction(q) < Fraction(r) * (Fraction(u) - Fraction(v))


def left_of_anchor(x: float, lo: float, hi: float, c: float) -> bool:
    """Exact side of the anchor; the anchor itself counts as the right side."""
    mid = anchor_point(lo, hi, c)
    scale = abs(x) + abs(lo) + abs(hi)
    if abs(x - mid) > _NEAR * scale:
        return x < mid
    return Fraction(x) < Fraction(lo) + Fraction(c) * (Fraction(hi) - Fraction(lo))


@dataclass(frozen=True)
class Region:
    """An open interval ``(lo, hi)``, or a degenerate single point."""

    lo: float
    hi: float
    is_point: bool = False

    @classmethod
    def point(cls, x: float) -> "Region":
        return cls(x, x, True)

    @property
    def empty(self) -> bool:
        return (not self.is_point) and self.lo >= self.hi

    def contains(self, t: float) -> bool:
        if self.is_point:
            return t == self.lo
        return self.lo < t < self.hi

    def length(self) -> float:
        if self.is_point:
            return 0.0
        return max(0.0, self.hi - self.lo)


def picd_region(x: float, interval: tuple[float, float], params: PicdParams) -> Region:
    """Catch region of ``x`` within its interval, expansion r, centrality c.

    ``interval`` is the open interval of the partition holding ``x``; an
    infinite bound marks an end interval, whose region anchors at the single
    finite endpoint. ``x`` equal to a finite endpoint (a partition point)
    yields the degenerate point region.
    """
    lo, hi = interval
    r, c = params.r, params.c
    if not (lo <= x <= hi):
        raise ValueError(f"x={x!r} lies outside the interval ({lo!r}, {hi!r})")
    if x == lo or x == hi:
        return Region.point(x)
    left_end = math.isinf(lo)
    right_end = math.isinf(hi)
    if left_end and right_end:
        raise ValueError("interval must have at least one finite endpoint")
    if left_end:
        if math.isinf(r):
            return Region(-math.inf, hi)
        return Region(_down(hi, x, r), hi)
    if right_end:
        if math.isinf(r):
            return Region(lo, math.inf)
        return Region(lo, _up(lo, x, r))
    if math.isinf(r):
        return Region(lo, hi)
    mid = anchor_point(lo, hi, c)
    if x < mid:
        return Region(lo, min(hi, _up(lo, x, r)))
    return Region(max(lo, _down(hi, x, r)), hi)


def _up(lo: float, x: float, r: float) -> float:
    # at r == 1 the boundary is x itself; the algebra can round one ulp off,
    # which flips open-interval membership for tied points
    return x if r == 1.0 else lo + r * (x - lo)


def _down(hi: float, x: float, r: float) -> float:
    return x if r == 1.0 else hi - r * (hi - x)


def picd_covers(x: float, t: float, interval: tuple[float, float], params: PicdParams) -> bool:
    """Arc test: does the catch region of ``x`` contain ``t``?

    Decides the same open intervals as ``picd_region`` but without rounding:
    membership within the band where floats cannot be trusted is settled in
    rational arithmetic. The digraph builder and the fast domination path
    both use this predicate, so their arc decisions always agree.
    """
    lo, hi = interval
    r, c = params.r, params.c
    if not (lo <= x <= hi):
        raise ValueError(f"x={x!r} lies outside the interval ({lo!r}, {hi!r})")
    if x == lo or x == hi:
        return t == x
    left_end = math.isinf(lo)
    right_end = math.isinf(hi)
    if left_end and right_end:
        raise ValueError("interval must have at least one finite endpoint")
    if left_end:
        return t < hi and (math.isinf(r) or _lt_gap(hi, t, r, hi, x))
    if right_end:
        return t > lo and (math.isinf(r) or _lt_gap(t, lo, r, x, lo))
    if not (lo < t < hi):
        return False
    if math.isinf(r):
        return True
    if left_of_anchor(x, lo, hi, c):
        return _lt_gap(t, lo, r, x, lo)
    return _lt_gap(hi, t, r, hi, x)


def cicd_covers(x: float, t: float, interval: tuple[float, float], params: CicdParams) -> bool:
    """Arc test for the central-similarity region, rounding-robust."""
    lo, hi = interval
    if math.isinf(lo) or math.isinf(hi):
        raise ValueError("central-similarity regions are undefined on unbounded end intervals")
    if not (lo < x < hi):
        raise ValueError(f"x={x!r} must lie strictly inside ({lo!r}, {hi!r})")
    if not (lo < t < hi):
        return False
    tau, c = params.tau, params.c
    left = left_of_anchor(x, lo, hi, c)
    if left:
        # region (x - tau*(x - lo), x + tau*(1-c)/c*(x - lo)), denominators cleared
        a_lhs, a_rhs = x - t, tau * (x - lo)
        b_lhs, b_rhs = (t - x) * c, tau * (1.0 - c) * (x - lo)
        scale = abs(x) + abs(t) + tau * (abs(x) + abs(lo))
    else:
        a_lhs, a_rhs = t - x, tau * (hi - x)
        b_lhs, b_rhs = (x - t) * (1.0 - c), tau * c * (hi - x)
        scale = abs(x) + abs(t) + tau * (abs(hi) + abs(x))
    if (
        math.isfinite(scale)
        and abs(a_lhs - a_rhs) > _NEAR * scale
        and abs(b_lhs - b_rhs) > _NEAR * scale
    ):
        return a_lhs < a_rhs and b_lhs < b_rhs
    return _cicd_exact(x, t, lo, hi, tau, c, left)


def _cicd_exact(x: float, t: float, lo: float, hi: float, tau: float, c: float, left: bool) -> bool:
    X, T, L, H = Fraction(x), Fraction(t), Fraction(lo), Fraction(hi)
    TAU, C = Fraction(tau), Fraction(c)
    if left:
        return X - T < TAU * (X - L) and (T - X) * C < TAU * (1 - C) * (X - L)
    return T - X < TAU * (H - X) and (X - T) * (1 - C) < TAU * C * (H - X)


def cicd_region(x: float, interval: tuple[float, float], params: CicdParams) -> Region:
    """Central-similarity region of ``x``, defined on bounded intervals only.

    The region expands around ``x`` itself, proportional to the distance to
    the near interval endpoint, and is clipped to the interval.
    """
    lo, hi = interval
    if math.isinf(lo) or math.isinf(hi):
        raise ValueError("central-similarity regions are undefined on unbounded end intervals")
    if not (lo < x < hi):
        raise ValueError(f"x={x!r} must lie strictly inside ({lo!r}, {hi!r})")
    tau, c = params.tau, params.c
    mid = anchor_point(lo, hi, c)
    if x < mid:
        a = x - tau * (x - lo)
        b = x + tau * (1.0 - c) / c * (x - lo)
    else:
        a = x - tau * c / (1.0 - c) * (hi - x)
        b = x + tau * (hi - x)
    return Region(max(lo, a), min(hi, b))


def transformed_region(
    x: float,
    cdf: Callable[[float], float],
    inverse_cdf: Callable[[float], float],
    params: PicdParams,
) -> Region:
    """Catch region under a distribution: map through the CDF, build on (0,1), map back.

    ``cdf(x)`` must land strictly inside (0, 1); the partition on the
    transformed scale is {0, 1}.
    """
    u = float(cdf(x))
    if not (0.0 < u < 1.0):
        raise ValueError(f"cdf(x)={u!r} must lie strictly inside (0, 1)")
    base = picd_region(u, (0.0, 1.0), params)
    return Region(float(inverse_cdf(base.lo)), float(inverse_cdf(base.hi)))
