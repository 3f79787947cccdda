"""Exact and limiting distribution of the domination number.

For n points dropped uniformly on one bounded interval, the probability
that the interval costs two dominators has a closed piecewise form in the
expansion r and centrality c. The pieces are organized in three centrality
regimes (after reflecting c to the lower half, the probability being
symmetric in c about 1/2), each regime a chain of half-open r windows.
``p_u`` dispatches to the right piece and reports which one fired.

On top of that single-interval law sit the multi-interval results: the
exact pmf of the total domination number when both point classes are
uniform (a sum over occupancy compositions), its conditional-on-counts
variant, the expectation, and the limiting pmf for a growing sample on a
fixed partition.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from math import comb, isclose
from typing import Iterator, Sequence

__all__ = [
    "BranchId",
    "Pmf",
    "p_u",
    "p_asymptotic",
    "r_star",
    "p_limit_general_f",
    "p_limit_product",
    "compositions",
    "exact_pmf_uniform",
    "exact_pmf_conditional",
    "expected_gamma_uniform",
    "asymptotic_pmf_multi",
]

# Centrality value splitting the high and mid regimes: the unique c in
# (0, 1/2) where 1/(1-c) == (1-c)/c.
_C_SPLIT = (3.0 - math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class BranchId:
    """Which piece of the piecewise law produced a value.

    ``regime`` is the centrality band after reflection ('high-c', 'mid-c',
    'low-c', or 'degenerate'); ``piece`` names the evaluator within the
    regime ('P1' at the largest expansions down to 'P4', with 'P3M' the
    mid/low-regime variant of the third window and 'P4L' the extra
    low-regime window between the quadratic roots); ``window`` spells the
    matched r interval numerically; ``reflected`` records that c > 1/2 was
    mapped to 1 - c first.
    """

    regime: str
    piece: str
    window: str
    reflected: bool = False


def _validate_r_c(r: float, c: float) -> tuple[float, float]:
    r = float(r)
    c = float(c)
    if math.isnan(r) or r < 1.0:
        raise ValueError(f"r must be >= 1 (math.inf allowed), got {r!r}")
    if not (0.0 <= c <= 1.0):
        raise ValueError(f"c must be in [0, 1], got {c!r}")
    return r, c


def _validate_n(n: int) -> int:
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    return int(n)


def _degenerate_limit(c: float, n: int) -> float:
    """Value shared by the bottom pieces as r -> 1 (both are 0/0 there)."""
    return 1.0 - c**n - (1.0 - c) ** n


def _pi_p1(r: float, n: int) -> float:
    return (
        r
        * r
        * ((2.0 / r) ** n * (r - 1.0) - 2.0 * ((r - 1.0) / (r * r)) ** n * r)
        / ((r - 1.0) * (r + 1.0) ** 2)
    )


def _pi_p2(r: float, c: float, n: int) -> float:
    return (
        r
        * (
            ((c * r + 1.0) / r) ** n * (r + 1.0)
            - ((r - 1.0) / (r * r)) ** (n - 1)
            - ((1.0 - c) / r) ** n * (r + 1.0)
            - ((c * r * r + c * r - r + 1.0) / r) ** n
            - (r - 1.0) ** (n - 1) * ((c * r + c - 1.0) / r) ** n
        )
        / (r + 1.0) ** 2
    )


def _pi_p3(r: float, c: float, n: int) -> float:
    # window: (1 - c)/c <= r < 1/(1 - c), so r - cr - c > 0 and cr + c - 1 >= 0
    if r == 1.0:
        return _degenerate_limit(c, n)
    w = (r - 1.0) / r
    return (
        1.0
        - ((c * r) ** n + ((1.0 - c) * r) ** n) / (r + 1.0)
        - ((c / r) ** n + ((1.0 - c) / r) ** n) * r / (r + 1.0)
        + (r - 1.0) ** n / (r + 1.0) ** 2
        - (w * (r - c * r - c)) ** n * r / ((r - 1.0) * (r + 1.0) ** 2)
        - (w * (c * r + c - 1.0)) ** n * r / ((r - 1.0) * (r + 1.0) ** 2)
    )


def _pi_p4(r: float, c: float, n: int) -> float:
    # window: 1 <= r < min((1 - c)/c, 1/(1 - c)), so 1 - c - cr > 0
    if r == 1.0:
        return _degenerate_limit(c, n)
    return (
        1.0
        - ((c * r) ** n + ((1.0 - c) * r) ** n) / (r + 1.0)
        - ((c / r) ** n + ((1.0 - c) / r) ** n) * r / (r + 1.0)
        + (r - 1.0) ** n / (r + 1.0) ** 2
        - ((r - 1.0) * (r - c * r - c) / r) ** n * r / ((r - 1.0) * (r + 1.0) ** 2)
        + ((r - 1.0) * (1.0 - c - c * r)) ** n / ((r - 1.0) * (r + 1.0) ** 2)
    )


def _pi_p3m(r: float, c: float, n: int) -> float:
    # window sits inside [1/(1 - c), (1 - c)/c) with cr^2 + cr - r + 1 > 0
    if r == 1.0:
        return _degenerate_limit(c, n)
    return (
        ((c * r + 1.0) / r) ** n * r / (r + 1.0)
        - ((1.0 - c) / r) ** n * r / (r + 1.0)
        - ((c * r * r + c * r - r + 1.0) / r) ** n * r / (r + 1.0) ** 2
        - ((r - 1.0) / (r * r)) ** n * r**3 / ((r - 1.0) * (r + 1.0) ** 2)
        + ((r - 1.0) * (1.0 - c - c * r)) ** n / ((r - 1.0) * (r + 1.0) ** 2)
    )


def _pi_p4l(r: float, c: float, n: int) -> float:
    return (
        r * ((c * r + 1.0) / r) ** n - r * ((1.0 - c) / r) ** n - c**n * (r + 1.0)
    ) / (r + 1.0)


def _window(lo: float, hi: float) -> str:
    if math.isinf(hi):
        return f"[{lo:.6g}, inf)"
    return f"[{lo:.6g}, {hi:.6g})"


def p_u(r: float, c: float, n: int) -> tuple[float, BranchId]:
    """P(a bounded interval holding n uniform points costs two dominators).

    Returns the probability and the branch that produced it. Degenerate
    inputs (n = 1, c in {0, 1}, infinite r) give probability zero: a single
    point, an anchor at an endpoint, or an all-covering region each force a
    one-dominator interval.
    """
    r, c = _validate_r_c(r, c)
    n = _validate_n(n)
    if n == 1:
        return 0.0, BranchId("degenerate", "n=1", "")
    if c == 0.0 or c == 1.0:
        return 0.0, BranchId("degenerate", f"c={c:g}", "")
    if math.isinf(r):
        return 0.0, BranchId("degenerate", "r=inf", "")

    reflected = c > 0.5
    cc = 1.0 - c if reflected else c
    top = 1.0 / cc
    ratio = (1.0 - cc) / cc
    inv1c = 1.0 / (1.0 - cc)

    if cc >= _C_SPLIT:
        regime = "high-c"
        if r >= top:
            piece, window, val = "P1", _window(top, math.inf), _pi_p1(r, n)
        elif r >= inv1c:
            piece, window, val = "P2", _window(inv1c, top), _pi_p2(r, cc, n)
        elif r >= ratio:
            piece, window, val = "P3", _window(ratio, inv1c), _pi_p3(r, cc, n)
        else:
            piece, window, val = "P4", _window(1.0, ratio), _pi_p4(r, cc, n)
    elif cc >= 0.25:
        regime = "mid-c"
        if r >= top:
            piece, window, val = "P1", _window(top, math.inf), _pi_p1(r, n)
        elif r >= ratio:
            piece, window, val = "P2", _window(ratio, top), _pi_p2(r, cc, n)
        elif r >= inv1c:
            piece, window, val = "P3M", _window(inv1c, ratio), _pi_p3m(r, cc, n)
        else:
            piece, window, val = "P4", _window(1.0, inv1c), _pi_p4(r, cc, n)
    else:
        regime = "low-c"
        disc = math.sqrt(1.0 - 4.0 * cc)
        r_lo = (1.0 - disc) / (2.0 * cc)
        r_hi = (1.0 + disc) / (2.0 * cc)
        if r >= top:
            piece, window, val = "P1", _window(top, math.inf), _pi_p1(r, n)
        elif r >= ratio:
            piece, window, val = "P2", _window(ratio, top), _pi_p2(r, cc, n)
        elif r >= r_hi:
            piece, window, val = "P3M", _window(r_hi, ratio), _pi_p3m(r, cc, n)
        elif r >= r_lo:
            piece, window, val = "P4L", _window(r_lo, r_hi), _pi_p4l(r, cc, n)
        elif r >= inv1c:
            piece, window, val = "P3M", _window(inv1c, r_lo), _pi_p3m(r, cc, n)
        else:
            piece, window, val = "P4", _window(1.0, inv1c), _pi_p4(r, cc, n)

    return min(1.0, max(0.0, val)), BranchId(regime, piece, window, reflected)


def r_star(c: float) -> float:
    """The unique expansion with a nondegenerate limiting law, 1/max(c, 1-c)."""
    c = float(c)
    if not (0.0 < c < 1.0):
        raise ValueError(f"c must be in (0, 1), got {c!r}")
    return 1.0 / max(c, 1.0 - c)


def p_asymptotic(r: float, c: float) -> float:
    """Limit of p_u(r, c, n) as n grows.

    Zero above r_star(c), one below it, and at r_star exactly (compared
    with a 1e-12 relative tolerance, since thresholds like 10/7 rarely
    round-trip float arithmetic) the nondegenerate value r*/(r*+1), except
    at c = 1/2 where the two regime branches meet and the limit drops to
    4/9. That discontinuity in c is real, not numerical, so c is compared
    exactly there.
    """
    r, c = _validate_r_c(r, c)
    rs = r_star(c)
    if not math.isinf(r) and isclose(r, rs, rel_tol=1e-12):
        return 4.0 / 9.0 if c == 0.5 else rs / (rs + 1.0)
    return 0.0 if r > rs else 1.0


def p_limit_general_f(
    order: int, end_deriv: float, anchor_deriv: float, c: float, side: str = "left"
) -> float:
    """Nondegenerate limit under a smooth density on one interval.

    ``order`` is the first derivative order at which the density is nonzero
    approaching the relevant interval endpoint; ``end_deriv`` is that
    one-sided derivative at the endpoint, ``anchor_deriv`` the same-order
    one-sided derivative at the anchor point. ``side='left'`` is the limit
    at expansion 1/(1-c) (the left endpoint and right-side approaches),
    ``side='right'`` the limit at expansion 1/c. At c = 1/2 the two sides
    combine multiplicatively; see ``p_limit_product``.
    """
    if int(order) != order or order < 0:
        raise ValueError(f"order must be a nonnegative integer, got {order!r}")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    c = float(c)
    if not (0.0 < c < 1.0):
        raise ValueError(f"c must be in (0, 1), got {c!r}")
    end_deriv = float(end_deriv)
    anchor_deriv = float(anchor_deriv)
    if end_deriv < 0.0 or anchor_deriv < 0.0:
        raise ValueError("derivatives of the first nonzero order cannot be negative")
    factor = (1.0 - c) ** (int(order) + 1) if side == "left" else c ** (int(order) + 1)
    denom = end_deriv + factor * anchor_deriv
    if denom <= 0.0:
        raise ValueError("the endpoint and anchor derivatives cannot both be zero")
    return end_deriv / denom


def p_limit_product(
    left_order: int,
    left_end_deriv: float,
    left_anchor_deriv: float,
    right_order: int,
    right_end_deriv: float,
    right_anchor_deriv: float,
) -> float:
    """Limit at (r, c) = (2, 1/2): product of the two one-sided limits."""
    left = p_limit_general_f(left_order, left_end_deriv, left_anchor_deriv, 0.5, "left")
    right = p_limit_general_f(right_order, right_end_deriv, right_anchor_deriv, 0.5, "right")
    return left * right


@dataclass(frozen=True)
class Pmf:
    """A finite integer-supported pmf; probabilities must sum to one."""

    support: tuple[int, ...]
    probs: tuple[float, ...]

    def __post_init__(self) -> None:
        support = tuple(int(q) for q in self.support)
        probs = tuple(float(p) for p in self.probs)
        if len(support) != len(probs) or not support:
            raise ValueError("support and probs must be equal-length and nonempty")
        if any(a >= b for a, b in zip(support, support[1:])):
            raise ValueError("support must be strictly increasing")
        if any(p < -1e-12 for p in probs):
            raise ValueError(f"negative probability in {probs!r}")
        probs = tuple(max(0.0, p) for p in probs)
        total = sum(probs)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probs", probs)

    def prob(self, q: int) -> float:
        for s, p in zip(self.support, self.probs):
            if s == q:
                return p
        return 0.0

    def items(self) -> tuple[tuple[int, float], ...]:
        return tuple(zip(self.support, self.probs))

    def mean(self) -> float:
        return sum(q * p for q, p in zip(self.support, self.probs))

    def variance(self) -> float:
        mu = self.mean()
        return sum((q - mu) ** 2 * p for q, p in zip(self.support, self.probs))


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All ordered splits of ``total`` into ``parts`` nonnegative integers."""
    if parts < 1:
        raise ValueError("parts must be >= 1")
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def _extras_poly(mids: Sequence[int], pu_by_count) -> list[float]:
    """Distribution of the number of two-cost middle intervals.

    Each middle interval holding k > 1 points independently upgrades from
    one dominator to two with probability pu_by_count(k).
    """
    poly = [1.0]
    for k in mids:
        if k > 1:
            p = pu_by_count(k)
            if p == 0.0:
                continue
            nxt = [0.0] * (len(poly) + 1)
            for j, a in enumerate(poly):
                nxt[j] += a * (1.0 - p)
                nxt[j + 1] += a * p
            poly = nxt
    return poly


def _base_cost(counts: Sequence[int]) -> int:
    ends = (counts[0] > 0) + (counts[-1] > 0)
    return ends + sum(1 for k in counts[1:-1] if k > 0)


def exact_pmf_conditional(counts: Sequence[int], r: float, c: float) -> Pmf:
    """Pmf of the domination number given the per-interval point counts.

    ``counts`` lists occupancies interval by interval, first and last being
    the unbounded end intervals. Middle intervals holding points are
    assumed to carry them uniformly, which is what conditioning on counts
    yields for uniform samples.
    """
    counts = tuple(int(k) for k in counts)
    if len(counts) < 2:
        raise ValueError("need at least the two end intervals")
    if any(k < 0 for k in counts):
        raise ValueError("counts must be nonnegative")
    _validate_r_c(r, c)
    cache: dict[int, float] = {}

    def pu(k: int) -> float:
        if k not in cache:
            cache[k] = p_u(r, c, k)[0]
        return cache[k]

    base = _base_cost(counts)
    poly = _extras_poly(counts[1:-1], pu)
    support = [base + j for j, a in enumerate(poly) if a > 0.0]
    probs = [a for a in poly if a > 0.0]
    return Pmf(tuple(support), tuple(probs))


def exact_pmf_uniform(
    n: int, m: int, r: float, c: float, max_compositions: int = 2_000_000
) -> Pmf:
    """Pmf of the domination number with both classes uniform on (0, 1).

    Sums over all occupancy compositions of the n points into the m + 1
    intervals of a uniform m-point partition; every composition is equally
    likely, with weight 1 over binomial(n + m, m).
    """
    n = _validate_n(n)
    if int(m) != m or m < 1:
        raise ValueError(f"m must be a positive integer, got {m!r}")
    m = int(m)
    _validate_r_c(r, c)
    total = comb(n + m, m)
    if total > max_compositions:
        raise ValueError(
            f"{total} compositions exceed the cap {max_compositions}; "
            "raise max_compositions explicitly for larger cases"
        )
    pu_table = [0.0] * (n + 1)
    for k in range(2, n + 1):
        pu_table[k] = p_u(r, c, k)[0]
    weight = 1.0 / total
    acc: dict[int, float] = defaultdict(float)
    for comp in compositions(n, m + 1):
        base = _base_cost(comp)
        poly = _extras_poly(comp[1:-1], pu_table.__getitem__)
        for j, a in enumerate(poly):
            if a:
                acc[base + j] += weight * a
    support = sorted(q for q, p in acc.items() if p > 0.0)
    return Pmf(tuple(support), tuple(acc[q] for q in support))


def expected_gamma_uniform(
    n: int, m: int, r: float, c: float, max_compositions: int = 2_000_000
) -> float:
    """Expectation of the domination number under the joint-uniform model."""
    return exact_pmf_uniform(n, m, r, c, max_compositions).mean()


def asymptotic_pmf_multi(
    m_bounded: int,
    r: float,
    c: float,
    per_interval_p: Sequence[float] | None = None,
    include_end_intervals: bool = True,
) -> Pmf:
    """Limiting pmf of the domination number on a fixed partition.

    ``m_bounded`` counts the bounded intervals. With end intervals included
    the baseline is m_bounded + 2 (each end interval eventually holds a
    point and costs one). Above r_star the law degenerates at the baseline,
    below it at baseline + m_bounded; at r_star each bounded interval adds
    an independent Bernoulli, with probability ``p_asymptotic(r, c)`` or
    the entries of ``per_interval_p`` (e.g. from ``p_limit_general_f`` for
    non-uniform densities).
    """
    if int(m_bounded) != m_bounded or m_bounded < 0:
        raise ValueError(f"m_bounded must be a nonnegative integer, got {m_bounded!r}")
    m_bounded = int(m_bounded)
    r, c = _validate_r_c(r, c)
    if not (0.0 < c < 1.0):
        raise ValueError(f"c must be in (0, 1) for the limit, got {c!r}")
    base = m_bounded + (2 if include_end_intervals else 0)
    rs = r_star(c)
    at_star = not math.isinf(r) and isclose(r, rs, rel_tol=1e-12)
    if per_interval_p is not None and not at_star:
        raise ValueError("per-interval probabilities only apply at r = r_star(c)")
    if not at_star:
        if r > rs:
            return Pmf((base,), (1.0,))
        return Pmf((base + m_bounded,), (1.0,))
    if per_interval_p is None:
        ps = [p_asymptotic(r, c)] * m_bounded
    else:
        ps = [float(p) for p in per_interval_p]
        if len(ps) != m_bounded:
            raise ValueError(f"need {m_bounded} per-interval probabilities, got {len(ps)}")
        if any(not (0.0 <= p <= 1.0) for p in ps):
            raise ValueError("per-interval probabilities must be in [0, 1]")
    poly = [1.0]
    for p in ps:
        nxt = [0.0] * (len(poly) + 1)
        for j, a in enumerate(poly):
            nxt[j] += a * (1.0 - p)
            nxt[j + 1] += a * p
        poly = nxt
    support = [base + j for j, a in enumerate(poly) if a > 0.0]
    probs = [a for a in poly if a > 0.0]
    if not support:
        support, probs = [base], [1.0]
    return Pmf(tuple(support), tuple(probs))
