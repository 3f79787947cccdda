"""Uniformity and goodness-of-fit tests built on the domination number.

The partition for testing is the k + 1 equispaced points {0, 1/k, .., 1};
data must lie strictly inside (0, 1), so the two unbounded end intervals
stay empty and the test statistic G = (domination number) - k counts the
bounded intervals that cost two dominators, minus the empty ones. Reference
tests (Kolmogorov-Smirnov, chi-square) and an arc-density variant share the
same report shape. Non-uniform nulls reduce to this via the probability
integral transform.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import gammaincc
from scipy.stats import binom

from .core import CicdParams, PicdParams, TwoClassSample
from .digraph import arc_density, build_cicd, build_picd
from .domination import DominationResult, domination_number
from .exactdist import p_asymptotic, p_u, r_star
from .sampling import RngStream

__all__ = [
    "TestReport",
    "CriticalValues",
    "default_subintervals",
    "partition_points",
    "g_statistic",
    "dom_test_binomial",
    "dom_test_mc",
    "ks_test",
    "chisq_test",
    "arc_density_test",
    "gof_via_transform",
]

_DECISION_KEY = 9090


def default_subintervals(n: int) -> int:
    """Default partition size, the square root rule."""
    return max(1, round(math.sqrt(n)))


def partition_points(k: int) -> tuple[float, ...]:
    """The k + 1 equispaced partition points {0, 1/k, .., 1}."""
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    return tuple(j / k for j in range(int(k) + 1))


def _validate_unit_data(data, k: int | None = None) -> np.ndarray:
    arr = np.asarray(data, dtype=float).ravel()
    if arr.size == 0:
        raise ValueError("need at least one data point")
    if not np.all(np.isfinite(arr)):
        raise ValueError("data must be finite")
    if np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise ValueError("data must lie strictly inside (0, 1)")
    if k is not None:
        grid = np.array(partition_points(k))
        if np.isin(arr, grid).any():
            raise ValueError(
                "a data point coincides exactly with a partition point; "
                "jitter it slightly, interval membership is open"
            )
    return arr


def _normalize_side(alternative: str) -> str:
    alt = alternative.strip().lower()
    if alt in ("two", "two-sided", "both"):
        return "two-sided"
    if alt in ("left", "right"):
        return alt
    raise ValueError(f"alternative must be left, right, or two-sided, got {alternative!r}")


def _validate_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must be in (0, 1), got {alpha!r}")
    return alpha


@dataclass
class TestReport:
    """Uniform result shape for every test in this module."""

    method: str
    statistic: float
    p_value: float | None
    reject: bool
    alternative: str
    alpha: float
    n: int
    params: dict
    critical: dict | None = None

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "reject": self.reject,
            "alternative": self.alternative,
            "alpha": self.alpha,
            "n": self.n,
            "params": self.params,
            "critical": self.critical,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def render(self) -> str:
        lines = [
            f"method: {self.method}",
            f"statistic: {self.statistic:.6g}",
            f"p_value: {'n/a' if self.p_value is None else f'{self.p_value:.6g}'}",
            f"reject: {str(self.reject).lower()}",
            f"alternative: {self.alternative}",
            f"alpha: {self.alpha:g}",
            f"n: {self.n}",
        ]
        for key in sorted(self.params):
            lines.append(f"{key}: {self.params[key]}")
        if self.critical:
            for key in sorted(self.critical):
                lines.append(f"critical.{key}: {self.critical[key]}")
        return "\n".join(lines)


@dataclass(frozen=True)
class CriticalValues:
    """Empirical critical values with the boundary-atom bookkeeping.

    ``left_cv`` is the atom where the lower tail first crosses alpha:
    P(X < left_cv) <= alpha < P(X <= left_cv) under the null draws, and
    symmetrically for ``right_cv``. A test rejects surely beyond the cv and
    with the leftover probability (theta) exactly on it, which keeps the
    size at alpha despite the discreteness; the conservative variant never
    rejects on the atom.
    """

    alpha: float
    left_cv: float
    right_cv: float
    p_below_left: float
    p_at_left: float
    p_above_right: float
    p_at_right: float
    reps: int
    draws: tuple = field(default=(), repr=False, compare=False)

    @classmethod
    def from_draws(cls, draws: Sequence[float], alpha: float, keep_draws: bool = True):
        arr = np.sort(np.asarray(draws, dtype=float))
        if arr.size == 0:
            raise ValueError("need at least one draw")
        if not (0.0 < alpha < 1.0):
            raise ValueError(f"alpha must be in (0, 1), got {alpha!r}")
        values, counts = np.unique(arr, return_counts=True)
        masses = counts / arr.size
        cum = np.cumsum(masses)
        below = cum - masses
        left_idx = int(np.argmax(cum > alpha)) if (cum > alpha).any() else len(values) - 1
        tail = np.cumsum(masses[::-1])[::-1]
        above = tail - masses
        right_idx = (
            len(values) - 1 - int(np.argmax((tail > alpha)[::-1]))
            if (tail > alpha).any()
            else 0
        )
        return cls(
            alpha=float(alpha),
            left_cv=float(values[left_idx]),
            right_cv=float(values[right_idx]),
            p_below_left=float(below[left_idx]),
            p_at_left=float(masses[left_idx]),
            p_above_right=float(above[right_idx]),
            p_at_right=float(masses[right_idx]),
            reps=int(arr.size),
            draws=tuple(arr.tolist()) if keep_draws else (),
        )

    @property
    def theta_left(self) -> float:
        if self.p_at_left <= 0.0:
            return 0.0
        return min(1.0, max(0.0, (self.alpha - self.p_below_left) / self.p_at_left))

    @property
    def theta_right(self) -> float:
        if self.p_at_right <= 0.0:
            return 0.0
        return min(1.0, max(0.0, (self.alpha - self.p_above_right) / self.p_at_right))

    def decide(self, value: float, alternative: str, u: float, conservative: bool = False) -> bool:
        """Reject or not; ``u`` feeds the randomized boundary rule.

        For a two-sided decision build the critical values at alpha/2 and
        both tails are checked.
        """
        side = _normalize_side(alternative)
        if side in ("left", "two-sided"):
            if value < self.left_cv:
                return True
            if value == self.left_cv and not conservative and u < self.theta_left:
                return True
        if side in ("right", "two-sided"):
            if value > self.right_cv:
                return True
            if value == self.right_cv and not conservative and u < self.theta_right:
                return True
        return False

    def empirical_p(self, value: float, alternative: str) -> float | None:
        if not self.draws:
            return None
        arr = np.asarray(self.draws)
        left = float(np.mean(arr <= value))
        right = float(np.mean(arr >= value))
        side = _normalize_side(alternative)
        if side == "left":
            return left
        if side == "right":
            return right
        return min(1.0, 2.0 * min(left, right))


def g_statistic(data, k: int, params: PicdParams) -> tuple[int, DominationResult]:
    """Observed G = domination number - k on the k-subinterval partition."""
    arr = _validate_unit_data(data, k)
    sample = TwoClassSample(tuple(arr.tolist()), partition_points(k))
    result = domination_number(sample, params)
    return result.gamma - k, result


def g_statistic_fn(k: int, params: PicdParams) -> Callable[[np.ndarray], float]:
    """Closure computing G on fixed (k, params), for calibration loops."""

    def stat(data: np.ndarray) -> float:
        return float(g_statistic(data, k, params)[0])

    return stat


def arc_density_fn(k: int, family: str, params) -> Callable[[np.ndarray], float]:
    """Closure computing the arc density on the k-subinterval partition."""
    if family not in ("picd", "cicd"):
        raise ValueError(f"family must be picd or cicd, got {family!r}")
    build = build_picd if family == "picd" else build_cicd
    grid = partition_points(k)

    def stat(data: np.ndarray) -> float:
        sample = TwoClassSample(tuple(np.asarray(data, float).tolist()), grid)
        return arc_density(build(sample, params))

    return stat


def dom_test_binomial(
    data,
    k: int | None = None,
    r: float = 2.0,
    c: float = 0.5,
    alternative: str = "left",
    alpha: float = 0.05,
    asymptotic_p: bool = False,
) -> TestReport:
    """Domination-number test against an explicit binomial null.

    Under uniformity G behaves like BIN(k, p) with p the closed-form
    two-dominator probability at floor(n/k) points per subinterval (or its
    limit when ``asymptotic_p`` is set, which requires r = r_star(c)).
    A negative G (an empty subinterval) contradicts the binomial support
    and gets p-value 0 outright.
    """
    side = _normalize_side(alternative)
    alpha = _validate_alpha(alpha)
    params = PicdParams(r, c)
    arr = _validate_unit_data(data)
    n = arr.size
    k = default_subintervals(n) if k is None else int(k)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k!r}")
    if n < k:
        raise ValueError(f"need at least k={k} points for floor(n/k) >= 1, got n={n}")
    if asymptotic_p:
        rs = r_star(c)
        if not math.isclose(r, rs, rel_tol=1e-12):
            raise ValueError(f"the asymptotic null needs r = r_star(c) = {rs!r}, got r = {r!r}")
        p_null = p_asymptotic(r, c)
        null_kind = "asymptotic"
    else:
        p_null = p_u(r, c, n // k)[0]
        null_kind = "closed-form"
    g, _ = g_statistic(arr, k, params)
    if g < 0:
        p_value = 0.0
    else:
        left = float(binom.cdf(g, k, p_null))
        right = float(binom.sf(g - 1, k, p_null))
        if side == "left":
            p_value = left
        elif side == "right":
            p_value = right
        else:
            p_value = min(1.0, 2.0 * min(left, right))
    return TestReport(
        method="dom-asy" if asymptotic_p else "dom-bin",
        statistic=float(g),
        p_value=p_value,
        reject=bool(p_value <= alpha),
        alternative=side,
        alpha=float(alpha),
        n=int(n),
        params={
            "r": r,
            "c": c,
            "k": k,
            "p_null": p_null,
            "per_interval_n": n // k,
            "null": null_kind,
        },
    )


def dom_test_mc(
    data,
    k: int | None = None,
    r: float = 2.0,
    c: float = 0.5,
    alternative: str = "left",
    alpha: float = 0.05,
    reps: int = 10000,
    seed: int = 1729,
    conservative: bool = False,
    critical: CriticalValues | None = None,
) -> TestReport:
    """Domination-number test against simulated critical values.

    Calibrates the null distribution of the domination number by simulating
    uniform samples of the same size (unless ``critical`` is supplied, e.g.
    shared across many tests), then applies the randomized boundary rule;
    ``conservative`` switches to the never-reject-on-the-atom variant. The
    critical values live on the domination-number scale, so an externally
    supplied ``critical`` must come from draws of the domination number
    itself (as ``mc.estimate_critical_values`` produces), not of G.
    """
    side = _normalize_side(alternative)
    alpha = _validate_alpha(alpha)
    params = PicdParams(r, c)
    arr = _validate_unit_data(data)
    n = arr.size
    k = default_subintervals(n) if k is None else int(k)
    _validate_unit_data(arr, k)
    if critical is None:
        if reps < 1000:
            warnings.warn(
                f"critical values from only {reps} replicates are unstable",
                stacklevel=2,
            )
        from .mc import estimate_critical_values

        alpha_side = alpha / 2.0 if side == "two-sided" else alpha
        critical = estimate_critical_values(n, k, r, c, reps=reps, seed=seed, alpha=alpha_side)
    g, full = g_statistic(arr, k, params)
    gamma_obs = float(full.gamma)
    u = float(RngStream(int(seed), (_DECISION_KEY,)).generator().random())
    reject = critical.decide(gamma_obs, side, u, conservative)
    return TestReport(
        method="dom-mc",
        statistic=float(g),
        p_value=critical.empirical_p(gamma_obs, side),
        reject=bool(reject),
        alternative=side,
        alpha=float(alpha),
        n=int(n),
        params={"r": r, "c": c, "k": k},
        critical={
            "scale": "gamma",
            "left_cv": critical.left_cv,
            "right_cv": critical.right_cv,
            "theta_left": critical.theta_left,
            "theta_right": critical.theta_right,
            "alpha_side": critical.alpha,
            "reps": critical.reps,
            "conservative": conservative,
        },
    )


def _ks_tail(lam: float) -> float:
    """Two-sided Kolmogorov tail probability, alternating series.

    Terms are truncated once below 1e-12; at lam = 0 the series is
    formally divergent but the tail is exactly 1.
    """
    if lam <= 0.0:
        return 1.0
    total = 0.0
    for j in range(1, 100001):
        term = 2.0 * (-1.0) ** (j - 1) * math.exp(-2.0 * j * j * lam * lam)
        total += term
        if abs(term) < 1e-12:
            break
    return min(1.0, max(0.0, total))


def ks_test(data, alternative: str = "two-sided", alpha: float = 0.05) -> TestReport:
    """Kolmogorov-Smirnov test of uniformity on (0, 1), two-sided only."""
    if _normalize_side(alternative) != "two-sided":
        raise ValueError("only the two-sided Kolmogorov-Smirnov test is provided")
    alpha = _validate_alpha(alpha)
    arr = np.sort(_validate_unit_data(data))
    n = arr.size
    grid_hi = np.arange(1, n + 1) / n
    grid_lo = np.arange(0, n) / n
    d_plus = float(np.max(grid_hi - arr))
    d_minus = float(np.max(arr - grid_lo))
    d = max(d_plus, d_minus)
    p_value = _ks_tail(math.sqrt(n) * d)
    return TestReport(
        method="ks",
        statistic=d,
        p_value=p_value,
        reject=bool(p_value <= alpha),
        alternative="two-sided",
        alpha=float(alpha),
        n=int(n),
        params={},
    )


def chisq_test(data, k_bins: int | None = None, alpha: float = 0.05) -> TestReport:
    """Chi-square test of uniformity on k equal-width bins."""
    alpha = _validate_alpha(alpha)
    arr = _validate_unit_data(data)
    n = arr.size
    k = default_subintervals(n) if k_bins is None else int(k_bins)
    if k < 2:
        raise ValueError(f"need at least 2 bins, got {k!r}")
    counts, _ = np.histogram(arr, bins=k, range=(0.0, 1.0))
    expected = n / k
    x2 = float(np.sum((counts - expected) ** 2) / expected)
    p_value = float(gammaincc((k - 1) / 2.0, x2 / 2.0))
    return TestReport(
        method="chisq",
        statistic=x2,
        p_value=p_value,
        reject=bool(p_value <= alpha),
        alternative="right",
        alpha=float(alpha),
        n=int(n),
        params={"k_bins": k, "df": k - 1},
    )


def arc_density_test(
    data,
    family: str = "picd",
    r: float = 2.0,
    c: float = 0.5,
    tau: float = 1.0,
    k: int | None = None,
    alternative: str = "two-sided",
    alpha: float = 0.05,
    reps: int = 2000,
    seed: int = 1729,
    conservative: bool = False,
    critical: CriticalValues | None = None,
) -> TestReport:
    """Arc-density test calibrated by simulation, either digraph family."""
    side = _normalize_side(alternative)
    alpha = _validate_alpha(alpha)
    arr = _validate_unit_data(data)
    n = arr.size
    k = default_subintervals(n) if k is None else int(k)
    _validate_unit_data(arr, k)
    params = PicdParams(r, c) if family == "picd" else CicdParams(tau, c)
    stat = arc_density_fn(k, family, params)
    if critical is None:
        from .mc import calibrate_statistic

        alpha_side = alpha / 2.0 if side == "two-sided" else alpha
        critical = calibrate_statistic(
            stat, n, k, reps=reps, seed=seed, alpha=alpha_side
        )
    rho = float(stat(arr))
    u = float(RngStream(int(seed), (_DECISION_KEY,)).generator().random())
    reject = critical.decide(rho, side, u, conservative)
    par: dict = {"family": family, "k": k, "c": c}
    par["tau" if family == "cicd" else "r"] = tau if family == "cicd" else r
    return TestReport(
        method=f"arc-{family}",
        statistic=rho,
        p_value=critical.empirical_p(rho, side),
        reject=bool(reject),
        alternative=side,
        alpha=float(alpha),
        n=int(n),
        params=par,
        critical={
            "left_cv": critical.left_cv,
            "right_cv": critical.right_cv,
            "alpha_side": critical.alpha,
            "reps": critical.reps,
            "conservative": conservative,
        },
    )


def gof_via_transform(data, cdf: Callable[[float], float], test: Callable[..., TestReport], **kwargs) -> TestReport:
    """Probability integral transform: test cdf(data) for uniformity.

    ``cdf`` is the hypothesized distribution function; under that
    hypothesis the transformed sample is uniform on (0, 1) and any test
    from this module applies. Transformed values must land strictly inside
    (0, 1); boundary hits mean the data leaves the distribution's support.
    """
    arr = np.asarray(data, dtype=float).ravel()
    u = np.array([float(cdf(v)) for v in arr])
    if np.any(~np.isfinite(u)) or np.any(u <= 0.0) or np.any(u >= 1.0):
        raise ValueError("cdf(data) must lie strictly inside (0, 1)")
    report = test(u, **kwargs)
    report.params = {**report.params, "transform": getattr(cdf, "__name__", "cdf")}
    return report
