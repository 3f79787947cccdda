"""Monte Carlo harness: size and power studies, calibration, validation.

Every replicate draws from its own numpy SeedSequence child keyed by
(namespace, grid index, alternative index, replicate), so a study's results
are reproducible from (plan, seed) alone and never depend on evaluation
order. Calibration and estimation entry points use disjoint key namespaces;
running one never shifts another's draws.

Statistics are recomputed here through the same per-interval machinery the
tests use, just without per-replicate object construction, so study
estimates and single-shot test decisions agree exactly.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy.special import gammainccinv
from scipy.stats import binom

from .core import CicdParams, PicdParams
from .domination import interval_gamma
from .exactdist import p_asymptotic, p_u, r_star
from .gof import (
    CriticalValues,
    _ks_tail,
    arc_density_fn,
    default_subintervals,
    partition_points,
)
from .sampling import AlternativeSpec, RngStream, sample_from, sample_uniform

__all__ = [
    "ExperimentPlan",
    "StudyRow",
    "ResultTable",
    "CSV_HEADER",
    "KNOWN_METHODS",
    "METHOD_SIDES",
    "run_size_study",
    "run_power_study",
    "estimate_p2",
    "estimate_critical_values",
    "calibrate_statistic",
]

# Key namespaces for SeedSequence spawn keys; disjoint by construction.
_CAL_GAMMA_KEY = 101
_CAL_STAT_KEY = 103
_P2_KEY = 202
_STUDY_KEY = 5
_STUDY_U_KEY = 6

KNOWN_METHODS = ("dom-bin", "dom-asy", "dom-mc", "ks", "chisq", "arc-picd", "arc-cicd")

# Sidedness each method uses inside a study: the domination tests reject for
# small values (clustering alternatives shrink the domination number), the
# chi-square for large; KS and arc density are two-sided.
METHOD_SIDES = {
    "dom-bin": "left",
    "dom-asy": "left",
    "dom-mc": "left",
    "ks": "two-sided",
    "chisq": "right",
    "arc-picd": "two-sided",
    "arc-cicd": "two-sided",
}

CSV_HEADER = ("method", "r", "c", "n", "k", "alt", "param", "estimate", "se", "reps", "seed")


def _redraw_collisions(vals: np.ndarray, edges: np.ndarray, draw: Callable[[], np.ndarray]) -> np.ndarray:
    """Replace any value exactly on a partition point; astronomically rare."""
    bad = np.isin(vals, edges)
    guard = 0
    while bad.any():
        vals = vals.copy()
        vals[bad] = draw()[bad]
        bad = np.isin(vals, edges)
        guard += 1
        if guard > 64:
            raise RuntimeError("sampler keeps hitting partition points exactly")
    return vals


def _uniform_matrix(gen: np.random.Generator, reps: int, n: int, edges: np.ndarray) -> np.ndarray:
    vals = gen.random((reps, n))
    bad = np.isin(vals, edges) | (vals <= 0.0) | (vals >= 1.0)
    while bad.any():
        vals[bad] = gen.random(int(bad.sum()))
        bad = np.isin(vals, edges) | (vals <= 0.0) | (vals >= 1.0)
    return vals


def _gamma_sorted(lst: list, pos: np.ndarray, edges: Sequence[float], params: PicdParams) -> int:
    """Domination number over the bounded partition intervals.

    ``lst`` is the sorted sample, ``pos`` its searchsorted positions at the
    partition points. Data strictly inside (0, 1) leaves the two unbounded
    end intervals empty, so this equals the full domination number.
    """
    total = 0
    for j in range(len(edges) - 1):
        a, b = int(pos[j]), int(pos[j + 1])
        if b > a:
            g, _ = interval_gamma(lst[a:b], range(b - a), (edges[j], edges[j + 1]), params)
            total += g
    return total


def estimate_critical_values(
    n: int,
    k: int,
    r: float,
    c: float,
    reps: int = 10000,
    seed: int = 1729,
    alpha: float = 0.05,
    keep_draws: bool = True,
) -> CriticalValues:
    """Empirical critical values of the domination number under uniformity.

    Simulates ``reps`` uniform samples of size ``n`` on the k-subinterval
    partition and books the atom masses around the alpha cut on each side,
    feeding the randomized (or conservative) boundary rule in the
    simulation-calibrated test.
    """
    if n < 1 or int(n) != n:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps!r}")
    params = PicdParams(r, c)
    edges = partition_points(k)
    edges_arr = np.asarray(edges)
    gen = RngStream(int(seed), (_CAL_GAMMA_KEY,)).generator()
    vals = _uniform_matrix(gen, int(reps), int(n), edges_arr)
    draws = []
    for row in vals:
        srt = np.sort(row)
        pos = np.searchsorted(srt, edges_arr)
        draws.append(_gamma_sorted(srt.tolist(), pos, edges, params))
    return CriticalValues.from_draws(draws, alpha, keep_draws=keep_draws)


def calibrate_statistic(
    stat: Callable[[np.ndarray], float],
    n: int,
    k: int,
    reps: int = 2000,
    seed: int = 1729,
    alpha: float = 0.05,
    keep_draws: bool = True,
) -> CriticalValues:
    """Null critical values for an arbitrary statistic of the (0, 1) sample."""
    if n < 1 or int(n) != n:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps!r}")
    edges_arr = np.asarray(partition_points(k))
    gen = RngStream(int(seed), (_CAL_STAT_KEY,)).generator()
    vals = _uniform_matrix(gen, int(reps), int(n), edges_arr)
    draws = [float(stat(row)) for row in vals]
    return CriticalValues.from_draws(draws, alpha, keep_draws=keep_draws)


def estimate_p2(
    n: int,
    sampler: Callable[[int, np.random.Generator], np.ndarray] | None,
    r: float,
    c: float,
    reps: int = 10000,
    seed: int = 1729,
) -> tuple[float, float]:
    """Estimate the two-dominator probability for one bounded interval.

    Draws ``reps`` samples of ``n`` points on the single bounded interval
    (0, 1) (partition points at 0 and 1) and returns the fraction costing
    two dominators with its binomial standard error. ``sampler`` is a
    callable ``(n, generator) -> n floats strictly inside (0, 1)``; None
    means uniform. For uniform data this cross-checks the closed form; for
    anything else it stands in for the unavailable quadrature.
    """
    if n < 1 or int(n) != n:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps!r}")
    params = PicdParams(r, c)
    gen = RngStream(int(seed), (_P2_KEY,)).generator()
    interval = (0.0, 1.0)
    dummy = range(int(n))
    hits = 0
    if sampler is None:
        vals = _uniform_matrix(gen, int(reps), int(n), np.array(interval))
        for row in vals:
            g, _ = interval_gamma(np.sort(row).tolist(), dummy, interval, params)
            hits += g == 2
    else:
        for _ in range(int(reps)):
            row = np.asarray(sampler(int(n), gen), dtype=float)
            if row.shape != (n,):
                raise ValueError(f"sampler must return {n} values, got shape {row.shape}")
            if np.any(~np.isfinite(row)) or np.any(row <= 0.0) or np.any(row >= 1.0):
                raise ValueError("sampler values must lie strictly inside (0, 1)")
            g, _ = interval_gamma(np.sort(row).tolist(), dummy, interval, params)
            hits += g == 2
    phat = hits / reps
    return phat, math.sqrt(phat * (1.0 - phat) / reps)


@dataclass(frozen=True)
class ExperimentPlan:
    """One study's full recipe; a plan plus its seed reproduces the table.

    ``grid`` holds (r, c) pairs, read as (tau, c) by the arc-cicd method.
    ``alternatives`` matter only to power studies; f4/f5 entries without a
    concrete k inherit the partition size. ``alpha`` may be 0, making every
    test a never-rejecting level-0 test (size exactly 0 by convention).
    """

    methods: tuple[str, ...]
    grid: tuple[tuple[float, float], ...]
    n: int
    k: int | None = None
    alternatives: tuple[AlternativeSpec, ...] = ()
    reps: int = 2000
    alpha: float = 0.05
    seed: int = 1729
    out: str | None = None
    conservative_mc: bool = False
    calibration_reps: int = 10000

    def __post_init__(self) -> None:
        methods = tuple(str(m).strip().lower() for m in self.methods)
        if not methods:
            raise ValueError("need at least one method")
        for m in methods:
            if m not in KNOWN_METHODS:
                raise ValueError(f"unknown method {m!r}, expected one of {KNOWN_METHODS}")
        grid = tuple((float(a), float(b)) for a, b in self.grid)
        if not grid:
            raise ValueError("grid must be nonempty")
        if self.n < 1 or int(self.n) != self.n:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if self.k is not None and (int(self.k) != self.k or self.k < 1):
            raise ValueError(f"k must be a positive integer, got {self.k!r}")
        if self.reps < 100:
            raise ValueError(f"reps must be >= 100, got {self.reps!r}")
        if not (0.0 <= self.alpha < 1.0):
            raise ValueError(f"alpha must be in [0, 1), got {self.alpha!r}")
        if self.calibration_reps < 100:
            raise ValueError(f"calibration_reps must be >= 100, got {self.calibration_reps!r}")
        alts = tuple(self.alternatives)
        for a in alts:
            if not isinstance(a, AlternativeSpec):
                raise TypeError(f"alternatives must be AlternativeSpec, got {a!r}")
        object.__setattr__(self, "methods", methods)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "alternatives", alts)


@dataclass(frozen=True)
class StudyRow:
    """One (method, grid point, alternative) cell of a study table."""

    method: str
    r: float | None
    c: float | None
    n: int
    k: int
    alt: str
    param: str
    estimate: float
    se: float
    reps: int
    seed: int
    note: str = ""

    def __post_init__(self) -> None:
        if not (0.0 <= self.estimate <= 1.0):
            raise ValueError(f"estimate must be in [0, 1], got {self.estimate!r}")
        want = math.sqrt(self.estimate * (1.0 - self.estimate) / self.reps)
        if not math.isclose(self.se, want, abs_tol=1e-12):
            raise ValueError(f"se {self.se!r} does not match the binomial formula {want!r}")


def _fmt_opt(v: float | None) -> str:
    return "" if v is None else f"{v:g}"


@dataclass(frozen=True)
class ResultTable:
    """Study output: rows plus the level they were run at.

    ``to_csv`` emits the fixed schema (no annotation column, so tables diff
    cleanly across runs); ``render`` adds the liberal/conservative flags.
    """

    kind: str
    alpha: float
    rows: tuple[StudyRow, ...]

    def __post_init__(self) -> None:
        if self.kind not in ("size", "power"):
            raise ValueError(f"kind must be size or power, got {self.kind!r}")
        object.__setattr__(self, "rows", tuple(self.rows))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in self.rows:
            writer.writerow(
                [
                    row.method,
                    _fmt_opt(row.r),
                    _fmt_opt(row.c),
                    row.n,
                    row.k,
                    row.alt,
                    row.param,
                    f"{row.estimate:.6f}",
                    f"{row.se:.6f}",
                    row.reps,
                    row.seed,
                ]
            )
        return buf.getvalue()

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_csv())

    def render(self) -> str:
        header = list(CSV_HEADER) + ["note"]
        cells = [header]
        for row in self.rows:
            cells.append(
                [
                    row.method,
                    _fmt_opt(row.r),
                    _fmt_opt(row.c),
                    str(row.n),
                    str(row.k),
                    row.alt,
                    row.param,
                    f"{row.estimate:.4f}",
                    f"{row.se:.4f}",
                    str(row.reps),
                    str(row.seed),
                    row.note,
                ]
            )
        widths = [max(len(line[i]) for line in cells) for i in range(len(header))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip() for line in cells]
        return "\n".join(lines)


def _size_note(estimate: float, alpha: float, reps: int) -> str:
    """Liberal/conservative flag: 90% two-sided band around the level."""
    if alpha <= 0.0:
        return ""
    band = 1.645 * math.sqrt(alpha * (1.0 - alpha) / reps)
    if estimate > alpha + band:
        return "liberal"
    if estimate < alpha - band:
        return "conservative"
    return ""


def _ks_lambda_crit(alpha: float) -> float:
    """Smallest lambda whose Kolmogorov tail is <= alpha."""
    lo, hi = 1e-6, 10.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _ks_tail(mid) <= alpha:
            hi = mid
        else:
            lo = mid
    return hi


def _binomial_reject_lookup(k: int, p_null: float, side: str, alpha: float) -> np.ndarray:
    """Reject/accept for every domination number 0..2k at level alpha."""
    gs = np.arange(0, 2 * k + 1) - k
    left = binom.cdf(gs, k, p_null)
    right = binom.sf(gs - 1, k, p_null)
    two = np.minimum(1.0, 2.0 * np.minimum(left, right))
    pv = {"left": left, "right": right, "two-sided": two}[side]
    pv = np.where(gs < 0, 0.0, pv)
    return pv <= alpha


def _make_decider(method, plan, k, edges, rr, cc):
    """Per-replicate decision closure for one (method, grid point).

    Returns (needs_u, fn) with fn(raw, srt, lst, pos) -> bool, where raw is
    the unsorted sample, srt its sorted array, lst the sorted list, pos the
    searchsorted positions at the partition points; fn takes u as a fifth
    argument when needs_u.
    """
    n = plan.n
    side = METHOD_SIDES[method]
    alpha_side = plan.alpha / 2.0 if side == "two-sided" else plan.alpha
    if method in ("dom-bin", "dom-asy"):
        params = PicdParams(rr, cc)
        if method == "dom-asy":
            rs = r_star(cc)
            if not math.isclose(rr, rs, rel_tol=1e-12):
                raise ValueError(f"the asymptotic null needs r = r_star(c) = {rs!r}, got r = {rr!r}")
            p_null = p_asymptotic(rr, cc)
        else:
            if n < k:
                raise ValueError(f"need at least k={k} points for floor(n/k) >= 1, got n={n}")
            p_null = p_u(rr, cc, n // k)[0]
        lookup = _binomial_reject_lookup(k, p_null, side, plan.alpha)

        def fn(raw, srt, lst, pos):
            gamma = _gamma_sorted(lst, pos, edges, params)
            if gamma <= 2 * k:
                return bool(lookup[gamma])
            # beyond-support gamma (exact-tie pathologies): the right-tail
            # p-value is 0 and the left-tail one is 1
            return side != "left"

        return False, fn
    if method == "dom-mc":
        params = PicdParams(rr, cc)
        critical = estimate_critical_values(
            n, k, rr, cc, reps=plan.calibration_reps, seed=plan.seed, alpha=alpha_side, keep_draws=False
        )

        def fn(raw, srt, lst, pos, u):
            gamma = _gamma_sorted(lst, pos, edges, params)
            return critical.decide(float(gamma), side, u, plan.conservative_mc)

        return True, fn
    if method == "ks":
        lam_crit = _ks_lambda_crit(plan.alpha)
        hi_grid = np.arange(1, n + 1) / n
        lo_grid = np.arange(0, n) / n
        root_n = math.sqrt(n)

        def fn(raw, srt, lst, pos):
            d = max(float(np.max(hi_grid - srt)), float(np.max(srt - lo_grid)))
            return root_n * d >= lam_crit

        return False, fn
    if method == "chisq":
        if k < 2:
            raise ValueError(f"the chi-square method needs k >= 2 bins, got {k!r}")
        x2_crit = 2.0 * float(gammainccinv((k - 1) / 2.0, plan.alpha))
        expected = n / k

        def fn(raw, srt, lst, pos):
            counts = np.diff(pos)
            x2 = float(np.sum((counts - expected) ** 2) / expected)
            return x2 >= x2_crit

        return False, fn
    # arc-picd / arc-cicd
    family = method.split("-", 1)[1]
    params = PicdParams(rr, cc) if family == "picd" else CicdParams(rr, cc)
    stat = arc_density_fn(k, family, params)
    critical = calibrate_statistic(
        stat, n, k, reps=plan.calibration_reps, seed=plan.seed, alpha=alpha_side, keep_draws=False
    )

    def fn(raw, srt, lst, pos, u):
        return critical.decide(float(stat(raw)), side, u, plan.conservative_mc)

    return True, fn


def _run_study(plan: ExperimentPlan, kind: str) -> ResultTable:
    k = plan.k if plan.k is not None else default_subintervals(plan.n)
    edges = partition_points(k)
    edges_arr = np.asarray(edges)
    alts: tuple = (None,) if kind == "size" else plan.alternatives
    rows: list[StudyRow] = []
    for gi, (rr, cc) in enumerate(plan.grid):
        # a level-0 plan never rejects; skip calibration (it needs alpha > 0)
        deciders = (
            {m: _make_decider(m, plan, k, edges, rr, cc) for m in plan.methods}
            if plan.alpha > 0.0
            else {}
        )
        for ai, alt in enumerate(alts):
            spec = None if alt is None else alt.with_k(k)
            hits = {m: 0 for m in plan.methods}
            if plan.alpha > 0.0:
                for ri in range(plan.reps):
                    gen = RngStream(plan.seed, (_STUDY_KEY, gi, ai, ri)).generator()
                    if spec is None:
                        raw = sample_uniform(plan.n, gen)
                        raw = _redraw_collisions(raw, edges_arr, lambda: sample_uniform(plan.n, gen))
                    else:
                        raw = sample_from(spec, plan.n, gen)
                        raw = _redraw_collisions(raw, edges_arr, lambda: sample_from(spec, plan.n, gen))
                    srt = np.sort(raw)
                    pos = np.searchsorted(srt, edges_arr)
                    lst = srt.tolist()
                    for method in plan.methods:
                        needs_u, fn = deciders[method]
                        if needs_u:
                            u = float(
                                RngStream(plan.seed, (_STUDY_U_KEY, gi, ai, ri, KNOWN_METHODS.index(method)))
                                .generator()
                                .random()
                            )
                            hit = fn(raw, srt, lst, pos, u)
                        else:
                            hit = fn(raw, srt, lst, pos)
                        hits[method] += bool(hit)
            for method in plan.methods:
                estimate = hits[method] / plan.reps
                uses_grid = method not in ("ks", "chisq")
                rows.append(
                    StudyRow(
                        method=method,
                        r=rr if uses_grid else None,
                        c=cc if uses_grid else None,
                        n=plan.n,
                        k=k,
                        alt="uniform" if spec is None else spec.family,
                        param="" if spec is None else spec.param_text(),
                        estimate=estimate,
                        se=math.sqrt(estimate * (1.0 - estimate) / plan.reps),
                        reps=plan.reps,
                        seed=plan.seed,
                        note=_size_note(estimate, plan.alpha, plan.reps) if kind == "size" else "",
                    )
                )
    table = ResultTable(kind=kind, alpha=plan.alpha, rows=tuple(rows))
    if plan.out:
        table.save(plan.out)
    return table


def run_size_study(plan: ExperimentPlan) -> ResultTable:
    """Empirical size at each grid point: rejection rate under uniformity.

    Rows falling outside the 90% binomial band around the level are flagged
    liberal or conservative in the rendered table (not in the CSV).
    """
    return _run_study(plan, "size")


def run_power_study(plan: ExperimentPlan) -> ResultTable:
    """Empirical power at each grid point under each alternative."""
    if not plan.alternatives:
        raise ValueError("a power study needs at least one alternative")
    return _run_study(plan, "power")
