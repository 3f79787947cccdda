"""Acceptance gate: one test per numbered criterion, asserted at face value.

Each test is a single pass/fail line under ``pytest -v``. The asserted
targets are stated verbatim even where the exact discrete behavior of the
tests makes some of them unattainable; those assertions fail rather than
being loosened. The measured values and the reasoning live in the project
decision notes.
"""

import math

import numpy as np
import pytest

from picd.core import PicdParams, TwoClassSample
from picd.digraph import brute_force_domination, build_picd
from picd.domination import domination_number
from picd.exactdist import exact_pmf_uniform, p_limit_general_f, p_u, r_star
from picd.mc import ExperimentPlan, estimate_p2, run_power_study, run_size_study
from picd.sampling import AlternativeSpec

SEED = 20260816


def test_criterion_01_closed_form_special_cases():
    for n in range(1, 31):
        got, _ = p_u(2.0, 0.5, n)
        assert abs(got - (4.0 / 9.0 - (16.0 / 9.0) * 4.0 ** (-n))) <= 1e-12
        got, _ = p_u(1.0, 0.5, n)
        assert abs(got - (1.0 - 2.0 ** (1 - n))) <= 1e-12


def test_criterion_02_symmetry_and_branch_continuity():
    for r in np.linspace(1.0, 6.0, 50):
        for c in np.linspace(0.01, 0.99, 50):
            for n in (5, 15, 25):
                assert abs(p_u(r, c, n)[0] - p_u(r, 1.0 - c, n)[0]) <= 1e-12
    for c in np.arange(0.05, 0.46, 0.05):
        c = round(float(c), 2)
        thresholds = [1.0 / c, 1.0 / (1.0 - c), (1.0 - c) / c]
        if c <= 0.25:
            root = math.sqrt(1.0 - 4.0 * c)
            thresholds += [(1.0 - root) / (2.0 * c), (1.0 + root) / (2.0 * c)]
        for n in (5, 20):
            for t in thresholds:
                h = 1e-9 * max(1.0, t)
                if t - h <= 1.0:
                    continue
                jump = abs(p_u(t + h, c, n)[0] - p_u(t - h, c, n)[0])
                assert jump <= 1e-6, f"jump {jump:.3g} at r={t} c={c} n={n}"


def test_criterion_03_oracle_equivalence():
    rng = np.random.default_rng(SEED)
    r_pool = (1.0, 1.3, 2.0, 5.0, math.inf)
    c_pool = (0.0, 0.3, 0.5, 0.7, 1.0)
    checked = 0
    while checked < 2000:
        n = int(rng.integers(1, 13))
        m = int(rng.integers(1, 5))
        x = rng.random(n)
        if rng.random() < 0.3:
            x = np.round(x, 2)  # provoke ties between the x values
        y = np.round(rng.random(m), 3) if rng.random() < 0.3 else rng.random(m)
        if len(set(y.tolist())) < m or set(x.tolist()) & set(y.tolist()):
            continue  # outside the sample contract: x may not sit on a partition point
        params = PicdParams(r_pool[rng.integers(5)], c_pool[rng.integers(5)])
        sample = TwoClassSample(tuple(x.tolist()), tuple(y.tolist()))
        fast = domination_number(sample, params)
        brute_size, _ = brute_force_domination(build_picd(sample, params))
        assert fast.gamma == brute_size, (x, y, params)
        checked += 1


def test_criterion_04_mc_vs_closed_form():
    rng = np.random.default_rng(SEED)
    reps = 100000
    for i in range(20):
        r = float(rng.uniform(1.0, 3.0))
        c = float(rng.uniform(0.01, 0.99))
        n = int(rng.integers(2, 31))
        truth = p_u(r, c, n)[0]
        est, _ = estimate_p2(n, None, r, c, reps=reps, seed=SEED + i)
        se_true = math.sqrt(truth * (1.0 - truth) / reps)
        assert abs(est - truth) <= 3.0 * se_true + 1e-12, (r, c, n, est, truth)


def test_criterion_05_exact_pmf():
    pmf = exact_pmf_uniform(5, 2, 2.0, 0.5)
    assert abs(sum(pmf.probs) - 1.0) <= 1e-10
    reps = 100000
    params = PicdParams(2.0, 0.5)
    rng = np.random.default_rng(SEED)
    draws = np.empty(reps, dtype=np.int64)
    for i in range(reps):
        sample = TwoClassSample(tuple(rng.random(5).tolist()), tuple(rng.random(2).tolist()))
        draws[i] = domination_number(sample, params).gamma
    support = set(pmf.support)
    assert set(np.unique(draws).tolist()) <= support
    for q, p in pmf.items():
        phat = float(np.mean(draws == q))
        se = math.sqrt(p * (1.0 - p) / reps)
        assert abs(phat - p) <= 3.0 * se + 1e-12, (q, phat, p)
    se_mean = float(np.std(draws)) / math.sqrt(reps)
    assert abs(pmf.mean() - float(np.mean(draws))) <= 3.0 * se_mean


def test_criterion_06_asymptotic_convergence():
    for c in (0.1, 0.2, 0.3, 0.4):
        rs = r_star(c)
        assert abs(p_u(rs, c, 1000)[0] - rs / (rs + 1.0)) <= 1e-3


def test_criterion_07_power_reproduction_small_n():
    # Targets asserted as stated. Several are beyond any level-0.05 test of
    # this null: at eps=0.1 the likelihood-ratio power bound is ~0.42, and
    # the left tail of the discrete statistic cannot plateau at 0.95 while
    # also reaching 1.0. Those clauses fail; the achievable ones pass.
    plan = ExperimentPlan(
        methods=("dom-bin", "dom-mc", "ks", "chisq"),
        grid=((2.0, 0.5),),
        n=50,
        k=7,
        reps=2000,
        seed=SEED,
        alternatives=tuple(AlternativeSpec("f4", eps=e) for e in (0.1, 0.2, 0.3, 0.4)),
    )
    table = run_power_study(plan)
    power = {}
    for row in table.rows:
        eps = float(row.param.split(",")[0].split("=")[1])
        power[(row.method, eps)] = row.estimate
    dom_bin_targets = {0.1: 0.28, 0.2: 1.00, 0.3: 1.00, 0.4: 1.00}
    dom_mc_targets = {0.1: 0.88, 0.2: 0.95, 0.3: 0.95, 0.4: 0.95}
    failures = []
    for eps, want in dom_bin_targets.items():
        got = power[("dom-bin", eps)]
        if abs(got - want) > 0.05:
            failures.append(f"dom-bin eps={eps}: {got:.3f} vs {want}")
    for eps, want in dom_mc_targets.items():
        got = power[("dom-mc", eps)]
        if abs(got - want) > 0.05:
            failures.append(f"dom-mc eps={eps}: {got:.3f} vs {want}")
    for eps in (0.1, 0.2, 0.3, 0.4):
        if power[("ks", eps)] > 0.10:
            failures.append(f"ks eps={eps}: {power[('ks', eps)]:.3f} > 0.10")
        if power[("chisq", eps)] > 0.08:
            failures.append(f"chisq eps={eps}: {power[('chisq', eps)]:.3f} > 0.08")
    assert not failures, "; ".join(failures)


def test_criterion_08_power_reproduction_at_scale():
    # Same caveat as criterion 7: the dom targets sit above what the exact
    # tests attain at this alternative, so those two clauses fail honestly.
    plan = ExperimentPlan(
        methods=("dom-bin", "dom-mc", "ks", "chisq"),
        grid=((2.0, 0.5),),
        n=1000,
        k=32,
        reps=500,
        seed=SEED,
        alternatives=(AlternativeSpec("f4", eps=0.02),),
    )
    power = {row.method: row.estimate for row in run_power_study(plan).rows}
    failures = []
    if power["dom-bin"] < 0.95:
        failures.append(f"dom-bin: {power['dom-bin']:.3f} < 0.95")
    if power["dom-mc"] < 0.90:
        failures.append(f"dom-mc: {power['dom-mc']:.3f} < 0.90")
    if power["ks"] > 0.10:
        failures.append(f"ks: {power['ks']:.3f} > 0.10")
    if power["chisq"] > 0.10:
        failures.append(f"chisq: {power['chisq']:.3f} > 0.10")
    assert not failures, "; ".join(failures)


def test_criterion_09_ks_chisq_sanity():
    plan = ExperimentPlan(
        methods=("ks", "chisq"),
        grid=((2.0, 0.5),),
        n=50,
        k=7,
        reps=2000,
        seed=SEED,
        alternatives=(AlternativeSpec("f2", sigma=0.1),),
    )
    power = {row.method: row.estimate for row in run_power_study(plan).rows}
    assert power["ks"] >= 0.97
    assert power["chisq"] >= 0.97


def test_criterion_10_size_behavior():
    # The G statistic's left tail at this (n, k) jumps from .0252 to .1059,
    # so no attainable dom-bin size lies inside [.035, .065]; that clause
    # fails honestly. The randomized-boundary MC variant recovers the level.
    plan = ExperimentPlan(
        methods=("dom-bin", "dom-mc"), grid=((2.0, 0.5),), n=100, k=10, reps=10000, seed=SEED
    )
    size = {row.method: row.estimate for row in run_size_study(plan).rows}
    failures = []
    if not 0.035 <= size["dom-bin"] <= 0.065:
        failures.append(f"dom-bin size {size['dom-bin']:.4f} outside [0.035, 0.065]")
    if abs(size["dom-mc"] - 0.05) > 3.0 * math.sqrt(0.05 * 0.95 / 10000):
        failures.append(f"dom-mc size {size['dom-mc']:.4f} not within 3 SE of 0.05")
    assert not failures, "; ".join(failures)


def test_criterion_11_consistency_trend():
    powers = []
    for n, k in ((50, 7), (200, 14), (1000, 32)):
        plan = ExperimentPlan(
            methods=("dom-bin",),
            grid=((2.0, 0.5),),
            n=n,
            k=k,
            reps=500,
            seed=SEED,
            alternatives=(AlternativeSpec("f4", eps=0.05),),
        )
        powers.append(run_power_study(plan).rows[0].estimate)
    assert powers[0] <= powers[1] <= powers[2], powers
    assert powers[2] >= 0.99, powers


def test_criterion_12_scale_invariance():
    rng = np.random.default_rng(SEED)
    r_pool = (1.0, 1.3, 2.0, 5.0, math.inf)
    for _ in range(500):
        n = int(rng.integers(2, 21))
        m = int(rng.integers(1, 5))
        x = rng.random(n).tolist()
        y = rng.random(m).tolist()
        params = PicdParams(r_pool[rng.integers(5)], float(rng.random()))
        base = domination_number(TwoClassSample(tuple(x), tuple(y)), params)
        mapped = domination_number(
            TwoClassSample(tuple(10.0 * v + 3.0 for v in x), tuple(10.0 * v + 3.0 for v in y)),
            params,
        )
        assert mapped.gamma == base.gamma
        assert mapped.witness == base.witness
        assert mapped.by_interval == base.by_interval


def test_criterion_13_general_f_limit():
    for c in (0.1, 0.2, 0.3, 0.4):
        got = p_limit_general_f(0, 0.5, c + 0.5, c, "left")
        assert abs(got - 1.0 / (2.0 + c - 2.0 * c * c)) <= 1e-12

    def sampler(n, gen):
        # inverse CDF of F(x) = (x^2 + x) / 2 on (0, 1), density x + 1/2
        return (-1.0 + np.sqrt(1.0 + 8.0 * gen.random(n))) / 2.0

    est, _ = estimate_p2(1000, sampler, 1.0 / 0.7, 0.3, reps=4000, seed=SEED)
    assert abs(est - 1.0 / 2.12) <= 0.02
