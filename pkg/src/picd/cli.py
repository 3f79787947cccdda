"""Command-line interface.

Subcommands: gamma (domination number of a two-class sample), arcs (digraph
size and density), prob (one-interval two-dominator probability), pmf (exact
domination-number distribution under joint uniformity), test (uniformity and
goodness-of-fit tests on a data file), size / power (Monte Carlo studies with
CSV output), and estimate (simulation estimates of the two-dominator
probability or of critical values).

The default seed comes from the PICD_SEED environment variable (1729 when
unset). Exit codes: 0 on success regardless of any test decision (the report
is the decision surface, not the exit code), 2 on usage or validation errors.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .core import CicdParams, PicdParams, TwoClassSample, read_points
from .digraph import arc_density, build_cicd, build_picd, edge_list
from .domination import domination_number
from .exactdist import exact_pmf_uniform, p_asymptotic, p_u
from .gof import (
    arc_density_test,
    chisq_test,
    dom_test_binomial,
    dom_test_mc,
    gof_via_transform,
    ks_test,
)
from .mc import (
    KNOWN_METHODS,
    METHOD_SIDES,
    ExperimentPlan,
    estimate_critical_values,
    estimate_p2,
    run_power_study,
    run_size_study,
)
from .sampling import parse_alternative

__all__ = ["main", "build_parser"]


def _default_seed() -> int:
    raw = os.environ.get("PICD_SEED", "1729")
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"PICD_SEED must be an integer, got {raw!r}") from None


def _parse_k(text: str | None) -> int | None:
    if text is None or text == "auto":
        return None
    try:
        return int(text)
    except ValueError:
        raise ValueError(f"--k must be an integer or 'auto', got {text!r}") from None


def _load_y(args, x: list[float]) -> list[float]:
    if getattr(args, "y", None) is not None:
        return read_points(args.y)
    grid = getattr(args, "y_grid", None)
    if grid is not None:
        if grid < 1:
            raise ValueError(f"--y-grid must be >= 1, got {grid}")
        if not x:
            raise ValueError("--y-grid needs at least one data point to span")
        lo, hi = min(x), max(x)
        span = hi - lo
        # pad by half a subinterval so no data point sits on an endpoint;
        # scale invariance makes the exact hull immaterial
        pad = span / (2 * grid) if span > 0 else 0.5
        return np.linspace(lo - pad, hi + pad, grid + 1).tolist()
    raise ValueError("provide --y FILE or --y-grid K")


def _fmt_floats(values) -> str:
    return ",".join(f"{v:g}" for v in values)


def cmd_gamma(args) -> int:
    x = read_points(args.x)
    params = PicdParams(args.r, args.c)
    y = _load_y(args, x)
    sample = TwoClassSample(tuple(x), tuple(y))
    res = domination_number(sample, params)
    witness_points = [sample.x[i] for i in res.witness]
    if args.json:
        out = {
            "gamma": res.gamma,
            "by_interval": list(res.by_interval),
            "witness_indices": list(res.witness),
            "witness_points": witness_points,
        }
        print(json.dumps(out, sort_keys=True))
        return 0
    print(f"gamma={res.gamma}")
    print(f"by_interval={_fmt_floats(res.by_interval)}")
    if args.witness:
        print(f"witness={_fmt_floats(witness_points)}")
    return 0


def cmd_arcs(args) -> int:
    x = read_points(args.x)
    y = _load_y(args, x)
    sample = TwoClassSample(tuple(x), tuple(y))
    if args.family == "picd":
        dg = build_picd(sample, PicdParams(args.r, args.c))
    else:
        dg = build_cicd(sample, CicdParams(args.tau, args.c))
    rho = arc_density(dg)
    if args.json:
        out = {
            "family": args.family,
            "n": dg.n,
            "arcs": len(dg.arcs),
            "density": rho,
            "edges": sorted(dg.arcs),
        }
        print(json.dumps(out, sort_keys=True))
        return 0
    print(f"arcs={len(dg.arcs)}")
    print(f"density={rho:.6f}")
    if args.edges:
        listing = edge_list(dg)
        if listing:
            print(listing)
    return 0


def cmd_prob(args) -> int:
    if args.asymptotic:
        val = p_asymptotic(args.r, args.c)
        if args.json:
            print(json.dumps({"p": val, "branch": "asymptotic", "r": args.r, "c": args.c}))
            return 0
        print(f"{val:.6f}")
        print("branch=asymptotic")
        return 0
    if args.n is None:
        raise ValueError("--n is required without --asymptotic")
    val, branch = p_u(args.r, args.c, args.n)
    tag = f"{branch.regime}:{branch.piece}"
    if branch.window:
        tag += f":{branch.window}"
    if branch.reflected:
        tag += ":reflected"
    if args.json:
        print(
            json.dumps(
                {
                    "p": val,
                    "branch": {
                        "regime": branch.regime,
                        "piece": branch.piece,
                        "window": branch.window,
                        "reflected": branch.reflected,
                    },
                    "r": args.r,
                    "c": args.c,
                    "n": args.n,
                },
                sort_keys=True,
            )
        )
        return 0
    print(f"{val:.6f}")
    print(f"branch={tag}")
    return 0


def cmd_pmf(args) -> int:
    pmf = exact_pmf_uniform(args.n, args.m, args.r, args.c)
    if args.json:
        print(
            json.dumps(
                {
                    "support": list(pmf.support),
                    "probs": list(pmf.probs),
                    "mean": pmf.mean(),
                },
                sort_keys=True,
            )
        )
        return 0
    print(" ".join(f"{q}:{p:.6f}" for q, p in pmf.items()))
    return 0


def _kv_pairs(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    if not text:
        return out
    for item in text.split(","):
        key, sep, val = item.partition("=")
        if not sep:
            raise ValueError(f"expected key=value, got {item!r}")
        out[key.strip()] = val.strip()
    return out


def _phi(z: float) -> float:
    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))


def _make_cdf(spec: str):
    """Built-in CDFs: pow:p=2, tnorm:mu=0.5,sigma=0.1, or table:FILE."""
    kind, _, rest = spec.partition(":")
    if kind == "pow":
        p = float(_kv_pairs(rest).get("p", "2"))
        if p <= 0:
            raise ValueError(f"pow cdf needs p > 0, got {p}")

        def cdf(v: float) -> float:
            return float(v) ** p

        cdf.__name__ = f"pow(p={p:g})"
        return cdf
    if kind == "tnorm":
        kv = _kv_pairs(rest)
        mu = float(kv.get("mu", "0.5"))
        sigma = float(kv.get("sigma", "0.1"))
        if sigma <= 0:
            raise ValueError(f"tnorm cdf needs sigma > 0, got {sigma}")
        lo = _phi((0.0 - mu) / sigma)
        hi = _phi((1.0 - mu) / sigma)
        den = hi - lo
        if den <= 0:
            raise ValueError("tnorm cdf has no mass on (0, 1)")

        def cdf(v: float) -> float:
            return (_phi((float(v) - mu) / sigma) - lo) / den

        cdf.__name__ = f"tnorm(mu={mu:g},sigma={sigma:g})"
        return cdf
    if kind == "table":
        rows = [line.split() for line in Path(rest).read_text().splitlines() if line.strip()]
        if any(len(row) != 2 for row in rows):
            raise ValueError(f"table cdf file {rest!r} must have two columns: x F(x)")
        xs = np.array([float(a) for a, _ in rows])
        fs = np.array([float(b) for _, b in rows])
        if np.any(np.diff(xs) <= 0) or np.any(np.diff(fs) < 0):
            raise ValueError("table cdf must be sorted in x with nondecreasing F")

        def cdf(v: float) -> float:
            return float(np.interp(v, xs, fs))

        cdf.__name__ = f"table({rest})"
        return cdf
    raise ValueError(f"unknown cdf spec {spec!r} (use pow:..., tnorm:..., or table:FILE)")


def cmd_test(args) -> int:
    data = read_points(args.data)
    method = args.method
    side = args.alt if args.alt is not None else METHOD_SIDES[method]
    k = _parse_k(args.k)
    seed = args.seed if args.seed is not None else _default_seed()
    if method == "chisq" and args.alt not in (None, "right"):
        raise ValueError("the chi-square test is right-sided")

    def runner(values):
        if method in ("dom-bin", "dom-asy"):
            return dom_test_binomial(
                values,
                k=k,
                r=args.r,
                c=args.c,
                alternative=side,
                alpha=args.alpha,
                asymptotic_p=method == "dom-asy",
            )
        if method == "dom-mc":
            return dom_test_mc(
                values,
                k=k,
                r=args.r,
                c=args.c,
                alternative=side,
                alpha=args.alpha,
                reps=args.reps,
                seed=seed,
                conservative=args.conservative,
            )
        if method == "ks":
            return ks_test(values, alternative=side, alpha=args.alpha)
        if method == "chisq":
            return chisq_test(values, k_bins=k, alpha=args.alpha)
        return arc_density_test(
            values,
            family=method.split("-", 1)[1],
            r=args.r,
            c=args.c,
            tau=args.tau,
            k=k,
            alternative=side,
            alpha=args.alpha,
            reps=args.reps,
            seed=seed,
            conservative=args.conservative,
        )

    if args.cdf:
        report = gof_via_transform(data, _make_cdf(args.cdf), runner)
    else:
        report = runner(data)
    print(report.to_json() if args.json else report.render())
    return 0


def _parse_range(text: str) -> tuple[float, ...]:
    bits = text.split(":")
    if len(bits) == 1:
        return (float(bits[0]),)
    if len(bits) != 3:
        raise ValueError(f"range must be VALUE or START:STEP:STOP, got {text!r}")
    start, step, stop = (float(b) for b in bits)
    if step <= 0:
        raise ValueError(f"range step must be > 0, got {step}")
    vals = []
    i = 0
    v = start
    while v <= stop + 1e-9:
        vals.append(round(v, 12))
        i += 1
        v = start + i * step
    if not vals:
        raise ValueError(f"empty range {text!r}")
    return tuple(vals)


def _parse_grid(text: str) -> tuple[tuple[float, float], ...]:
    """Parse 'r=1.0:0.1:2.1,c=0.05:0.05:0.95' into the (r, c) product."""
    rs: tuple[float, ...] | None = None
    cs: tuple[float, ...] | None = None
    for part in text.split(","):
        key, sep, val = part.partition("=")
        key = key.strip()
        if not sep or key not in ("r", "c"):
            raise ValueError(f"grid components must be r=... or c=..., got {part!r}")
        if key == "r":
            rs = _parse_range(val)
        else:
            cs = _parse_range(val)
    if rs is None or cs is None:
        raise ValueError(f"grid needs both r= and c= components, got {text!r}")
    return tuple((r, c) for r in rs for c in cs)


def _load_config(path: str) -> dict[str, str]:
    """key=value lines; '#' comments and [section] headers are skipped."""
    out: dict[str, str] = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#") or (line.startswith("[") and line.endswith("]")):
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise ValueError(f"config line must be key=value, got {line!r}")
        out[key.strip().lower()] = val.split("#", 1)[0].strip()
    return out


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _pick(args, config: dict[str, str], name: str, default, cast):
    value = getattr(args, name)
    if value is not None:
        return value
    if name in config:
        return cast(config[name])
    return default


def _build_plan(args, kind: str) -> ExperimentPlan:
    config = _load_config(args.config) if args.config else {}
    methods_text = _pick(args, config, "method", "dom-bin", str)
    methods = tuple(m.strip() for m in methods_text.split(",") if m.strip())
    grid_text = getattr(args, "grid", None) or config.get("grid")
    if grid_text:
        grid = _parse_grid(grid_text)
    else:
        grid = ((_pick(args, config, "r", 2.0, float), _pick(args, config, "c", 0.5, float)),)
    n = _pick(args, config, "n", None, int)
    if n is None:
        raise ValueError("--n is required (flag or config)")
    alternatives = ()
    if kind == "power":
        alt_texts = args.alt if args.alt else None
        if alt_texts is None and "alt" in config:
            alt_texts = [a.strip() for a in config["alt"].split(";") if a.strip()]
        if not alt_texts:
            raise ValueError("--alt is required for a power study (flag or config)")
        alternatives = tuple(parse_alternative(a) for a in alt_texts)
    seed = _pick(args, config, "seed", None, int)
    if seed is None:
        seed = _default_seed()
    return ExperimentPlan(
        methods=methods,
        grid=grid,
        n=n,
        k=_parse_k(_pick(args, config, "k", None, str)),
        alternatives=alternatives,
        reps=_pick(args, config, "reps", 2000, int),
        alpha=_pick(args, config, "alpha", 0.05, float),
        seed=seed,
        out=_pick(args, config, "out", None, str),
        conservative_mc=(
            args.conservative
            if args.conservative
            else _parse_bool(config.get("conservative", "false"))
        ),
        calibration_reps=_pick(args, config, "calibration_reps", 10000, int),
    )


def _emit_table(table, args) -> None:
    if args.json:
        rows = [
            {
                "method": row.method,
                "r": row.r,
                "c": row.c,
                "n": row.n,
                "k": row.k,
                "alt": row.alt,
                "param": row.param,
                "estimate": row.estimate,
                "se": row.se,
                "reps": row.reps,
                "seed": row.seed,
                "note": row.note,
            }
            for row in table.rows
        ]
        print(json.dumps({"kind": table.kind, "alpha": table.alpha, "rows": rows}, sort_keys=True))
        return
    sys.stdout.write(table.to_csv())
    for row in table.rows:
        if row.note:
            print(
                f"# {row.note}: method={row.method} r={row.r:g} c={row.c:g} "
                f"estimate={row.estimate:.4f}"
            )


def cmd_size(args) -> int:
    table = run_size_study(_build_plan(args, "size"))
    _emit_table(table, args)
    return 0


def cmd_power(args) -> int:
    table = run_power_study(_build_plan(args, "power"))
    _emit_table(table, args)
    return 0


def cmd_estimate(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.critical:
        k = _parse_k(args.k)
        if k is None:
            raise ValueError("--critical needs an explicit --k")
        cv = estimate_critical_values(
            args.n, k, args.r, args.c, reps=args.reps, seed=seed, alpha=args.alpha
        )
        if args.json:
            print(
                json.dumps(
                    {
                        "left_cv": cv.left_cv,
                        "right_cv": cv.right_cv,
                        "theta_left": cv.theta_left,
                        "theta_right": cv.theta_right,
                        "alpha": cv.alpha,
                        "reps": cv.reps,
                    },
                    sort_keys=True,
                )
            )
            return 0
        print(f"left_cv={cv.left_cv:g}")
        print(f"right_cv={cv.right_cv:g}")
        print(f"theta_left={cv.theta_left:.6f}")
        print(f"theta_right={cv.theta_right:.6f}")
        print(f"alpha={cv.alpha:g}")
        print(f"reps={cv.reps}")
        return 0
    est, se = estimate_p2(args.n, None, args.r, args.c, reps=args.reps, seed=seed)
    if args.json:
        print(json.dumps({"estimate": est, "se": se, "n": args.n, "reps": args.reps}))
        return 0
    print(f"estimate={est:.6f}")
    print(f"se={se:.6f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="picd",
        description="Interval catch digraphs: domination numbers, exact laws, and uniformity tests.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_xy(p):
        p.add_argument("--x", required=True, help="file of vertex-class points ('-' for stdin)")
        p.add_argument("--y", help="file of partition-class points")
        p.add_argument("--y-grid", type=int, help="build y as K+1 equispaced points padded around the data")

    p = sub.add_parser("gamma", help="domination number of a two-class sample")
    add_xy(p)
    p.add_argument("--r", type=float, default=2.0)
    p.add_argument("--c", type=float, default=0.5)
    p.add_argument("--witness", action="store_true", help="also print a minimum dominating set")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("arcs", help="digraph arc count and density")
    add_xy(p)
    p.add_argument("--family", choices=("picd", "cicd"), default="picd")
    p.add_argument("--r", type=float, default=2.0)
    p.add_argument("--c", type=float, default=0.5)
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--edges", action="store_true", help="also print the arc list")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_arcs)

    p = sub.add_parser("prob", help="one-interval two-dominator probability")
    p.add_argument("--n", type=int)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--asymptotic", action="store_true", help="print the large-n limit instead")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_prob)

    p = sub.add_parser("pmf", help="exact domination-number pmf under joint uniformity")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True, help="number of partition points")
    p.add_argument("--r", type=float, default=2.0)
    p.add_argument("--c", type=float, default=0.5)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_pmf)

    p = sub.add_parser("test", help="uniformity / goodness-of-fit test on one data file")
    p.add_argument("--data", required=True, help="data file ('-' for stdin)")
    p.add_argument("--method", choices=KNOWN_METHODS, default="dom-bin")
    p.add_argument("--k", default=None, help="subinterval count or 'auto'")
    p.add_argument("--r", type=float, default=2.0)
    p.add_argument("--c", type=float, default=0.5)
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--alt", choices=("two", "two-sided", "left", "right"), default=None)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--reps", type=int, default=10000, help="calibration replicates (MC methods)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--conservative", action="store_true", help="never reject on the boundary atom")
    p.add_argument("--cdf", help="test against this CDF via the probability integral transform")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_test)

    def add_study(p, power: bool):
        p.add_argument("--method", default=None, help="comma-separated method list")
        p.add_argument("--grid", default=None, help="r=START:STEP:STOP,c=START:STEP:STOP")
        p.add_argument("--r", type=float, default=None)
        p.add_argument("--c", type=float, default=None)
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--k", default=None, help="subinterval count or 'auto'")
        if power:
            p.add_argument(
                "--alt",
                action="append",
                default=None,
                help="alternative spec like f4:eps=0.2,k=7 (repeatable)",
            )
        p.add_argument("--reps", type=int, default=None)
        p.add_argument("--alpha", type=float, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None, help="also write the CSV here")
        p.add_argument("--conservative", action="store_true")
        p.add_argument("--calibration-reps", dest="calibration_reps", type=int, default=None)
        p.add_argument("--config", default=None, help="key=value file supplying defaults")
        p.add_argument("--json", action="store_true")

    p = sub.add_parser("size", help="Monte Carlo size study (CSV on stdout)")
    add_study(p, power=False)
    p.set_defaults(func=cmd_size)

    p = sub.add_parser("power", help="Monte Carlo power study (CSV on stdout)")
    add_study(p, power=True)
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("estimate", help="simulation estimates (two-dominator probability or critical values)")
    p.add_argument("--critical", action="store_true", help="estimate critical values instead")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", default=None, help="subinterval count (critical values)")
    p.add_argument("--r", type=float, default=2.0)
    p.add_argument("--c", type=float, default=0.5)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--reps", type=int, default=10000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_estimate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
