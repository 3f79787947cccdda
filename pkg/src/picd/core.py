"""Shared domain types for interval catch digraphs over two-class 1-D data.

One class (the ``x`` points) carries the digraph vertices; the other (the
``y`` points) partitions the real line into intervals that localize every
construction. Everything downstream works interval by interval, so the two
central types here are the validated sample pair and its intervalization.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "TwoClassSample",
    "Intervalization",
    "PicdParams",
    "CicdParams",
    "anchor_point",
    "intervalize",
    "read_points",
]


def _as_float_tuple(values: Iterable[float], label: str) -> tuple[float, ...]:
    out = []
    for v in values:
        f = float(v)
        if not math.isfinite(f):
            raise ValueError(f"{label} values must be finite, got {v!r}")
        out.append(f)
    return tuple(out)


@dataclass(frozen=True)
class TwoClassSample:
    """A pair of 1-D point classes: vertices ``x`` and partition points ``y``.

    ``x`` is stored sorted ascending (ties allowed); ``y`` must be strictly
    increasing after sorting (duplicates rejected). Points of ``x`` exactly
    equal to a ``y`` point are rejected: interval membership is defined on
    open intervals, so such a point would belong to no interval. Jitter the
    offending value by a tiny amount if this arises with real data.
    """

    x: tuple[float, ...]
    y: tuple[float, ...]

    def __post_init__(self) -> None:
        x = tuple(sorted(_as_float_tuple(self.x, "x")))
        y = tuple(sorted(_as_float_tuple(self.y, "y")))
        if not y:
            raise ValueError("y must contain at least one partition point")
        for a, b in zip(y, y[1:]):
            if a == b:
                raise ValueError(f"y values must be distinct, got duplicate {a!r}")
        y_set = set(y)
        for v in x:
            if v in y_set:
                raise ValueError(
                    f"x value {v!r} coincides with a y partition point; "
                    "interval membership is open, jitter the value slightly"
                )
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def m(self) -> int:
        return len(self.y)


def anchor_point(lo: float, hi: float, c: float) -> float:
    """Anchor splitting the bounded interval (lo, hi) at relative position c."""
    return lo + c * (hi - lo)


@dataclass(frozen=True)
class Intervalization:
    """Partition of the line by the ``y`` points, with vertex membership.

    ``bounds[i]`` is the open interval ``(lo, hi)`` where ``bounds[0]`` has
    ``lo = -inf`` and ``bounds[-1]`` has ``hi = +inf``; the other ``m - 1``
    intervals are bounded. ``members[i]`` lists the indices (into the sorted
    sample ``x``) falling in interval ``i``; since ``x`` is sorted, each entry
    is a consecutive run.
    """

    bounds: tuple[tuple[float, float], ...]
    members: tuple[tuple[int, ...], ...]

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(len(ix) for ix in self.members)

    def is_end(self, i: int) -> bool:
        return i == 0 or i == len(self.bounds) - 1


def intervalize(sample: TwoClassSample) -> Intervalization:
    """Assign every x point to its open interval in the y partition."""
    y = np.asarray(sample.y)
    x = np.asarray(sample.x)
    which = np.searchsorted(y, x) if sample.n else np.empty(0, dtype=int)
    m = sample.m
    edges = (-math.inf,) + sample.y + (math.inf,)
    bounds = tuple((edges[i], edges[i + 1]) for i in range(m + 1))
    members: list[list[int]] = [[] for _ in range(m + 1)]
    for idx, interval in enumerate(which):
        members[int(interval)].append(idx)
    return Intervalization(bounds, tuple(tuple(ix) for ix in members))


@dataclass(frozen=True)
class PicdParams:
    """Expansion r >= 1 (math.inf allowed) and centrality c in [0, 1]."""

    r: float
    c: float

    def __post_init__(self) -> None:
        r = float(self.r)
        c = float(self.c)
        if math.isnan(r) or r < 1.0:
            raise ValueError(f"r must be >= 1, got {self.r!r}")
        if not (0.0 <= c <= 1.0):
            raise ValueError(f"c must be in [0, 1], got {self.c!r}")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "c", c)


@dataclass(frozen=True)
class CicdParams:
    """Expansion tau > 0 (finite) and centrality c in (0, 1)."""

    tau: float
    c: float

    def __post_init__(self) -> None:
        tau = float(self.tau)
        c = float(self.c)
        if not (math.isfinite(tau) and tau > 0.0):
            raise ValueError(f"tau must be finite and > 0, got {self.tau!r}")
        if not (0.0 < c < 1.0):
            raise ValueError(f"c must be in (0, 1), got {self.c!r}")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "c", c)


def read_points(source: str | Path) -> list[float]:
    """Read floats from a file (newline, comma, or space separated); '-' reads stdin."""
    if str(source) == "-":
        text = sys.stdin.read()
    else:
        text = Path(source).read_text()
    tokens = text.replace(",", " ").split()
    points = []
    for tok in tokens:
        try:
            points.append(float(tok))
        except ValueError:
            raise ValueError(f"could not parse {tok!r} as a float in {source}") from None
    return points
