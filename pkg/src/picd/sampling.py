"""Samplers for the uniform null and the alternative families.

All samplers emit values strictly inside (0, 1) and take a numpy Generator,
so replication layers control the streams. ``RngStream`` wraps the seeding
scheme: a master seed plus an integer key path, giving independent,
order-insensitive substreams for parallel replicates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "RngStream",
    "AlternativeSpec",
    "parse_alternative",
    "sample_uniform",
    "sample_f1",
    "sample_f2",
    "sample_f3",
    "sample_f4",
    "sample_f5",
    "sample_from",
]


@dataclass(frozen=True)
class RngStream:
    """A reproducible stream address: master seed plus spawn-key path."""

    seed: int
    key: tuple[int, ...] = ()

    def child(self, *key: int) -> "RngStream":
        return RngStream(self.seed, self.key + key)

    def generator(self) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=self.key))


def _open_unit(rng: np.random.Generator, size: int) -> np.ndarray:
    """Uniform draws on the open interval (0, 1): exact zeros are redrawn."""
    u = rng.random(size)
    mask = u <= 0.0
    while mask.any():
        u[mask] = rng.random(int(mask.sum()))
        mask = u <= 0.0
    return u


def sample_uniform(n: int, rng: np.random.Generator) -> np.ndarray:
    return _open_unit(rng, n)


def sample_f1(n: int, delta: float, rng: np.random.Generator) -> np.ndarray:
    """Linear tilt: density 2*delta*x + 1 - delta; delta = 0 is uniform."""
    if not (0.0 <= delta < 1.0):
        raise ValueError(f"delta must be in [0, 1), got {delta!r}")
    u = _open_unit(rng, n)
    if delta == 0.0:
        return u
    disc = (1.0 - delta) ** 2 + 4.0 * delta * u
    return (-(1.0 - delta) + np.sqrt(disc)) / (2.0 * delta)


def sample_f2(n: int, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """Normal centered at 1/2 restricted to (0, 1), by rejection."""
    if not (sigma > 0.0):
        raise ValueError(f"sigma must be > 0, got {sigma!r}")
    out = np.empty(0)
    while out.size < n:
        chunk = rng.normal(0.5, sigma, size=max(128, 2 * (n - out.size)))
        out = np.concatenate([out, chunk[(chunk > 0.0) & (chunk < 1.0)]])
    return out[:n]


def sample_f3(n: int, delta: float, rng: np.random.Generator) -> np.ndarray:
    """Quadratic bowl: density delta*(x - 1/2)^2 + 1 - delta/12, delta in [0, 12]."""
    if not (0.0 <= delta <= 12.0):
        raise ValueError(f"delta must be in [0, 12], got {delta!r}")
    u = _open_unit(rng, n)
    if delta == 0.0:
        return u

    def cdf(x: np.ndarray) -> np.ndarray:
        return delta * x**3 / 3.0 - delta * x**2 / 2.0 + x + delta * x / 6.0

    lo = np.zeros(n)
    hi = np.ones(n)
    while np.max(hi - lo) > 1e-12:
        mid = 0.5 * (lo + hi)
        below = cdf(mid) < u
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def sample_f4(n: int, eps: float, k: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform on (0, 1) minus a band of half-width eps around each j/k.

    ``eps`` is the absolute half-width, so the support has measure
    1 - 2*k*eps and eps must stay below 1/(2k); eps = 0 is plain uniform.
    """
    k = _validate_k(k)
    if not (0.0 <= eps < 0.5 / k):
        raise ValueError(f"eps must be in [0, 1/(2k)) = [0, {0.5 / k!r}), got {eps!r}")
    piece = rng.integers(0, k, size=n)
    u = _open_unit(rng, n)
    return piece / k + eps + u * (1.0 / k - 2.0 * eps)


def sample_f5(n: int, eps: float, k: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform on the bands of half-width eps around each j/k, inside (0, 1).

    The complement of the f4 support: interior partition points carry a
    band of width 2*eps, the two boundary points half that. Draws exactly
    on a partition point are redrawn (they would sit on the open-interval
    boundary downstream).
    """
    k = _validate_k(k)
    if not (0.0 < eps < 0.5 / k):
        raise ValueError(f"eps must be in (0, 1/(2k)) = (0, {0.5 / k!r}), got {eps!r}")
    lows = np.array([0.0] + [j / k - eps for j in range(1, k)] + [1.0 - eps])
    lengths = np.array([eps] + [2.0 * eps] * (k - 1) + [eps])
    probs = lengths / lengths.sum()
    grid = np.array([j / k for j in range(k + 1)])
    piece = rng.choice(k + 1, size=n, p=probs)
    x = lows[piece] + _open_unit(rng, n) * lengths[piece]
    mask = np.isin(x, grid)
    while mask.any():
        redo = int(mask.sum())
        again = rng.choice(k + 1, size=redo, p=probs)
        x[mask] = lows[again] + _open_unit(rng, redo) * lengths[again]
        mask = np.isin(x, grid)
    return x


def _validate_k(k: int) -> int:
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    return int(k)


_FAMILIES = ("uniform", "f1", "f2", "f3", "f4", "f5")


@dataclass(frozen=True)
class AlternativeSpec:
    """A named alternative distribution with its parameters.

    For f4/f5 the ``eps`` here is relative to the subinterval width, in
    (0, 1/2): the prohibited (f4) or favored (f5) band around each
    partition point has absolute half-width eps/k, so eps is the fraction
    of each subinterval removed at either end. ``k`` may be left None and
    filled in later with the test partition size.
    """

    family: str
    delta: float | None = None
    sigma: float | None = None
    eps: float | None = None
    k: int | None = None

    def __post_init__(self) -> None:
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown family {self.family!r}, expected one of {_FAMILIES}")
        f = self.family
        if f == "uniform":
            self._require(delta=None, sigma=None, eps=None, k=None)
        elif f == "f1":
            if self.delta is None or not (0.0 <= self.delta < 1.0):
                raise ValueError(f"f1 needs delta in [0, 1), got {self.delta!r}")
            self._require(sigma=None, eps=None, k=None)
        elif f == "f2":
            if self.sigma is None or not (self.sigma > 0.0):
                raise ValueError(f"f2 needs sigma > 0, got {self.sigma!r}")
            self._require(delta=None, eps=None, k=None)
        elif f == "f3":
            if self.delta is None or not (0.0 <= self.delta <= 12.0):
                raise ValueError(f"f3 needs delta in [0, 12], got {self.delta!r}")
            self._require(sigma=None, eps=None, k=None)
        else:
            if self.eps is None or not (0.0 < self.eps < 0.5):
                raise ValueError(f"{f} needs relative eps in (0, 1/2), got {self.eps!r}")
            if self.k is not None and (int(self.k) != self.k or self.k < 1):
                raise ValueError(f"k must be a positive integer, got {self.k!r}")
            self._require(delta=None, sigma=None)

    def _require(self, **null_fields) -> None:
        for name, expect in null_fields.items():
            if getattr(self, name) is not expect:
                raise ValueError(f"{self.family} does not take {name}")

    def with_k(self, k: int) -> "AlternativeSpec":
        """Fill a missing subinterval count; an explicit one is kept."""
        if self.family not in ("f4", "f5") or self.k is not None:
            return self
        return AlternativeSpec(self.family, eps=self.eps, k=int(k))

    def label(self) -> str:
        f = self.family
        if f == "uniform":
            return "uniform"
        if f in ("f1", "f3"):
            return f"{f}:delta={self.delta:g}"
        if f == "f2":
            return f"{f}:sigma={self.sigma:g}"
        k = "auto" if self.k is None else f"{self.k:d}"
        return f"{f}:eps={self.eps:g},k={k}"

    def param_text(self) -> str:
        label = self.label()
        return "" if ":" not in label else label.split(":", 1)[1]


def parse_alternative(text: str) -> AlternativeSpec:
    """Parse strings like 'uniform', 'f1:delta=0.4', or 'f4:eps=0.2,k=7'."""
    text = text.strip()
    family, _, rest = text.partition(":")
    family = family.strip()
    kwargs: dict[str, float | int] = {}
    if rest:
        for item in rest.split(","):
            key, sep, val = item.partition("=")
            key = key.strip()
            if not sep or key not in ("delta", "sigma", "eps", "k"):
                raise ValueError(f"bad alternative parameter {item!r} in {text!r}")
            try:
                kwargs[key] = int(val) if key == "k" else float(val)
            except ValueError:
                raise ValueError(f"bad value in {item!r}") from None
    return AlternativeSpec(family, **kwargs)


def sample_from(spec: AlternativeSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw n points from an alternative; f4/f5 need a concrete k by now."""
    f = spec.family
    if f == "uniform":
        return sample_uniform(n, rng)
    if f == "f1":
        return sample_f1(n, spec.delta, rng)
    if f == "f2":
        return sample_f2(n, spec.sigma, rng)
    if f == "f3":
        return sample_f3(n, spec.delta, rng)
    if spec.k is None:
        raise ValueError(f"{f} needs a concrete subinterval count k (use with_k)")
    eps_abs = spec.eps / spec.k
    if f == "f4":
        return sample_f4(n, eps_abs, spec.k, rng)
    return sample_f5(n, eps_abs, spec.k, rng)
