"""Finite-velocity planar random motions driven by a counting process.

A particle starts at the origin, picks a direction uniformly on ``[0, 2*pi)``
and moves with constant speed ``c``.  At each event of the driving counting
process it picks a fresh uniform direction.  The displacement at time ``t``
is therefore a sum of segment vectors whose lengths are proportional to the
waiting times between direction switches.

Sampling an endpoint conditionally on ``n`` switches uses the order-statistic
representation of the switch instants: ``n`` sorted uniforms on ``(0, t)``.
This is exact for the law studied here; an alternative "rate-weighted" mode
places the instants by inverting the cumulative rate instead, which is a
useful exploratory device for strongly inhomogeneous rates but does *not*
reproduce the closed-form endpoint law and is flagged as such.

Endpoint batches are reproducible bit-for-bit: sample ``i`` draws from its
own ``numpy`` substream seeded by ``(seed, i)``, so results do not depend on
how the batch is split across workers.

Flight-model endpoints (random flights with Dirichlet displacement weights)
have an analytically invertible radial CDF, so their radii are sampled by
direct inversion.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, NamedTuple, Sequence

import numpy as np

from .counting import (
    CountingSpec,
    FlightCountSpec,
    count_distribution,
    cumulative_rate,
)
from .densities import flight_exponent
from .specfun import DomainError

__all__ = [
    "MotionConfig",
    "Trajectory",
    "PlanarSample",
    "FlightSample",
    "EndpointArrays",
    "endpoint_from_path",
    "sample_trajectory",
    "sample_flight_radius",
    "batch_endpoints",
    "endpoint_arrays",
    "conditioned_endpoints",
    "flight_radii_batch",
]

_TWO_PI = 2.0 * math.pi

_INSTANT_MODES = ("order-statistics", "rate-weighted")


@dataclass(frozen=True)
class MotionConfig:
    """Speed, horizon and driving counting law for a planar motion.

    ``instants_mode`` selects how switch instants are placed given the number
    of switches: ``"order-statistics"`` (sorted uniforms; exact for the
    endpoint law) or ``"rate-weighted"`` (instants at inverse cumulative-rate
    quantiles; exploratory only, the closed-form endpoint law does not hold).
    """

    c: float
    t: float
    count_spec: CountingSpec
    instants_mode: str = "order-statistics"

    def __post_init__(self) -> None:
        if not (self.c > 0.0 and math.isfinite(self.c)):
            raise DomainError(f"speed c must be finite and positive, got {self.c}")
        if not (self.t > 0.0 and math.isfinite(self.t)):
            raise DomainError(f"horizon t must be finite and positive, got {self.t}")
        if self.instants_mode not in _INSTANT_MODES:
            raise DomainError(
                f"instants_mode must be one of {_INSTANT_MODES}, got {self.instants_mode!r}"
            )


class PlanarSample(NamedTuple):
    x: float
    y: float
    n: int
    is_singular: bool


class FlightSample(NamedTuple):
    radius: float
    angle: float
    n: int
    d: int
    variant: str


@dataclass(frozen=True)
class Trajectory:
    """A full path: switch instants, per-segment directions and endpoint.

    ``angles`` has one more entry than ``change_times``: the initial
    direction plus one new direction per switch.
    """

    change_times: tuple[float, ...]
    angles: tuple[float, ...]
    endpoint: tuple[float, float]
    c: float
    t: float

    @property
    def n_changes(self) -> int:
        return len(self.change_times)

    @property
    def is_singular(self) -> bool:
        return self.n_changes == 0


def endpoint_from_path(
    change_times: Sequence[float], angles: Sequence[float], c: float, t: float
) -> tuple[float, float]:
    """Recompute the displacement from instants and directions.

    Segment ``k`` runs from ``s_k`` to ``s_{k+1}`` (with ``s_0 = 0`` and
    ``s_{n+1} = t``) in direction ``angles[k]``.
    """
    if len(angles) != len(change_times) + 1:
        raise DomainError(
            f"need one angle per segment: {len(change_times)} change times "
            f"require {len(change_times) + 1} angles, got {len(angles)}"
        )
    edges = [0.0, *change_times, t]
    x = 0.0
    y = 0.0
    for k, theta in enumerate(angles):
        seg = edges[k + 1] - edges[k]
        x += c * seg * math.cos(theta)
        y += c * seg * math.sin(theta)
    return x, y


def _rate_weighted_instant(spec: CountingSpec, t: float, v: float) -> float:
    """Solve ``Lambda(s) = v * Lambda(t)`` for ``s`` by bisection."""
    target = v * cumulative_rate(spec.rate, t)
    lo, hi = 0.0, t
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if cumulative_rate(spec.rate, mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sample_trajectory(cfg: MotionConfig, uniforms: Iterator[float]) -> Trajectory:
    """Draw one full path, consuming ``1 + n + (n + 1)`` uniforms.

    Consumption order: one uniform for the switch count ``n``, then ``n``
    uniforms for the instants, then ``n + 1`` uniforms for the directions.
    """
    dist = count_distribution(cfg.count_spec, cfg.t)
    n = dist.sample(next(uniforms))
    vs = [next(uniforms) for _ in range(n)]
    angles = tuple(_TWO_PI * next(uniforms) for _ in range(n + 1))
    if cfg.instants_mode == "order-statistics":
        times = tuple(cfg.t * v for v in sorted(vs))
    else:
        times = tuple(_rate_weighted_instant(cfg.count_spec, cfg.t, v) for v in sorted(vs))
    endpoint = endpoint_from_path(times, angles, cfg.c, cfg.t)
    return Trajectory(change_times=times, angles=angles, endpoint=endpoint, c=cfg.c, t=cfg.t)


def sample_flight_radius(
    d: int, n: int, c: float, t: float, variant: str, uniforms: Iterator[float]
) -> FlightSample:
    """Draw one flight endpoint in polar form by radial CDF inversion.

    The radial CDF given ``n`` displacements is ``1 - (1 - r^2/(ct)^2)^a``
    with ``a`` the marginal exponent, so ``r = ct * sqrt(1 - v^(1/a))`` maps
    a uniform ``v`` to the radius (``v = 0`` gives ``r = ct``, ``v = 1``
    gives ``r = 0``).  Consumes two uniforms: radius then angle.
    """
    a = flight_exponent(d, n, variant)
    v = next(uniforms)
    u_angle = next(uniforms)
    if not (0.0 <= v <= 1.0 and 0.0 <= u_angle <= 1.0):
        raise DomainError("uniform draws must lie in [0, 1]")
    radius = c * t * math.sqrt(max(0.0, 1.0 - v ** (1.0 / a)))
    return FlightSample(radius=radius, angle=_TWO_PI * u_angle, n=n, d=d, variant=variant)


class EndpointArrays(NamedTuple):
    """Column layout of an endpoint batch (one entry per sample)."""

    x: np.ndarray
    y: np.ndarray
    n: np.ndarray
    is_singular: np.ndarray


def _fill_endpoints(
    cfg: MotionConfig,
    dist,
    seed: int,
    lo: int,
    hi: int,
    xs: np.ndarray,
    ys: np.ndarray,
    ns: np.ndarray,
    sing: np.ndarray,
) -> None:
    c = cfg.c
    t = cfg.t
    order_stats = cfg.instants_mode == "order-statistics"
    cos = math.cos
    sin = math.sin
    for i in range(lo, hi):
        rng = np.random.default_rng((seed, i))
        n = dist.sample(rng.random())
        if n == 0:
            theta = _TWO_PI * rng.random()
            xs[i] = c * t * cos(theta)
            ys[i] = c * t * sin(theta)
            ns[i] = 0
            sing[i] = True
            continue
        vs = sorted(rng.random(n).tolist())
        if order_stats:
            times = [t * v for v in vs]
        else:
            times = [_rate_weighted_instant(cfg.count_spec, t, v) for v in vs]
        angs = rng.random(n + 1)
        x = 0.0
        y = 0.0
        prev = 0.0
        for k in range(n):
            seg = times[k] - prev
            theta = _TWO_PI * angs[k]
            x += seg * cos(theta)
            y += seg * sin(theta)
            prev = times[k]
        theta = _TWO_PI * angs[n]
        seg = t - prev
        x += seg * cos(theta)
        y += seg * sin(theta)
        xs[i] = c * x
        ys[i] = c * y
        ns[i] = n
        sing[i] = False


def endpoint_arrays(
    cfg: MotionConfig, n_samples: int, seed: int, worker_count: int = 1
) -> EndpointArrays:
    """Column-oriented endpoint batch; see :func:`batch_endpoints`.

    Output is identical for every ``worker_count`` because sample ``i``
    always draws from the substream seeded by ``(seed, i)``.
    """
    if n_samples <= 0:
        raise DomainError(f"n_samples must be positive, got {n_samples}")
    if worker_count < 1:
        raise DomainError(f"worker_count must be >= 1, got {worker_count}")
    dist = count_distribution(cfg.count_spec, cfg.t)
    xs = np.empty(n_samples)
    ys = np.empty(n_samples)
    ns = np.empty(n_samples, dtype=np.int64)
    sing = np.empty(n_samples, dtype=bool)
    bounds = np.linspace(0, n_samples, worker_count + 1).astype(int)
    if worker_count == 1:
        _fill_endpoints(cfg, dist, seed, 0, n_samples, xs, ys, ns, sing)
    else:
        with ThreadPoolExecutor(max_workers=worker_count) as pool:
            futures = [
                pool.submit(
                    _fill_endpoints, cfg, dist, seed, bounds[w], bounds[w + 1], xs, ys, ns, sing
                )
                for w in range(worker_count)
            ]
            for fut in futures:
                fut.result()
    return EndpointArrays(x=xs, y=ys, n=ns, is_singular=sing)


def batch_endpoints(
    cfg: MotionConfig, n_samples: int, seed: int, worker_count: int = 1
) -> list[PlanarSample]:
    """Draw ``n_samples`` endpoints, deterministic in ``(cfg, n_samples, seed)``.

    The batch is split into ``worker_count`` contiguous slices processed
    concurrently and reassembled in index order; the result is bit-for-bit
    independent of ``worker_count``.
    """
    cols = endpoint_arrays(cfg, n_samples, seed, worker_count)
    return [
        PlanarSample(float(cols.x[i]), float(cols.y[i]), int(cols.n[i]), bool(cols.is_singular[i]))
        for i in range(n_samples)
    ]


def conditioned_endpoints(
    n: int, c: float, t: float, n_samples: int, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized endpoints conditioned on exactly ``n >= 1`` switches."""
    if n < 1:
        raise DomainError(f"conditioning requires n >= 1, got {n}")
    if n_samples <= 0:
        raise DomainError(f"n_samples must be positive, got {n_samples}")
    rng = np.random.default_rng(seed)
    times = np.sort(rng.random((n_samples, n)), axis=1) * t
    angles = _TWO_PI * rng.random((n_samples, n + 1))
    edges = np.concatenate(
        [np.zeros((n_samples, 1)), times, np.full((n_samples, 1), t)], axis=1
    )
    segs = np.diff(edges, axis=1)
    x = c * np.sum(segs * np.cos(angles), axis=1)
    y = c * np.sum(segs * np.sin(angles), axis=1)
    return x, y


def flight_radii_batch(
    d: int, n: int, c: float, t: float, variant: str, n_samples: int, seed: int
) -> np.ndarray:
    """Vectorized flight radii for fixed ``(d, n)`` by CDF inversion."""
    if n_samples <= 0:
        raise DomainError(f"n_samples must be positive, got {n_samples}")
    a = flight_exponent(d, n, variant)
    rng = np.random.default_rng(seed)
    v = rng.random(n_samples)
    return c * t * np.sqrt(1.0 - v ** (1.0 / a))
