"""The fractional Poisson counting family with time-dependent rates.

A counting spec pairs a rate function λ(s) -- through its cumulative
Λ(t) = ∫₀ᵗ λ(s) ds -- with a Mittag-Leffler-normalized pmf over the
number of events by time t:

    P{N(t) = n} = Λ(t)^n / (Γ(αn + 1) · E_{α,1}(Λ(t))).

At α = 1 this is the inhomogeneous Poisson distribution; for α < 1 it is
a weighted Poisson law with weights w(n) = n!/Γ(αn+1). Two relatives are
provided: a state-dependent variant whose order α_j changes with the
state j, and the flight-adapted distribution used by the projected
random-flight motions, with pmf Λ^n / (Γ((n+1)(d/2−1)+1) · E_{d/2−1,d/2}(Λ)).

All pmf evaluation runs in the log domain (log-weights minus a
log-normalizer), so large Λ -- where E_{α,1}(Λ) overflows double
precision -- costs nothing in accuracy. Sampling is exact inverse-CDF on
a cached cumulative table that extends itself on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence, Union

import numpy as np
from scipy.integrate import quad

from .specfun import (
    ConvergenceError,
    DomainError,
    MLParams,
    log_gamma_pos,
    log_mittag_leffler,
)

__all__ = [
    "RateFunction",
    "CountingSpec",
    "FracPoissonSpec",
    "StateDependentSpec",
    "FlightCountSpec",
    "CountDistribution",
    "cumulative_rate",
    "count_distribution",
    "pmf",
    "weighted_pmf",
    "state_dependent_pmf",
    "flight_count_pmf",
    "pgf",
    "sample_count",
    "rate_to_json",
    "rate_from_json",
]

_QUAD_ABS_TOL = 1e-10


@dataclass(frozen=True)
class RateFunction:
    """Time-dependent intensity λ(s) ≥ 0 with analytic cumulative where
    the kind allows it.

    Construct through the classmethods: ``constant(lam)``,
    ``power(a, b)`` for λ(s) = a·s^b with b > −1, ``piecewise(breakpoints,
    values)`` for a step rate (value ``values[i]`` on the segment ending
    at ``breakpoints[i]``, zero after the last breakpoint), or
    ``from_callable(fn)`` for anything else (cumulative then falls back
    to adaptive quadrature with absolute tolerance 1e-10).
    """

    kind: str
    params: tuple = ()
    fn: Callable[[float], float] | None = field(default=None, compare=False)

    @classmethod
    def constant(cls, lam: float) -> "RateFunction":
        if lam < 0.0:
            raise DomainError(f"constant rate must be >= 0, got {lam}")
        return cls("constant", (float(lam),))

    @classmethod
    def power(cls, a: float, b: float) -> "RateFunction":
        if a < 0.0:
            raise DomainError(f"power-rate scale must be >= 0, got {a}")
        if b <= -1.0:
            raise DomainError(f"power-rate exponent must be > -1, got {b}")
        return cls("power", (float(a), float(b)))

    @classmethod
    def piecewise(cls, breakpoints: Sequence[float], values: Sequence[float]) -> "RateFunction":
        bp = tuple(float(b) for b in breakpoints)
        vals = tuple(float(v) for v in values)
        if len(bp) != len(vals) or not bp:
            raise DomainError("need equally many breakpoints and values, at least one each")
        if any(b2 <= b1 for b1, b2 in zip(bp, bp[1:])) or bp[0] <= 0.0:
            raise DomainError("breakpoints must be strictly increasing and positive")
        if any(v < 0.0 for v in vals):
            raise DomainError("piecewise rate values must be >= 0")
        return cls("piecewise", (bp, vals))

    @classmethod
    def from_callable(cls, fn: Callable[[float], float]) -> "RateFunction":
        return cls("callable", (), fn)

    def rate(self, s: float) -> float:
        """λ(s)."""
        if s < 0.0:
            raise DomainError(f"rate requires s >= 0, got {s}")
        if self.kind == "constant":
            return self.params[0]
        if self.kind == "power":
            a, b = self.params
            return a * s**b if s > 0.0 else (a if b == 0.0 else 0.0)
        if self.kind == "piecewise":
            bp, vals = self.params
            for b, v in zip(bp, vals):
                if s < b:
                    return v
            return 0.0
        return float(self.fn(s))

    def cumulative(self, t: float) -> float:
        """Λ(t) = ∫₀ᵗ λ(s) ds."""
        return cumulative_rate(self, t)


def cumulative_rate(rate: RateFunction, t: float) -> float:
    """Cumulative intensity Λ(t); analytic for the declarative kinds,
    adaptive quadrature (abs tol 1e-10) for callables."""
    t = float(t)
    if t < 0.0:
        raise DomainError(f"cumulative_rate requires t >= 0, got {t}")
    if t == 0.0:
        return 0.0
    if rate.kind == "constant":
        return rate.params[0] * t
    if rate.kind == "power":
        a, b = rate.params
        return a * t ** (b + 1.0) / (b + 1.0)
    if rate.kind == "piecewise":
        bp, vals = rate.params
        total = 0.0
        left = 0.0
        for b, v in zip(bp, vals):
            if t <= left:
                break
            total += v * (min(t, b) - left)
            left = b
        return total
    value, abserr = quad(rate.fn, 0.0, t, epsabs=_QUAD_ABS_TOL, epsrel=1e-10, limit=200)
    if abserr > 1e-7:
        raise ConvergenceError(
            f"cumulative-rate quadrature error estimate {abserr:.1e} too large", value, 0
        )
    if value < 0.0:
        raise DomainError("rate function integrated to a negative cumulative")
    return value


def rate_to_json(rate: RateFunction) -> dict:
    """JSON object {kind, ...} for the declarative rate kinds."""
    if rate.kind == "constant":
        return {"kind": "constant", "rate": rate.params[0]}
    if rate.kind == "power":
        return {"kind": "power", "a": rate.params[0], "b": rate.params[1]}
    if rate.kind == "piecewise":
        bp, vals = rate.params
        return {"kind": "piecewise", "breakpoints": list(bp), "values": list(vals)}
    raise DomainError("callable rates are not serializable")


def rate_from_json(obj: dict) -> RateFunction:
    kind = obj.get("kind")
    if kind == "constant":
        return RateFunction.constant(obj["rate"])
    if kind == "power":
        return RateFunction.power(obj["a"], obj["b"])
    if kind == "piecewise":
        return RateFunction.piecewise(obj["breakpoints"], obj["values"])
    raise DomainError(f"unknown rate kind {kind!r}")


@dataclass(frozen=True)
class FracPoissonSpec:
    """Order α ∈ (0,1] plus a rate function: the fractional counting law."""

    alpha: float
    rate: RateFunction

    def __post_init__(self):
        if not (0.0 < self.alpha <= 1.0):
            raise DomainError(f"alpha must lie in (0, 1], got {self.alpha}")


@dataclass(frozen=True)
class StateDependentSpec:
    """State-dependent orders α_j ∈ (0,1]; beyond the provided vector
    the last order continues unchanged."""

    alphas: tuple
    rate: RateFunction

    def __post_init__(self):
        alphas = tuple(float(a) for a in self.alphas)
        if not alphas:
            raise DomainError("need at least one alpha")
        if any(not (0.0 < a <= 1.0) for a in alphas):
            raise DomainError(f"every alpha_j must lie in (0, 1], got {alphas}")
        object.__setattr__(self, "alphas", alphas)

    def alpha_at(self, j: int) -> float:
        return self.alphas[j] if j < len(self.alphas) else self.alphas[-1]


@dataclass(frozen=True)
class FlightCountSpec:
    """Dimension d ≥ 3 of the source random flight plus a rate function."""

    d: int
    rate: RateFunction

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 3:
            raise DomainError(f"flight dimension must be an integer >= 3, got {self.d}")
        object.__setattr__(self, "d", int(self.d))


CountingSpec = Union[FracPoissonSpec, StateDependentSpec, FlightCountSpec]


# ---------------------------------------------------------------------------
# Log-domain pmf machinery.
#
# Every family below has pmf(n) = exp(log_weight(n) - log_normalizer),
# with log_weight(n) = n·lnΛ − lnΓ(·) and the normalizer a Mittag-Leffler
# value (or, for the state-dependent family, a truncated sum).


def _log_weight_frac(alpha: float, log_lam: float, n) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    return n * log_lam - log_gamma_pos(alpha * n + 1.0)


def _log_weight_flight(d: int, log_lam: float, n) -> np.ndarray:
    gamma_order = d / 2.0 - 1.0
    n = np.asarray(n, dtype=float)
    return n * log_lam - log_gamma_pos((n + 1.0) * gamma_order + 1.0)


@lru_cache(maxsize=256)
def _log_ml_cached(alpha: float, beta: float, z: float) -> float:
    return log_mittag_leffler(MLParams(alpha, beta), z)


def _state_dependent_log_terms(spec: StateDependentSpec, lam: float, max_terms: int = 200000):
    """Log of the state-dependent summands q_j = Λ^j / (Γ(α_j j + 1) E_{α_j,1}(Λ)),
    truncated once the running term drops below 1e-12 of the partial sum
    while decreasing, past the explicit α vector."""
    if lam == 0.0:
        return np.array([0.0] + [-np.inf] * (len(spec.alphas) - 1))
    log_lam = math.log(lam)
    logs = []
    partial = 0.0
    prev = math.inf
    j = 0
    while j < max_terms:
        a_j = spec.alpha_at(j)
        lq = j * log_lam - log_gamma_pos(a_j * j + 1.0) - _log_ml_cached(a_j, 1.0, lam)
        logs.append(lq)
        term = math.exp(lq)
        partial += term
        if j >= len(spec.alphas) and term < prev and term < 1e-12 * partial:
            return np.array(logs)
        prev = term
        j += 1
    raise ConvergenceError(
        f"state-dependent normalizer did not converge in {max_terms} terms", partial, max_terms
    )


def _log_terms_and_normalizer(spec, t: float):
    """(callable n -> log-weight array, log normalizer, Λ(t)) for any of
    the three counting specs."""
    lam = cumulative_rate(spec.rate, t)
    if isinstance(spec, FracPoissonSpec):
        if lam == 0.0:
            return (lambda n: np.where(np.asarray(n) == 0, 0.0, -np.inf)), 0.0, lam
        log_lam = math.log(lam)
        log_norm = _log_ml_cached(spec.alpha, 1.0, lam)
        return (lambda n: _log_weight_frac(spec.alpha, log_lam, n)), log_norm, lam
    if isinstance(spec, FlightCountSpec):
        gamma_order = spec.d / 2.0 - 1.0
        if lam == 0.0:
            log_norm = -log_gamma_pos(gamma_order + 1.0)
            return (
                lambda n: np.where(
                    np.asarray(n) == 0, -log_gamma_pos(gamma_order + 1.0), -np.inf
                ),
                log_norm,
                lam,
            )
        log_lam = math.log(lam)
        log_norm = _log_ml_cached(gamma_order, gamma_order + 1.0, lam)
        return (lambda n: _log_weight_flight(spec.d, log_lam, n)), log_norm, lam
    if isinstance(spec, StateDependentSpec):
        logs = _state_dependent_log_terms(spec, lam)
        m = logs.max()
        log_norm = m + math.log(math.fsum(np.exp(logs - m)))

        def log_weight(n):
            n = np.atleast_1d(np.asarray(n, dtype=int))
            out = np.full(n.shape, -np.inf)
            inside = n < len(logs)
            out[inside] = logs[n[inside]]
            return out

        return log_weight, log_norm, lam
    raise DomainError(f"unsupported counting spec type {type(spec).__name__}")


def pmf(spec: FracPoissonSpec, t: float, n: int) -> float:
    """P{N_α(t) = n} = Λ(t)^n / (Γ(αn+1) E_{α,1}(Λ(t)))."""
    _require_time(t)
    n = _require_count(n)
    log_weight, log_norm, _ = _log_terms_and_normalizer(spec, t)
    return min(1.0, float(np.exp(log_weight(n) - log_norm)))


def state_dependent_pmf(spec: StateDependentSpec, t: float, j: int) -> float:
    """The state-dependent pmf (each state j weighted by its own order α_j)."""
    _require_time(t)
    j = _require_count(j)
    log_weight, log_norm, _ = _log_terms_and_normalizer(spec, t)
    return min(1.0, float(np.exp(log_weight(j) - log_norm)[0]))


def flight_count_pmf(spec: FlightCountSpec, t: float, n: int) -> float:
    """P{N_d(t) = n} = Λ^n / (Γ((n+1)(d/2−1)+1) E_{d/2−1,d/2}(Λ))."""
    _require_time(t)
    n = _require_count(n)
    log_weight, log_norm, _ = _log_terms_and_normalizer(spec, t)
    return min(1.0, float(np.exp(log_weight(n) - log_norm)))


def weighted_pmf(weights: Callable[[int], float], lambda_t: float, n: int) -> float:
    """Weighted-Poisson pmf w(n)·p(n) / Σ_k w(k)p(k) with p = Poisson(lambda_t).

    The normalizer is summed until the running term falls below 1e-15 of
    the partial sum (once past the Poisson bulk); a zero normalizer or a
    sum that fails to settle raises.
    """
    if lambda_t < 0.0:
        raise DomainError(f"lambda_t must be >= 0, got {lambda_t}")
    n = _require_count(n)

    def weighted_term(k: int) -> float:
        w = float(weights(k))
        if w < 0.0:
            raise DomainError(f"weight w({k}) = {w} is negative")
        if w == 0.0:
            return 0.0
        if lambda_t == 0.0:
            return w if k == 0 else 0.0
        return w * math.exp(k * math.log(lambda_t) - lambda_t - log_gamma_pos(k + 1.0))

    max_terms = 100000
    terms = []
    partial = 0.0
    prev = math.inf
    for k in range(max_terms):
        term = weighted_term(k)
        if not math.isfinite(term):
            raise DomainError(f"weighted normalizer term at k={k} is not finite")
        terms.append(term)
        partial += term
        if k > lambda_t and term <= prev and (term == 0.0 or term < 1e-15 * partial):
            break
        prev = term
    else:
        raise ConvergenceError("weighted normalizer did not settle", partial, max_terms)
    normalizer = math.fsum(terms)
    if normalizer <= 0.0:
        raise DomainError("weighted normalizer is zero")
    return weighted_term(n) / normalizer


def pgf(spec: FracPoissonSpec, t: float, u: float) -> float:
    """Probability generating function E_{α,1}(u·Λ(t)) / E_{α,1}(Λ(t))."""
    _require_time(t)
    u = float(u)
    if not (0.0 <= u <= 1.0):
        raise DomainError(f"pgf requires u in [0, 1], got {u}")
    lam = cumulative_rate(spec.rate, t)
    if lam == 0.0:
        return 1.0
    p = MLParams(spec.alpha, 1.0)
    return math.exp(log_mittag_leffler(p, u * lam) - log_mittag_leffler(p, lam))


class CountDistribution:
    """Materialized pmf/CDF table of a counting spec at a fixed time.

    Holds probabilities p_0..p_N with cumulative coverage at least
    ``1 - 1e-13`` (extended on demand when a sampling uniform lands in
    the tail), the log-normalizer, and exact inverse-CDF sampling:
    ``sample(u)`` returns the smallest n with CDF(n) ≥ u.
    """

    _BLOCK = 512
    _MAX_TERMS = 2_000_000

    def __init__(self, spec, t: float):
        self.spec = spec
        self.t = float(t)
        self._log_weight, self.log_normalizer, self.lam = _log_terms_and_normalizer(spec, t)
        self._probs = np.empty(0)
        self._cum = np.empty(0)
        self._grow_until(lambda: self._cum.size and self._cum[-1] >= 1.0 - 1e-13)

    def _grow_until(self, done) -> None:
        while not done():
            if self._probs.size >= self._MAX_TERMS:
                raise ConvergenceError(
                    "count distribution table hit its size cap",
                    float(self._cum[-1]) if self._cum.size else 0.0,
                    self._probs.size,
                )
            lo = self._probs.size
            n_new = np.arange(lo, lo + self._BLOCK)
            lw_new = np.asarray(self._log_weight(n_new), dtype=float) - self.log_normalizer
            p_new = np.exp(lw_new)
            base = self._cum[-1] if self._cum.size else 0.0
            self._probs = np.concatenate([self._probs, p_new])
            self._cum = np.concatenate([self._cum, base + np.cumsum(p_new)])
            if p_new[-1] == 0.0 and lw_new[-1] < lw_new[0] and self._cum[-1] < 1.0 - 1e-13:
                # Past the peak and the tail has underflowed: whatever
                # mass is missing cannot be represented; stop growing.
                break

    @property
    def support_size(self) -> int:
        return int(self._probs.size)

    def pmf(self, n: int) -> float:
        n = _require_count(n)
        if n < self._probs.size:
            return float(self._probs[n])
        return float(np.exp(np.asarray(self._log_weight(n), dtype=float) - self.log_normalizer))

    def cdf(self, n: int) -> float:
        n = _require_count(n)
        if n >= self._cum.size:
            return float(self._cum[-1])
        return float(self._cum[n])

    def sample(self, u: float) -> int:
        if not (0.0 < u < 1.0):
            raise DomainError(f"sampling uniform must lie in (0, 1), got {u}")
        if u > self._cum[-1]:
            self._grow_until(lambda: self._cum[-1] >= u)
            if u > self._cum[-1]:
                raise ConvergenceError(
                    f"could not cover u={u} within the representable tail",
                    float(self._cum[-1]),
                    self._probs.size,
                )
        return int(np.searchsorted(self._cum, u, side="left"))

    def sample_many(self, us: np.ndarray) -> np.ndarray:
        us = np.asarray(us, dtype=float)
        if us.size and (us.min() <= 0.0 or us.max() >= 1.0):
            raise DomainError("sampling uniforms must lie in (0, 1)")
        if us.size and us.max() > self._cum[-1]:
            self._grow_until(lambda: self._cum[-1] >= us.max())
        return np.searchsorted(self._cum, us, side="left").astype(np.int64)


@lru_cache(maxsize=64)
def count_distribution(spec, t: float) -> CountDistribution:
    """Cached table builder; specs are immutable, so sharing is safe."""
    return CountDistribution(spec, t)


def sample_count(spec, t: float, uniforms) -> int:
    """Inverse-CDF draw from any counting spec; consumes exactly one
    uniform from the stream."""
    dist = count_distribution(spec, t)
    return dist.sample(float(next(uniforms)))


def _require_time(t: float) -> None:
    if not t > 0.0:
        raise DomainError(f"time must be > 0, got {t}")


def _require_count(n) -> int:
    if int(n) != n or n < 0:
        raise DomainError(f"count must be a nonnegative integer, got {n}")
    return int(n)
