"""Closed-form laws of the planar motions and their projections.

The unconditional planar law is the count-pmf-weighted mixture of the
conditional endpoint densities

    f_n(x, y) = n (c²t² − x² − y²)^{n/2−1} / (2π (ct)^n),   n ≥ 1,

plus an atom of weight P{N=0} spread uniformly on the circle of radius
ct. For the fractional counting family the mixture series collapses --
through Γ(αk + α + 1) = α(k+1)Γ(αk + α) -- into the Mittag-Leffler
closed form

    p_ac(x, y) = Λ E_{α,α}((Λ/ct)·w) / (2πα · ct · E_{α,1}(Λ) · w),

with w = √(c²t² − x² − y²); ``planar_law`` evaluates that form, and
``mixture_density`` keeps the term-by-term sum around as an independent
cross-check. ``planar_density_const_rate`` evaluates the separate
E_{α,1}-based constant-rate expression, which coincides with the
classical damped-wave law at α = 1 but is NOT the mixture for α < 1;
the verification harness quantifies the difference rather than hiding
it.

Projection onto a line and the random-flight marginals (with their own
Mittag-Leffler mixture law) complete the family. Evaluators compute in
the log domain wherever normalizers can leave double range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .counting import (
    FlightCountSpec,
    FracPoissonSpec,
    count_distribution,
    cumulative_rate,
)
from .specfun import (
    ConvergenceError,
    DomainError,
    MLParams,
    SeriesControl,
    WrightSeriesSpec,
    log_gamma_pos,
    log_mittag_leffler,
    wright_series,
)

__all__ = [
    "PlanarLaw",
    "LineLaw",
    "conditional_density",
    "planar_law",
    "planar_density_const_rate",
    "classical_planar_density",
    "mixture_density",
    "line_density",
    "line_law",
    "classical_line_density",
    "projection_wright_spec",
    "flight_exponent",
    "flight_marginal",
    "flight_unconditional",
    "flight_mixture_density",
]

_TWO_PI = 2.0 * math.pi
_LOG_SQRT_PI = 0.5 * math.log(math.pi)


def _require_speed_horizon(c: float, t: float) -> None:
    if not (c > 0.0 and t > 0.0):
        raise DomainError(f"need c > 0 and t > 0, got c={c}, t={t}")


def conditional_density(n: int, c: float, t: float, r: float) -> float:
    """Endpoint density at radius r given exactly n ≥ 1 direction changes:
    n (c²t² − r²)^{n/2−1} / (2π (ct)^n)."""
    _require_speed_horizon(c, t)
    if int(n) != n or n < 1:
        raise DomainError(f"conditional density needs an integer n >= 1, got {n}")
    if not (0.0 <= r < c * t):
        raise DomainError(f"radius must lie in [0, ct), got r={r}, ct={c * t}")
    n = int(n)
    w2 = c * c * t * t - r * r
    return n * w2 ** (n / 2.0 - 1.0) / (_TWO_PI * (c * t) ** n)


@dataclass(frozen=True)
class PlanarLaw:
    """Unconditional planar law: an absolutely continuous density on the
    open disk of radius ct plus a singular weight on its boundary circle."""

    ac_density: Callable[[float, float], float]
    singular_weight: float
    c: float
    t: float

    def __post_init__(self):
        if not (0.0 <= self.singular_weight <= 1.0):
            raise DomainError(f"singular weight must be a probability, got {self.singular_weight}")


@dataclass(frozen=True)
class LineLaw:
    """Law of the one-dimensional projection: a density on (−ct, ct)
    (the projected boundary atom is part of the density, so it carries
    total mass one)."""

    density: Callable[[float], float]
    c: float
    t: float


def planar_law(spec: FracPoissonSpec, c: float, t: float) -> PlanarLaw:
    """Unconditional law of the planar motion whose direction changes are
    counted by ``spec``.

    The a.c. part evaluates the collapsed mixture
    Λ E_{α,α}((Λ/ct)w) / (2πα ct E_{α,1}(Λ) w) and returns 0 outside the
    open disk; the singular weight is P{N=0} = 1/E_{α,1}(Λ).
    """
    _require_speed_horizon(c, t)
    alpha = spec.alpha
    lam = cumulative_rate(spec.rate, t)
    ct = c * t
    if lam == 0.0:
        return PlanarLaw(ac_density=lambda x, y: 0.0, singular_weight=1.0, c=c, t=t)
    log_norm = log_mittag_leffler(MLParams(alpha, 1.0), lam)
    log_lam = math.log(lam)

    def ac_density(x: float, y: float) -> float:
        w2 = ct * ct - (x * x + y * y)
        if w2 <= 0.0:
            return 0.0
        w = math.sqrt(w2)
        log_value = (
            log_lam
            + log_mittag_leffler(MLParams(alpha, alpha), lam * w / ct)
            - math.log(_TWO_PI * alpha * ct * w)
            - log_norm
        )
        return math.exp(log_value)

    return PlanarLaw(
        ac_density=ac_density,
        singular_weight=math.exp(-log_norm),
        c=c,
        t=t,
    )


def mixture_density(spec: FracPoissonSpec, c: float, t: float, r: float,
                    rel_tol: float = 1e-14, max_terms: int = 500) -> float:
    """Term-by-term mixture Σ_{n≥1} f_n(r)·P{N=n}: the independent
    cross-check for the collapsed form in :func:`planar_law`. Stops when
    a term falls below ``rel_tol`` of the partial sum (cap ``max_terms``)."""
    _require_speed_horizon(c, t)
    if not (0.0 <= r < c * t):
        raise DomainError(f"radius must lie in [0, ct), got {r}")
    dist = count_distribution(spec, t)
    terms = []
    partial = 0.0
    prev = math.inf
    for n in range(1, max_terms + 1):
        term = conditional_density(n, c, t, r) * dist.pmf(n)
        terms.append(term)
        partial += term
        if term < prev and term < rel_tol * partial:
            return math.fsum(terms)
        prev = term
    raise ConvergenceError(
        f"mixture series did not settle in {max_terms} terms", math.fsum(terms), max_terms
    )


def planar_density_const_rate(alpha: float, lam: float, c: float, t: float,
                              x: float, y: float) -> float:
    """The constant-rate expression
    λ E_{α,1}((λ/c)w) / (2πc E_{α,1}(λt) w), w = √(c²t² − x² − y²).

    At α = 1 this is exactly the classical damped-wave density; for
    α < 1 it differs from the mixture law (see the verification
    harness's law-comparison check).
    """
    _require_speed_horizon(c, t)
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    if lam < 0.0:
        raise DomainError(f"rate must be >= 0, got {lam}")
    w2 = c * c * t * t - (x * x + y * y)
    if w2 <= 0.0:
        raise DomainError(f"point ({x}, {y}) lies outside the open disk of radius {c * t}")
    if lam == 0.0:
        return 0.0
    w = math.sqrt(w2)
    log_value = (
        math.log(lam)
        + log_mittag_leffler(MLParams(alpha, 1.0), lam * w / c)
        - math.log(_TWO_PI * c * w)
        - log_mittag_leffler(MLParams(alpha, 1.0), lam * t)
    )
    return math.exp(log_value)


def classical_planar_density(lam: float, c: float, t: float, x: float, y: float) -> float:
    """Damped-wave (planar telegraph) density
    (λ/2πc) e^{−λt + (λ/c)w} / w on the open disk."""
    _require_speed_horizon(c, t)
    if lam < 0.0:
        raise DomainError(f"rate must be >= 0, got {lam}")
    w2 = c * c * t * t - (x * x + y * y)
    if w2 <= 0.0:
        raise DomainError(f"point ({x}, {y}) lies outside the open disk of radius {c * t}")
    w = math.sqrt(w2)
    return lam / (_TWO_PI * c) * math.exp(-lam * t + lam * w / c) / w


def projection_wright_spec(alpha: float) -> WrightSeriesSpec:
    """Parameter rows of the Wright series the projected law compacts to:
    upper (1,1), (1,1/2); lower (1/2,1/2), (1,α)."""
    return WrightSeriesSpec(
        upper=((1.0, 1.0), (1.0, 0.5)),
        lower=((0.5, 0.5), (1.0, float(alpha))),
    )


def line_density(spec: FracPoissonSpec, c: float, t: float, x: float,
                 method: str = "series") -> float:
    """Density of the projection of the planar motion onto a line,
    evaluated at x ∈ (−ct, ct):

        (1/(√π E_{α,1}(Λ))) Σ_k (Λ/ct)^k [Γ(k/2+1)/Γ((k+1)/2)] w^{k−1} / Γ(αk+1)

    with w = √(c²t² − x²). The k = 0 term is the projection of the
    boundary atom, so the series integrates to one on its own.
    ``method`` picks the explicit summation (``"series"``) or the
    compact generalized-Wright evaluation (``"wright"``); the two agree
    to far better than 1e-10 and are cross-checked in the tests.
    """
    _require_speed_horizon(c, t)
    ct = c * t
    if not abs(x) < ct:
        raise DomainError(f"position must lie in (−ct, ct), got {x}")
    alpha = spec.alpha
    lam = cumulative_rate(spec.rate, t)
    w = math.sqrt(ct * ct - x * x)
    if lam == 0.0:
        return 1.0 / (math.pi * w)
    log_norm = log_mittag_leffler(MLParams(alpha, 1.0), lam)
    if method == "wright":
        value = wright_series(
            projection_wright_spec(alpha), lam * w / ct, SeriesControl(rel_tol=1e-14)
        )
        return value * math.exp(-log_norm) / (math.sqrt(math.pi) * w)
    if method != "series":
        raise DomainError(f"unknown line-density method {method!r}")
    log_arg = math.log(lam * w / ct)
    log_prefix = -_LOG_SQRT_PI - math.log(w) - log_norm
    terms = []
    partial = 0.0
    prev = math.inf
    max_terms = 100000
    for k in range(max_terms):
        log_term = (
            log_prefix
            + k * log_arg
            + log_gamma_pos(k / 2.0 + 1.0)
            - log_gamma_pos((k + 1.0) / 2.0)
            - log_gamma_pos(alpha * k + 1.0)
        )
        term = math.exp(log_term)
        terms.append(term)
        partial += term
        if k > 4 and term < prev and term < 1e-14 * partial:
            return math.fsum(terms)
        prev = term
    raise ConvergenceError(
        f"projection series did not settle in {max_terms} terms", math.fsum(terms), max_terms
    )


def line_law(spec: FracPoissonSpec, c: float, t: float, method: str = "series") -> LineLaw:
    """Bundle :func:`line_density` at fixed (spec, c, t) into a LineLaw."""
    return LineLaw(density=lambda x: line_density(spec, c, t, x, method=method), c=c, t=t)


def classical_line_density(lam: float, c: float, t: float, x: float) -> float:
    """Classical projected density at constant rate and α = 1:
    e^{−λt} Σ_k (λ/2c)^k w^{k−1} / Γ((k+1)/2)², an independent series
    evaluation used to cross-check the general projection at α = 1."""
    _require_speed_horizon(c, t)
    if lam < 0.0:
        raise DomainError(f"rate must be >= 0, got {lam}")
    ct = c * t
    if not abs(x) < ct:
        raise DomainError(f"position must lie in (−ct, ct), got {x}")
    w = math.sqrt(ct * ct - x * x)
    if lam == 0.0:
        return 1.0 / (math.pi * w)
    log_arg = math.log(lam * w / (2.0 * c))
    terms = []
    partial = 0.0
    prev = math.inf
    for k in range(100000):
        log_term = -lam * t + k * log_arg - 2.0 * log_gamma_pos((k + 1.0) / 2.0) - math.log(w)
        term = math.exp(log_term)
        terms.append(term)
        partial += term
        if k > 4 and term < prev and term < 1e-14 * partial:
            return math.fsum(terms)
        prev = term
    raise ConvergenceError("projected classical series did not settle", math.fsum(terms), 100000)


def flight_exponent(d: int, n: int, variant: str) -> float:
    if int(d) != d or d < 3:
        raise DomainError(f"flight dimension must be an integer >= 3, got {d}")
    if int(n) != n or n < 0:
        raise DomainError(f"count must be a nonnegative integer, got {n}")
    if variant == "Y":
        return (n + 1) * (d / 2.0 - 1.0)
    if variant == "X":
        return ((n + 1) * (d - 1.0) - 1.0) / 2.0
    raise DomainError(f"variant must be 'X' or 'Y', got {variant!r}")


def flight_marginal(d: int, n: int, c: float, t: float, r: float, variant: str = "Y") -> float:
    """Planar marginal of the d-dimensional random flight after n changes
    of direction: a (c²t² − r²)^{a−1} / (π (ct)^{2a}) with the
    variant-specific exponent a (the printed Gamma-ratio prefactor
    Γ(a+1)/Γ(a) equals a)."""
    _require_speed_horizon(c, t)
    if not (0.0 <= r < c * t):
        raise DomainError(f"radius must lie in [0, ct), got {r}")
    a = flight_exponent(d, n, variant)
    ct = c * t
    return a * (ct * ct - r * r) ** (a - 1.0) / (math.pi * ct ** (2.0 * a))


def flight_unconditional(spec: FlightCountSpec, c: float, t: float, r: float) -> float:
    """Unconditional planar flight law (Y-projection): with γ = d/2 − 1
    and Q = (c²t² − r²)^γ / (ct)^{2γ},

        (c²t² − r²)^{γ−1} / (π (ct)^{2γ}) · E_{γ,γ}(ΛQ) / E_{γ,γ+1}(Λ).
    """
    _require_speed_horizon(c, t)
    if not (0.0 <= r < c * t):
        raise DomainError(f"radius must lie in [0, ct), got {r}")
    gamma_order = spec.d / 2.0 - 1.0
    lam = cumulative_rate(spec.rate, t)
    ct = c * t
    w2 = ct * ct - r * r
    q = w2**gamma_order / ct ** (2.0 * gamma_order)
    if lam == 0.0:
        # Only the n = 0 conditional survives.
        return flight_marginal(spec.d, 0, c, t, r, variant="Y")
    log_value = (
        (gamma_order - 1.0) * math.log(w2)
        - math.log(math.pi)
        - 2.0 * gamma_order * math.log(ct)
        + log_mittag_leffler(MLParams(gamma_order, gamma_order), lam * q)
        - log_mittag_leffler(MLParams(gamma_order, gamma_order + 1.0), lam)
    )
    return math.exp(log_value)


def flight_mixture_density(spec: FlightCountSpec, c: float, t: float, r: float,
                           variant: str = "Y", rel_tol: float = 1e-14,
                           max_terms: int = 200) -> float:
    """Term-by-term mixture Σ_{n≥0} f^d(r; n)·P{N_d = n}; the independent
    cross-check for :func:`flight_unconditional` (Y-variant) and the only
    evaluation offered for the X-variant, whose collapsed form is not
    available."""
    _require_speed_horizon(c, t)
    if not (0.0 <= r < c * t):
        raise DomainError(f"radius must lie in [0, ct), got {r}")
    dist = count_distribution(spec, t)
    terms = []
    partial = 0.0
    prev = math.inf
    for n in range(max_terms):
        term = flight_marginal(spec.d, n, c, t, r, variant=variant) * dist.pmf(n)
        terms.append(term)
        partial += term
        if n > 2 and term < prev and term < rel_tol * partial:
            return math.fsum(terms)
        prev = term
    raise ConvergenceError(
        f"flight mixture did not settle in {max_terms} terms", math.fsum(terms), max_terms
    )
