"""Closed-form density evaluators: conditional, planar, projected, flight."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.polynomial.legendre import leggauss

from fracmotion.counting import FlightCountSpec, FracPoissonSpec, RateFunction
from fracmotion.densities import (
    classical_line_density,
    classical_planar_density,
    conditional_density,
    flight_exponent,
    flight_marginal,
    flight_mixture_density,
    flight_unconditional,
    line_density,
    line_law,
    mixture_density,
    planar_density_const_rate,
    planar_law,
    projection_wright_spec,
)
from fracmotion.specfun import DomainError, MLParams, mittag_leffler, wright_series

E1 = math.e  # E_{1,1}(1)


def const_spec(alpha: float, lam: float) -> FracPoissonSpec:
    return FracPoissonSpec(alpha, RateFunction.constant(lam))


def polar_mass(radial_density, c: float, t: float, n_nodes: int = 256) -> float:
    """2π ∫ r f(r) dr over the open disk via the r = ct·sin φ substitution
    (kills the inverse-square-root edge singularity of every law here)."""
    x, wts = leggauss(n_nodes)
    phi = 0.25 * math.pi * (x + 1.0)
    wq = 0.25 * math.pi * wts
    r = c * t * np.sin(phi)
    vals = np.array([radial_density(float(v)) for v in r])
    return float(np.sum(wq * 2.0 * math.pi * r * vals * c * t * np.cos(phi)))


def line_mass(density, c: float, t: float, n_nodes: int = 256) -> float:
    """∫ over (−ct, ct) via x = ct·sin ψ (same edge-singularity treatment)."""
    xg, wts = leggauss(n_nodes)
    psi = 0.5 * math.pi * xg
    wq = 0.5 * math.pi * wts
    x = c * t * np.sin(psi)
    vals = np.array([density(float(v)) for v in x])
    return float(np.sum(wq * vals * c * t * np.cos(psi)))


# ---------------------------------------------------------------------------
# Conditional density given n changes


def test_conditional_two_changes_at_origin():
    # n=2: f_2(0) = 2·(c²t²)^0 / (2π(ct)²) = 1/π at c=t=1.
    assert conditional_density(2, 1.0, 1.0, 0.0) == pytest.approx(1.0 / math.pi, rel=1e-15)


def test_conditional_rejects_zero_changes():
    with pytest.raises(DomainError):
        conditional_density(0, 1.0, 1.0, 0.5)


def test_conditional_rejects_radius_outside_disk():
    with pytest.raises(DomainError):
        conditional_density(3, 1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        conditional_density(3, 1.0, 1.0, 1.7)


@pytest.mark.parametrize("n", [1, 2, 3, 7])
def test_conditional_integrates_to_one(n):
    mass = polar_mass(lambda r: conditional_density(n, 2.0, 0.5, r), 2.0, 0.5)
    assert mass == pytest.approx(1.0, abs=1e-10)


def test_conditional_one_change_diverges_at_boundary():
    # n=1 has an integrable (c²t²−r²)^{−1/2} edge; still finite inside.
    near = conditional_density(1, 1.0, 1.0, 1.0 - 1e-12)
    assert near > 1e4


# ---------------------------------------------------------------------------
# Unconditional planar law (closed form vs term-by-term mixture)


def test_planar_classical_origin_value():
    # α=1, λ=c=t=1 at the origin: (1/2π)e^{−1+1} = 1/(2π).
    law = planar_law(const_spec(1.0, 1.0), 1.0, 1.0)
    assert law.ac_density(0.0, 0.0) == pytest.approx(1.0 / (2.0 * math.pi), rel=1e-14)


def test_planar_singular_weight_is_reciprocal_normalizer():
    law = planar_law(const_spec(0.5, 1.0), 1.0, 1.0)
    expected = 1.0 / mittag_leffler(MLParams(0.5, 1.0), 1.0)
    assert law.singular_weight == pytest.approx(expected, rel=1e-13)
    law1 = planar_law(const_spec(1.0, 1.0), 1.0, 1.0)
    assert law1.singular_weight == pytest.approx(1.0 / E1, rel=1e-14)


def test_planar_matches_classical_at_alpha_one():
    law = planar_law(const_spec(1.0, 2.0), 1.5, 0.8)
    for r in np.linspace(0.0, 1.19, 20):
        expected = classical_planar_density(2.0, 1.5, 0.8, float(r), 0.0)
        assert law.ac_density(float(r), 0.0) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("alpha", [0.5, 0.8, 1.0])
@pytest.mark.parametrize("lam", [0.5, 2.0])
def test_planar_closed_form_equals_mixture(alpha, lam):
    spec = const_spec(alpha, lam)
    law = planar_law(spec, 1.0, 1.0)
    for r in np.linspace(0.0, 0.995, 25):
        mix = mixture_density(spec, 1.0, 1.0, float(r))
        assert law.ac_density(float(r), 0.0) == pytest.approx(mix, rel=1e-12)


@pytest.mark.parametrize("alpha,lam", [(0.5, 1.0), (1.0, 2.0), (0.7, 0.5)])
def test_planar_total_mass_is_one(alpha, lam):
    law = planar_law(const_spec(alpha, lam), 1.0, 1.0)
    ac = polar_mass(lambda r: law.ac_density(r, 0.0), 1.0, 1.0)
    assert ac + law.singular_weight == pytest.approx(1.0, abs=1e-10)


def test_planar_zero_outside_support_and_radially_symmetric():
    law = planar_law(const_spec(0.6, 1.0), 1.0, 1.0)
    assert law.ac_density(1.0, 0.0) == 0.0
    assert law.ac_density(2.0, 3.0) == 0.0
    for r, theta in [(0.3, 0.7), (0.8, 2.1), (0.99, 4.0)]:
        on_axis = law.ac_density(r, 0.0)
        rotated = law.ac_density(r * math.cos(theta), r * math.sin(theta))
        assert rotated == pytest.approx(on_axis, rel=1e-13)


def test_planar_zero_rate_is_pure_atom():
    law = planar_law(const_spec(0.5, 0.0), 1.0, 1.0)
    assert law.singular_weight == 1.0
    assert law.ac_density(0.3, 0.1) == 0.0


def test_planar_law_with_inhomogeneous_rate():
    # Only Λ(t) matters: power rate with Λ(1) = 1 must reproduce const:1.
    spec_pow = FracPoissonSpec(0.5, RateFunction.power(2.0, 1.0))  # Λ(t)=t²
    spec_const = const_spec(0.5, 1.0)
    law_pow = planar_law(spec_pow, 1.0, 1.0)
    law_const = planar_law(spec_const, 1.0, 1.0)
    for r in (0.0, 0.4, 0.9):
        assert law_pow.ac_density(r, 0.0) == pytest.approx(
            law_const.ac_density(r, 0.0), rel=1e-13
        )


# ---------------------------------------------------------------------------
# The separate constant-rate expression


def test_const_rate_form_matches_classical_at_alpha_one():
    for r in np.linspace(0.0, 0.95, 20):
        got = planar_density_const_rate(1.0, 1.0, 1.0, 1.0, float(r), 0.0)
        expected = classical_planar_density(1.0, 1.0, 1.0, float(r), 0.0)
        assert got == pytest.approx(expected, rel=1e-12)


def test_const_rate_form_origin_alpha_half():
    # w = ct at the origin: λ E_{α,1}(λt) / (2πc·ct·E_{α,1}(λt)) = 1/(2π·ct·c)·λ...
    # with λ=c=t=1 everything cancels to 1/(2π).
    got = planar_density_const_rate(0.5, 1.0, 1.0, 1.0, 0.0, 0.0)
    assert got == pytest.approx(1.0 / (2.0 * math.pi), rel=1e-13)


def test_const_rate_form_differs_from_mixture_below_alpha_one():
    # A genuinely different function for α<1 — the difference is structural,
    # not a numerical artifact, and must stay visibly large.
    spec = const_spec(0.5, 1.0)
    r = 0.3
    mix = mixture_density(spec, 1.0, 1.0, r)
    single = planar_density_const_rate(0.5, 1.0, 1.0, 1.0, r, 0.0)
    assert abs(single - mix) / mix > 0.1


def test_const_rate_form_domain_errors():
    with pytest.raises(DomainError):
        planar_density_const_rate(0.5, 1.0, 1.0, 1.0, 1.0, 0.0)
    with pytest.raises(DomainError):
        planar_density_const_rate(1.5, 1.0, 1.0, 1.0, 0.1, 0.0)


# ---------------------------------------------------------------------------
# Line projection


def test_line_zero_rate_is_arcsine_density():
    spec = const_spec(0.5, 0.0)
    for x in (-0.7, 0.0, 0.5):
        expected = 1.0 / (math.pi * math.sqrt(1.0 - x * x))
        assert line_density(spec, 1.0, 1.0, x) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("alpha,lam", [(0.5, 1.0), (0.7, 2.0), (1.0, 1.0)])
def test_line_series_and_wright_paths_agree(alpha, lam):
    spec = const_spec(alpha, lam)
    for x in np.linspace(-0.95, 0.95, 15):
        series = line_density(spec, 1.0, 1.0, float(x), method="series")
        wright = line_density(spec, 1.0, 1.0, float(x), method="wright")
        assert wright == pytest.approx(series, rel=1e-10)


def test_line_alpha_one_matches_classical_series():
    spec = const_spec(1.0, 1.5)
    for x in np.linspace(-0.9, 0.9, 12):
        got = line_density(spec, 1.0, 1.0, float(x))
        expected = classical_line_density(1.5, 1.0, 1.0, float(x))
        assert got == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("alpha,lam", [(0.5, 1.0), (1.0, 2.0)])
def test_line_density_integrates_to_one(alpha, lam):
    law = line_law(const_spec(alpha, lam), 1.0, 1.0)
    assert line_mass(law.density, 1.0, 1.0) == pytest.approx(1.0, abs=1e-8)


def test_line_projection_consistent_with_planar_law():
    # Marginalizing the planar law over y (plus the projected atom) must
    # reproduce the projection series.
    spec = const_spec(0.7, 1.0)
    law = planar_law(spec, 1.0, 1.0)
    xg, wts = leggauss(200)
    for x in (0.0, 0.3, 0.8):
        b = math.sqrt(1.0 - x * x)
        psi = 0.5 * math.pi * xg
        wq = 0.5 * math.pi * wts
        y = b * np.sin(psi)
        vals = np.array([law.ac_density(x, float(v)) for v in y])
        ac_part = float(np.sum(wq * vals * b * np.cos(psi)))
        atom_part = law.singular_weight / (math.pi * b)
        expected = line_density(spec, 1.0, 1.0, x)
        assert ac_part + atom_part == pytest.approx(expected, rel=1e-6)


def test_line_wright_spec_rows():
    spec = projection_wright_spec(0.7)
    assert spec.upper == ((1.0, 1.0), (1.0, 0.5))
    assert spec.lower == ((0.5, 0.5), (1.0, 0.7))
    # k=0 term of the compact form is 1/Γ(1/2) = 1/√π.
    assert wright_series(spec, 0.0) == pytest.approx(1.0 / math.sqrt(math.pi), rel=1e-14)


def test_line_domain_errors():
    spec = const_spec(0.5, 1.0)
    with pytest.raises(DomainError):
        line_density(spec, 1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        line_density(spec, 1.0, 1.0, -1.2)
    with pytest.raises(DomainError):
        line_density(spec, 1.0, 1.0, 0.5, method="quadrature")


# ---------------------------------------------------------------------------
# Random-flight marginals and their mixture


def test_flight_exponents():
    assert flight_exponent(4, 0, "Y") == pytest.approx(1.0)
    assert flight_exponent(4, 1, "Y") == pytest.approx(2.0)
    assert flight_exponent(3, 0, "X") == pytest.approx(0.5)
    assert flight_exponent(5, 2, "X") == pytest.approx(5.5)
    with pytest.raises(DomainError):
        flight_exponent(2, 0, "Y")
    with pytest.raises(DomainError):
        flight_exponent(4, 0, "Z")


def test_flight_marginal_d4_examples():
    # d=4, n=0 (a=1): uniform on the disk, 1/(π c²t²).
    assert flight_marginal(4, 0, 1.0, 1.0, 0.5) == pytest.approx(1.0 / math.pi, rel=1e-14)
    # d=4, n=1 (a=2) at the origin: 2(c²t²)/(π(ct)⁴) = 2/π at ct=1.
    assert flight_marginal(4, 1, 1.0, 1.0, 0.0) == pytest.approx(2.0 / math.pi, rel=1e-14)


@pytest.mark.parametrize("d", [3, 4, 5])
@pytest.mark.parametrize("n", [0, 1, 2])
@pytest.mark.parametrize("variant", ["Y", "X"])
def test_flight_marginal_integrates_to_one(d, n, variant):
    mass = polar_mass(lambda r: flight_marginal(d, n, 1.0, 2.0, r, variant), 1.0, 2.0)
    assert mass == pytest.approx(1.0, abs=1e-8)


def test_flight_unconditional_d4_closed_form():
    # d=4 (γ=1): E_{1,1}(x)=e^x and E_{1,2}(Λ)=(e^Λ−1)/Λ give
    # (Λ/(π c²t²)) e^{ΛQ} / (e^Λ − 1), Q = (c²t²−r²)/(ct)².
    spec = FlightCountSpec(4, RateFunction.constant(1.0))
    for r in np.linspace(0.0, 0.99, 30):
        q = 1.0 - r * r
        expected = math.exp(q) / (math.pi * (math.e - 1.0))
        assert flight_unconditional(spec, 1.0, 1.0, float(r)) == pytest.approx(
            expected, rel=1e-13
        )
    # Origin value e/(π(e−1)).
    assert flight_unconditional(spec, 1.0, 1.0, 0.0) == pytest.approx(
        math.e / (math.pi * (math.e - 1.0)), rel=1e-14
    )


@pytest.mark.parametrize("d", [3, 4, 5])
def test_flight_unconditional_equals_mixture(d):
    spec = FlightCountSpec(d, RateFunction.constant(1.0))
    for r in np.linspace(0.0, 0.99, 15):
        mix = flight_mixture_density(spec, 1.0, 1.0, float(r))
        assert flight_unconditional(spec, 1.0, 1.0, float(r)) == pytest.approx(
            mix, rel=1e-12
        )


def test_flight_unconditional_total_mass():
    spec = FlightCountSpec(5, RateFunction.constant(2.0))
    mass = polar_mass(lambda r: flight_unconditional(spec, 1.0, 1.0, r), 1.0, 1.0)
    assert mass == pytest.approx(1.0, abs=1e-8)


def test_flight_zero_rate_reduces_to_single_marginal():
    spec = FlightCountSpec(4, RateFunction.constant(0.0))
    for r in (0.0, 0.5, 0.9):
        assert flight_unconditional(spec, 1.0, 1.0, r) == pytest.approx(
            flight_marginal(4, 0, 1.0, 1.0, r), rel=1e-14
        )


def test_flight_domain_errors():
    spec = FlightCountSpec(4, RateFunction.constant(1.0))
    with pytest.raises(DomainError):
        flight_unconditional(spec, 1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        flight_marginal(4, 0, 1.0, 1.0, -0.1)


# ---------------------------------------------------------------------------
# Property checks


@settings(max_examples=60, deadline=None)
@given(
    alpha=st.floats(min_value=0.3, max_value=1.0),
    lam=st.floats(min_value=0.0, max_value=5.0),
    r=st.floats(min_value=0.0, max_value=0.999),
)
def test_planar_density_nonnegative_inside_disk(alpha, lam, r):
    law = planar_law(const_spec(alpha, lam), 1.0, 1.0)
    assert law.ac_density(r, 0.0) >= 0.0
    assert 0.0 <= law.singular_weight <= 1.0


@settings(max_examples=40, deadline=None)
@given(
    alpha=st.floats(min_value=0.4, max_value=1.0),
    lam=st.floats(min_value=0.1, max_value=3.0),
    x=st.floats(min_value=-0.99, max_value=0.99),
)
def test_line_density_positive_and_symmetric(alpha, lam, x):
    spec = const_spec(alpha, lam)
    val = line_density(spec, 1.0, 1.0, x)
    assert val > 0.0
    assert line_density(spec, 1.0, 1.0, -x) == pytest.approx(val, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(
    d=st.integers(min_value=3, max_value=8),
    n=st.integers(min_value=0, max_value=20),
    r=st.floats(min_value=0.0, max_value=0.999),
)
def test_flight_marginal_nonnegative(d, n, r):
    assert flight_marginal(d, n, 1.0, 1.0, r, "Y") >= 0.0
    assert flight_marginal(d, n, 1.0, 1.0, r, "X") >= 0.0
