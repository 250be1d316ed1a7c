"""Inhomogeneous fractional Poisson counting and finite-velocity planar motion.

The package is organized bottom-up:

- :mod:`fracmotion.specfun` -- Gamma / Mittag-Leffler / Wright / Bessel
  series evaluators everything else is built from.
- :mod:`fracmotion.counting` -- the fractional counting family, its
  state-dependent and flight-adapted variants, and exact samplers.
- :mod:`fracmotion.densities` -- closed-form planar and projected laws.
- :mod:`fracmotion.motion` -- Monte Carlo simulation of the planar
  motions the counting processes drive.
- :mod:`fracmotion.verify` -- the checks reconciling Monte Carlo output
  with the analytic laws, plus the finite-difference validations.
- :mod:`fracmotion.cli` -- command-line entry point.
"""

__version__ = "0.1.0"
