"""Spectral-radius statistics and stability analysis of random recurrent initializations.

The package samples dense and diagonal random initializations of a linear
recurrent weight matrix, computes their spectra and radius statistics,
evaluates closed-form moment bounds for the hidden-state norm, and simulates
the recurrence itself in overflow-safe log scale.  Everything is seeded and
reproducible; the ``recspec`` CLI exposes each experiment and writes CSV/JSON
artifacts.

Modules
-------
ensemble
    Initialization samplers (Glorot-style dense, rescaled, diagonal variants)
    plus the Gumbel statistics behind the rescaled scheme.
spectral
    Dense non-Hermitian eigenvalue computation, radius Monte Carlo and the
    closed-form radius asymptotics.
moments
    Log-domain evaluation of hidden-state moment lower bounds and their
    double-scaling asymptotics.
realcase
    Real-ensemble eigenvalue densities (real line vs complex plane) and the
    quadrature-based absolute-moment evaluation.
propagation
    Log-scaled simulation of the linear recurrence and its Monte Carlo driver.
cli
    The ``recspec`` command-line front end.
"""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("recspec")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.0.0+unknown"

from .ensemble import (
    EnsembleKind,
    EnsembleSpec,
    ScalarField,
    SquareMatrix,
    default_ap,
    gumbel_cdf,
    gumbel_quantile,
    rescale_factor,
    rho_n,
    sample,
)
from .spectral import (
    SpectrumResult,
    circular_law_distance,
    classify_real,
    eigenvalues,
    expected_radius_asymptotic,
    prob_radius_below,
    radius_statistics,
)

__all__ = [
    "EnsembleKind",
    "EnsembleSpec",
    "ScalarField",
    "SquareMatrix",
    "SpectrumResult",
    "__version__",
    "circular_law_distance",
    "classify_real",
    "default_ap",
    "eigenvalues",
    "expected_radius_asymptotic",
    "gumbel_cdf",
    "gumbel_quantile",
    "prob_radius_below",
    "radius_statistics",
    "rescale_factor",
    "rho_n",
    "sample",
]
