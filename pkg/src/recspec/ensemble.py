"""Initialization ensembles for the recurrent weight matrix.

Samples the dense Gaussian ("Glorot"-style) initializations, the rescaled
variant that shifts the spectral radius below one, and the diagonal baselines
used for spectrum-matched comparisons.  Also hosts the deterministic scale
machinery: the logarithmic edge correction ``rho_n``, the Gumbel law of the
radius fluctuation, and the rescale factor built from its quantiles.

All matrices are stored as complex128 arrays; real ensembles carry exactly
zero imaginary parts so a single code path serves both fields downstream.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .rng import derive_rng

__all__ = [
    "EnsembleKind",
    "EnsembleSpec",
    "ScalarField",
    "SquareMatrix",
    "default_ap",
    "gumbel_cdf",
    "gumbel_quantile",
    "rescale_factor",
    "rho_n",
    "sample",
]

#: Euler-Mascheroni constant (mean of the standard Gumbel distribution).
EULER_GAMMA = float(np.euler_gamma)

#: Standard deviation of the standard Gumbel distribution, pi/sqrt(6).
GUMBEL_STD = math.pi / math.sqrt(6.0)


class ScalarField(enum.Enum):
    """Scalar field of the ensemble: real or complex matrix entries."""

    REAL = "real"
    COMPLEX = "complex"

    @property
    def delta_r(self) -> int:
        """Indicator that the field is real; enters every radius formula."""
        return 1 if self is ScalarField.REAL else 0

    @classmethod
    def parse(cls, name: str) -> "ScalarField":
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown scalar field {name!r}; expected 'real' or 'complex'") from None


class EnsembleKind(enum.Enum):
    """Which initialization to sample."""

    GLOROT = "glorot"
    GLOROT_HALF = "glorot-half"
    RESCALED = "rescaled"
    DIAG_FROM_DENSE = "diag-dense"
    DIAG_UNIFORM_CIRCLE = "diag-circle"
    DIAG_UNIFORM_DISK = "diag-disk"

    @classmethod
    def parse(cls, name: str) -> "EnsembleKind":
        try:
            return cls(name.lower())
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown ensemble {name!r}; expected one of: {valid}") from None


# Dense Gaussian kinds whose real-field samples have exactly real entries.
_DENSE_KINDS = frozenset({EnsembleKind.GLOROT, EnsembleKind.GLOROT_HALF, EnsembleKind.RESCALED})


def rho_n(n: int) -> float:
    """Logarithmic edge correction log(n / (2 pi (log n)^2)).

    Defined for any n >= 2 and returned as-is even when negative; the
    asymptotic rescaling formulas require a positive value (n >= 164) and
    validate it themselves.
    """
    if n < 2:
        raise ValueError(f"width must be at least 2, got {n}")
    ln = math.log(n)
    return math.log(n / (2.0 * math.pi * ln * ln))


def gumbel_cdf(x: float, field: ScalarField) -> float:
    """CDF of the radius-fluctuation Gumbel law: exp(-(1 - delta_R/2) e^{-x})."""
    c = 1.0 - 0.5 * field.delta_r
    return math.exp(-c * math.exp(-x))


def gumbel_quantile(p: float, field: ScalarField) -> float:
    """Inverse of :func:`gumbel_cdf`: x = -log(-log(p) / (1 - delta_R/2))."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile level must lie strictly in (0, 1), got {p}")
    c = 1.0 - 0.5 * field.delta_r
    return -math.log(-math.log(p) / c)


def default_ap(field: ScalarField) -> float:
    """Default Gumbel offset: one standard deviation above the Gumbel mean.

    gamma - delta_R log 2 + pi/sqrt(6); its CDF level is ~0.856 in both
    fields, i.e. the rescaled radius stays inside the unit disk with
    probability ~0.86 asymptotically.
    """
    return EULER_GAMMA - field.delta_r * math.log(2.0) + GUMBEL_STD


def rescale_factor(n: int, field: ScalarField, a_p: float | None = None) -> float:
    """Deterministic divisor applied to Glorot entries by the rescaled scheme.

    s = 1 + sqrt(rho_n/4n) + a_p / sqrt(4 rho_n n), the asymptotic radius
    level at Gumbel quantile exceedance a_p.  Requires rho_n(n) > 0; below
    that width the radius asymptotics do not apply and we refuse to
    extrapolate.
    """
    rho = rho_n(n)
    if rho <= 0.0:
        raise ValueError(
            f"width {n} too small for asymptotic rescaling (rho_n = {rho:.4f} <= 0; need n >= 164)"
        )
    if a_p is None:
        a_p = default_ap(field)
    return 1.0 + math.sqrt(rho / (4.0 * n)) + a_p / math.sqrt(4.0 * rho * n)


@dataclass(frozen=True)
class EnsembleSpec:
    """Everything needed to draw one matrix: kind, field, width, offset, seed."""

    kind: EnsembleKind
    field: ScalarField
    n: int
    a_p: float | None = None  # Gumbel offset; RESCALED only, None = default_ap
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"width must be at least 2, got {self.n}")
        if self.kind in (EnsembleKind.DIAG_UNIFORM_CIRCLE, EnsembleKind.DIAG_UNIFORM_DISK):
            if self.field is not ScalarField.COMPLEX:
                raise ValueError(f"{self.kind.value} requires the complex field")
        if self.a_p is not None and self.kind is not EnsembleKind.RESCALED:
            raise ValueError("a_p only applies to the rescaled ensemble")

    def with_seed(self, seed: int) -> "EnsembleSpec":
        return replace(self, seed=seed)

    def resolved_ap(self) -> float | None:
        """The Gumbel offset actually used (None unless RESCALED)."""
        if self.kind is not EnsembleKind.RESCALED:
            return None
        return self.a_p if self.a_p is not None else default_ap(self.field)


@dataclass(frozen=True)
class SquareMatrix:
    """A sampled n-by-n recurrent weight matrix (complex storage).

    ``real_entries`` records that the imaginary parts are exactly zero (dense
    real-field samples); ``conjugate_spectrum`` that eigenvalues come in
    conjugate pairs, which also holds for diagonals built from a real dense
    sample's eigenvalues.
    """

    n: int
    entries: np.ndarray = field(repr=False)
    field_: ScalarField = ScalarField.COMPLEX
    kind: EnsembleKind = EnsembleKind.GLOROT

    def __post_init__(self) -> None:
        e = self.entries
        if e.shape != (self.n, self.n) or e.dtype != np.complex128:
            raise ValueError(f"entries must be complex128 of shape ({self.n}, {self.n})")
        if not np.all(np.isfinite(e.view(np.float64))):
            raise ValueError("matrix entries must be finite")

    @property
    def real_entries(self) -> bool:
        return self.field_ is ScalarField.REAL and self.kind in _DENSE_KINDS

    @property
    def conjugate_spectrum(self) -> bool:
        return self.field_ is ScalarField.REAL


def _dense_glorot(rng: np.random.Generator, n: int, field: ScalarField) -> np.ndarray:
    """Dense Gaussian entries with E|W_ij|^2 = 1/n.

    Real: N(0, 1/n).  Complex: (Z1 + i Z2)/sqrt(2) with Z1, Z2 ~ N(0, 1/n),
    drawn as two consecutive (n, n) blocks (real part first).
    """
    scale = 1.0 / math.sqrt(n)
    if field is ScalarField.REAL:
        return (rng.standard_normal((n, n)) * scale).astype(np.complex128)
    z1 = rng.standard_normal((n, n))
    z2 = rng.standard_normal((n, n))
    return (z1 + 1j * z2) * (scale / math.sqrt(2.0))


def _sample_entries(spec: EnsembleSpec, rng: np.random.Generator) -> np.ndarray:
    kind, n = spec.kind, spec.n
    if kind is EnsembleKind.GLOROT:
        return _dense_glorot(rng, n, spec.field)
    if kind is EnsembleKind.GLOROT_HALF:
        # variance 1/(2n): exactly the Glorot draw divided by sqrt(2)
        return _dense_glorot(rng, n, spec.field) / math.sqrt(2.0)
    if kind is EnsembleKind.RESCALED:
        s = rescale_factor(n, spec.field, spec.a_p)
        return _dense_glorot(rng, n, spec.field) / s
    if kind is EnsembleKind.DIAG_FROM_DENSE:
        dense = _dense_glorot(rng, n, spec.field)
        if spec.field is ScalarField.REAL:
            eig = np.linalg.eigvals(dense.real)
        else:
            eig = np.linalg.eigvals(dense)
        return np.diag(eig.astype(np.complex128))
    if kind is EnsembleKind.DIAG_UNIFORM_CIRCLE:
        theta = rng.uniform(0.0, 2.0 * math.pi, n)
        return np.diag(np.exp(1j * theta))
    if kind is EnsembleKind.DIAG_UNIFORM_DISK:
        # uniform density on the unit disk: angle uniform, radius sqrt(U)
        theta = rng.uniform(0.0, 2.0 * math.pi, n)
        radius = np.sqrt(rng.uniform(0.0, 1.0, n))
        return np.diag(radius * np.exp(1j * theta))
    raise ValueError(f"unsupported ensemble kind {kind!r}")


def sample(spec: EnsembleSpec, rng: np.random.Generator | None = None) -> SquareMatrix:
    """Draw one matrix from the ensemble.

    Deterministic for a fixed spec: the stream is derived from ``spec.seed``
    unless an explicit generator is supplied (the Monte Carlo drivers pass
    per-trial derived streams).
    """
    if rng is None:
        rng = derive_rng(spec.seed)
    entries = np.ascontiguousarray(_sample_entries(spec, rng))
    return SquareMatrix(n=spec.n, entries=entries, field_=spec.field, kind=spec.kind)
