"""Log-scaled simulation of the linear recurrence h_t = W h_{t-1} + x_t.

States are carried as h = e^S v with unit v, so exponential growth or decay
never overflows: one step computes w = W v + e^{-S} x_t, then folds ||w||
into S and renormalizes.  The same batched kernel serves single trajectories
(one column) and Monte Carlo sweeps (one column per input trial), so a
1-matrix/1-input Monte Carlo run reproduces the plain trajectory bit for bit.

Power norms log||W^k x|| use the same renormalized iteration without the
input injection; W^k itself is never formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import parallel
from .ensemble import EnsembleKind, EnsembleSpec, SquareMatrix, sample
from .rng import INPUT_STREAM, MATRIX_STREAM, derive_rng

__all__ = [
    "LogScaledState",
    "MonteCarloConfig",
    "TrajectoryStats",
    "diagonal_trajectory",
    "hidden_state_trajectory",
    "matrix_power_norms",
    "monte_carlo",
]

_DIAG_KINDS = frozenset(
    {EnsembleKind.DIAG_FROM_DENSE, EnsembleKind.DIAG_UNIFORM_CIRCLE, EnsembleKind.DIAG_UNIFORM_DISK}
)


@dataclass(frozen=True)
class LogScaledState:
    """A hidden state h = e^{log_scale} * direction with unit-norm direction.

    The exact zero state is flagged instead (log_scale = -inf, zero direction).
    """

    direction: np.ndarray = field(repr=False)
    log_scale: float

    def __post_init__(self) -> None:
        nrm = float(np.linalg.norm(self.direction))
        if self.is_zero:
            if nrm != 0.0:
                raise ValueError("zero state must have an exactly zero direction")
        elif abs(nrm - 1.0) > 1e-12:
            raise ValueError(f"direction must have unit norm within 1e-12, got {nrm!r}")

    @property
    def is_zero(self) -> bool:
        return self.log_scale == -math.inf

    @classmethod
    def from_vector(cls, h: np.ndarray) -> "LogScaledState":
        nrm = float(np.linalg.norm(h))
        if nrm == 0.0:
            return cls(direction=np.zeros_like(h), log_scale=-math.inf)
        return cls(direction=h / nrm, log_scale=math.log(nrm))

    def to_vector(self) -> np.ndarray:
        if self.is_zero:
            return np.zeros_like(self.direction)
        return math.exp(self.log_scale) * self.direction


def _as_operator(W):
    """Normalize matrix input to (apply, n, dtype): apply maps (n, m) -> (n, m)."""
    if isinstance(W, SquareMatrix):
        entries = W.entries.real.copy() if W.real_entries else W.entries
    else:
        entries = np.asarray(W)
    if entries.ndim == 1:
        d = entries
        return (lambda V: d[:, None] * V), len(d), d.dtype
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise ValueError(f"expected a square matrix or diagonal vector, got shape {entries.shape}")
    return (lambda V: entries @ V), entries.shape[0], entries.dtype


def _column_norms(V: np.ndarray) -> np.ndarray:
    return np.sqrt(np.abs(V.conj() * V).sum(axis=0).real)


def _power_norms_batched(apply_w, X0: np.ndarray, k_max: int) -> np.ndarray:
    """log||W^k x_j|| for k = 0..k_max; X0 has one column per x_j."""
    m = X0.shape[1]
    out = np.empty((m, k_max + 1))
    nrm = _column_norms(X0)
    with np.errstate(divide="ignore"):  # zero input -> -inf log norm, by design
        out[:, 0] = np.log(nrm)
    V = X0 / np.where(nrm == 0.0, 1.0, nrm)
    S = out[:, 0].copy()
    for k in range(1, k_max + 1):
        V = apply_w(V)
        nrm = _column_norms(V)
        with np.errstate(divide="ignore"):
            S = S + np.log(nrm)
        V = V / np.where(nrm == 0.0, 1.0, nrm)
        out[:, k] = S
    return out


def _hidden_batched(apply_w, X: np.ndarray) -> np.ndarray:
    """log||h_t|| for t = 1..t_max; X is (t_max, n, m), h_0 = 0.

    Each step rebases the state and the incoming input on a = max(S, log||x||)
    before adding, so both rescale factors are <= 1: a huge state makes the
    input underflow harmlessly, a decayed state makes the input take over,
    and neither direction can overflow.
    """
    t_max, _, m = X.shape
    out = np.empty((m, t_max))
    nrm = _column_norms(X[0])  # h_1 = x_1 since h_0 = 0
    with np.errstate(divide="ignore"):
        S = np.log(nrm)
    V = X[0] / np.where(nrm == 0.0, 1.0, nrm)
    out[:, 0] = S
    for t in range(1, t_max):
        xnrm = _column_norms(X[t])
        with np.errstate(divide="ignore"):
            L = np.log(xnrm)
        xhat = X[t] / np.where(xnrm == 0.0, 1.0, xnrm)
        a = np.maximum(S, L)
        dead = np.isneginf(a)  # zero state and zero input: stays zero
        safe_a = np.where(dead, 0.0, a)
        s_state = np.where(dead, 0.0, np.exp(S - safe_a))
        s_input = np.where(dead, 0.0, np.exp(L - safe_a))
        w = s_state * apply_w(V) + s_input * xhat
        nrm = _column_norms(w)
        with np.errstate(divide="ignore"):
            S = np.where(dead, -np.inf, safe_a + np.log(nrm))
        V = w / np.where(nrm == 0.0, 1.0, nrm)
        out[:, t] = S
    return out


def matrix_power_norms(W, x: np.ndarray, k_max: int) -> np.ndarray:
    """log||W^k x||_2 for k = 0..k_max, via renormalized iteration (O(k n^2))."""
    if k_max < 0:
        raise ValueError(f"k_max must be nonnegative, got {k_max}")
    apply_w, n, _ = _as_operator(W)
    x = np.asarray(x)
    if x.shape != (n,):
        raise ValueError(f"input vector must have shape ({n},), got {x.shape}")
    return _power_norms_batched(apply_w, x[:, None], k_max)[0]


def hidden_state_trajectory(W, inputs: np.ndarray) -> np.ndarray:
    """log||h_t||_2 for t = 1..len(inputs), starting from h_0 = 0."""
    apply_w, n, _ = _as_operator(W)
    X = np.asarray(inputs)
    if X.ndim != 2 or X.shape[1] != n:
        raise ValueError(f"inputs must have shape (t_max, {n}), got {X.shape}")
    if X.shape[0] == 0:
        return np.empty(0)
    return _hidden_batched(apply_w, X[:, :, None])[0]


def diagonal_trajectory(diag: np.ndarray, inputs: np.ndarray) -> np.ndarray:
    """Hidden-state trajectory for a diagonal recurrent matrix (O(n) per step)."""
    d = np.asarray(diag)
    if d.ndim != 1:
        raise ValueError(f"diag must be a vector, got shape {d.shape}")
    return hidden_state_trajectory(d, inputs)


@dataclass(frozen=True)
class MonteCarloConfig:
    """One Monte Carlo sweep: which ensemble, which observable, how many trials.

    ``mode`` is "hidden" (t = 1..steps of the driven recurrence) or "powers"
    (k = 0..steps of log||W^k x||).  Inputs are i.i.d. real standard normal
    vectors by default, matching the bound's x ~ N(0, I_n) setup even for
    complex matrices; set input_law="complex" for unit-variance complex
    normal inputs.
    """

    ensemble: EnsembleSpec
    mode: str = "hidden"
    steps: int = 100
    matrix_trials: int = 1
    input_trials: int = 1
    input_law: str = "real"

    def __post_init__(self) -> None:
        if self.mode not in ("hidden", "powers"):
            raise ValueError(f"mode must be 'hidden' or 'powers', got {self.mode!r}")
        if self.input_law not in ("real", "complex"):
            raise ValueError(f"input_law must be 'real' or 'complex', got {self.input_law!r}")
        if self.steps < 0 or (self.mode == "hidden" and self.steps < 1):
            raise ValueError(f"steps must be positive, got {self.steps}")
        if self.matrix_trials < 1 or self.input_trials < 1:
            raise ValueError("matrix_trials and input_trials must be at least 1")


@dataclass(frozen=True)
class TrajectoryStats:
    """Per-step mean/std of log norms over all (matrix, input) trials.

    ``t`` is the step axis (k = 0.. for powers, t = 1.. for hidden states);
    ``curves`` optionally holds every trial's log-norm curve, one row per
    (matrix-major, input-minor) trial.
    """

    mode: str
    t: np.ndarray
    mean_log_norm: np.ndarray
    std_log_norm: np.ndarray
    trials: int
    curves: np.ndarray | None = None


def _draw_inputs(rng: np.random.Generator, shape: tuple[int, ...], law: str) -> np.ndarray:
    if law == "real":
        return rng.standard_normal(shape)
    z1 = rng.standard_normal(shape)
    z2 = rng.standard_normal(shape)
    return (z1 + 1j * z2) / math.sqrt(2.0)


def monte_carlo(config: MonteCarloConfig, threads: int = 1, keep_curves: bool = False) -> TrajectoryStats:
    """Run the configured sweep; deterministic for a fixed config and any thread count.

    Matrix trial i uses stream (seed, matrix, i); input trial j of matrix i
    uses stream (seed, input, i, j).  Curves are merged matrix-major, then
    reduced to per-step mean/std of the log norms.
    """
    spec = config.ensemble
    n, seed = spec.n, spec.seed
    t_len = config.steps + 1 if config.mode == "powers" else config.steps

    def run_matrix(i: int) -> np.ndarray:
        W = sample(spec, derive_rng(seed, MATRIX_STREAM, i))
        apply_w = _as_operator(np.diagonal(W.entries).copy() if spec.kind in _DIAG_KINDS else W)[0]
        m = config.input_trials
        if config.mode == "powers":
            X0 = np.stack(
                [_draw_inputs(derive_rng(seed, INPUT_STREAM, i, j), (n,), config.input_law) for j in range(m)],
                axis=1,
            )
            return _power_norms_batched(apply_w, X0, config.steps)
        X = np.stack(
            [
                _draw_inputs(derive_rng(seed, INPUT_STREAM, i, j), (config.steps, n), config.input_law)
                for j in range(m)
            ],
            axis=2,
        )
        return _hidden_batched(apply_w, X)

    results = parallel.map_indexed(run_matrix, config.matrix_trials, threads)
    errors = [(i, r) for i, r in enumerate(results) if isinstance(r, Exception)]
    if errors:
        i, exc = errors[0]
        raise RuntimeError(f"matrix trial {i} failed: {exc}") from exc
    curves = np.concatenate(results, axis=0)
    trials = curves.shape[0]
    std = curves.std(axis=0, ddof=1) if trials > 1 else np.zeros(t_len)
    axis = np.arange(0, config.steps + 1) if config.mode == "powers" else np.arange(1, config.steps + 1)
    return TrajectoryStats(
        mode=config.mode,
        t=axis,
        mean_log_norm=curves.mean(axis=0),
        std_log_norm=std,
        trials=trials,
        curves=curves if keep_curves else None,
    )
