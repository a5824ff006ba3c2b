"""Discrete memoryless channels and their mutual information.

A :class:`Channel` stores the column-stochastic matrix ``Q`` with
``Q[i, j] = Pr(Y = y_i | X = x_j)``: rows index outputs, columns index inputs.
Text files and :func:`channel_from_rows` use the transposed, row-per-input
layout instead.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import rel_entr
from scipy.stats import norm

from .exceptions import DimensionMismatch, InvalidParams, NegativeEntry, NotStochastic, SupportViolation
from .prob import kl_divergence

STOCHASTIC_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Channel:
    q_matrix: np.ndarray

    def __post_init__(self):
        q = np.array(self.q_matrix, dtype=np.float64)
        if q.ndim != 2:
            raise DimensionMismatch(f"transition matrix must be 2-D, got shape {q.shape}")
        q.setflags(write=False)
        object.__setattr__(self, "q_matrix", q)

    @property
    def input_size(self):
        return self.q_matrix.shape[1]

    @property
    def output_size(self):
        return self.q_matrix.shape[0]

    @property
    def rows(self):
        """Transition rows, one per input: ``rows[j] = Pr(Y = . | X = x_j)``."""
        return self.q_matrix.T

    def __repr__(self):
        return f"Channel(inputs={self.input_size}, outputs={self.output_size})"


def normalize_columns(q, slack=1e-13):
    """Scale columns to sum to 1.

    Columns already within ``slack`` of 1 (summation rounding) are left
    untouched, so normalizing twice, or after a 17-digit text round-trip,
    changes nothing.
    """
    sums = q.sum(axis=0)
    scale = np.where(np.abs(sums - 1.0) > slack, sums, 1.0)
    return q / scale


def _stochastic_columns(q, tol):
    if np.any(q < 0):
        raise NegativeEntry("transition probabilities must be non-negative")
    sums = q.sum(axis=0)
    bad = np.flatnonzero(np.abs(sums - 1.0) > tol)
    if bad.size:
        j = bad[0]
        raise NotStochastic(f"input {j} has transition probabilities summing to {sums[j]:.17g}")
    return normalize_columns(q)


def channel_from_matrix(matrix, orientation="auto", tol=STOCHASTIC_TOL):
    """Build a channel from a non-negative matrix.

    Parameters
    ----------
    matrix : array_like, shape (a, b)
    orientation : {"auto", "columns", "rows"}
        ``"columns"``: ``matrix[i, j] = Pr(y_i | x_j)`` (columns are inputs).
        ``"rows"``: each row is the output distribution of one input.
        ``"auto"``: use columns when they are stochastic, otherwise rows.
    tol : float
        Allowed deviation of each conditional distribution's sum from 1.
        Accepted distributions are renormalized exactly.
    """
    q = np.asarray(matrix, dtype=np.float64)
    if q.ndim != 2 or q.size == 0:
        raise DimensionMismatch(f"channel matrix must be a non-empty 2-D array, got shape {q.shape}")
    if np.any(q < 0):
        raise NegativeEntry("transition probabilities must be non-negative")
    if orientation == "auto":
        col_ok = np.all(np.abs(q.sum(axis=0) - 1.0) <= tol)
        row_ok = np.all(np.abs(q.sum(axis=1) - 1.0) <= tol)
        orientation = "rows" if (row_ok and not col_ok) else "columns"
    if orientation == "rows":
        q = q.T
    elif orientation != "columns":
        raise ValueError(f"unknown orientation {orientation!r}")
    return Channel(_stochastic_columns(q, tol))


def channel_from_rows(rows, tol=STOCHASTIC_TOL):
    """Channel whose ``j``-th row is ``Pr(Y = . | X = x_j)``."""
    return channel_from_matrix(rows, orientation="rows", tol=tol)


def binary_symmetric_channel(eps):
    if not 0.0 <= eps <= 1.0:
        raise InvalidParams("crossover probability must lie in [0, 1]")
    return Channel(np.array([[1 - eps, eps], [eps, 1 - eps]]))


def identity_channel(k):
    return Channel(np.eye(k))


def output_marginal(ch, p):
    """Output distribution ``q = Q p``."""
    p = np.asarray(p, dtype=np.float64)
    if p.shape != (ch.input_size,):
        raise DimensionMismatch(f"input distribution has length {p.size}, channel has {ch.input_size} inputs")
    return ch.q_matrix @ p


def conditional_divergences(ch, q):
    """All ``D_x = D(Q[:, x] || q)`` at once, one per input."""
    q = np.asarray(q, dtype=np.float64)
    if q.shape != (ch.output_size,):
        raise DimensionMismatch(f"output distribution has length {q.size}, channel has {ch.output_size} outputs")
    terms = rel_entr(ch.q_matrix, q[:, None])
    d = terms.sum(axis=0)
    if not np.all(np.isfinite(d)):
        raise SupportViolation("output distribution vanishes where a transition column has mass")
    return d


def conditional_divergence(ch, q, j):
    return kl_divergence(ch.q_matrix[:, j], q)


def mutual_information(ch, p):
    """``I(p, Q) = sum_j p_j D(Q_j || Qp)`` in nats."""
    p = np.asarray(p, dtype=np.float64)
    q = output_marginal(ch, p)
    # inputs with p_j = 0 may have D_j = inf when q misses part of their support
    mask = p > 0
    d = rel_entr(ch.q_matrix[:, mask], q[:, None]).sum(axis=0)
    return float(max(p[mask] @ d, 0.0))


@dataclass(frozen=True)
class BernoulliGaussianParams:
    """Impulsive noise ``(1 - p) N(0, sigma_b^2) + p N(0, sigma_b^2 + sigma_g^2)``."""

    p_impulse: float
    sigma_b: float
    sigma_g: float
    input_levels: int = 10
    output_bins: int = 40

    def __post_init__(self):
        if not 0.0 <= self.p_impulse <= 1.0:
            raise InvalidParams("p_impulse must lie in [0, 1]")
        if not (self.sigma_b > 0 and self.sigma_g > 0):
            raise InvalidParams("noise standard deviations must be positive")
        if not self.sigma_b < self.sigma_g:
            raise InvalidParams("background noise must be weaker than impulse noise (sigma_b < sigma_g)")
        if int(self.input_levels) < 2 or int(self.output_bins) < 2:
            raise InvalidParams("need at least 2 input levels and 2 output bins")

    @property
    def sigma_mix(self):
        return float(np.hypot(self.sigma_b, self.sigma_g))


def discretize_bernoulli_gaussian(params):
    """Quantize the Bernoulli-Gaussian additive-noise channel.

    Inputs are ``input_levels`` amplitudes spread evenly over ``[-1, 1]``.
    The output range ``[-1 - 4 sigma_mix, 1 + 4 sigma_mix]`` is cut into
    ``output_bins`` equal intervals, and the two outer bins extend to infinity.
    """
    x = np.linspace(-1.0, 1.0, int(params.input_levels))
    s_mix = params.sigma_mix
    edges = np.linspace(x[0] - 4 * s_mix, x[-1] + 4 * s_mix, int(params.output_bins) + 1)
    edges[0], edges[-1] = -np.inf, np.inf
    shifted = edges[:, None] - x[None, :]
    cdf = (1 - params.p_impulse) * norm.cdf(shifted / params.sigma_b)
    if params.p_impulse > 0:
        cdf = cdf + params.p_impulse * norm.cdf(shifted / s_mix)
    q = np.diff(cdf, axis=0)
    return Channel(normalize_columns(q))
