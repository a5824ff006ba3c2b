"""scikit-learn style front ends for the capacity solvers and the BICM-ID decoder."""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .bicm import SAFETY, decode
from .capacity import SolverConfig, capacity_bounds, solve_capacity
from .channel import Channel, channel_from_rows, mutual_information
from .validation import check_prob_vector


def check_channel(X):
    """Accept a :class:`Channel` or an array whose rows are per-input output distributions."""
    if isinstance(X, Channel):
        return X
    return channel_from_rows(check_array(X, dtype=np.float64, ensure_min_samples=1, ensure_min_features=1))


class ChannelCapacity(BaseEstimator):
    """Capacity of a discrete memoryless channel.

    Parameters
    ----------
    algorithm : {"classic", "matz", "proximal"}
    tol : float
        Stop when the bound gap or the change in mutual information is below this.
    max_iter : int
    beta_min, beta_max, search_tol : float
        Line-search interval and tolerance for the proximal weight.
    fixed_beta : float
        Step weight of the ``"matz"`` iteration.

    Attributes
    ----------
    capacity_ : float
        In nats; ``capacity_bits_`` gives bits.
    input_distribution_ : ndarray
    n_iter_ : int
    converged_ : bool
    stop_reason_ : str
    trace_ : list of IterationRecord

    Examples
    --------
    >>> est = ChannelCapacity(algorithm="proximal").fit([[0.9, 0.1], [0.1, 0.9]])
    >>> round(est.capacity_bits_, 6)
    0.531004
    """

    def __init__(
        self,
        algorithm="classic",
        tol=1e-11,
        max_iter=10000,
        beta_min=1e-3,
        beta_max=1.0,
        search_tol=1e-6,
        fixed_beta=0.5,
    ):
        self.algorithm = algorithm
        self.tol = tol
        self.max_iter = max_iter
        self.beta_min = beta_min
        self.beta_max = beta_max
        self.search_tol = search_tol
        self.fixed_beta = fixed_beta

    def _config(self):
        return SolverConfig(
            algorithm=self.algorithm,
            tol=self.tol,
            max_iter=self.max_iter,
            beta_min=self.beta_min,
            beta_max=self.beta_max,
            search_tol=self.search_tol,
            fixed_beta=self.fixed_beta,
        )

    def fit(self, X, y=None):
        self.channel_ = check_channel(X)
        self.result_ = solve_capacity(self.channel_, self._config())
        self.capacity_ = self.result_.capacity_nats
        self.capacity_bits_ = self.result_.capacity_bits
        self.input_distribution_ = self.result_.optimal_input
        self.n_iter_ = self.result_.iterations
        self.converged_ = self.result_.converged
        self.stop_reason_ = self.result_.stop_reason
        self.trace_ = self.result_.trace
        return self

    def mutual_information(self, p):
        check_is_fitted(self, "channel_")
        return mutual_information(self.channel_, check_prob_vector(p))

    def bounds(self, p=None):
        """``(lower, upper)`` capacity bounds at ``p`` (the fitted input by default)."""
        check_is_fitted(self, "channel_")
        p = self.input_distribution_ if p is None else check_prob_vector(p)
        return capacity_bounds(self.channel_, p)


class BicmIdDecoder(BaseEstimator):
    """Exact BICM-ID decoder for a :class:`~proxpoint.toy.ToyBicmInstance`.

    ``fit`` runs the iteration; ``predict`` returns the hard decisions in the
    interleaved (mapper) bit order.
    """

    def __init__(self, mode="classic", max_iter=200, conv_tol=1e-10, mu_override=None, safety=SAFETY):
        self.mode = mode
        self.max_iter = max_iter
        self.conv_tol = conv_tol
        self.mu_override = mu_override
        self.safety = safety

    def _run(self, instance):
        return decode(
            instance.theta_m,
            instance.theta_c,
            mode=self.mode,
            max_iter=self.max_iter,
            conv_tol=self.conv_tol,
            mu_override=self.mu_override,
            safety=self.safety,
        )

    def fit(self, instance, y=None):
        self.result_ = self._run(instance)
        self.decisions_ = self.result_.decisions
        self.lambda1_ = self.result_.lambda1
        self.lambda2_ = self.result_.lambda2
        self.n_iter_ = self.result_.iterations
        self.converged_ = self.result_.converged
        self.cost_trace_ = self.result_.cost_trace
        return self

    def predict(self, instance):
        return self._run(instance).decisions

    def fit_predict(self, instance, y=None):
        return self.fit(instance).decisions_
