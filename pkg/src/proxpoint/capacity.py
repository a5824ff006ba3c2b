"""Capacity of a discrete memoryless channel by Blahut-Arimoto type iterations.

Three update rules share one driver, :func:`solve_capacity`:

``classic``
    ``p'(x) ∝ p(x) exp(D_x)``.
``matz``
    The same exponential update with a fixed step ``p'(x) ∝ p(x) exp(D_x / beta)``;
    a step that would lower the mutual information is replaced by the classic one.
``proximal``
    Each iterate maximizes ``I(p) - beta * [D(p || p_k) - D(Qp || Qp_k)]``
    exactly, with ``beta`` chosen per iteration by golden-section search on
    ``beta * [D(p_beta || p_k) - D(q_beta || q_k)]``.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .channel import conditional_divergences, mutual_information, output_marginal
from .exceptions import InvalidParams
from .linesearch import golden_section_max
from .prob import kl_divergence

P_FLOOR = 1e-300


class Algorithm(str, Enum):
    CLASSIC = "classic"
    MATZ = "matz"
    PROXIMAL = "proximal"


@dataclass(frozen=True)
class SolverConfig:
    algorithm: Algorithm = Algorithm.CLASSIC
    tol: float = 1e-11
    max_iter: int = 10000
    beta_min: float = 1e-3
    beta_max: float = 1.0
    search_tol: float = 1e-6
    fixed_beta: float = 0.5
    inner_tol: float = 1e-18
    max_inner: int = 100

    def __post_init__(self):
        object.__setattr__(self, "algorithm", Algorithm(self.algorithm))
        if not self.tol > 0:
            raise InvalidParams("tol must be positive")
        if int(self.max_iter) < 1:
            raise InvalidParams("max_iter must be at least 1")
        if not 0 < self.beta_min <= self.beta_max:
            raise InvalidParams("need 0 < beta_min <= beta_max")
        if self.beta_max > 1.0:
            # above 1 the proximal objective is no longer concave
            raise InvalidParams("beta_max must not exceed 1")
        if not self.search_tol > 0 or not self.fixed_beta > 0:
            raise InvalidParams("search_tol and fixed_beta must be positive")


@dataclass(frozen=True)
class IterationRecord:
    k: int
    mutual_info_nats: float
    upper_bound_nats: float
    beta_used: float
    delta: float


@dataclass
class CapacityResult:
    capacity_nats: float
    optimal_input: np.ndarray
    iterations: int
    converged: bool
    stop_reason: str
    trace: list = field(default_factory=list)

    @property
    def capacity_bits(self):
        return self.capacity_nats / math.log(2)


def _normalize_log(logw):
    p = np.exp(logw - logw.max())
    p /= p.sum()
    if np.any(p < P_FLOOR):
        p = np.maximum(p, P_FLOOR)
        p /= p.sum()
    return p


def ba_step(ch, p, beta=1.0, d=None):
    """One exponential update ``p'(x) ∝ p(x) exp(D_x / beta)``.

    ``d`` may carry precomputed divergences ``D_x`` against ``Q p``.
    """
    p = np.asarray(p, dtype=np.float64)
    if d is None:
        d = conditional_divergences(ch, output_marginal(ch, p))
    return _normalize_log(np.log(p) + d / beta)


def proximal_step(ch, p, beta, start=None, tol=1e-14, max_inner=100):
    """Maximize ``I(p') - beta * penalty_term(ch, p', p)`` over the simplex.

    At ``beta = 1`` this is exactly :func:`ba_step`. By the decomposition
    ``I(p') = E_p'[D^k] - D(Qp' || Qp)`` the objective equals
    ``E_p'[D^k] - beta D(p' || p) - (1 - beta) D(Qp' || Qp)``, strictly concave
    for ``0 < beta < 1``; it is solved by Newton's method with the simplex
    equality constraint, stopping when the Newton decrement drops below ``tol``.
    """
    p = np.asarray(p, dtype=np.float64)
    d_k = conditional_divergences(ch, output_marginal(ch, p))
    if beta >= 1.0:
        return ba_step(ch, p, 1.0, d=d_k)

    Q = ch.q_matrix[ch.q_matrix.sum(axis=1) > 0]
    log_p_k = np.log(p)
    log_q_k = np.log(Q @ p)
    m = p.size

    def objective(x):
        lq = np.log(Q @ x)
        return x @ d_k - beta * (x @ (np.log(x) - log_p_k)) - (1 - beta) * ((Q @ x) @ (lq - log_q_k))

    cur = ba_step(ch, p, 1.0, d=d_k) if start is None else np.array(start, dtype=np.float64)
    f_cur = objective(cur)
    kkt = np.zeros((m + 1, m + 1))
    kkt[:m, m] = kkt[m, :m] = 1.0
    rhs = np.zeros(m + 1)
    for _ in range(max_inner):
        q = Q @ cur
        grad = d_k - beta * (np.log(cur) - log_p_k + 1) - (1 - beta) * (Q.T @ (np.log(q) - log_q_k + 1))
        kkt[:m, :m] = -(1 - beta) * (Q.T / q) @ Q
        kkt[np.arange(m), np.arange(m)] -= beta / cur
        rhs[:m] = -grad
        step = np.linalg.solve(kkt, rhs)[:m]
        decrement = grad @ step
        if decrement <= tol:
            break
        neg = step < 0
        t = min(1.0, 0.99 * np.min(-cur[neg] / step[neg])) if neg.any() else 1.0
        cand = cur + t * step
        f_cand = objective(cand)
        # inside the quadratic region the Armijo test drowns in roundoff
        if not (t == 1.0 and decrement < 1e-8):
            while f_cand < f_cur + 0.25 * t * decrement:
                t *= 0.5
                if t < 1e-12:
                    return cur
                cand = cur + t * step
                f_cand = objective(cand)
        cur, f_cur = np.maximum(cand, P_FLOOR) / cand.sum(), f_cand
    return cur


def penalty_term(ch, p_new, p_old):
    """``D(p_new || p_old) - D(Q p_new || Q p_old)``; non-negative by Jensen."""
    return kl_divergence(p_new, p_old) - kl_divergence(output_marginal(ch, p_new), output_marginal(ch, p_old))


def capacity_bounds(ch, p):
    """``(I(p), max_x D_x)``: lower and upper bounds on capacity."""
    q = output_marginal(ch, p)
    return mutual_information(ch, p), float(np.max(conditional_divergences(ch, q)))


def select_beta(ch, p, cfg):
    """Pick the proximal weight for one iteration.

    Returns ``(beta, p_next)``. The classic update competes with the
    line-search winner and the one with larger mutual information is kept.
    """
    p = np.asarray(p, dtype=np.float64)
    solved = {}

    def gain(beta):
        start = None
        if solved:
            start = solved[min(solved, key=lambda b: abs(b - beta))]
        p_beta = proximal_step(ch, p, beta, start=start, tol=cfg.inner_tol, max_inner=cfg.max_inner)
        solved[beta] = p_beta
        return beta * penalty_term(ch, p_beta, p)

    beta, _ = golden_section_max(gain, cfg.beta_min, cfg.beta_max, cfg.search_tol)
    p_beta = solved[beta]
    p_classic = ba_step(ch, p, 1.0)
    if mutual_information(ch, p_beta) >= mutual_information(ch, p_classic):
        return beta, p_beta
    return 1.0, p_classic


def _matz_step(ch, p, cfg, i_prev):
    p_new = ba_step(ch, p, cfg.fixed_beta)
    if mutual_information(ch, p_new) >= i_prev:
        return cfg.fixed_beta, p_new
    return 1.0, ba_step(ch, p, 1.0)


def solve_capacity(ch, cfg=None, p0=None):
    """Iterate from ``p0`` (uniform by default) until the capacity is pinned.

    Stops once ``max_x D_x - I`` or the change in ``I`` drops to ``cfg.tol``;
    ``stop_reason`` records which (``"bound_gap"``, ``"delta"`` or
    ``"max_iter"``).
    """
    cfg = cfg or SolverConfig()
    if p0 is None:
        p = np.full(ch.input_size, 1.0 / ch.input_size)
    else:
        p = np.maximum(np.asarray(p0, dtype=np.float64), P_FLOOR)
        p /= p.sum()
    i_prev = mutual_information(ch, p)
    trace = []
    reason = "max_iter"

    for k in range(1, int(cfg.max_iter) + 1):
        if cfg.algorithm is Algorithm.CLASSIC:
            beta, p = 1.0, ba_step(ch, p, 1.0)
        elif cfg.algorithm is Algorithm.MATZ:
            beta, p = _matz_step(ch, p, cfg, i_prev)
        else:
            beta, p = select_beta(ch, p, cfg)

        d = conditional_divergences(ch, output_marginal(ch, p))
        i_k = float(max(p @ d, 0.0))
        upper = float(d.max())
        delta = abs(i_k - i_prev)
        trace.append(IterationRecord(k, i_k, upper, beta, delta))
        i_prev = i_k
        if upper - i_k <= cfg.tol:
            reason = "bound_gap"
            break
        if delta <= cfg.tol:
            reason = "delta"
            break

    return CapacityResult(
        capacity_nats=float(i_prev),
        optimal_input=p,
        iterations=len(trace),
        converged=reason != "max_iter",
        stop_reason=reason,
        trace=trace,
    )
