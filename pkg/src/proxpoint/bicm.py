"""Exact BICM-ID message exchange over all ``2^N`` bit words.

Distributions over words are written ``p_{B lam + theta}``: ``p_i ∝
exp(theta_i + B_i . lam)``, where ``B`` enumerates every ``N``-bit word
(LSB-first, so row ``i`` holds the bits of the integer ``i``) and ``theta``
holds log-coordinates relative to the all-zero word. Entries of ``theta``
equal to ``-inf`` mark words with zero probability.

The demapper holds ``theta_m`` (channel evidence) and the decoder holds
``theta_c`` (code indicator). Both updates act on bit marginals, where the
Fermi-Dirac divergence lives: a separable distribution ``p_{B lam}`` has
marginals ``sigmoid(lam)``, so matching marginals ``r`` means ``lam = logit(r)``.
"""

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np
from scipy.special import logsumexp

from .exceptions import AllZero, DimensionMismatch, TooLarge
from .prob import EPS_CLAMP, fermi_dirac_divergence, logit, sigmoid, symmetric_fd_distance

MAX_BITS = 20
LLR_MAX = float(np.log((1 - EPS_CLAMP) / EPS_CLAMP))
MU_CAP = 100.0
SAFETY = 0.99
# Divergences this small per bit are clamping/rounding residue, not mismatch.
MISMATCH_FLOOR = 1e-12


def build_binary_matrix(n_bits):
    """``2^N x N`` matrix whose row ``i`` is the LSB-first binary expansion of ``i``."""
    n_bits = int(n_bits)
    if not 1 <= n_bits <= MAX_BITS:
        raise TooLarge(f"n_bits must be in [1, {MAX_BITS}], got {n_bits}")
    idx = np.arange(2**n_bits)[:, None]
    return ((idx >> np.arange(n_bits)[None, :]) & 1).astype(np.int8)


def _check_dims(theta, lam, B):
    if theta.shape != (B.shape[0],):
        raise DimensionMismatch(f"theta has length {theta.size}, expected {B.shape[0]}")
    if lam.shape != (B.shape[1],):
        raise DimensionMismatch(f"lambda has length {lam.size}, expected {B.shape[1]}")


def dist_from_coords(theta, lam, B):
    """Normalized ``p_i ∝ exp(theta_i + B_i . lam)``; ``-inf`` entries get 0."""
    theta = np.asarray(theta, dtype=np.float64)
    lam = np.asarray(lam, dtype=np.float64)
    _check_dims(theta, lam, B)
    logw = theta + B @ lam
    top = logw.max()
    if top == -np.inf:
        raise AllZero("every word has zero probability")
    w = np.exp(logw - top)
    return w / w.sum()


def bit_marginals(p, B):
    p = np.asarray(p, dtype=np.float64)
    if p.shape != (B.shape[0],):
        raise DimensionMismatch(f"distribution has length {p.size}, expected {B.shape[0]}")
    return np.clip(p @ B, 0.0, 1.0)


def posterior_llrs(theta, lam, B):
    """Per-bit log-ratios ``ln P(bit_j = 1) / P(bit_j = 0)`` of ``p_{B lam + theta}``.

    Computed in the log domain so saturated bits keep full precision; a bit
    the support forces to one value gets ``+-inf``.
    """
    theta = np.asarray(theta, dtype=np.float64)
    lam = np.asarray(lam, dtype=np.float64)
    _check_dims(theta, lam, B)
    logw = theta + B @ lam
    if logw.max() == -np.inf:
        raise AllZero("every word has zero probability")
    ones = np.where(B.T.astype(bool), logw[None, :], -np.inf)
    zeros = np.where(B.T.astype(bool), -np.inf, logw[None, :])
    with np.errstate(invalid="ignore"):
        return logsumexp(ones, axis=1) - logsumexp(zeros, axis=1)


def posterior_marginals(theta, lam, B):
    """Bit marginals of ``p_{B lam + theta}``."""
    return sigmoid(posterior_llrs(theta, lam, B))


@dataclass
class ProxDecoderState:
    lambda1: np.ndarray
    lambda2: np.ndarray
    theta_m: np.ndarray
    theta_c: np.ndarray
    mu_m: float = 0.0
    mu_c: float = 0.0
    cost_trace: list = field(default_factory=list)

    @classmethod
    def initial(cls, theta_m, theta_c, n_bits):
        zeros = np.zeros(n_bits)
        return cls(zeros, zeros.copy(), np.asarray(theta_m, float), np.asarray(theta_c, float))


def _extrinsic(llr, prior):
    return np.clip(llr, -LLR_MAX, LLR_MAX) - prior


def _blend_llr(llr_a, llr_b, mu):
    """LLR of ``(sigmoid(a) + mu sigmoid(b)) / (1 + mu)``, without leaving the log domain."""
    log_mu = np.log(mu)
    one = np.logaddexp(-np.logaddexp(0.0, -llr_a), log_mu - np.logaddexp(0.0, -llr_b))
    zero = np.logaddexp(-np.logaddexp(0.0, llr_a), log_mu - np.logaddexp(0.0, llr_b))
    return one - zero


def classic_demapper_update(state, B):
    """New ``lambda2``: makes ``p_{B(lambda1 + lambda2)}`` share the demapper posterior's marginals."""
    return _extrinsic(posterior_llrs(state.theta_m, state.lambda1, B), state.lambda1)


def classic_decoder_update(state, B):
    """New ``lambda1`` from the decoder posterior ``p_{B lambda2 + theta_c}``."""
    return _extrinsic(posterior_llrs(state.theta_c, state.lambda2, B), state.lambda2)


def prox_demapper_update(state, B):
    """Minimize ``J_m`` over ``lambda2``.

    The target marginals blend the demapper posterior with the current
    separable marginals ``sigmoid(lambda1 + lambda2)`` in ratio ``1 : mu_m``.
    """
    if state.mu_m == 0:
        return classic_demapper_update(state, B)
    a = posterior_llrs(state.theta_m, state.lambda1, B)
    return _extrinsic(_blend_llr(a, state.lambda1 + state.lambda2, state.mu_m), state.lambda1)


def prox_decoder_update(state, B):
    """Minimize ``J_c`` over ``lambda1``; ``state.lambda2`` must already be the fresh one."""
    if state.mu_c == 0:
        return classic_decoder_update(state, B)
    a = posterior_llrs(state.theta_c, state.lambda2, B)
    return _extrinsic(_blend_llr(a, state.lambda1 + state.lambda2, state.mu_c), state.lambda2)


def cost_J(theta, lambda_fixed, lambda_var, lambda_old_pair, mu, B):
    """Proximal cost of one block.

    ``D_FD(post, sep) + mu * D_FD(old, sep)`` where ``post`` are the
    marginals of ``p_{B lambda_fixed + theta}``, ``sep = sigmoid(lambda_fixed
    + lambda_var)`` and ``old = sigmoid(sum(lambda_old_pair))``.
    """
    sep = sigmoid(np.asarray(lambda_fixed) + np.asarray(lambda_var))
    cost = fermi_dirac_divergence(posterior_marginals(theta, lambda_fixed, B), sep)
    if mu:
        old = sigmoid(np.asarray(lambda_old_pair[0]) + np.asarray(lambda_old_pair[1]))
        cost += mu * fermi_dirac_divergence(old, sep)
    return cost


def _mu_bound(num, dist, n_bits):
    if num <= MISMATCH_FLOOR * n_bits:
        return 0.0
    if dist - num <= num / MU_CAP:
        return MU_CAP
    return num / (dist - num)


def mu_m_bound(state, B):
    """Largest demapper weight that keeps ``J_m(new) <= J_c(current)``.

    With ``sep = sigmoid(lambda1 + lambda2)``, ``num`` is the decoder's
    mismatch ``D_FD(post_c, sep)`` and ``dist`` the symmetric distance between
    the demapper posterior and ``sep``. Returns ``num / (dist - num)``, or
    ``MU_CAP`` when ``dist <= num`` or the ratio exceeds the cap. A ``num``
    within clamping residue of zero gives 0.
    """
    sep = sigmoid(state.lambda1 + state.lambda2)
    num = fermi_dirac_divergence(posterior_marginals(state.theta_c, state.lambda2, B), sep)
    dist = symmetric_fd_distance(posterior_marginals(state.theta_m, state.lambda1, B), sep)
    return _mu_bound(num, dist, B.shape[1])


def mu_c_bound(state, B):
    """Mirror of :func:`mu_m_bound` for the decoder step (``state.lambda2`` is the fresh one)."""
    sep = sigmoid(state.lambda1 + state.lambda2)
    num = fermi_dirac_divergence(posterior_marginals(state.theta_m, state.lambda1, B), sep)
    dist = symmetric_fd_distance(posterior_marginals(state.theta_c, state.lambda2, B), sep)
    return _mu_bound(num, dist, B.shape[1])


class DecodeMode(str, Enum):
    CLASSIC = "classic"
    PROXIMAL = "proximal"


@dataclass(frozen=True)
class CostRecord:
    """One row of the decoder trace.

    ``J_theta_m`` is ``J_m(lambda1^k, lambda2^(k+1))`` and ``J_theta_c`` is
    ``J_c(lambda1^(k+1), lambda2^(k+1))``, both with the weights in force
    for that iteration.
    """

    k: int
    J_theta_m: float
    J_theta_c: float
    mu_m: float
    mu_c: float
    max_llr_delta: float


@dataclass
class DecodeResult:
    decisions: np.ndarray
    lambda1: np.ndarray
    lambda2: np.ndarray
    iterations: int
    converged: bool
    cost_trace: list
    initial_cost: float
    posterior: np.ndarray


def decode(
    theta_m,
    theta_c,
    mode="classic",
    max_iter=200,
    conv_tol=1e-10,
    mu_override=None,
    safety=SAFETY,
    lambda_init=None,
):
    """Run the demapper/decoder exchange, by default from ``lambda1 = lambda2 = 0``.

    In proximal mode each weight is ``safety`` times its bound, unless
    ``mu_override`` pins both weights. Stops once ``lambda1 + lambda2`` moves
    by at most ``conv_tol`` in every bit. Decisions are the hard bits of the
    final separable marginals ``sigmoid(lambda1 + lambda2)``.
    """
    mode = DecodeMode(mode)
    theta_m = np.asarray(theta_m, dtype=np.float64)
    theta_c = np.asarray(theta_c, dtype=np.float64)
    n_bits = int(round(np.log2(theta_m.size)))
    if theta_m.size != 2**n_bits or theta_c.shape != theta_m.shape:
        raise DimensionMismatch("theta_m and theta_c must both have length 2^N")
    B = build_binary_matrix(n_bits)
    state = ProxDecoderState.initial(theta_m, theta_c, n_bits)
    if lambda_init is not None:
        lam1, lam2 = (np.array(x, dtype=np.float64) for x in lambda_init)
        if lam1.shape != (n_bits,) or lam2.shape != (n_bits,):
            raise DimensionMismatch(f"initial LLR vectors must have length {n_bits}")
        state = replace(state, lambda1=lam1, lambda2=lam2)

    # J_c at the starting point carries no penalty: there is no previous iterate
    initial_cost = cost_J(theta_c, state.lambda2, state.lambda1, None, 0.0, B)
    total = state.lambda1 + state.lambda2
    converged = False

    for k in range(1, int(max_iter) + 1):
        old_pair = (state.lambda1, state.lambda2)
        if mode is DecodeMode.CLASSIC:
            mu_m = 0.0
        elif mu_override is not None:
            mu_m = float(mu_override)
        else:
            mu_m = safety * mu_m_bound(state, B)
        state = replace(state, mu_m=mu_m)
        state = replace(state, lambda2=prox_demapper_update(state, B))
        j_m = cost_J(theta_m, state.lambda1, state.lambda2, old_pair, mu_m, B)

        old_pair = (state.lambda1, state.lambda2)
        if mode is DecodeMode.CLASSIC:
            mu_c = 0.0
        elif mu_override is not None:
            mu_c = float(mu_override)
        else:
            mu_c = safety * mu_c_bound(state, B)
        state = replace(state, mu_c=mu_c)
        state = replace(state, lambda1=prox_decoder_update(state, B))
        j_c = cost_J(theta_c, state.lambda2, state.lambda1, old_pair, mu_c, B)

        new_total = state.lambda1 + state.lambda2
        delta = float(np.max(np.abs(new_total - total)))
        total = new_total
        state.cost_trace.append(CostRecord(k, j_m, j_c, mu_m, mu_c, delta))
        if delta <= conv_tol:
            converged = True
            break

    marg = sigmoid(total)
    return DecodeResult(
        decisions=(marg > 0.5).astype(np.int8),
        lambda1=state.lambda1,
        lambda2=state.lambda2,
        iterations=len(state.cost_trace),
        converged=converged,
        cost_trace=state.cost_trace,
        initial_cost=initial_cost,
        posterior=marg,
    )


def cost_chain_violations(result, atol=1e-10):
    """Iterations where the interleaved cost chain fails.

    The chain is ``J_m[k] <= J_c[k-1]`` (``J_c[0]`` being the starting cost)
    and ``J_c[k] <= J_m[k]``. Returns a list of ``(k, which, lhs, rhs)``.
    """
    bad = []
    prev_c = result.initial_cost
    for rec in result.cost_trace:
        if rec.J_theta_m > prev_c + atol:
            bad.append((rec.k, "J_m<=J_c_prev", rec.J_theta_m, prev_c))
        if rec.J_theta_c > rec.J_theta_m + atol:
            bad.append((rec.k, "J_c<=J_m", rec.J_theta_c, rec.J_theta_m))
        prev_c = rec.J_theta_c
    return bad
