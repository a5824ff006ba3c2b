"""Probability-vector arithmetic: KL and Fermi-Dirac divergences, logit/sigmoid.

All logarithms are natural, so every divergence is in nats.
"""

import numpy as np
from scipy.special import expit, rel_entr

from .exceptions import DimensionMismatch, SupportViolation

EPS_CLAMP = 1e-12


def clamp_probs(r, eps=EPS_CLAMP):
    """Clip probabilities into ``[eps, 1 - eps]``."""
    return np.clip(r, eps, 1.0 - eps)


def kl_divergence(p, q):
    """Kullback-Leibler divergence ``D(p || q) = sum p_i ln(p_i / q_i)``.

    Entries with ``p_i = 0`` contribute nothing (including ``0 ln(0/0)``).

    Raises
    ------
    DimensionMismatch
        If ``p`` and ``q`` differ in length.
    SupportViolation
        If some ``p_i > 0`` has ``q_i = 0``.
    """
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise DimensionMismatch(f"p has shape {p.shape} but q has shape {q.shape}")
    if np.any((p > 0) & (q <= 0)):
        raise SupportViolation("q vanishes where p has mass")
    return float(max(rel_entr(p, q).sum(), 0.0))


def fermi_dirac_divergence(r, s):
    """Bitwise KL divergence between two vectors of bit probabilities ``P(x_i = 1)``.

    ``s`` is clamped into ``[1e-12, 1 - 1e-12]`` first; zeros in ``r`` follow
    the ``0 ln 0 = 0`` convention.
    """
    r = np.asarray(r, dtype=np.float64)
    s = np.asarray(s, dtype=np.float64)
    if r.shape != s.shape:
        raise DimensionMismatch(f"r has shape {r.shape} but s has shape {s.shape}")
    s = clamp_probs(s)
    total = rel_entr(r, s).sum() + rel_entr(1.0 - r, 1.0 - s).sum()
    return float(max(total, 0.0))


def symmetric_fd_distance(a, b):
    """``D_FD(a, b) + D_FD(b, a)``."""
    return fermi_dirac_divergence(a, b) + fermi_dirac_divergence(b, a)


def logit(p, eps=EPS_CLAMP):
    p = clamp_probs(np.asarray(p, dtype=np.float64), eps)
    out = np.log(p) - np.log1p(-p)
    return float(out) if out.ndim == 0 else out


def sigmoid(x):
    out = expit(np.asarray(x, dtype=np.float64))
    return float(out) if out.ndim == 0 else out
