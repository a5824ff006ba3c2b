import math

import numpy as np
import pytest

from conftest import random_channel_matrix, random_simplex
from proxpoint.capacity import (
    Algorithm,
    SolverConfig,
    ba_step,
    capacity_bounds,
    penalty_term,
    proximal_step,
    select_beta,
    solve_capacity,
)
from proxpoint.channel import (
    Channel,
    binary_symmetric_channel,
    channel_from_matrix,
    conditional_divergences,
    identity_channel,
    mutual_information,
    output_marginal,
)
from proxpoint.exceptions import InvalidParams
from proxpoint.prob import kl_divergence

THREE_SYMBOL_ROWS = [[0.7, 0.2, 0.1], [0.1, 0.2, 0.7]]
THREE_SYMBOL_CAPACITY = 0.25310161544


def h_b(e):
    return -e * math.log(e) - (1 - e) * math.log(1 - e)


def solve(ch, algorithm, **kw):
    return solve_capacity(ch, SolverConfig(algorithm=Algorithm(algorithm), **kw))


class TestConfig:
    @pytest.mark.parametrize(
        "kwargs",
        [dict(tol=0.0), dict(max_iter=0), dict(beta_min=0.0), dict(beta_max=1.5), dict(beta_min=0.6, beta_max=0.5),
         dict(fixed_beta=0.0)],
    )
    def test_rejects(self, kwargs):
        with pytest.raises(InvalidParams):
            SolverConfig(**kwargs)

    def test_string_algorithm(self):
        assert Algorithm("proximal") is Algorithm.PROXIMAL


class TestBaStep:
    def test_fixed_point_for_symmetric_channel(self):
        ch = binary_symmetric_channel(0.2)
        np.testing.assert_allclose(ba_step(ch, [0.5, 0.5]), [0.5, 0.5], atol=1e-15)

    def test_closed_form(self, rng):
        for _ in range(20):
            Q = random_channel_matrix(rng, 4, 6)
            p = random_simplex(rng, 4)
            d = np.array([sum(Q[i, j] * math.log(Q[i, j] / (Q @ p)[i]) for i in range(6)) for j in range(4)])
            for beta in (1.0, 0.5):
                w = p * np.exp(d / beta)
                np.testing.assert_allclose(ba_step(Channel(Q), p, beta), w / w.sum(), rtol=1e-12)

    def test_stays_on_simplex(self, rng):
        for _ in range(50):
            ch = Channel(random_channel_matrix(rng, 7, 5))
            nxt = ba_step(ch, random_simplex(rng, 7))
            assert nxt.min() > 0 and abs(nxt.sum() - 1) < 1e-12


class TestPenalty:
    def test_zero_on_equal(self, rng):
        ch = Channel(random_channel_matrix(rng, 5, 5))
        p = random_simplex(rng, 5)
        assert penalty_term(ch, p, p) == 0.0

    def test_identity_channel_penalty_vanishes(self, rng):
        ch = identity_channel(4)
        assert penalty_term(ch, random_simplex(rng, 4), random_simplex(rng, 4)) == pytest.approx(0.0, abs=1e-14)

    def test_useless_channel_penalty_is_kl(self, rng):
        ch = channel_from_matrix([[0.3, 0.3, 0.3], [0.7, 0.7, 0.7]])
        a, b = random_simplex(rng, 3), random_simplex(rng, 3)
        assert penalty_term(ch, a, b) == pytest.approx(kl_divergence(a, b), abs=1e-14)

    def test_decomposition_identity(self, rng):
        # I(p') = E_p'[D^k] - D(Qp' || Qp) for any p, p'
        for _ in range(50):
            ch = Channel(random_channel_matrix(rng, 5, 7))
            p, pn = random_simplex(rng, 5), random_simplex(rng, 5)
            d_k = conditional_divergences(ch, output_marginal(ch, p))
            rhs = pn @ d_k - kl_divergence(output_marginal(ch, pn), output_marginal(ch, p))
            assert mutual_information(ch, pn) == pytest.approx(rhs, abs=1e-12)


class TestProximalStep:
    def test_beta_one_is_classic(self, rng):
        ch = Channel(random_channel_matrix(rng, 6, 6))
        p = random_simplex(rng, 6)
        np.testing.assert_array_equal(proximal_step(ch, p, 1.0), ba_step(ch, p, 1.0))

    def test_maximizes_objective(self, rng):
        for _ in range(10):
            ch = Channel(random_channel_matrix(rng, 4, 5))
            p = random_simplex(rng, 4)
            beta = rng.uniform(0.05, 0.95)
            best = proximal_step(ch, p, beta)

            def obj(x):
                return mutual_information(ch, x) - beta * penalty_term(ch, x, p)

            f_best = obj(best)
            for _ in range(200):
                other = 0.9 * best + 0.1 * random_simplex(rng, 4)
                assert obj(other) <= f_best + 1e-12

    def test_does_not_decrease_mi(self, rng):
        for _ in range(20):
            ch = Channel(random_channel_matrix(rng, 5, 4))
            p = random_simplex(rng, 5)
            for beta in (0.1, 0.5, 0.9):
                assert mutual_information(ch, proximal_step(ch, p, beta)) >= mutual_information(ch, p) - 1e-12


class TestSelectBeta:
    def test_beta_in_range_and_ascent(self, rng):
        cfg = SolverConfig(algorithm=Algorithm.PROXIMAL)
        for _ in range(10):
            ch = Channel(random_channel_matrix(rng, 5, 6))
            p = random_simplex(rng, 5)
            beta, nxt = select_beta(ch, p, cfg)
            assert cfg.beta_min <= beta <= 1.0
            assert mutual_information(ch, nxt) >= mutual_information(ch, ba_step(ch, p)) - 1e-15


class TestBounds:
    def test_sandwich(self, rng):
        for _ in range(20):
            ch = Channel(random_channel_matrix(rng, 4, 4))
            cap = solve(ch, "classic", tol=1e-13).capacity_nats
            lo, hi = capacity_bounds(ch, random_simplex(rng, 4))
            assert lo <= cap + 1e-12 <= hi + 2e-12


class TestSolveCapacity:
    @pytest.mark.parametrize("algorithm", ["classic", "matz", "proximal"])
    def test_three_symbol_matrix(self, algorithm):
        res = solve(channel_from_matrix(THREE_SYMBOL_ROWS), algorithm)
        assert res.converged
        assert res.capacity_nats == pytest.approx(THREE_SYMBOL_CAPACITY, abs=1e-10)
        np.testing.assert_allclose(res.optimal_input, [0.5, 0.5], atol=1e-12)

    @pytest.mark.parametrize("algorithm", ["classic", "matz", "proximal"])
    @pytest.mark.parametrize("eps", [0.05, 0.3])
    def test_bsc(self, algorithm, eps):
        res = solve(binary_symmetric_channel(eps), algorithm)
        assert res.capacity_bits == pytest.approx(1 - h_b(eps) / math.log(2), abs=1e-10)

    @pytest.mark.parametrize("algorithm", ["classic", "matz", "proximal"])
    def test_identity(self, algorithm):
        res = solve(identity_channel(5), algorithm)
        assert res.capacity_nats == pytest.approx(math.log(5), abs=1e-12)
        np.testing.assert_allclose(res.optimal_input, np.full(5, 0.2), atol=1e-12)

    def test_z_channel_closed_form(self):
        # Z channel with crossover a: C = ln(1 + (1-a) a^(a/(1-a)))
        a = 0.25
        ch = channel_from_matrix([[1.0, a], [0.0, 1 - a]])
        expected = math.log(1 + (1 - a) * a ** (a / (1 - a)))
        for algorithm in ("classic", "matz", "proximal"):
            assert solve(ch, algorithm, tol=1e-13).capacity_nats == pytest.approx(expected, abs=1e-11)

    def test_algorithms_agree(self, rng):
        for _ in range(5):
            n_in, n_out = rng.integers(2, 7, size=2)
            ch = Channel(random_channel_matrix(rng, n_in, n_out))
            caps = [solve(ch, a, tol=1e-13).capacity_nats for a in ("classic", "matz", "proximal")]
            assert max(caps) - min(caps) <= 1e-9

    @pytest.mark.parametrize("algorithm", ["classic", "matz", "proximal"])
    def test_monotone_trace(self, rng, algorithm):
        ch = Channel(random_channel_matrix(rng, 6, 8))
        res = solve(ch, algorithm)
        mi = [r.mutual_info_nats for r in res.trace]
        assert all(b >= a - 1e-12 for a, b in zip(mi, mi[1:]))
        assert all(r.mutual_info_nats <= r.upper_bound_nats + 1e-12 for r in res.trace)

    def test_max_iter_reported(self, rng):
        ch = Channel(random_channel_matrix(rng, 6, 8))
        res = solve(ch, "classic", max_iter=2, tol=1e-15)
        assert not res.converged and res.stop_reason == "max_iter" and res.iterations == 2

    def test_custom_start(self):
        ch = channel_from_matrix(THREE_SYMBOL_ROWS)
        res = solve_capacity(ch, SolverConfig(), p0=[0.9, 0.1])
        assert res.iterations > 1
        assert res.capacity_nats == pytest.approx(THREE_SYMBOL_CAPACITY, abs=1e-10)

    def test_matz_beta_recorded(self, rng):
        ch = Channel(random_channel_matrix(rng, 4, 4))
        res = solve(ch, "matz", fixed_beta=0.5)
        assert {r.beta_used for r in res.trace} <= {0.5, 1.0}
