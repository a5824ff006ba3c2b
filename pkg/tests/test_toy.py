import math
from itertools import product

import numpy as np
import pytest

from proxpoint.bicm import decode
from proxpoint.exceptions import InvalidCode, InvalidParams, SizeMismatch
from proxpoint.toy import (
    DEFAULT_GENERATORS,
    build_toy_instance,
    gf2_rank,
    pam4_gray,
    random_toy_instance,
)


def test_pam4_gray_labels():
    pts = pam4_gray().points * math.sqrt(5)
    # neighbouring amplitudes differ in exactly one bit
    order = np.argsort(pts)
    for a, b in zip(order, order[1:]):
        assert bin(int(a) ^ int(b)).count("1") == 1
    assert np.mean(pam4_gray().points ** 2) == pytest.approx(1.0)


@pytest.mark.parametrize("n", sorted(DEFAULT_GENERATORS))
def test_default_generators_full_rank(n):
    g = np.array(DEFAULT_GENERATORS[n])
    assert gf2_rank(g) == g.shape[0]
    np.testing.assert_array_equal(g[:, : g.shape[0]], np.eye(g.shape[0]))


def test_gf2_rank():
    assert gf2_rank([[1, 1, 0], [0, 1, 1], [1, 0, 1]]) == 2


def test_theta_c_marks_codewords():
    inst = random_toy_instance(6, 0.5, 4)
    expected = set()
    for msg in product((0, 1), repeat=3):
        c = np.array(msg) @ inst.generator % 2
        word = c[inst.interleaver]
        expected.add(sum(int(b) << j for j, b in enumerate(word)))
    assert inst.code_valid_words == expected
    assert np.all(inst.theta_c[list(expected)] == 0.0)


def test_theta_m_brute_force():
    inst = random_toy_instance(4, 0.7, 9)
    pts = inst.constellation.points
    y = inst.received

    def loglik(i):
        bits = [(i >> j) & 1 for j in range(4)]
        x = [pts[bits[0] + 2 * bits[1]], pts[bits[2] + 2 * bits[3]]]
        return -sum((yy - xx) ** 2 for yy, xx in zip(y, x)) / (2 * 0.7**2)

    expected = [loglik(i) - loglik(0) for i in range(16)]
    np.testing.assert_allclose(inst.theta_m, expected, atol=1e-12)


def test_transmitted_is_interleaved_codeword():
    inst = random_toy_instance(8, 0.5, 2)
    np.testing.assert_array_equal(inst.transmitted, inst.codeword[inst.interleaver])
    np.testing.assert_array_equal(inst.deinterleave(inst.transmitted), inst.codeword)
    np.testing.assert_array_equal(inst.message_for(inst.transmitted), inst.message)


@pytest.mark.parametrize("n", [4, 6, 8])
def test_nearly_noiseless_decodes_fast(n):
    inst = random_toy_instance(n, 1e-3, 5)
    res = decode(inst.theta_m, inst.theta_c, conv_tol=1e-6)
    np.testing.assert_array_equal(res.decisions, inst.transmitted)
    assert res.iterations <= 2


def test_all_zero_message():
    inst = build_toy_instance(message=[0, 0], noise_std=0.1, seed=3)
    assert not inst.codeword.any()
    res = decode(inst.theta_m, inst.theta_c)
    assert not res.decisions.any()


def test_bpsk():
    inst = build_toy_instance(constellation="bpsk", noise_std=0.3, seed=1)
    assert inst.received.shape == (4,)


def test_golden_n4():
    inst = build_toy_instance(message=[1, 0], seed=7, noise_std=0.5)
    np.testing.assert_array_equal(inst.transmitted, [1, 0, 1, 1])
    np.testing.assert_allclose(inst.received, [-0.297840826745723, 0.31014466781884914], rtol=1e-12)
    res = decode(inst.theta_m, inst.theta_c)
    np.testing.assert_array_equal(res.decisions, [1, 0, 1, 1])
    assert res.iterations == 9
    np.testing.assert_allclose(
        res.lambda1, [1.963467771086723, -1.8518081296819071, 0.9919675054653836, 2.9946782522182707], atol=1e-9
    )


def test_seeded_instances_reproducible():
    a, b = random_toy_instance(6, 0.6, 11), random_toy_instance(6, 0.6, 11)
    np.testing.assert_array_equal(a.received, b.received)
    np.testing.assert_array_equal(a.interleaver, b.interleaver)


@pytest.mark.parametrize(
    "kwargs,exc",
    [
        (dict(generator=[[1, 1, 0, 0], [1, 1, 0, 0]]), InvalidCode),
        (dict(generator=[[1, 2, 0, 0]]), InvalidCode),
        (dict(generator=[[1, 0, 1]]), SizeMismatch),
        (dict(interleaver=[0, 0, 1, 2]), SizeMismatch),
        (dict(message=[1, 0, 1]), SizeMismatch),
        (dict(noise_std=0.0), InvalidParams),
        (dict(constellation="8psk"), InvalidParams),
        (dict(generator=np.eye(18, dtype=int)), SizeMismatch),
    ],
)
def test_invalid_instances(kwargs, exc):
    with pytest.raises(exc):
        build_toy_instance(**kwargs)
