"""Small enumerable BICM systems: linear block code, interleaver, PAM mapper, AWGN."""

from dataclasses import dataclass
from itertools import product

import numpy as np

from .bicm import build_binary_matrix
from .exceptions import InvalidCode, InvalidParams, SizeMismatch

MAX_TOY_BITS = 16

# Systematic generators [I | P] for the lengths used in the demos and tests.
DEFAULT_GENERATORS = {
    2: [[1, 1]],
    4: [[1, 0, 1, 1], [0, 1, 1, 0]],
    6: [[1, 0, 0, 1, 1, 0], [0, 1, 0, 0, 1, 1], [0, 0, 1, 1, 0, 1]],
    8: [
        [1, 0, 0, 0, 0, 1, 1, 1],
        [0, 1, 0, 0, 1, 0, 1, 1],
        [0, 0, 1, 0, 1, 1, 0, 1],
        [0, 0, 0, 1, 1, 1, 1, 0],
    ],
}


@dataclass(frozen=True, eq=False)
class Constellation:
    """Real constellation; ``points[label]`` is sent for the bit group whose
    LSB-first integer value is ``label``."""

    name: str
    points: np.ndarray

    @property
    def bits_per_symbol(self):
        return int(np.log2(len(self.points)))


def pam4_gray():
    # (b0, b1): 00 -> -3, 10 -> -1, 11 -> +1, 01 -> +3, unit average energy
    return Constellation("4pam", np.array([-3.0, -1.0, 3.0, 1.0]) / np.sqrt(5.0))


def bpsk():
    return Constellation("bpsk", np.array([-1.0, 1.0]))


CONSTELLATIONS = {"4pam": pam4_gray, "bpsk": bpsk}


def gf2_rank(rows):
    m = np.array(rows, dtype=np.uint8) % 2
    rank = 0
    for col in range(m.shape[1]):
        pivot = next((r for r in range(rank, m.shape[0]) if m[r, col]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(m.shape[0]):
            if r != rank and m[r, col]:
                m[r] ^= m[rank]
        rank += 1
    return rank


def random_systematic_generator(n_bits, rng, k=None):
    k = n_bits // 2 if k is None else k
    parity = rng.integers(0, 2, size=(k, n_bits - k))
    return np.hstack([np.eye(k, dtype=np.int64), parity])


def default_generator(n_bits, rng=None):
    if n_bits in DEFAULT_GENERATORS:
        return np.array(DEFAULT_GENERATORS[n_bits])
    return random_systematic_generator(n_bits, rng or np.random.default_rng(0))


def _bits_to_int(bits):
    return int(np.dot(np.asarray(bits, dtype=np.int64), 1 << np.arange(len(bits))))


@dataclass(frozen=True, eq=False)
class ToyBicmInstance:
    generator: np.ndarray
    interleaver: np.ndarray
    constellation: Constellation
    noise_std: float
    seed: int
    message: np.ndarray
    codeword: np.ndarray
    transmitted: np.ndarray
    received: np.ndarray
    theta_m: np.ndarray
    theta_c: np.ndarray

    @property
    def n_bits(self):
        return self.generator.shape[1]

    @property
    def code_valid_words(self):
        """Integer indices (interleaved domain, LSB-first) of every valid word."""
        return set(np.flatnonzero(np.isfinite(self.theta_c)).tolist())

    def interleave(self, code_bits):
        return np.asarray(code_bits)[self.interleaver]

    def deinterleave(self, bits):
        out = np.empty_like(np.asarray(bits))
        out[self.interleaver] = bits
        return out

    def encode(self, message):
        return (np.asarray(message, dtype=np.int64) @ self.generator % 2).astype(np.int8)

    def message_for(self, decisions):
        """Message whose codeword interleaves to ``decisions``, or ``None``."""
        code_bits = self.deinterleave(decisions)
        for msg in product((0, 1), repeat=self.generator.shape[0]):
            if np.array_equal(self.encode(msg), code_bits):
                return np.array(msg, dtype=np.int8)
        return None


def code_indicator(generator, interleaver):
    """Log-coordinates of the code: 0 on interleaved codewords, ``-inf`` elsewhere."""
    k, n = generator.shape
    theta = np.full(2**n, -np.inf)
    for msg in product((0, 1), repeat=k):
        c = np.asarray(msg, dtype=np.int64) @ generator % 2
        theta[_bits_to_int(c[interleaver])] = 0.0
    return theta


def channel_log_coords(received, constellation, noise_std, n_bits):
    """``theta_m[i] = ln p(y | words B_i) - ln p(y | B_0)`` for Gaussian noise."""
    B = build_binary_matrix(n_bits).astype(np.int64)
    m = constellation.bits_per_symbol
    n_sym = n_bits // m
    labels = B.reshape(-1, n_sym, m) @ (1 << np.arange(m))
    x = constellation.points[labels]
    loglik = -((np.asarray(received)[None, :] - x) ** 2).sum(axis=1) / (2.0 * noise_std**2)
    return loglik - loglik[0]


def build_toy_instance(generator=None, interleaver=None, constellation="4pam", noise_std=0.5, message=None, seed=0):
    """Encode, interleave, map and add seeded Gaussian noise.

    ``message`` defaults to random bits drawn from ``seed``; the noise comes
    from the same generator afterwards and is the same whether or not a
    message is supplied.
    """
    rng = np.random.default_rng(seed)
    generator = np.array(default_generator(4) if generator is None else generator, dtype=np.int64)
    if generator.ndim != 2 or np.any((generator != 0) & (generator != 1)):
        raise InvalidCode("generator must be a 0/1 matrix")
    k, n = generator.shape
    if gf2_rank(generator) != k:
        raise InvalidCode("generator rows are linearly dependent over GF(2)")
    if n > MAX_TOY_BITS:
        raise SizeMismatch(f"code length {n} exceeds {MAX_TOY_BITS}")
    if isinstance(constellation, str):
        if constellation not in CONSTELLATIONS:
            raise InvalidParams(f"unknown constellation {constellation!r}")
        constellation = CONSTELLATIONS[constellation]()
    if n % constellation.bits_per_symbol:
        raise SizeMismatch(f"code length {n} is not a multiple of {constellation.bits_per_symbol} bits per symbol")
    interleaver = np.arange(n) if interleaver is None else np.asarray(interleaver, dtype=np.int64)
    if sorted(interleaver.tolist()) != list(range(n)):
        raise SizeMismatch("interleaver must be a permutation of range(N)")
    if not noise_std > 0:
        raise InvalidParams("noise_std must be positive")

    # always consume the message draw so the noise does not depend on whether a message was given
    drawn = rng.integers(0, 2, size=k)
    message = drawn if message is None else np.asarray(message, dtype=np.int64)
    if message.shape != (k,):
        raise SizeMismatch(f"message must have {k} bits")
    codeword = (message @ generator % 2).astype(np.int8)
    transmitted = codeword[interleaver]
    m = constellation.bits_per_symbol
    labels = transmitted.reshape(-1, m).astype(np.int64) @ (1 << np.arange(m))
    received = constellation.points[labels] + noise_std * rng.standard_normal(labels.size)

    return ToyBicmInstance(
        generator=generator,
        interleaver=interleaver,
        constellation=constellation,
        noise_std=float(noise_std),
        seed=int(seed),
        message=message.astype(np.int8),
        codeword=codeword,
        transmitted=transmitted,
        received=received,
        theta_m=channel_log_coords(received, constellation, noise_std, n),
        theta_c=code_indicator(generator, interleaver),
    )


def random_toy_instance(n_bits, noise_std, seed, constellation="4pam", shuffle=True):
    """Default code for ``n_bits`` with a seeded random interleaver and message."""
    rng = np.random.default_rng([seed, n_bits])
    interleaver = rng.permutation(n_bits) if shuffle else None
    return build_toy_instance(default_generator(n_bits, rng), interleaver, constellation, noise_std, seed=seed)
