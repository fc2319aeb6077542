"""Restricted syndrome decoding instances, keys and the polynomial modelling.

An instance is (A, s) with parity-check matrix H = (A | I_r) in systematic
form. A witness is the first k coordinates w of a restricted error vector
e in E^n; the remaining coordinates are recovered as s - w A^T. The modelling
checks every coordinate of e against f_E(x) = prod_{e in E} (x - e).
"""

from dataclasses import dataclass
import os

import numpy as np

from . import hashing
from .field import pack_vector, packed_bits, poly_mul, sample_stream, unpack_vector


class KeyFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Restriction:
    p: int
    elements: tuple
    fE_coeffs: tuple

    @property
    def z(self):
        return len(self.elements)

    def evaluate(self, x):
        """f_E evaluated elementwise on an integer array over F_p."""
        x = np.asarray(x, dtype=np.int64) % self.p
        acc = np.zeros_like(x)
        for c in reversed(self.fE_coeffs):
            acc = (acc * x + c) % self.p
        return acc

    def contains(self, x):
        return np.isin(np.asarray(x) % self.p, self.elements)


def build_restriction(E, p):
    elems = [int(e) % p for e in E]
    if not elems:
        raise ValueError("restriction must be nonempty")
    if len(set(elems)) != len(elems):
        raise ValueError("restriction has duplicate elements")
    coeffs = [1]
    for e in elems:
        coeffs = poly_mul(coeffs, [(-e) % p, 1], p)
    return Restriction(p, tuple(sorted(elems)), tuple(coeffs))


CROSS_RESTRICTION = build_restriction([pow(2, i, 127) for i in range(1, 8)], 127)
TERNARY_RESTRICTION = build_restriction([1, 2], 3)


def restriction_for(ps):
    """The built-in restriction matching a parameter set's (p, z)."""
    if (ps.p, ps.z) == (127, 7):
        return CROSS_RESTRICTION
    if (ps.p, ps.z) == (3, 2):
        return TERNARY_RESTRICTION
    raise ValueError(f"no built-in restriction for p={ps.p}, z={ps.z}")


@dataclass(frozen=True, eq=False)
class RsdpInstance:
    restriction: Restriction
    n: int
    k: int
    A: np.ndarray
    s: np.ndarray
    matrix_seed: bytes = b""

    def __post_init__(self):
        if self.A.shape != (self.r, self.k) or self.s.shape != (self.r,):
            raise ValueError("instance dimensions are inconsistent")

    @property
    def p(self):
        return self.restriction.p

    @property
    def r(self):
        return self.n - self.k

    @property
    def H(self):
        return np.concatenate([self.A, np.eye(self.r, dtype=np.int64)], axis=1)


def expand_matrix(seed, r, k, p, lam):
    stream = hashing.XofStream(lam, hashing.MATRIX, seed)
    return sample_stream(stream, p, r * k).reshape(r, k)


def expand_witness(w, inst):
    """e = (w, s - w A^T)."""
    w = np.asarray(w, dtype=np.int64)
    if w.shape != (inst.k,):
        raise ValueError(f"witness must have length {inst.k}")
    tail = (inst.s - inst.A @ w) % inst.p
    return np.concatenate([w % inst.p, tail])


def syndrome(e, inst):
    return (np.asarray(e, dtype=np.int64) @ inst.H.T) % inst.p


def evaluate_modeling(w, inst):
    """(f_1(w), ..., f_n(w)): f_E on every coordinate of the expanded error."""
    return inst.restriction.evaluate(expand_witness(w, inst))


@dataclass(frozen=True, eq=False)
class HomogeneousTables:
    """Coefficients of the homogeneous components of each constraint.

    Constraint j < k is f_E(x_j), whose degree-l part is c[l] x_j^l.
    Constraint k+i is f_E(s_i - <a_i, x>), whose degree-l part is
    b[i, l] <a_i, x>^l.
    """
    c: np.ndarray
    b: np.ndarray

    @property
    def d(self):
        return len(self.c) - 1

    def rows(self, k):
        """(n, d+1) coefficient table: c repeated k times, then b."""
        return np.concatenate([np.tile(self.c, (k, 1)), self.b])


def shifted_coeffs(fE_coeffs, s, p):
    """Coefficients in y of f_E(s - y), by Horner composition."""
    acc = []
    for c in reversed(fE_coeffs):
        acc = poly_mul(acc, [s % p, p - 1], p) or [0]
        acc[0] = (acc[0] + c) % p
    out = [0] * len(fE_coeffs)
    out[:len(acc)] = acc
    return out


def homogeneous_tables(inst):
    res = inst.restriction
    p = res.p
    per_value = np.array([shifted_coeffs(res.fE_coeffs, s, p) for s in range(p)],
                         dtype=np.int64)
    return HomogeneousTables(np.array(res.fE_coeffs, dtype=np.int64), per_value[inst.s])


# -- key generation and encoding ---------------------------------------------------

def keygen(ps, rng=os.urandom):
    """Fresh instance and witness: A from a random seed, e uniform in E^n."""
    res = restriction_for(ps)
    seed = rng(2 * ps.lam // 8)
    A = expand_matrix(seed, ps.r, ps.k, ps.p, ps.lam)
    # uniform indices into E by rejection from the same bit-draw sampler
    stream = hashing.XofStream(ps.lam, hashing.KEYGEN, rng(ps.lam // 8))
    idx = sample_stream(stream, res.z, ps.n) if res.z > 1 else np.zeros(ps.n, np.int64)
    e = np.array(res.elements, dtype=np.int64)[idx]
    w, tail = e[:ps.k], e[ps.k:]
    s = (A @ w + tail) % ps.p
    return RsdpInstance(res, ps.n, ps.k, A, s, seed), w


def public_key_bytes(inst):
    return inst.matrix_seed + pack_vector(inst.s, inst.p)


def secret_key_bytes(inst, w):
    return public_key_bytes(inst) + pack_vector(w, inst.p)


def public_key_len(ps):
    return 2 * ps.lam // 8 + (packed_bits(ps.r, ps.p) + 7) // 8


def secret_key_len(ps):
    return public_key_len(ps) + (packed_bits(ps.k, ps.p) + 7) // 8


def decode_public_key(data, ps):
    if len(data) != public_key_len(ps):
        raise KeyFormatError(f"public key must be {public_key_len(ps)} bytes")
    nseed = 2 * ps.lam // 8
    seed = bytes(data[:nseed])
    try:
        s = unpack_vector(data[nseed:], ps.r, ps.p)
    except ValueError as exc:
        raise KeyFormatError(str(exc)) from None
    A = expand_matrix(seed, ps.r, ps.k, ps.p, ps.lam)
    return RsdpInstance(restriction_for(ps), ps.n, ps.k, A, s, seed)


def decode_secret_key(data, ps):
    if len(data) != secret_key_len(ps):
        raise KeyFormatError(f"secret key must be {secret_key_len(ps)} bytes")
    npk = public_key_len(ps)
    inst = decode_public_key(data[:npk], ps)
    try:
        w = unpack_vector(data[npk:], ps.k, ps.p)
    except ValueError as exc:
        raise KeyFormatError(str(exc)) from None
    return inst, w
