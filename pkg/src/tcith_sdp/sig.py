"""Fiat-Shamir signature over tau parallel runs of the proof, with grinding.

Byte layout (lambda = security level in bits, all multi-byte integers
little-endian):

    salt      2*lambda bits
    aux       lambda bits     public per-signature nonce, bound into h1
    h2        2*lambda bits
    ctr       32 bits         grinding counter
    tau x opening             copath seeds root-to-leaf, then the hidden leaf commitment
    tail                      one little-endian integer D + p^(tau*k) * Q, where
                              D packs every delta_w (repetition-major) in base p
                              and Q packs every coefficient of every Q_j in base p
                              (repetition, row, degree, extension coordinate);
                              the bit length is bits(D) + bits(Q), padded with
                              zero bits to whole bytes

Per-repetition root seeds come from fresh secret randomness and the witness,
never from anything that is transmitted. See docs/FORMATS.md for the details.
"""

import os
from dataclasses import dataclass

import numpy as np

from . import hashing, piop, vc
from .field import get_field, pack_int, packed_bits, pack_vector, unpack_int
from .hashing import u32
from .params import TCITH
from .polyrel import PolyVec
from .rsdp import (
    KeyFormatError,
    RsdpInstance,
    decode_public_key,
    decode_secret_key,
    homogeneous_tables,
    keygen,
    public_key_bytes,
    secret_key_bytes,
)

MALFORMED = "malformed encoding"
GRINDING_FAILED = "grinding check failed"
CHALLENGE_MISMATCH = "challenge mismatch"


class SignatureFormatError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Signature:
    salt: bytes
    aux: bytes
    h2: bytes
    ctr: int
    openings: tuple
    delta_w: np.ndarray  # (tau, k)
    Q: np.ndarray  # (tau, eta, d, mu)

    def __eq__(self, other):
        if not isinstance(other, Signature):
            return NotImplemented
        return (self.salt == other.salt and self.aux == other.aux and self.h2 == other.h2
                and self.ctr == other.ctr and self.openings == other.openings
                and np.array_equal(self.delta_w, other.delta_w)
                and np.array_equal(self.Q, other.Q))

    @property
    def r_indices(self):
        return tuple(op.hidden_index for op in self.openings)


def _require_tcith(ps):
    if ps.framework != TCITH:
        raise ValueError(f"{ps.id} is a VOLEitH set; only TCitH sets can sign and verify")


# -- layout -------------------------------------------------------------------------

def _fixed_len(ps):
    return (5 * ps.lam + 32) // 8


def _tail_bits(ps):
    return (packed_bits(ps.tau * ps.k, ps.p)
            + packed_bits(ps.tau * ps.eta * ps.d * ps.mu, ps.p))


def signature_len(ps):
    """Exact serialized length in bytes."""
    _require_tcith(ps)
    return _fixed_len(ps) + ps.tau * vc.opening_len(ps) + (_tail_bits(ps) + 7) // 8


def serialize(sig, ps):
    _require_tcith(ps)
    nd = ps.tau * ps.k
    delta = pack_int(np.asarray(sig.delta_w).ravel(), ps.p)
    q = pack_int(np.asarray(sig.Q).ravel(), ps.p)
    if np.size(sig.delta_w) != nd or np.size(sig.Q) != ps.tau * ps.eta * ps.d * ps.mu:
        raise SignatureFormatError("signature arrays do not match the parameter set")
    tail = delta + q * ps.p ** nd
    parts = [sig.salt, sig.aux, sig.h2, sig.ctr.to_bytes(4, "little")]
    parts += [op.to_bytes() for op in sig.openings]
    parts.append(tail.to_bytes((_tail_bits(ps) + 7) // 8, "little"))
    out = b"".join(parts)
    if len(out) != signature_len(ps):
        raise SignatureFormatError("signature fields have the wrong lengths")
    return out


def deserialize(data, ps):
    """Parse a signature; raises SignatureFormatError on any malformed encoding.

    The hidden leaf indices are not transmitted: they follow from h2.
    """
    _require_tcith(ps)
    data = bytes(data)
    if len(data) != signature_len(ps):
        raise SignatureFormatError(f"expected {signature_len(ps)} bytes, got {len(data)}")
    lam8 = ps.lam // 8
    salt, aux, h2 = data[:2 * lam8], data[2 * lam8:3 * lam8], data[3 * lam8:5 * lam8]
    ctr = int.from_bytes(data[5 * lam8:5 * lam8 + 4], "little")
    pos = _fixed_len(ps)
    step = vc.opening_len(ps)
    r_idx = challenge_indices(h2, ps)
    openings = []
    for j in range(ps.tau):
        openings.append(vc.GgmOpening.from_bytes(data[pos:pos + step], r_idx[j], ps))
        pos += step
    tail = int.from_bytes(data[pos:], "little")
    if tail >> _tail_bits(ps):
        raise SignatureFormatError("nonzero padding bits")
    nd = ps.tau * ps.k
    nq = ps.tau * ps.eta * ps.d * ps.mu
    q, delta = divmod(tail, ps.p ** nd)
    try:
        delta_w = unpack_int(delta, nd, ps.p).reshape(ps.tau, ps.k)
        Q = unpack_int(q, nq, ps.p).reshape(ps.tau, ps.eta, ps.d, ps.mu)
    except ValueError as exc:
        raise SignatureFormatError(str(exc)) from None
    return Signature(salt, aux, h2, ctr, tuple(openings), delta_w, Q)


# -- transcript hashing -------------------------------------------------------------

def _h1(ps, pk, msg, salt, aux, coms, delta_w):
    h = hashing.hasher(ps.lam, hashing.CH1, pk, len(msg).to_bytes(8, "little"), msg,
                       salt, aux, *coms, pack_vector(np.ravel(delta_w), ps.p))
    return h.digest(ps.lam // 4)


def _gammas(h1, ps):
    return [piop.verifier_challenge1(hashing.XofStream(ps.lam, hashing.GAMMA, h1, u32(j)), ps)
            for j in range(ps.tau)]


def _h2_prefix(h1, Q, ps):
    return hashing.hasher(ps.lam, hashing.CH2, h1, pack_vector(np.ravel(Q), ps.p))


def grinding_ok(h2, w):
    return int.from_bytes(h2, "little") & ((1 << w) - 1) == 0


def challenge_indices(h2, ps):
    return [piop.verifier_challenge2(hashing.XofStream(ps.lam, hashing.RINDEX, h2, u32(j)), ps.N)
            for j in range(ps.tau)]


# -- keys ---------------------------------------------------------------------------

def generate_keypair(ps, rng=os.urandom):
    """(public key bytes, secret key bytes); the secret key embeds the public key."""
    _require_tcith(ps)
    inst, w = keygen(ps, rng)
    return public_key_bytes(inst), secret_key_bytes(inst, w)


def _load_sk(sk, ps):
    if isinstance(sk, (bytes, bytearray)):
        return decode_secret_key(bytes(sk), ps)
    inst, w = sk
    return inst, np.asarray(w, dtype=np.int64)


def _load_pk(pk, ps):
    if isinstance(pk, RsdpInstance):
        return pk
    return decode_public_key(bytes(pk), ps)


# -- sign / verify ------------------------------------------------------------------

def sign(sk, msg, ps, rng=os.urandom, encode=True):
    """Sign ``msg``; returns the serialized signature (or the Signature if encode=False).

    ``sk`` is secret-key bytes or an (instance, witness) pair.
    """
    _require_tcith(ps)
    inst, w = _load_sk(sk, ps)
    msg = bytes(msg)
    lam8 = ps.lam // 8
    tables = homogeneous_tables(inst)
    pk = public_key_bytes(inst)

    salt = rng(2 * lam8)
    aux = rng(lam8)
    secret = rng(lam8)
    seed_src = hashing.hasher(ps.lam, hashing.SEED, secret, pack_vector(w, ps.p), salt)

    coms, deltas, states = [], [], []
    for j in range(ps.tau):
        h = seed_src.copy()
        h.update(u32(j))
        com, delta_w, state = piop.prover_round1(w, inst, salt, h.digest(lam8), ps, tables)
        coms.append(com)
        deltas.append(delta_w)
        states.append(state)
    delta_all = np.stack(deltas)

    h1 = _h1(ps, pk, msg, salt, aux, coms, delta_all)
    Qs = [piop.prover_round2(st, g).coeffs for st, g in zip(states, _gammas(h1, ps))]
    Q_all = np.stack(Qs)

    prefix = _h2_prefix(h1, Q_all, ps)
    for ctr in range(1 << 32):
        h = prefix.copy()
        h.update(ctr.to_bytes(4, "little"))
        h2 = h.digest(2 * lam8)
        if grinding_ok(h2, ps.w):
            break
    else:  # pragma: no cover - probability 2^-(2^32) for sane w
        raise RuntimeError("grinding counter exhausted")

    openings = tuple(piop.prover_round3(st, r) for st, r in zip(states, challenge_indices(h2, ps)))
    sig = Signature(salt, aux, h2, ctr, openings, delta_all, Q_all)
    return serialize(sig, ps) if encode else sig


def verify(pk, msg, sig, ps):
    """Verdict for (pk, msg, sig); ``sig`` may be bytes or a Signature."""
    _require_tcith(ps)
    try:
        inst = _load_pk(pk, ps)
        if not isinstance(sig, Signature):
            sig = deserialize(sig, ps)
    except (KeyFormatError, SignatureFormatError, vc.InvalidOpening):
        return piop.Verdict(False, MALFORMED)
    if not grinding_ok(sig.h2, ps.w):
        return piop.Verdict(False, GRINDING_FAILED)
    r_idx = challenge_indices(sig.h2, ps)
    if list(sig.r_indices) != r_idx:
        return piop.Verdict(False, CHALLENGE_MISMATCH)

    try:
        recs = [vc.reconstruct(op, r, sig.salt, ps) for op, r in zip(sig.openings, r_idx)]
    except vc.InvalidOpening:
        return piop.Verdict(False, piop.BAD_OPENING)
    pk_bytes = public_key_bytes(inst)
    h1 = _h1(ps, pk_bytes, bytes(msg), sig.salt, sig.aux, [rec.com for rec in recs], sig.delta_w)
    h = _h2_prefix(h1, sig.Q, ps)
    h.update(sig.ctr.to_bytes(4, "little"))
    if h.digest(ps.lam // 4) != sig.h2:
        # every transmitted field feeds h2, so this also catches bad openings
        return piop.Verdict(False, CHALLENGE_MISMATCH)

    K = get_field(ps.p, ps.mu)
    tables = homogeneous_tables(inst)
    for j, (gamma, rec) in enumerate(zip(_gammas(h1, ps), recs)):
        Q = PolyVec(K, np.asarray(sig.Q[j], dtype=np.int64))
        if not piop.check_relation(inst, tables, ps, sig.delta_w[j], gamma, Q, r_idx[j],
                                   rec.leaves()):
            return piop.Verdict(False, piop.RELATION_FAILED)
    return piop.ACCEPT
