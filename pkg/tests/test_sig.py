import json
import math
import os
from pathlib import Path

import numpy as np
import pytest

from tcith_sdp import params, piop, sig, vc, vectors
from tcith_sdp.hashing import ShakeDrbg

KAT = Path(__file__).parent / "vectors" / "kat.json"


def _overhead(ps):
    return math.ceil(ps.tau * ps.eta * ps.mu * math.log2(ps.p) / 8)


@pytest.fixture(scope="module")
def small():
    """ternary-1-fast with two repetitions: quick but structurally complete."""
    ps = params.get("ternary-1-fast").with_(tau=2, w=2)
    pk, sk = sig.generate_keypair(ps)
    return ps, pk, sk


@pytest.mark.parametrize("pid", ["cross-1-fast", "ternary-1-fast"])
def test_full_size_completeness(pid):
    ps = params.get(pid)
    pk, sk = sig.generate_keypair(ps)
    s = sig.sign(sk, b"abc", ps)
    assert sig.verify(pk, b"abc", s, ps)
    assert not sig.verify(pk, b"abd", s, ps)


@pytest.mark.parametrize("ps", params.table_sets(1), ids=lambda ps: ps.id)
def test_reduced_tau_completeness(ps):
    ps = ps.with_(tau=2, w=1)
    pk, sk = sig.generate_keypair(ps)
    s = sig.sign(sk, b"m", ps)
    assert len(s) == sig.signature_len(ps)
    assert sig.verify(pk, b"m", s, ps)


@pytest.mark.parametrize("ps", params.table_sets(1), ids=lambda ps: ps.id)
def test_layout_length_against_table(ps):
    assert abs(sig.signature_len(ps) - (ps.table_bytes + _overhead(ps))) <= 1


def test_documented_size_examples():
    assert _overhead(params.get("ternary-1-short")) == 200
    assert _overhead(params.get("cross-1-fast")) == 420
    assert abs(sig.signature_len(params.get("ternary-1-short")) - 3295) <= 1
    assert abs(sig.signature_len(params.get("cross-1-fast")) - 8070) <= 1


def test_grinding_counter_mean():
    ps = params.get("ternary-1-fast").with_(tau=1, w=4)
    pk, sk = sig.generate_keypair(ps)
    ctrs = [sig.sign(sk, i.to_bytes(2, "little"), ps, encode=False).ctr for i in range(200)]
    # ctr is geometric with mean 2^4 - 1 = 15
    assert 8 <= np.mean(ctrs) <= 32


def test_grinding_bits_checked(small):
    ps, pk, sk = small
    s = sig.sign(sk, b"x", ps, encode=False)
    assert sig.grinding_ok(s.h2, ps.w)
    h2 = bytes([s.h2[0] | 1]) + s.h2[1:]
    forged = sig.Signature(s.salt, s.aux, h2, s.ctr, s.openings, s.delta_w, s.Q)
    assert sig.verify(pk, b"x", forged, ps).reason == sig.GRINDING_FAILED


def test_distinct_randomness(small):
    ps, pk, sk = small
    a = sig.sign(sk, b"x", ps, encode=False)
    b = sig.sign(sk, b"x", ps, encode=False)
    assert a.salt != b.salt
    assert sig.verify(pk, b"x", a, ps) and sig.verify(pk, b"x", b, ps)


def test_seeded_signing_is_reproducible(small):
    ps, pk, sk = small
    assert sig.sign(sk, b"x", ps, ShakeDrbg(b"1")) == sig.sign(sk, b"x", ps, ShakeDrbg(b"1"))


def test_roundtrip_100(small):
    ps, pk, sk = small
    for i in range(100):
        raw = sig.sign(sk, bytes([i]), ps)
        parsed = sig.deserialize(raw, ps)
        assert sig.serialize(parsed, ps) == raw
        assert parsed == sig.deserialize(raw, ps)
        assert list(parsed.r_indices) == sig.challenge_indices(parsed.h2, ps)


def test_verify_is_deterministic(small):
    ps, pk, sk = small
    s = bytearray(sig.sign(sk, b"x", ps))
    s[-40] ^= 4
    assert sig.verify(pk, b"x", bytes(s), ps) == sig.verify(pk, b"x", bytes(s), ps)


def test_malformed_encodings(small):
    ps, pk, sk = small
    s = sig.sign(sk, b"x", ps)
    assert sig.verify(pk, b"x", s[:-1], ps).reason == sig.MALFORMED
    assert sig.verify(pk, b"x", s + b"\x00", ps).reason == sig.MALFORMED
    # the top bits of the last byte are padding
    tail_bits = sig._tail_bits(ps)
    if tail_bits % 8:
        padded = s[:-1] + bytes([s[-1] | 0x80])
        assert sig.verify(pk, b"x", padded, ps).reason == sig.MALFORMED
    assert sig.verify(pk[:-1], b"x", s, ps).reason == sig.MALFORMED


def test_cross_set_rejected():
    a, b = params.get("cross-1-fast"), params.get("ternary-1-fast")
    pk, sk = sig.generate_keypair(b)
    s = sig.sign(sk, b"x", b)
    assert sig.verify(pk, b"x", s, a).reason == sig.MALFORMED


def test_voleith_sets_cannot_sign():
    with pytest.raises(ValueError, match="VOLEitH"):
        sig.generate_keypair(params.get("cross-1-fast-v"))


def test_prover_and_verifier_agree_on_challenges(small):
    ps, pk, sk = small
    s = sig.sign(sk, b"x", ps, encode=False)
    recs = [vc.reconstruct(op, r, s.salt, ps) for op, r in zip(s.openings, s.r_indices)]
    h1 = sig._h1(ps, pk, b"x", s.salt, s.aux, [rec.com for rec in recs], s.delta_w)
    h = sig._h2_prefix(h1, s.Q, ps)
    h.update(s.ctr.to_bytes(4, "little"))
    assert h.digest(ps.lam // 4) == s.h2


def test_secret_randomness_not_in_signature(small):
    # the same rng output for salt/aux but a different secret draw gives different seeds
    ps, pk, sk = small
    fixed = os.urandom(32 + 16)

    def rng_with(secret):
        buf = [fixed[:32], fixed[32:], secret]
        return lambda n: buf.pop(0)[:n]

    a = sig.sign(sk, b"x", ps, rng_with(b"\x01" * 16), encode=False)
    b = sig.sign(sk, b"x", ps, rng_with(b"\x02" * 16), encode=False)
    assert a.salt == b.salt and a.aux == b.aux
    assert not np.array_equal(a.delta_w, b.delta_w)


def test_known_answer_vectors():
    records = json.loads(KAT.read_text())
    by_set = {}
    for rec in records:
        by_set.setdefault(rec["params_id"], []).append(rec)
    assert len(by_set) == 12 and all(len(v) >= 3 for v in by_set.values())
    for rec in records:
        ps = params.get(rec["params_id"])
        assert sig.verify(bytes.fromhex(rec["pk_hex"]), bytes.fromhex(rec["msg_hex"]),
                          bytes.fromhex(rec["sig_hex"]), ps), rec["params_id"]


@pytest.mark.parametrize("pid", ["cross-1-fast", "ternary-1-fast"])
def test_known_answer_regeneration(pid):
    records = [r for r in json.loads(KAT.read_text()) if r["params_id"] == pid]
    assert vectors.make_vector(params.get(pid), 0) == records[0]


def test_reject_reasons_surface(small):
    ps, pk, sk = small
    s = sig.sign(sk, b"x", ps, encode=False)
    Q = s.Q.copy()
    Q[0, 0, 0, 0] = (Q[0, 0, 0, 0] + 1) % ps.p
    forged = sig.Signature(s.salt, s.aux, s.h2, s.ctr, s.openings, s.delta_w, Q)
    assert sig.verify(pk, b"x", forged, ps).reason == sig.CHALLENGE_MISMATCH
    assert piop.RELATION_FAILED != sig.CHALLENGE_MISMATCH
