import os

import numpy as np
import pytest

from tcith_sdp import hashing, params, piop, rsdp
from tcith_sdp.field import get_field
from tcith_sdp.polyrel import PolyVec, WitnessError

from conftest import honest_round1


def _gamma(ps, tag=b"g"):
    return piop.verifier_challenge1(hashing.XofStream(ps.lam, hashing.GAMMA, tag + os.urandom(8)), ps)


@pytest.mark.parametrize("N", [4, 8])
def test_perfect_completeness(N):
    ps = params.toy(N=N)
    for _ in range(10):
        inst, w, tables, salt, com, dw, st = honest_round1(ps)
        gamma = _gamma(ps)
        Q = piop.prover_round2(st, gamma)
        assert Q.degree_bound == ps.d - 1
        for r in range(N):
            assert piop.verify(inst, tables, com, dw, gamma, Q, r, piop.prover_round3(st, r), salt, ps)


def test_completeness_cross_toy():
    ps = params.toy(p=127, mu=2, N=8, n=10, k=4, eta=2)
    inst, w, tables, salt, com, dw, st = honest_round1(ps)
    gamma = _gamma(ps)
    Q = piop.prover_round2(st, gamma)
    assert all(piop.verify(inst, tables, com, dw, gamma, Q, r, piop.prover_round3(st, r), salt, ps)
               for r in range(8))


def test_round1_properties():
    ps = params.toy(N=8, n=6, k=3)
    inst, w, tables, salt, com, dw, st = honest_round1(ps)
    assert np.array_equal((st.P_w.leading()[:, 0] + dw) % ps.p, w)
    assert dw.shape == (ps.k,) and dw.dtype == np.int64 and ((0 <= dw) & (dw < ps.p)).all()
    com2, dw2, _ = piop.prover_round1(w, inst, salt, st.tree.nodes[0], ps, tables)
    assert com2 == com and np.array_equal(dw2, dw)


def test_messages_independent_of_later_challenges():
    ps = params.toy(N=8)
    inst, w, tables, salt, com, dw, st = honest_round1(ps)
    gamma = _gamma(ps)
    Q1 = piop.prover_round2(st, gamma)
    piop.prover_round3(st, 2)
    Q2 = piop.prover_round2(st, gamma)
    assert Q1 == Q2


def test_gamma_shape_and_domain_separation():
    ps = params.toy(eta=2, n=5)
    a = piop.verifier_challenge1(hashing.XofStream(128, hashing.GAMMA, b"x"), ps)
    b = piop.verifier_challenge1(hashing.XofStream(128, hashing.RINDEX, b"x"), ps)
    assert a.shape == (2, 5, 2)
    assert not np.array_equal(a, b)


def test_gamma_uniform_on_toy_field():
    ps = params.toy(n=4)
    counts = np.zeros(9)
    for i in range(1500):
        g = piop.verifier_challenge1(hashing.XofStream(128, hashing.GAMMA, i.to_bytes(4, "little")), ps)
        for x in g.reshape(-1, 2):
            counts[x[0] + 3 * x[1]] += 1
    expected = counts.sum() / 9
    chi2 = ((counts - expected) ** 2 / expected).sum()
    assert chi2 < 8 + 4.5 * 4  # dof 8


def test_index_challenge_range_and_uniformity():
    N = 8
    draws = [piop.verifier_challenge2(hashing.XofStream(128, hashing.RINDEX, i.to_bytes(4, "little")), N)
             for i in range(8000)]
    assert min(draws) >= 0 and max(draws) < N
    counts = np.bincount(draws, minlength=N)
    chi2 = ((counts - 1000) ** 2 / 1000).sum()
    assert chi2 < 7 + 4.5 * np.sqrt(14)
    assert piop.verifier_challenge2(hashing.BytesStream(bytes([0xFF, 0x0B, 0x05])), 11) == 5


def test_zero_gamma_gives_mask():
    ps = params.toy(N=4)
    *_, st = honest_round1(ps)
    Q = piop.prover_round2(st, np.zeros((ps.eta, ps.n, ps.mu), np.int64))
    assert Q == st.P_u


def test_invalid_witness_usually_fails():
    ps = params.toy(N=4)
    failures = 0
    for _ in range(200):
        inst, w, tables, salt, com, dw, st = honest_round1(ps, w=np.array([0, 1]))
        try:
            piop.prover_round2(st, _gamma(ps))
        except WitnessError:
            failures += 1
    # failure probability is 1 - 1/9 per run
    assert failures >= 160


def test_tampered_Q_fails_almost_everywhere():
    ps = params.toy(N=8)
    inst, w, tables, salt, com, dw, st = honest_round1(ps)
    gamma = _gamma(ps)
    Q = piop.prover_round2(st, gamma)
    K = get_field(ps.p, ps.mu)
    for row, deg, c in [(0, 0, 0), (0, 1, 1)]:
        bad = Q.coeffs.copy()
        bad[row, deg, c] = (bad[row, deg, c] + 1) % ps.p
        accepted = [r for r in range(ps.N)
                    if piop.verify(inst, tables, com, dw, gamma, PolyVec(K, bad), r,
                                   piop.prover_round3(st, r), salt, ps)]
        assert len(accepted) <= ps.d


def test_reject_reasons():
    ps = params.toy(N=4)
    inst, w, tables, salt, com, dw, st = honest_round1(ps)
    gamma = _gamma(ps)
    Q = piop.prover_round2(st, gamma)
    op = piop.prover_round3(st, 1)
    assert piop.verify(inst, tables, com, dw, gamma, Q, 2, op, salt, ps).reason == piop.BAD_OPENING
    dw_bad = (dw + 1) % ps.p
    v = piop.verify(inst, tables, com, dw_bad, gamma, Q, 1, op, salt, ps)
    assert not v and v.reason == piop.RELATION_FAILED


def test_cheater_wins_on_its_points():
    ps = params.toy(N=8)
    inst, w, tables, salt, com, dw, st = honest_round1(ps, w=np.array([0, 0]))
    gamma = _gamma(ps)
    Q = piop.interpolation_cheat(st, gamma, [2, 5])
    for r in (2, 5):
        assert piop.verify(inst, tables, com, dw, gamma, Q, r, piop.prover_round3(st, r), salt, ps)
