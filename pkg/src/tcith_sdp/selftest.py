"""Quick self-checks, a reduced version of the acceptance suite (about 20 s)."""

import math
import os

import numpy as np

from . import hashing, params, piop, rsdp, sig
from .field import poly_mul

TABLE1 = (7650, 5533, 3533, 3095, 16675, 12354, 8284, 6860, 29839, 22305, 14584, 12608)
TABLE2 = (6432, 4372, 3515, 2974, 14359, 9361, 7816, 6463, 25573, 16589, 13851, 11521)


def check_table1():
    got = tuple(params.tcith_size(ps).total_bytes for ps in params.table_sets(1))
    return got == TABLE1, f"{sum(a == b for a, b in zip(got, TABLE1))}/12 exact"


def check_table2():
    got = [params.voleith_size(ps).total_bytes for ps in params.table_sets(2)]
    diffs = [a - b for a, b in zip(got, TABLE2)]
    exact = diffs.count(0)
    return all(abs(x) <= 2 for x in diffs) and exact >= 8, f"{exact}/12 exact, max |diff| {max(map(abs, diffs))}"


def check_constraints():
    bad = [ps.id for ps in params.builtin_sets() if params.validate(ps)]
    mutations = [
        (params.get("ternary-1-fast").with_(mu=5), params.N_LE_FIELD),
        (params.get("cross-1-fast").with_(eta=9), params.BATCH_SOUND),
        (params.get("cross-1-short").with_(tau=14), params.TCITH_SOUND),
        (params.get("ternary-1-short-v").with_(tau=7), params.VOLE_SOUND),
        (params.get("ternary-1-short-v").with_(rho=80), params.VOLE_FIELD),
    ]
    missed = [label for ps, label in mutations if label not in params.validate(ps)]
    return not bad and not missed, f"invalid rows {bad}, mutations missed {missed}"


def _product(E, p):
    poly = [1]
    for e in E:
        poly = poly_mul(poly, [-e % p, 1], p)
    return poly


def check_restrictions():
    ok = True
    for res, want in ((rsdp.CROSS_RESTRICTION, [126, 0, 0, 0, 0, 0, 0, 1]),
                      (rsdp.TERNARY_RESTRICTION, [2, 0, 1])):
        ok &= list(res.fE_coeffs) == want == _product(res.elements, res.p)
        roots = {x for x in range(res.p) if res.evaluate(np.array([x]))[0] == 0}
        ok &= roots == set(res.elements)
    return ok, "x^7 - 1 and x^2 - 1"


def check_modeling():
    ps = params.toy(n=6, k=2)
    inst, _ = rsdp.keygen(ps)
    E = set(inst.restriction.elements)
    ok = True
    for a in range(3):
        for b in range(3):
            w = np.array([a, b])
            inside = all(int(x) in E for x in rsdp.expand_witness(w, inst))
            ok &= inside == (not rsdp.evaluate_modeling(w, inst).any())
    return ok, "9 witnesses"


def check_completeness(N=4, gammas=5):
    ps = params.toy(N=N)
    inst, w = rsdp.keygen(ps)
    tables = rsdp.homogeneous_tables(inst)
    ok = True
    for _ in range(gammas):
        salt = os.urandom(32)
        com, dw, st = piop.prover_round1(w, inst, salt, os.urandom(16), ps, tables)
        gamma = piop.verifier_challenge1(hashing.XofStream(128, hashing.GAMMA, os.urandom(16)), ps)
        Q = piop.prover_round2(st, gamma)
        for r in range(N):
            ok &= bool(piop.verify(inst, tables, com, dw, gamma, Q, r,
                                   piop.prover_round3(st, r), salt, ps))
    return ok, f"N={N}, every r, {gammas} challenges"


def soundness_rate(N, trials, rng):
    """Fraction of accepted runs of the interpolation cheater on toy parameters."""
    ps = params.toy(N=N)
    inst, _ = rsdp.keygen(ps)
    tables = rsdp.homogeneous_tables(inst)
    bad = np.zeros(ps.k, dtype=np.int64)  # 0 is outside E, so every constraint fails
    wins = 0
    for _ in range(trials):
        salt = os.urandom(32)
        com, dw, st = piop.prover_round1(bad, inst, salt, os.urandom(16), ps, tables)
        gamma = piop.verifier_challenge1(hashing.XofStream(128, hashing.GAMMA, os.urandom(16)), ps)
        Q = piop.interpolation_cheat(st, gamma, rng.choice(N, ps.d, replace=False))
        r = int(rng.integers(N))
        wins += bool(piop.verify(inst, tables, com, dw, gamma, Q, r,
                                 piop.prover_round3(st, r), salt, ps))
    return wins / trials


def check_soundness(N=4, trials=2000):
    eps = float(params.soundness_error(3, 2, 1, 2, N))
    rate = soundness_rate(N, trials, np.random.default_rng())
    sd = math.sqrt(eps * (1 - eps) / trials)
    return abs(rate - eps) <= 3 * sd, f"rate {rate:.4f} vs {eps:.4f} (3 sd = {3 * sd:.4f})"


def check_signature(pid="ternary-1-fast", flips=20):
    ps = params.get(pid)
    pk, sk = sig.generate_keypair(ps)
    s = sig.sign(sk, b"selftest", ps)
    ok = bool(sig.verify(pk, b"selftest", s, ps)) and not sig.verify(pk, b"selftesT", s, ps)
    rng = np.random.default_rng()
    for pos in rng.choice(8 * len(s), flips, replace=False):
        bad = bytearray(s)
        bad[pos // 8] ^= 1 << (pos % 8)
        ok &= not sig.verify(pk, b"selftest", bytes(bad), ps)
    return ok, f"{pid}, {len(s)} bytes, {flips} bit flips rejected"


CHECKS = (
    ("table 1 sizes", check_table1),
    ("table 2 sizes", check_table2),
    ("parameter constraints", check_constraints),
    ("restriction polynomials", check_restrictions),
    ("modeling equivalence", check_modeling),
    ("proof completeness", check_completeness),
    ("empirical soundness", check_soundness),
    ("sign / verify / fuzz", check_signature),
)


def run(out=print):
    all_ok = True
    for name, fn in CHECKS:
        ok, detail = fn()
        all_ok &= bool(ok)
        out(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return all_ok
