"""The five-pass proof of knowledge of a restricted-decoding witness.

Prover                                   Verifier
  commit to (P_w, P_u); send com, delta_w
                                         Gamma <- K^(eta x n)
  send Q = P_u + Gamma . F(P~_w)
                                         r <- Omega
  send the all-but-one opening for r
                                         check the opening, then
                                         Q(r) == P_u(r) + Gamma . F(r delta_w + P_w(r))

Challenges are drawn from byte streams (``hashing.XofStream`` or any
object with ``read``) so the same code serves the interactive tests and the
Fiat-Shamir signature.
"""

from dataclasses import dataclass

import numpy as np

from . import vc
from .field import BitReader, get_field, sample_stream
from .polyrel import (
    PolyVec,
    batch,
    interpolate,
    lift_witness,
    mask_and_truncate,
    relation_eval_at,
    relation_poly,
)
from .rsdp import homogeneous_tables

BAD_OPENING = "bad-opening"
RELATION_FAILED = "relation-check-failed"


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    reason: str = ""

    def __bool__(self):
        return self.accepted


ACCEPT = Verdict(True)


@dataclass(eq=False)
class ProverState:
    ps: object
    inst: object
    tables: object
    tree: object
    P_w: PolyVec
    P_u: PolyVec
    delta_w: np.ndarray
    Q: PolyVec | None = None


def prover_round1(w, inst, salt, root_seed, ps, tables=None):
    w = np.asarray(w, dtype=np.int64)
    if w.shape != (ps.k,):
        raise ValueError(f"witness must have length {ps.k}")
    tree, com = vc.commit(salt, root_seed, ps)
    P_w, P_u = vc.derive_polys(tree, ps)
    # leading coefficients of P_w are embedded F_p values
    delta_w = (w - P_w.leading()[:, 0]) % ps.p
    if tables is None:
        tables = homogeneous_tables(inst)
    return com, delta_w, ProverState(ps, inst, tables, tree, P_w, P_u, delta_w)


def verifier_challenge1(stream, ps):
    """Uniform batching matrix Gamma in K^(eta x n), shape (eta, n, mu)."""
    vals = sample_stream(stream, ps.p, ps.eta * ps.n * ps.mu)
    return vals.reshape(ps.eta, ps.n, ps.mu)


def masked_relation(state, gamma):
    """P_u + Gamma . F(P~_w) with its full degree-d top row (no witness check)."""
    Pt = lift_witness(state.P_w, state.delta_w)
    batched = batch(gamma, relation_poly(state.inst, state.tables, Pt))
    K = batched.field
    full = batched.coeffs.copy()
    full[:, :-1] = K.add(full[:, :-1], state.P_u.coeffs)
    return PolyVec(K, full)


def interpolation_cheat(state, gamma, leaf_indices):
    """Second message of the optimal cheater for a (possibly invalid) witness.

    Sends the degree-(d-1) polynomial agreeing with the true masked degree-d
    polynomial at the d evaluation points phi(j), j in ``leaf_indices``. It
    passes exactly when r lands in that set, or when the batched top
    coefficient happens to vanish.
    """
    full = masked_relation(state, gamma)
    K = full.field
    if len(set(leaf_indices)) != full.degree_bound:
        raise ValueError("need d distinct interpolation points")
    xs = K.points(state.ps.N)[list(leaf_indices)]
    ys = np.stack([full.evaluate(x) for x in xs])
    return interpolate(K, xs, ys)


def prover_round2(state, gamma):
    Pt = lift_witness(state.P_w, state.delta_w)
    batched = batch(gamma, relation_poly(state.inst, state.tables, Pt))
    state.Q = mask_and_truncate(state.P_u, batched)
    return state.Q


def verifier_challenge2(stream, N):
    """Uniform leaf index in [0, N): 8*ceil(log2(N)/8)-bit draws, rejection above N."""
    nbits = 8 * -(-max(N - 1, 1).bit_length() // 8)
    reader = BitReader(stream)
    while True:
        x = reader.read(nbits)
        if x < N:
            return x


def prover_round3(state, r_index):
    return vc.open_tree(state.tree, r_index)


def check_relation(inst, tables, ps, delta_w, gamma, Q, r_index, leaves):
    """The final algebraic check, given the revealed leaves for r_index."""
    K = get_field(ps.p, ps.mu)
    x = K.points(ps.N)[r_index]
    pw_r, pu_r = vc.eval_from_opening(leaves, r_index, ps)
    ew_r = K.add(K.mul(K.embed_array(delta_w), x), pw_r)
    rel = relation_eval_at(inst, tables, x, ew_r, K)
    expected = K.add(pu_r, K.dot(gamma, rel))
    return bool(np.array_equal(Q.evaluate(x), expected))


def verify(inst, tables, com, delta_w, gamma, Q, r_index, opening, salt, ps):
    try:
        leaves = vc.verify_open(com, opening, r_index, salt, ps)
    except vc.InvalidOpening:
        return Verdict(False, BAD_OPENING)
    if Q.degree_bound != ps.d - 1 or Q.rows != ps.eta:
        return Verdict(False, RELATION_FAILED)
    if not check_relation(inst, tables, ps, delta_w, gamma, Q, r_index, leaves):
        return Verdict(False, RELATION_FAILED)
    return ACCEPT
