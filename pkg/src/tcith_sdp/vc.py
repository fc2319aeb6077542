"""GGM seed-tree vector commitment with all-but-one opening.

Nodes are heap-indexed from the root (index 0); node i has children 2i+1
and 2i+2, and leaf j sits at node N-1+j. One XOF call per leaf seed yields both its
lambda-bit commitment (the first bytes) and the stream from which the share
data (u_j, g_j) is sampled; the random polynomials

    P_w(X) = sum_j u_j (X - phi(j))        u_j in F_p^k
    P_u(X) = sum_j (X - phi(j)) g_j(X)     g_j in K[X]^eta, deg <= d-2

are assembled. Evaluating either at phi(r) needs every leaf except r, which
is exactly what an opening for r reveals.
"""

from dataclasses import dataclass

import numpy as np

from . import hashing
from .field import get_field, sample_bytes_needed, sample_rows, tensordot_exact
from .hashing import u32
from .polyrel import PolyVec


class InvalidOpening(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SeedTree:
    salt: bytes
    lam: int
    nodes: list
    leaf_coms: list
    leaves: object = None

    @property
    def N(self):
        return len(self.leaf_coms)

    def leaf_seed(self, j):
        return self.nodes[self.N - 1 + j]


@dataclass(frozen=True)
class GgmOpening:
    hidden_index: int
    copath: tuple
    hidden_com: bytes

    def to_bytes(self):
        return b"".join(self.copath) + self.hidden_com

    @classmethod
    def from_bytes(cls, data, r, ps):
        nb = ps.lam // 8
        if len(data) != opening_len(ps):
            raise InvalidOpening("malformed copath length")
        seeds = tuple(bytes(data[i * nb:(i + 1) * nb]) for i in range(ps.depth))
        return cls(r, seeds, bytes(data[ps.depth * nb:]))


@dataclass(frozen=True, eq=False)
class Leaves:
    """Expanded share data for a subset of leaves (all, or all but one)."""
    indices: np.ndarray
    U: np.ndarray  # (m, k) over F_p
    G: np.ndarray  # (m, eta, d-1, mu) over F_p


def opening_len(ps):
    return ps.lam // 8 * (ps.depth + 1)


def _expand_subtrees(nodes, salt, lam):
    """Fill in every child of a known node, top-down (unknown nodes stay None)."""
    shake = hashing.shake_fn(lam)
    prefix = bytes([hashing.TREE]) + salt
    nb = lam // 8
    idx = hashing.u32_table(len(nodes))
    start = 0
    while 2 * start + 1 < len(nodes):
        end = 2 * start + 1
        level = nodes[start:end]
        if None in level:
            # partial tree: keep the sibling seeds supplied by an opening
            for i, seed in enumerate(level, start):
                if seed is not None:
                    out = shake(prefix + idx[i] + seed).digest(2 * nb)
                    nodes[2 * i + 1], nodes[2 * i + 2] = out[:nb], out[nb:]
        else:
            outs = [shake(prefix + idx[i] + seed).digest(2 * nb)
                    for i, seed in enumerate(level, start)]
            nodes[end:2 * end + 1] = [h for out in outs for h in (out[:nb], out[nb:])]
        start = end


def _leaf_count(ps):
    return ps.k + ps.eta * (ps.d - 1) * ps.mu


def _leaf_digests(seeds, indices, salt, ps):
    """Hash each leaf seed once: (commitments, share-data bytes, hash inputs)."""
    nc = ps.lam // 8
    nbytes = sample_bytes_needed(ps.p, _leaf_count(ps))
    shake = hashing.shake_fn(ps.lam)
    prefix = bytes([hashing.LEAF]) + salt
    idx = hashing.u32_table(ps.N)
    inputs = [prefix + idx[j] + seed for j, seed in zip(indices, seeds)]
    digests = [shake(x).digest(nc + nbytes) for x in inputs]
    raw = np.frombuffer(b"".join(digests), dtype=np.uint8).reshape(len(inputs), nc + nbytes)
    coms = [d[:nc] for d in digests]
    return coms, raw[:, nc:], inputs


def _sample_leaves(raw, inputs, indices, ps):
    nc = ps.lam // 8
    shake = hashing.shake_fn(ps.lam)
    vals = sample_rows(raw, ps.p, _leaf_count(ps),
                       lambda row, size: shake(inputs[row]).digest(nc + size)[nc:])
    return Leaves(np.asarray(indices, dtype=np.int64), vals[:, :ps.k],
                  vals[:, ps.k:].reshape(len(inputs), ps.eta, ps.d - 1, ps.mu))


def _root_com(salt, lam, leaf_coms):
    return hashing.xof(lam, hashing.COM, salt, b"".join(leaf_coms), out_len=lam // 4)


def commit(salt, root_seed, ps):
    """Build the seed tree and the 2*lambda-bit commitment to its leaves."""
    lam, N = ps.lam, ps.N
    if len(root_seed) != lam // 8:
        raise ValueError(f"root seed must be {lam // 8} bytes")
    nodes = [None] * (2 * N - 1)
    nodes[0] = bytes(root_seed)
    _expand_subtrees(nodes, salt, lam)
    leaf_coms, raw, inputs = _leaf_digests(nodes[N - 1:], range(N), salt, ps)
    leaves = _sample_leaves(raw, inputs, range(N), ps)
    tree = SeedTree(salt, lam, nodes, leaf_coms, leaves)
    return tree, _root_com(salt, lam, leaf_coms)


def expand_leaves(salt, seeds, indices, ps):
    """Sample (u_j, g_j) for each listed leaf."""
    _, raw, inputs = _leaf_digests(seeds, indices, salt, ps)
    return _sample_leaves(raw, inputs, indices, ps)


def derive_polys(tree, ps):
    """(P_w, P_u) from all N leaves of the tree."""
    K = get_field(ps.p, ps.mu)
    N = tree.N
    leaves = tree.leaves
    if leaves is None:
        leaves = expand_leaves(tree.salt, tree.nodes[N - 1:], range(N), ps)
    phi = K.points(N)
    p = ps.p
    U, G = leaves.U, leaves.G

    pw = np.zeros((ps.k, 2, K.mu), dtype=np.int64)
    pw[:, 1, 0] = U.sum(axis=0) % p
    pw[:, 0] = (-tensordot_exact(U, phi, ([0], [0]), p)) % p

    d = ps.d
    pu = np.zeros((ps.eta, d, K.mu), dtype=np.int64)
    pu[:, 1:] = G.sum(axis=0) % p
    cross = tensordot_exact(phi, G, ([0], [0]), p)  # (mu_i, eta, d-1, mu_j)
    cross = K.reduce_outer(np.moveaxis(cross, 0, -2))
    pu[:, :d - 1] = K.sub(pu[:, :d - 1], cross)
    return PolyVec(K, pw), PolyVec(K, pu)


def open_tree(tree, r):
    """All-but-one opening: sibling seeds from the root down, plus com_r."""
    N = tree.N
    if not 0 <= r < N:
        raise ValueError(f"leaf index {r} out of range [0, {N})")
    copath = []
    node = N - 1 + r
    while node:
        sib = node + 1 if node % 2 else node - 1
        copath.append(tree.nodes[sib])
        node = (node - 1) // 2
    return GgmOpening(r, tuple(reversed(copath)), tree.leaf_coms[r])


@dataclass(frozen=True, eq=False)
class Reconstruction:
    """What an opening for r implies: the commitment and the other N-1 leaves.

    Leaf share data is sampled lazily, so a caller can compare ``com`` first
    and skip the sampling work when it already knows the answer is reject.
    """
    com: bytes
    seeds: list
    r: int
    ps: object
    _raw: np.ndarray
    _inputs: list

    def leaves(self):
        idx = [j for j in range(len(self.seeds)) if j != self.r]
        return _sample_leaves(self._raw, self._inputs, idx, self.ps)


def reconstruct(opening, r, salt, ps):
    """Recompute the commitment implied by an opening (hashing only).

    ``seeds[r]`` of the result is None.
    """
    lam, N = ps.lam, ps.N
    if not 0 <= r < N:
        raise InvalidOpening(f"leaf index {r} out of range")
    if len(opening.copath) != ps.depth or any(len(s) != lam // 8 for s in opening.copath):
        raise InvalidOpening("malformed copath length")
    if len(opening.hidden_com) != lam // 8:
        raise InvalidOpening("malformed hidden commitment")
    nodes = [None] * (2 * N - 1)
    path = []
    node = N - 1 + r
    while node:
        path.append(node)
        node = (node - 1) // 2
    for node, seed in zip(reversed(path), opening.copath):
        sib = node + 1 if node % 2 else node - 1
        nodes[sib] = seed
    _expand_subtrees(nodes, salt, lam)
    seeds = nodes[N - 1:]
    idx = [j for j in range(N) if j != r]
    coms, raw, inputs = _leaf_digests([seeds[j] for j in idx], idx, salt, ps)
    coms.insert(r, opening.hidden_com)
    return Reconstruction(_root_com(salt, lam, coms), seeds, r, ps, raw, inputs)


def revealed_leaves(seeds, r, salt, ps):
    idx = [j for j in range(len(seeds)) if j != r]
    return expand_leaves(salt, [seeds[j] for j in idx], idx, ps)


def verify_open(com, opening, r, salt, ps):
    """Check an opening against com; on success return the N-1 revealed leaves."""
    rec = reconstruct(opening, r, salt, ps)
    if rec.com != com:
        raise InvalidOpening("invalid opening")
    return rec.leaves()


def eval_from_opening(leaves, r, ps):
    """(P_w(phi(r)), P_u(phi(r))) from the leaves other than r.

    Uses the per-leaf products directly: sum_j u_j (x - phi(j)) and
    sum_j (x - phi(j)) g_j(x) with x = phi(r).
    """
    K = get_field(ps.p, ps.mu)
    phi_all = K.points(ps.N)
    x = phi_all[r]
    if np.any(leaves.indices == r):
        raise ValueError("leaf r must not be among the revealed leaves")
    diff = K.sub(x, phi_all[leaves.indices])  # (m, mu)
    pw_r = tensordot_exact(leaves.U, diff, ([0], [0]), ps.p) % ps.p  # (k, mu)

    # g_j(x) = sum_t g_jt x^t, with each x^t applied as an F_p-linear map
    powers = [K.embed_array(np.ones((), dtype=np.int64))]
    for _ in range(leaves.G.shape[2] - 1):
        powers.append(K.mul(powers[-1], x))
    maps = np.stack([K.mul_matrix(c) for c in powers])  # (d-1, mu, mu)
    gx = tensordot_exact(leaves.G, maps, ([2, 3], [0, 1]), ps.p) % ps.p  # (m, eta, mu)
    cross = tensordot_exact(diff, gx, ([0], [0]), ps.p)  # (mu_i, eta, mu_j)
    pu_r = K.reduce_outer(np.moveaxis(cross, 0, -2))
    return pw_r, pu_r
