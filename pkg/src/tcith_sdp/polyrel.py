"""Vectors of univariate polynomials over K and the relation polynomial F(P~_w)(X).

Polynomial vectors are stored coefficient-major as int arrays of shape
(rows, degree_bound + 1, mu), ascending degree.
"""

from dataclasses import dataclass

import numpy as np


class WitnessError(ValueError):
    """The batched relation polynomial has a nonzero top coefficient."""


@dataclass(frozen=True, eq=False)
class PolyVec:
    field: object
    coeffs: np.ndarray

    def __post_init__(self):
        if self.coeffs.ndim != 3 or self.coeffs.shape[2] != self.field.mu:
            raise ValueError("coefficient array must have shape (rows, deg+1, mu)")

    @property
    def rows(self):
        return self.coeffs.shape[0]

    @property
    def degree_bound(self):
        return self.coeffs.shape[1] - 1

    def leading(self):
        """P(inf): the degree-bound coefficients."""
        return self.coeffs[:, -1]

    def evaluate(self, x):
        """Horner evaluation at a single K point given as a length-mu array."""
        K = self.field
        acc = self.coeffs[:, -1]
        for t in range(self.degree_bound - 1, -1, -1):
            acc = K.add(K.mul(acc, x), self.coeffs[:, t])
        return acc

    def __add__(self, other):
        if self.coeffs.shape != other.coeffs.shape:
            raise ValueError("shape mismatch")
        return PolyVec(self.field, self.field.add(self.coeffs, other.coeffs))

    def __eq__(self, other):
        return (isinstance(other, PolyVec) and self.coeffs.shape == other.coeffs.shape
                and bool(np.array_equal(self.coeffs, other.coeffs)))

    @classmethod
    def zeros(cls, field, rows, degree_bound):
        return cls(field, np.zeros((rows, degree_bound + 1, field.mu), dtype=np.int64))


def lift_witness(P_w, delta_w):
    """P~_w(X) = P_w(X) + X * delta_w; its leading coefficients become w."""
    delta_w = np.asarray(delta_w, dtype=np.int64)
    if P_w.degree_bound != 1 or delta_w.shape != (P_w.rows,):
        raise ValueError("lift_witness needs a degree-1 PolyVec and a matching offset")
    K = P_w.field
    coeffs = P_w.coeffs.copy()
    coeffs[:, 1] = K.add(coeffs[:, 1], K.embed_array(delta_w))
    return PolyVec(K, coeffs)


def _linear_forms(inst, Pt):
    """Constant and linear coefficients of the n affine inputs to the constraints.

    Rows j < k are P~_{w,j}(X); row k+i is L_i(X) = <a_i, P~_w(X)>.
    """
    p = inst.p
    c0, c1 = Pt.coeffs[:, 0], Pt.coeffs[:, 1]
    z0 = np.concatenate([c0, (inst.A @ c0) % p])
    z1 = np.concatenate([c1, (inst.A @ c1) % p])
    return z0, z1


def _times_linear(K, poly, z0, z1):
    """Multiply each row polynomial (rows, t, mu) by (z0 + z1 X)."""
    rows, t, mu = poly.shape
    out = np.zeros((rows, t + 1, mu), dtype=np.int64)
    out[:, :t] = K.mul(poly, z0[:, None, :])
    out[:, 1:] = K.add(out[:, 1:], K.mul(poly, z1[:, None, :]))
    return out


def relation_poly(inst, tables, Pt, method="tables"):
    """F(P~_w)(X) with one row per constraint, formal degree d.

    Row j sums coef[j, l] X^(d-l) Y_j(X)^l over l, where Y_j is the j-th
    affine input. ``method="sparse"`` instead homogenises each constraint
    directly: with H_j = P~_{w,j} for j < k and H_{k+i} = s_i X - L_i(X),
    row j is sum_m c_m X^(d-m) H_j^m, and zero coefficients of f_E are
    skipped (x^2 - 1 and x^7 - 1 leave only two terms).
    """
    if Pt.degree_bound != 1 or Pt.rows != inst.k:
        raise ValueError("relation_poly expects k degree-1 polynomials")
    K = Pt.field
    p = inst.p
    d = tables.d
    z0, z1 = _linear_forms(inst, Pt)
    n = inst.n
    if method == "tables":
        coef = tables.rows(inst.k)
    elif method == "sparse":
        s_embed = K.embed_array(inst.s)
        z0 = np.concatenate([z0[:inst.k], K.neg(z0[inst.k:])])
        z1 = np.concatenate([z1[:inst.k], K.sub(s_embed, z1[inst.k:])])
        coef = np.tile(tables.c, (n, 1))
    else:
        raise ValueError(f"unknown method {method!r}")

    out = np.zeros((n, d + 1, K.mu), dtype=np.int64)
    power = np.zeros((n, 1, K.mu), dtype=np.int64)
    power[:, 0, 0] = 1
    for ell in range(d + 1):
        if ell:
            power = _times_linear(K, power, z0, z1)
        col = coef[:, ell] % p
        if col.any():
            out[:, d - ell:] += power * col[:, None, None]
    return PolyVec(K, out % p)


def relation_eval_at(inst, tables, r, v, K):
    """Value of relation_poly at X = r from the single evaluation v = P~_w(r).

    ``r`` is a K point (mu,), ``v`` a (k, mu) array and ``K`` the extension.
    """
    p = inst.p
    d = tables.d
    v = np.asarray(v, dtype=np.int64)
    z = np.concatenate([v, (inst.A @ v) % p])
    coef = tables.rows(inst.k)
    r_pows = [K.embed_array(1)]
    for _ in range(d):
        r_pows.append(K.mul(r_pows[-1], r))
    acc = np.zeros_like(z)
    zp = K.embed_array(np.ones(len(z), dtype=np.int64))
    for ell in range(d + 1):
        if ell:
            zp = K.mul(zp, z)
        term = K.scale(zp, coef[:, ell])
        acc = acc + K.mul(term, r_pows[d - ell])
    return acc % p


def batch(gamma, rel):
    """Gamma . F over K[X]: (eta, n) times (n rows) -> (eta rows)."""
    gamma = np.asarray(gamma, dtype=np.int64)
    if gamma.ndim != 3 or gamma.shape[1] != rel.rows:
        raise ValueError("batching matrix columns must match relation rows")
    return PolyVec(rel.field, rel.field.dot(gamma, rel.coeffs))


def mask_and_truncate(P_u, batched):
    """Q = P_u + batched, dropping the (required zero) degree-d coefficients."""
    d = batched.degree_bound
    if P_u.degree_bound != d - 1 or P_u.rows != batched.rows:
        raise ValueError("mask must have the batched rows and degree d-1")
    if batched.coeffs[:, d].any():
        raise WitnessError("witness does not satisfy relation")
    return P_u + PolyVec(batched.field, batched.coeffs[:, :d])


def interpolate(K, xs, ys):
    """Lagrange interpolation over K.

    ``xs`` holds m distinct points (m, mu); ``ys`` the values (m, rows, mu).
    Returns the unique PolyVec of degree bound m-1 through them.
    """
    xs = np.asarray(xs, dtype=np.int64)
    ys = np.asarray(ys, dtype=np.int64)
    m = len(xs)
    rows = ys.shape[1]
    out = np.zeros((rows, m, K.mu), dtype=np.int64)
    for i in range(m):
        basis = np.zeros((1, K.mu), dtype=np.int64)
        basis[0, 0] = 1
        denom = K.embed_array(1)
        for j in range(m):
            if j == i:
                continue
            nxt = np.zeros((len(basis) + 1, K.mu), dtype=np.int64)
            nxt[1:] = basis
            nxt[:-1] = K.sub(nxt[:-1], K.mul(basis, xs[j]))
            basis = nxt
            denom = K.mul(denom, K.sub(xs[i], xs[j]))
        scale = K.mul(ys[i], K.inv_array(denom))  # (rows, mu)
        out = K.add(out, K.mul(scale[:, None, :], basis[None, :, :]))
    return PolyVec(K, out)
