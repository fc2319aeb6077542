"""Arithmetic over a small prime field F_p and its extension K = F_p[x]/(m(x)).

Two representations live side by side:

* ``FieldElement`` / ``ExtFieldElement`` are immutable scalar values with
  operator overloading, convenient for tests and one-off computations.
* The protocol kernels work on numpy integer arrays whose last axis holds the
  ``mu`` power-basis coefficients of K elements; ``ExtField`` provides the
  vectorised operations (``mul``, ``dot``, ``power`` ...) on such arrays.

Field vectors are serialised as the base-p integer ``sum v_i p^i`` written
little-endian in exactly ``ceil(len * log2 p)`` bits.
"""

from dataclasses import dataclass
from functools import lru_cache
import itertools
import math

import numpy as np


def is_prime(p):
    if p < 2:
        return False
    return all(p % q for q in range(2, math.isqrt(p) + 1))


def _check_modulus(p):
    if not is_prime(p) or p >= 256:
        raise ValueError(f"modulus must be a prime below 256, got {p}")


@dataclass(frozen=True)
class FieldElement:
    value: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.p != self.p:
                raise ValueError("elements of different fields")
            return other.value
        return int(other)

    def __add__(self, other):
        return FieldElement(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return FieldElement(self._coerce(other) - self.value, self.p)

    def __mul__(self, other):
        return FieldElement(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.p)

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FieldElement(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * FieldElement(self._coerce(other), self.p).inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElement(pow(self.value, e, self.p), self.p)

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.p})"


def GF(p):
    """Element constructor for F_p: ``GF(127)(64)``."""
    _check_modulus(p)
    return lambda v: FieldElement(v, p)


# -- dense polynomials over F_p, coefficient lists low degree first ----------

def poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_add(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return poly_trim([(x + y) % p for x, y in zip(a, b)])


def poly_sub(a, b, p):
    return poly_add(a, [(-y) % p for y in b], p)


def poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return poly_trim([c % p for c in out])


def poly_divmod(a, b, p):
    b = poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = poly_trim(a)
    inv_lead = pow(b[-1], -1, p)
    quot = [0] * max(len(a) - len(b) + 1, 0)
    rem = list(a)
    while len(rem) >= len(b):
        shift = len(rem) - len(b)
        factor = rem[-1] * inv_lead % p
        quot[shift] = factor
        for i, c in enumerate(b):
            rem[shift + i] = (rem[shift + i] - factor * c) % p
        rem = poly_trim(rem)
    return poly_trim(quot), rem


def poly_eval(a, x, p):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def is_irreducible(poly, p):
    """Exhaustive check that no monic polynomial of degree <= deg/2 divides."""
    poly = poly_trim(poly)
    deg = len(poly) - 1
    if deg < 1:
        return False
    for fdeg in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=fdeg):
            if not poly_divmod(poly, list(low) + [1], p)[1]:
                return False
    return True


def smallest_irreducible(p, mu):
    """Lexicographically smallest monic irreducible of degree mu.

    Candidates are ordered by their coefficient tuple compared from the
    constant term upwards.
    """
    if mu == 1:
        return (0, 1)
    for low in itertools.product(range(p), repeat=mu):
        if low[0] == 0:
            continue
        cand = list(low) + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise ValueError(f"no irreducible polynomial of degree {mu} over F_{p}")


class ExtField:
    """The extension K of degree mu over F_p, with vectorised array kernels.

    K elements in arrays are int64 vectors of length mu (last axis). All
    kernels return fully reduced residues.
    """

    def __init__(self, p, mu, modulus=None):
        _check_modulus(p)
        if mu < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.mu = mu
        if modulus is None:
            modulus = smallest_irreducible(p, mu)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != mu + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree mu")
        if not is_irreducible(modulus, p):
            raise ValueError("modulus is reducible")
        self.modulus = modulus
        self.order = p ** mu
        # x^t mod m(x) for t < 2 mu - 1
        red = np.zeros((2 * mu - 1, mu), dtype=np.int64)
        for t in range(2 * mu - 1):
            red[t] = self._reduce_list([0] * t + [1])
        idx = np.add.outer(np.arange(mu), np.arange(mu))
        self._mul_tensor = red[idx].reshape(mu * mu, mu)

    def __repr__(self):
        return f"ExtField(p={self.p}, mu={self.mu}, modulus={self.modulus})"

    def __eq__(self, other):
        return (isinstance(other, ExtField) and self.p == other.p
                and self.mu == other.mu and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.p, self.mu, self.modulus))

    def _reduce_list(self, coeffs):
        rem = poly_divmod(coeffs, list(self.modulus), self.p)[1]
        return rem + [0] * (self.mu - len(rem))

    # -- scalar element construction --------------------------------------

    def __call__(self, coeffs):
        if isinstance(coeffs, (int, np.integer)):
            return self.embed(coeffs)
        return ExtFieldElement(self, tuple(int(c) % self.p for c in coeffs))

    def zero(self):
        return ExtFieldElement(self, (0,) * self.mu)

    def one(self):
        return self.embed(1)

    def embed(self, a):
        """Constant-coefficient embedding of an F_p element into K."""
        return ExtFieldElement(self, (int(a) % self.p,) + (0,) * (self.mu - 1))

    def from_index(self, i):
        """The i-th element of K in the ordering used for evaluation points."""
        return ExtFieldElement(self, tuple(self.points(i + 1)[i]))

    # -- vectorised kernels --------------------------------------------------

    def array(self, elems):
        return np.array([e.coeffs for e in elems], dtype=np.int64).reshape(-1, self.mu)

    def embed_array(self, a):
        a = np.asarray(a, dtype=np.int64) % self.p
        out = np.zeros(a.shape + (self.mu,), dtype=np.int64)
        out[..., 0] = a
        return out

    def points(self, n):
        """First n elements of K: element i has the base-p digits of i as coefficients."""
        if n > self.order:
            raise ValueError(f"K has only {self.order} elements, {n} requested")
        i = np.arange(n, dtype=np.int64)
        return np.stack([(i // self.p ** j) % self.p for j in range(self.mu)], axis=-1)

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def scale(self, a, c):
        """Multiply K array ``a`` by F_p array ``c`` (broadcast over the last axis)."""
        return (a * (np.asarray(c, dtype=np.int64) % self.p)[..., None]) % self.p

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        outer = a[..., :, None] * b[..., None, :]
        flat = outer.reshape(outer.shape[:-2] + (self.mu * self.mu,))
        return (flat @ self._mul_tensor) % self.p

    def mul_matrix(self, c):
        """The F_p-linear map a -> a*c as a (mu, mu) matrix acting on row vectors."""
        return self.mul(np.eye(self.mu, dtype=np.int64), c)

    def reduce_outer(self, outer):
        """Reduce an array of coefficient outer products (..., mu, mu) into K."""
        flat = (outer % self.p).reshape(outer.shape[:-2] + (self.mu * self.mu,))
        return (flat @ self._mul_tensor) % self.p

    def power(self, a, e):
        result = self.embed_array(np.ones(np.shape(a)[:-1], dtype=np.int64))
        base = np.asarray(a, dtype=np.int64)
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def dot(self, m, v):
        """Matrix-vector style product over K: contracts axis 1 of ``m`` with axis 0 of ``v``.

        ``m`` has shape (rows, cols, mu) and ``v`` has shape (cols, ..., mu);
        the result has shape (rows, ..., mu).
        """
        m = np.asarray(m, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        acc = tensordot_exact(m, v, ([1], [0]), self.p)  # (rows, mu_i, ..., mu_j)
        acc = np.moveaxis(acc, 1, -2)  # (rows, ..., mu_i, mu_j)
        return self.reduce_outer(acc)

    def inv_array(self, a):
        a = np.asarray(a, dtype=np.int64)
        flat = a.reshape(-1, self.mu)
        out = np.array([self(row).inverse().coeffs for row in flat], dtype=np.int64)
        return out.reshape(a.shape)


def tensordot_exact(a, b, axes, p):
    """np.tensordot of residues mod p, through BLAS when float64 is exact.

    Inputs must already be reduced to [0, p). The result is not reduced.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    terms = 1
    for ax in axes[0]:
        terms *= a.shape[ax]
    if terms * (p - 1) ** 2 < 2 ** 53:
        out = np.tensordot(a.astype(np.float64), b.astype(np.float64), axes=axes)
        return out.astype(np.int64)
    return np.tensordot(a.astype(np.int64), b.astype(np.int64), axes=axes)


@lru_cache(maxsize=None)
def get_field(p, mu):
    """Shared K instance using the default (smallest irreducible) modulus."""
    return ExtField(p, mu)


@dataclass(frozen=True)
class ExtFieldElement:
    field: ExtField
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.field.mu:
            raise ValueError(f"expected {self.field.mu} coefficients")

    def _other(self, other):
        if isinstance(other, ExtFieldElement):
            if other.field != self.field:
                raise ValueError("elements of different extension fields")
            return other
        if isinstance(other, FieldElement):
            if other.p != self.field.p:
                raise ValueError("elements of different fields")
            return self.field.embed(other.value)
        return self.field.embed(int(other))

    def __add__(self, other):
        o = self._other(other)
        return self.field([a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return self.field([a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        return self._other(other) - self

    def __neg__(self):
        return self.field([-a for a in self.coeffs])

    def __mul__(self, other):
        o = self._other(other)
        f = self.field
        prod = poly_mul(list(self.coeffs), list(o.coeffs), f.p)
        return f(f._reduce_list(prod))

    __rmul__ = __mul__

    def inverse(self):
        """Inverse via the extended Euclidean algorithm in F_p[x]."""
        f = self.field
        p = f.p
        a = poly_trim(self.coeffs)
        if not a:
            raise ZeroDivisionError("zero has no inverse")
        r0, r1 = list(f.modulus), a
        s0, s1 = [], [1]
        while r1:
            q, r = poly_divmod(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, poly_sub(s0, poly_mul(q, s1, p), p)
        # r0 is a nonzero constant since the modulus is irreducible
        scale = pow(r0[0], -1, p)
        inv = [c * scale % p for c in s0]
        return f(f._reduce_list(inv))

    def __truediv__(self, other):
        return self * self._other(other).inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.field.one(), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self):
        return not any(self.coeffs)

    def to_array(self):
        return np.array(self.coeffs, dtype=np.int64)

    def __repr__(self):
        return f"K{list(self.coeffs)}"


# -- packing -------------------------------------------------------------------

def packed_bits(length, p):
    """Exact bit length ceil(length * log2 p) of a packed vector."""
    if length == 0:
        return 0
    return (p ** length - 1).bit_length()


def _pow_table(p, depth):
    table = [p]
    for _ in range(depth):
        table.append(table[-1] * table[-1])
    return table


def pack_int(v, p):
    """Base-p integer sum v_i p^i, built by divide and conquer."""
    vals = [int(x) for x in np.asarray(v, dtype=np.int64).ravel()]
    if any(x < 0 or x >= p for x in vals):
        raise ValueError("vector entry out of range")

    def rec(lo, hi):
        if hi - lo <= 32:
            acc = 0
            for x in reversed(vals[lo:hi]):
                acc = acc * p + x
            return acc
        mid = (lo + hi) // 2
        return rec(lo, mid) + rec(mid, hi) * p ** (mid - lo)

    return rec(0, len(vals)) if vals else 0


def unpack_int(x, length, p):
    if x < 0 or x >= p ** length:
        raise ValueError("invalid packed vector")
    out = np.zeros(length, dtype=np.int64)

    def rec(value, lo, hi):
        if hi - lo <= 32:
            for i in range(lo, hi):
                value, out[i] = divmod(value, p)
            return
        mid = (lo + hi) // 2
        high, low = divmod(value, p ** (mid - lo))
        rec(low, lo, mid)
        rec(high, mid, hi)

    rec(x, 0, length)
    return out


def pack_vector(v, p):
    """Pack an F_p vector into ceil(ceil(len * log2 p) / 8) little-endian bytes."""
    v = np.asarray(v, dtype=np.int64).ravel()
    nbits = packed_bits(len(v), p)
    return pack_int(v, p).to_bytes((nbits + 7) // 8, "little")


def unpack_vector(data, length, p):
    if len(data) != (packed_bits(length, p) + 7) // 8:
        raise ValueError("invalid packed vector")
    return unpack_int(int.from_bytes(data, "little"), length, p)


# -- uniform sampling ------------------------------------------------------------

def draw_bits(p):
    return (p - 1).bit_length()


class BitReader:
    """Reads fixed-width little-endian bit groups from a byte stream."""

    def __init__(self, stream):
        self.stream = stream
        self._acc = 0
        self._nbits = 0

    def read(self, nbits):
        while self._nbits < nbits:
            self._acc |= self.stream.read(1)[0] << self._nbits
            self._nbits += 8
        out = self._acc & ((1 << nbits) - 1)
        self._acc >>= nbits
        self._nbits -= nbits
        return out


def sample_uniform(reader, field):
    """Draw one uniform element of F_p (``field`` an int p) or of K.

    Rejection sampling: draw ceil(log2 p) bits and retry while >= p. K elements
    are drawn coefficient by coefficient.
    """
    if not isinstance(reader, BitReader):
        reader = BitReader(reader)
    if isinstance(field, ExtField):
        return field([sample_uniform(reader, field.p).value for _ in range(field.mu)])
    p = int(field)
    nb = draw_bits(p)
    while True:
        x = reader.read(nb)
        if x < p:
            return FieldElement(x, p)


@lru_cache(maxsize=None)
def _byte_split_table(nb):
    """Byte -> its 8/nb draws packed into one little-endian word (nb in 1, 2, 4, 8)."""
    per = 8 // nb
    shifts = np.arange(0, 8, nb, dtype=np.uint8)
    parts = (np.arange(256, dtype=np.uint8)[:, None] >> shifts) & np.uint8((1 << nb) - 1)
    dtype = {1: np.uint8, 2: np.uint16, 4: np.uint32, 8: np.uint64}[per]
    return np.ascontiguousarray(parts).view(dtype).ravel()


def _draws(buf, nb):
    """Split each row of a uint8 matrix into nb-bit little-endian integers (nb <= 8).

    Trailing bits that do not fill a whole group of nb bytes are dropped;
    callers only consume a prefix of the draws.
    """
    buf = np.asarray(buf, dtype=np.uint8)
    lead = buf.shape[:-1]
    if 8 % nb == 0:
        return _byte_split_table(nb)[buf].view(np.uint8).reshape(lead + (-1,))
    # nb bytes hold exactly 8 draws; widen each group to a uint64
    groups = buf.shape[-1] // nb
    wide = np.zeros(lead + (groups, 8), dtype=np.uint8)
    wide[..., :nb] = buf[..., :groups * nb].reshape(lead + (groups, nb))
    words = wide.view("<u8")
    shifts = np.arange(0, 8 * nb, nb, dtype=np.uint64)
    vals = (words >> shifts) & np.uint64((1 << nb) - 1)
    return vals.astype(np.uint8).reshape(lead + (-1,))


def sample_bytes_needed(p, count):
    """Byte budget that holds ``count`` accepted draws except with tiny probability."""
    nb = draw_bits(p)
    q = p / (1 << nb)
    sd = math.sqrt(count * (1 - q)) / q
    ndraws = math.ceil(count / q + 5 * sd + 8)
    ndraws = -(-ndraws // 8) * 8  # whole groups of nb bytes
    return ndraws * nb // 8


def sample_rows(buffers, p, count, refill):
    """Vectorised rejection sampling of ``count`` F_p elements per row.

    ``buffers`` is an (m, L) uint8 array of stream prefixes; a row that runs
    short is re-squeezed with ``refill(row, nbytes)``, which must return a
    longer prefix of the same stream. The output equals what a BitReader over
    each row's stream would produce.
    """
    nb = draw_bits(p)
    buffers = np.asarray(buffers, dtype=np.uint8)
    m = buffers.shape[0]
    out = np.empty((m, count), dtype=np.int64)
    if count == 0:
        return out
    draws = _draws(buffers, nb)
    mask = draws < p
    counts = np.count_nonzero(mask, axis=1)
    short = counts < count
    # accepted draws of all rows, concatenated in row order
    accepted = np.compress(mask.ravel(), draws.ravel())
    starts = np.zeros(m, dtype=np.int64)
    np.cumsum(counts[:-1], out=starts[1:])
    sel = starts[:, None] + np.arange(count)
    if short.any():
        np.minimum(sel, max(len(accepted) - 1, 0), out=sel)
    if len(accepted):
        out[:] = accepted.take(sel)
    if not short.any():
        return out
    for row in np.nonzero(short)[0]:
        size = buffers.shape[1]
        while True:
            size *= 2
            d = _draws(np.frombuffer(refill(int(row), size), dtype=np.uint8), nb)
            acc = d[d < p]
            if len(acc) >= count:
                out[row] = acc[:count]
                break
    return out


def sample_stream(stream, p, count):
    """``count`` uniform F_p elements from a byte stream (vectorised)."""
    nbytes = sample_bytes_needed(p, count)
    first = stream.read(nbytes)
    chunks = [first]

    def refill(_row, size):
        while sum(len(c) for c in chunks) < size:
            chunks.append(stream.read(size - sum(len(c) for c in chunks)))
        return b"".join(chunks)[:size]

    buf = np.frombuffer(first, dtype=np.uint8)[None, :]
    return sample_rows(buf, p, count, refill)[0]
