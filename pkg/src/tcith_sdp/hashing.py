"""SHAKE-based hashing with domain separation, plus small byte-stream helpers.

Security level 128 uses SHAKE128, 192 and 256 use SHAKE256. Every call is
prefixed with a one-byte context tag so that the tree, leaf, matrix and
challenge derivations can never collide with one another.
"""

import hashlib

# context tags
TREE = 0x01
LEAF = 0x02
MATRIX = 0x04
CH1 = 0x05
CH2 = 0x06
GAMMA = 0x07
RINDEX = 0x08
SEED = 0x09
COM = 0x0A
KEYGEN = 0x0B
DRBG = 0x0C


def _shake(lam):
    if lam == 128:
        return hashlib.shake_128
    if lam in (192, 256):
        return hashlib.shake_256
    raise ValueError(f"unsupported security level {lam}")


_U32 = [i.to_bytes(4, "little") for i in range(1 << 13)]


def u32_table(n):
    """u32 encodings of 0..n-1 as a list, for indexing in hot loops."""
    if n > len(_U32):
        return [int(i).to_bytes(4, "little") for i in range(n)]
    return _U32


def u32(i):
    return _U32[i] if 0 <= i < len(_U32) else int(i).to_bytes(4, "little")


def shake_fn(lam):
    """The raw hashlib constructor for a security level (for hot loops)."""
    return _shake(lam)


def hasher(lam, tag, *parts):
    """Return a SHAKE object already absorbing ``tag || parts``."""
    h = _shake(lam)(bytes([tag]))
    for part in parts:
        h.update(part)
    return h


def xof(lam, tag, *parts, out_len):
    return hasher(lam, tag, *parts).digest(out_len)


class XofStream:
    """Unbounded byte stream squeezed from SHAKE.

    hashlib cannot squeeze incrementally, so the digest is recomputed at
    doubling lengths; the prefix property of SHAKE keeps the stream
    consistent.
    """

    def __init__(self, lam, tag, *parts, initial=64):
        self._h = hasher(lam, tag, *parts)
        self._buf = self._h.digest(initial)
        self._pos = 0

    def read(self, n):
        end = self._pos + n
        if end > len(self._buf):
            size = len(self._buf)
            while size < end:
                size *= 2
            self._buf = self._h.digest(size)
        out = self._buf[self._pos:end]
        self._pos = end
        return out


class BytesStream:
    """Finite stream over fixed bytes; raises once exhausted (used in tests)."""

    def __init__(self, data):
        self._buf = bytes(data)
        self._pos = 0

    def read(self, n):
        if self._pos + n > len(self._buf):
            raise EOFError("byte stream exhausted")
        out = self._buf[self._pos:self._pos + n]
        self._pos += n
        return out


class ShakeDrbg:
    """Deterministic random-byte generator for reproducible runs.

    Instances are callables with the ``os.urandom`` signature.
    """

    def __init__(self, seed):
        self._stream = XofStream(256, DRBG, bytes(seed), initial=256)

    def __call__(self, n):
        return self._stream.read(n)
