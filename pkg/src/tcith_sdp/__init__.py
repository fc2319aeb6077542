"""Signatures from restricted syndrome decoding via a polynomial-IOP-in-the-head proof.

Two restrictions are supported: the CROSS subgroup E = {2^i} of F_127^* and the
ternary full-weight set E = {1, 2} over F_3. Typical use::

    from tcith_sdp import params, sig
    ps = params.get("ternary-1-short")
    pk, sk = sig.generate_keypair(ps)
    s = sig.sign(sk, b"message", ps)
    assert sig.verify(pk, b"message", s, ps)
"""

from .params import ParamSet, builtin_sets, get as get_params
from .sig import Signature, generate_keypair, sign, verify

__all__ = ["ParamSet", "Signature", "builtin_sets", "generate_keypair", "get_params",
           "sign", "verify"]
__version__ = "0.1.0"
