"""Deterministic known-answer vectors: {params_id, seed_hex, sk_hex, pk_hex, msg_hex, sig_hex}.

Each record is reproducible from its seed: one ShakeDrbg instance feeds keygen
and then sign. Regenerate with ``python -m tcith_sdp.vectors OUT.json``.
"""

import json
import sys

from . import params, sig
from .hashing import ShakeDrbg


def vector_seed(param_id, index):
    return f"kat:{param_id}:{index}".encode().hex()


def make_vector(ps, index):
    seed = vector_seed(ps.id, index)
    rng = ShakeDrbg(bytes.fromhex(seed))
    pk, sk = sig.generate_keypair(ps, rng)
    msg = bytes(range(index * 7 % 5, 3 + 16 * index))
    signature = sig.sign(sk, msg, ps, rng)
    return {"params_id": ps.id, "seed_hex": seed, "sk_hex": sk.hex(), "pk_hex": pk.hex(),
            "msg_hex": msg.hex(), "sig_hex": signature.hex()}


def generate(per_set=3, sets=None):
    sets = sets if sets is not None else params.table_sets(1)
    return [make_vector(ps, i) for ps in sets for i in range(per_set)]


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1:
        print("usage: python -m tcith_sdp.vectors OUT.json", file=sys.stderr)
        return 2
    with open(argv[0], "w") as fh:
        json.dump(generate(), fh, indent=1)
        fh.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
