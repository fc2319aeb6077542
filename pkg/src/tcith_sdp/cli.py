"""Command-line front end.

    tcith-sdp keygen  --params ternary-1-short --out key        (writes key.pk, key.sk)
    tcith-sdp sign    --params ternary-1-short --key key.sk --in msg.bin --out msg.sig
    tcith-sdp verify  --params ternary-1-short --key key.pk --in msg.bin --sig msg.sig
    tcith-sdp params  --table 1 [--format text|csv|json] [--figure sizes.png]
    tcith-sdp bench   --params cross-1-fast ternary-1-fast [--count 5] [--figure bench.png]
    tcith-sdp selftest

Exit codes: 0 success / accept, 1 reject or failed self-test, 2 usage error.
"""

import argparse
import json
import os
import sys
import time

from . import params, report, sig
from .hashing import ShakeDrbg

EXIT_OK, EXIT_REJECT, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _param_set(pid, runnable=True):
    try:
        ps = params.get(pid)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    if runnable and ps.framework != params.TCITH:
        raise UsageError(f"{pid} is a VOLEitH set (size calculator only); "
                         "use one of the TCitH sets to keygen/sign/verify")
    return ps


def _rng(args):
    if getattr(args, "seed", None) is None:
        return os.urandom
    try:
        return ShakeDrbg(bytes.fromhex(args.seed))
    except ValueError:
        raise UsageError("--seed must be a hex string") from None


def _read(path):
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path, data):
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _message(args):
    if args.msg is not None:
        return args.msg.encode()
    if args.infile is not None:
        return _read(args.infile)
    raise UsageError("give the message with --in FILE or --msg TEXT")


def cmd_keygen(args):
    ps = _param_set(args.params)
    pk, sk = sig.generate_keypair(ps, _rng(args))
    _write(args.out + ".pk", pk)
    _write(args.out + ".sk", sk)
    print(f"wrote {args.out}.pk ({len(pk)} bytes) and {args.out}.sk ({len(sk)} bytes)")
    return EXIT_OK


def cmd_sign(args):
    ps = _param_set(args.params)
    sk = _read(args.key)
    msg = _message(args)
    try:
        signature = sig.sign(sk, msg, ps, _rng(args))
    except ValueError as exc:
        raise UsageError(f"cannot sign: {exc}") from None
    _write(args.out, signature)
    print(f"wrote {args.out} ({len(signature)} bytes)")
    return EXIT_OK


def cmd_verify(args):
    ps = _param_set(args.params)
    verdict = sig.verify(_read(args.key), _message(args), _read(args.sig), ps)
    if verdict:
        print("accept")
        return EXIT_OK
    print(f"reject: {verdict.reason}")
    return EXIT_REJECT


def cmd_params(args):
    rows = report.size_rows(args.table)
    print(report.render(rows, args.format), end="")
    if args.figure:
        name = "TCitH" if args.table == 1 else "VOLEitH"
        report.size_figure(rows, args.figure, f"{name} signature sizes")
        print(f"figure written to {args.figure}", file=sys.stderr)
    return EXIT_OK


def cmd_bench(args):
    rng = _rng(args)
    results = []
    for pid in args.params:
        ps = _param_set(pid)
        pk, sk = sig.generate_keypair(ps, rng)
        t_sign = t_ver = 0.0
        size = None
        for i in range(args.count):
            msg = f"bench message {i}".encode()
            t0 = time.perf_counter()
            s = sig.sign(sk, msg, ps, rng)
            t1 = time.perf_counter()
            ok = sig.verify(pk, msg, s, ps)
            t2 = time.perf_counter()
            if not ok:
                print(f"{pid}: verification failed ({ok.reason})", file=sys.stderr)
                return EXIT_REJECT
            t_sign += t1 - t0
            t_ver += t2 - t1
            size = len(s)
        results.append({"id": pid, "count": args.count, "bytes": size,
                        "table_bytes": ps.table_bytes,
                        "sign_ms": round(1e3 * t_sign / args.count, 2),
                        "verify_ms": round(1e3 * t_ver / args.count, 2)})
    if args.format == "json":
        print(json.dumps(results, indent=2))
    else:
        print(f"{'id':<18}{'count':>6}{'bytes':>8}{'table':>8}{'sign ms':>10}{'verify ms':>11}")
        for r in results:
            print(f"{r['id']:<18}{r['count']:>6}{r['bytes']:>8}{r['table_bytes']:>8}"
                  f"{r['sign_ms']:>10.1f}{r['verify_ms']:>11.1f}")
    if args.figure:
        report.bench_figure(results, args.figure)
        print(f"figure written to {args.figure}", file=sys.stderr)
    return EXIT_OK


def cmd_selftest(args):
    from .selftest import run
    return EXIT_OK if run() else EXIT_REJECT


def build_parser():
    parser = argparse.ArgumentParser(prog="tcith-sdp",
                                     description="Restricted syndrome decoding signatures.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        return p

    p = add("keygen", cmd_keygen, "generate a key pair")
    p.add_argument("--params", required=True)
    p.add_argument("--out", required=True, help="output prefix for .pk and .sk")
    p.add_argument("--seed", help="hex seed for reproducible output")

    p = add("sign", cmd_sign, "sign a message")
    p.add_argument("--params", required=True)
    p.add_argument("--key", required=True, help="secret key file")
    p.add_argument("--in", dest="infile")
    p.add_argument("--msg")
    p.add_argument("--out", required=True)
    p.add_argument("--seed")

    p = add("verify", cmd_verify, "verify a signature")
    p.add_argument("--params", required=True)
    p.add_argument("--key", required=True, help="public key file")
    p.add_argument("--in", dest="infile")
    p.add_argument("--msg")
    p.add_argument("--sig", required=True)

    p = add("params", cmd_params, "reproduce the signature size tables")
    p.add_argument("--table", type=int, choices=(1, 2), default=1)
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--figure", help="also write a bar chart (png/pdf/svg)")

    p = add("bench", cmd_bench, "time sign and verify")
    p.add_argument("--params", nargs="+", default=["cross-1-fast", "ternary-1-fast"])
    p.add_argument("--count", type=int, default=3)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--figure")
    p.add_argument("--seed")

    add("selftest", cmd_selftest, "run the quick acceptance checks")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
