"""``aesbench`` command line: encrypt-file, decrypt-file, bench, selftest."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import bench
from .aes_core import decrypt_block, encrypt_block, key_expansion
from .context import CipherContext
from .modes import Mode, PaddingError, classify_parallelism, decrypt, encrypt, probe_block_independence
from .ttables import ttable_decrypt_block, ttable_encrypt_block

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_KEY = 3
EXIT_IO = 4
EXIT_CORRUPT = 5
EXIT_SELFTEST = 6
EXIT_GATE = 7

KAT_KEY = bytes.fromhex("000102030405060708090a0b0c0d0e0f")
KAT_PLAIN = bytes.fromhex("00112233445566778899aabbccddeeff")
KAT_CIPHER = bytes.fromhex("69c4e0d86a7b0430d8cdb78070b4c55a")

log = logging.getLogger("aesbench")


class KeyMaterialError(ValueError):
    pass


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _sizes(text: str) -> tuple[int, ...]:
    try:
        return bench.check_ladder(int(s) for s in text.split(",") if s.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _key_material(args, default_key=None, default_iv=None):
    key = args.key or os.environ.get("AES_BENCH_KEY") or default_key
    if key is None:
        raise KeyMaterialError("no key: pass --key or set AES_BENCH_KEY")
    iv = None
    if Mode(args.mode) is not Mode.ECB:
        iv = args.iv or os.environ.get("AES_BENCH_IV") or default_iv
        if iv is None:
            raise KeyMaterialError(f"{args.mode} needs an IV: pass --iv or set AES_BENCH_IV")
    try:
        bench.hex16(key, "key")
        if iv is not None:
            bench.hex16(iv, "iv")
    except ValueError as exc:
        raise KeyMaterialError(str(exc)) from None
    return key, iv


def _file_op(args, forward: bool) -> int:
    key, iv = _key_material(args)
    ctx = CipherContext.from_key(bytes.fromhex(key))
    iv_bytes = None if iv is None else bytes.fromhex(iv)
    src = Path(args.input)
    dst = Path(args.out) if args.out else src.with_name(src.name + (".enc" if forward else ".dec"))
    data = src.read_bytes()
    out = encrypt(data, args.mode, ctx, iv_bytes) if forward else decrypt(data, args.mode, ctx, iv_bytes)
    dst.write_bytes(out)
    print(dst)
    return EXIT_OK


def _check(name: str, ok: bool) -> bool:
    print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return ok


def selftest(trials: int = 2000, seed: int = 0) -> bool:
    rng = np.random.default_rng(seed)
    ek = key_expansion(KAT_KEY)
    results = [
        _check("known answer, reference encrypt", encrypt_block(KAT_PLAIN, ek) == KAT_CIPHER),
        _check("known answer, T-table encrypt", ttable_encrypt_block(KAT_PLAIN, ek) == KAT_CIPHER),
        _check("known answer, reference decrypt", decrypt_block(KAT_CIPHER, ek) == KAT_PLAIN),
        _check("known answer, T-table decrypt", ttable_decrypt_block(KAT_CIPHER, ek) == KAT_PLAIN),
    ]
    blocks = rng.integers(0, 256, (trials, 16), dtype=np.uint8)
    keys = key_expansion(rng.integers(0, 256, (trials, 16), dtype=np.uint8))
    ref = encrypt_block(blocks, keys)
    results.append(_check(f"T-table encrypt == reference on {trials} random pairs",
                          np.array_equal(ttable_encrypt_block(blocks, keys), ref)))
    results.append(_check(f"T-table decrypt == reference on {trials} random pairs",
                          np.array_equal(ttable_decrypt_block(ref, keys), decrypt_block(ref, keys))))

    ctx = CipherContext.from_key(rng.bytes(16))
    iv = rng.bytes(16)
    for mode in Mode:
        mode_iv = None if mode is Mode.ECB else iv
        ok = True
        for n in (0, 1, 15, 16, 17, 31, 32, 100, 1202):
            msg = rng.bytes(n)
            ok &= decrypt(encrypt(msg, mode, ctx, mode_iv), mode, ctx, mode_iv) == msg
        results.append(_check(f"{mode.value.upper()} round-trip", ok))
        independent = probe_block_independence(mode, ctx, rng.bytes(64), mode_iv)
        label = classify_parallelism(mode).value
        results.append(_check(f"{mode.value.upper()} classified {label}, block-independent={independent}",
                              independent == (label == "Suitable")))
    return all(results)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aesbench", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def key_flags(p):
        p.add_argument("--mode", choices=[m.value for m in Mode], default="ecb")
        p.add_argument("--key", help="32 hex chars (env AES_BENCH_KEY)")
        p.add_argument("--iv", help="32 hex chars (env AES_BENCH_IV); initial counter for ctr")

    for name in ("encrypt-file", "decrypt-file"):
        p = sub.add_parser(name, help=f"{name.split('-')[0]} a file, writing the result beside it")
        p.add_argument("input")
        key_flags(p)
        p.add_argument("--out", help="output path (default: input + .enc / .dec)")

    p = sub.add_parser("bench", help="time sequential vs parallel over the size ladder")
    key_flags(p)
    p.add_argument("--op", choices=["encrypt", "decrypt"], help="restrict to one operation")
    p.add_argument("--workers", type=_positive, default=os.cpu_count() or 1)
    p.add_argument("--granularity", type=_positive, default=1, help="states per task")
    p.add_argument("--sizes", type=_sizes, default=bench.DEFAULT_SIZES)
    p.add_argument("--reps", type=_positive, default=5)
    p.add_argument("--warmup", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["csv", "markdown"], default="csv")
    p.add_argument("--out", help="report path (default: bench.csv / bench.md)")

    p = sub.add_parser("selftest", help="known answers, T-table differential check, mode round-trips")
    p.add_argument("--trials", type=_positive, default=2000)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "selftest":
            return EXIT_OK if selftest(args.trials) else EXIT_SELFTEST
        if args.command in ("encrypt-file", "decrypt-file"):
            return _file_op(args, args.command == "encrypt-file")
        key, iv = _key_material(args, bench.DEFAULT_KEY, bench.DEFAULT_IV)
        cfg = bench.RunConfig(key=key, iv=iv, mode=args.mode, workers=args.workers,
                              granularity=args.granularity, sizes=args.sizes, repetitions=args.reps,
                              warmup=args.warmup, seed=args.seed,
                              operations=(args.op,) if args.op else ("encrypt", "decrypt"))
        records = bench.run_benchmark(cfg)
        print(bench.emit_report(records, args.format, args.out))
        return EXIT_OK
    except KeyMaterialError as exc:
        print(f"aesbench: {exc}", file=sys.stderr)
        return EXIT_KEY
    except PaddingError as exc:
        print(f"aesbench: corrupt ciphertext: {exc}", file=sys.stderr)
        return EXIT_CORRUPT
    except bench.CorrectnessGateError as exc:
        print(f"aesbench: {exc}", file=sys.stderr)
        return EXIT_GATE
    except OSError as exc:
        print(f"aesbench: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"aesbench: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
