"""Sequential-vs-parallel throughput benchmark over a ladder of input sizes.

Timing boundary: input generation and file I/O are outside the timed
region; padding (or unpadding), task planning and result gathering are
inside it. Decryption is timed on ciphertext prepared beforehand.
Each configuration is timed ``repetitions`` times after ``warmup``
discarded runs and the minimum is kept.
"""

from __future__ import annotations

import csv
import logging
import os
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .context import CipherContext
from .modes import Counter, Mode, Parallelism, classify_parallelism, decrypt_padded, encrypt_padded, pad, unpad
from .parallel_engine import Direction, parallel_apply, plan

log = logging.getLogger(__name__)

DEFAULT_SIZES = (1202, 4652, 9302, 18602, 37202, 74402, 148802, 297602, 595202, 1190402)
DEFAULT_KEY = "000102030405060708090a0b0c0d0e0f"
DEFAULT_IV = "f0f1f2f3f4f5f6f7f8f9fafbfcfdfeff"

SEQUENTIAL = "sequential"
PARALLEL = "parallel"
CSV_COLUMNS = ("size_bytes", "path", "operation", "mode", "workers", "granularity",
               "repetitions", "elapsed_seconds", "throughput_bytes_per_second")


class CorrectnessGateError(RuntimeError):
    """Sequential and parallel paths disagreed; the run is aborted."""


def hex16(value: str, name: str = "value") -> bytes:
    try:
        raw = bytes.fromhex(value)
    except ValueError:
        raise ValueError(f"{name} is not valid hex") from None
    if len(raw) != 16:
        raise ValueError(f"{name} must be 32 hex chars (16 bytes), got {len(raw)} bytes")
    return raw


def check_ladder(sizes: Sequence[int]) -> tuple[int, ...]:
    sizes = tuple(int(s) for s in sizes)
    if not sizes or any(s <= 0 for s in sizes):
        raise ValueError("sizes must be positive")
    if any(a >= b for a, b in zip(sizes, sizes[1:])):
        raise ValueError("sizes must be strictly increasing")
    return sizes


@dataclass
class RunConfig:
    key: str = DEFAULT_KEY
    iv: str | None = DEFAULT_IV
    mode: Mode = Mode.ECB
    workers: int = field(default_factory=lambda: os.cpu_count() or 1)
    granularity: int = 1
    sizes: tuple[int, ...] = DEFAULT_SIZES
    repetitions: int = 5
    warmup: int = 2
    operations: tuple[str, ...] = ("encrypt", "decrypt")
    seed: int = 0

    def __post_init__(self):
        self.mode = Mode(self.mode)
        self.sizes = check_ladder(self.sizes)
        hex16(self.key, "key")
        if self.mode is Mode.ECB:
            self.iv = None
        elif self.iv is None:
            raise ValueError(f"{self.mode.value} needs an IV")
        else:
            hex16(self.iv, "iv")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.warmup < 0:
            raise ValueError("warmup must be >= 0")
        if self.workers < 1 or self.granularity < 1:
            raise ValueError("workers and granularity must be >= 1")
        bad = set(self.operations) - {"encrypt", "decrypt"}
        if bad or not self.operations:
            raise ValueError(f"unknown operations {sorted(bad)}")


@dataclass(frozen=True)
class BenchRecord:
    size_bytes: int
    path: str
    operation: str
    mode: str
    workers: int
    granularity: int
    repetitions: int
    elapsed_seconds: float
    throughput_bytes_per_second: float

    @classmethod
    def measured(cls, size_bytes, path, operation, mode, workers, granularity, repetitions, elapsed):
        return cls(size_bytes, path, operation, mode, workers, granularity, repetitions,
                   elapsed, size_bytes / elapsed)

    def sort_key(self):
        return (self.size_bytes, self.path, self.operation)


def generate_input(size: int, seed: int = 0) -> bytes:
    if size <= 0:
        raise ValueError("size must be positive")
    return np.random.default_rng(seed).bytes(size)


def time_min(fn: Callable[[], object], repetitions: int, warmup: int) -> float:
    for _ in range(warmup):
        fn()
    best = float("inf")
    for _ in range(repetitions):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run_benchmark(cfg: RunConfig) -> list[BenchRecord]:
    """Time every size x path x operation; parallel rows only for per-state parallelizable modes.

    Before anything is timed, the sequential and parallel outputs for the
    configuration must match bit for bit, otherwise :class:`CorrectnessGateError`.
    """
    ctx = CipherContext.from_key(hex16(cfg.key, "key"))
    iv = None if cfg.iv is None else hex16(cfg.iv, "iv")
    counter = Counter.from_bytes(iv) if cfg.mode is Mode.CTR else None
    parallel_ok = classify_parallelism(cfg.mode) is Parallelism.SUITABLE
    if not parallel_ok:
        log.warning("%s is not parallelizable; only the sequential path is timed", cfg.mode.value)
    mode_iv = counter if counter is not None else iv

    records = []
    for size in cfg.sizes:
        data = generate_input(size, cfg.seed)
        ciphertext = encrypt_padded(pad(data), cfg.mode, ctx, mode_iv)

        def par_encrypt(data=data):
            padded = pad(data)
            work = plan(len(padded), cfg.workers, cfg.granularity, cfg.mode, Direction.ENCRYPT)
            return parallel_apply(padded, ctx, work, counter=counter)

        def par_decrypt(ciphertext=ciphertext):
            work = plan(len(ciphertext), cfg.workers, cfg.granularity, cfg.mode, Direction.DECRYPT)
            return unpad(parallel_apply(ciphertext, ctx, work, counter=counter))

        runners = {
            "encrypt": {SEQUENTIAL: lambda data=data: encrypt_padded(pad(data), cfg.mode, ctx, mode_iv),
                        PARALLEL: par_encrypt},
            "decrypt": {SEQUENTIAL: lambda c=ciphertext: unpad(decrypt_padded(c, cfg.mode, ctx, mode_iv)),
                        PARALLEL: par_decrypt},
        }
        expected = {"encrypt": ciphertext, "decrypt": data}
        for op in cfg.operations:
            paths = [SEQUENTIAL, PARALLEL] if parallel_ok else [SEQUENTIAL]
            outputs = {p: runners[op][p]() for p in paths}
            for p, out in outputs.items():
                if out != expected[op]:
                    raise CorrectnessGateError(
                        f"{p} {op} output mismatch at size {size} ({cfg.mode.value})")
            for p in paths:
                workers = cfg.workers if p == PARALLEL else 1
                gran = cfg.granularity if p == PARALLEL else 1
                elapsed = time_min(runners[op][p], cfg.repetitions, cfg.warmup)
                records.append(BenchRecord.measured(size, p, op, cfg.mode.value, workers, gran,
                                                    cfg.repetitions, elapsed))
                log.info("%8d %-10s %-7s %.6fs", size, p, op, elapsed)
    records.sort(key=BenchRecord.sort_key)
    return records


def write_csv(records: Iterable[BenchRecord], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in sorted(records, key=BenchRecord.sort_key):
            writer.writerow([repr(v) if isinstance(v, float) else v for v in asdict(r).values()])


def read_csv(path) -> list[BenchRecord]:
    types = {f.name: f.type for f in fields(BenchRecord)}
    conv = {"int": int, "float": float, "str": str}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"{path}: unexpected CSV header {reader.fieldnames}")
        return [BenchRecord(**{k: conv[types[k]](v) for k, v in row.items()}) for row in reader]


def markdown_report(records: Sequence[BenchRecord]) -> str:
    """One table per operation, sizes as rows, time and throughput per path as columns."""
    by_key = {(r.size_bytes, r.operation, r.path): r for r in records}
    sizes = sorted({r.size_bytes for r in records})
    ops = [op for op in ("encrypt", "decrypt") if any(r.operation == op for r in records)]
    paths = [p for p in (SEQUENTIAL, PARALLEL) if any(r.path == p for r in records)]
    mode = records[0].mode.upper()
    parts = []
    for op in ops:
        head = (["File Size (bytes)"] + [f"Time {p} (s)" for p in paths]
                + [f"Throughput {p} (B/s)" for p in paths])
        lines = [f"### AES-128 {mode} {op}ion: sequential vs parallel", "",
                 "| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
        for size in sizes:
            recs = [by_key.get((size, op, p)) for p in paths]
            cells = [str(size)]
            cells += ["-" if r is None else f"{r.elapsed_seconds:.6f}" for r in recs]
            cells += ["-" if r is None else f"{r.throughput_bytes_per_second:.2f}" for r in recs]
            lines.append("| " + " | ".join(cells) + " |")
        parts.append("\n".join(lines))
    return "\n\n".join(parts) + "\n"


def emit_report(records: Sequence[BenchRecord], fmt: str = "csv", path=None) -> Path:
    if not records:
        raise ValueError("no records to report")
    path = Path(path if path is not None else f"bench.{'md' if fmt == 'markdown' else 'csv'}")
    try:
        if fmt == "csv":
            write_csv(records, path)
        elif fmt == "markdown":
            path.write_text(markdown_report(records), encoding="utf-8")
        else:
            raise ValueError(f"unknown report format {fmt!r}")
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc.strerror or exc}") from exc
    return path
