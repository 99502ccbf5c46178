"""Data-parallel ECB/CTR at one-state-per-task granularity.

A message is split into 16-byte states; ``granularity`` consecutive states
form one task. Tasks are dealt out in contiguous runs to a bounded thread
pool. Workers receive read-only views of their own input states and
write into disjoint slices of one preallocated output buffer, so
reassembly is positional and deterministic. Lookup tables and round keys
live in the shared, read-only :class:`CipherContext`.

The compiled kernels release the GIL, so worker threads really do run
concurrently on multi-core hosts.
"""

from __future__ import annotations

import atexit
import enum
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .context import CipherContext
from .modes import BLOCK, Counter, Mode, Parallelism, classify_parallelism, ctr_keystream
from .ttables import blocks_to_words, decrypt_words, encrypt_words

__all__ = [
    "CipherContext", "Direction", "WorkPlan", "StateTask", "ParallelismError", "EngineError",
    "plan", "parallel_apply", "sequential_apply", "shutdown_pools",
]


class Direction(str, enum.Enum):
    ENCRYPT = "encrypt"
    DECRYPT = "decrypt"


class ParallelismError(ValueError):
    """The requested mode cannot be split into independent per-state tasks."""


class EngineError(RuntimeError):
    """A worker failed; no partial output is returned."""


@dataclass(frozen=True)
class StateTask:
    task_index: int
    first_state: int
    stop_state: int

    @property
    def states(self) -> range:
        return range(self.first_state, self.stop_state)


@dataclass(frozen=True)
class WorkPlan:
    total_states: int
    granularity: int
    worker_count: int
    direction: Direction
    mode: Mode

    def __post_init__(self):
        if self.granularity < 1:
            raise ValueError("granularity must be >= 1")
        if self.worker_count < 1:
            raise ValueError("worker_count must be >= 1")
        if self.total_states < 1:
            raise ValueError("plan needs at least one state")

    @property
    def task_count(self) -> int:
        return -(-self.total_states // self.granularity)

    def task(self, t: int) -> StateTask:
        lo = t * self.granularity
        return StateTask(t, lo, min(lo + self.granularity, self.total_states))

    def tasks(self):
        return [self.task(t) for t in range(self.task_count)]

    def shards(self) -> list[range]:
        """Contiguous runs of task indices, one per worker that has work."""
        n, w = self.task_count, min(self.worker_count, self.task_count)
        bounds = [n * i // w for i in range(w + 1)]
        return [range(bounds[i], bounds[i + 1]) for i in range(w)]


def plan(message_len_bytes: int, worker_count: int = 1, granularity: int = 1,
         mode: Mode = Mode.ECB, direction: Direction = Direction.ENCRYPT) -> WorkPlan:
    if message_len_bytes <= 0 or message_len_bytes % BLOCK:
        raise ValueError(f"message length {message_len_bytes} is not a positive multiple of {BLOCK}")
    mode = Mode(mode)
    if classify_parallelism(mode) is not Parallelism.SUITABLE:
        raise ParallelismError(f"{mode.value.upper()} is not parallelizable per state")
    return WorkPlan(message_len_bytes // BLOCK, granularity, worker_count, Direction(direction), mode)


_pools: dict[int, ThreadPoolExecutor] = {}
_pools_lock = threading.Lock()


def _pool(workers: int) -> ThreadPoolExecutor:
    with _pools_lock:
        pool = _pools.get(workers)
        if pool is None:
            pool = _pools[workers] = ThreadPoolExecutor(max_workers=workers,
                                                        thread_name_prefix=f"aes-w{workers}")
        return pool


@atexit.register
def shutdown_pools() -> None:
    with _pools_lock:
        for pool in _pools.values():
            pool.shutdown(wait=True)
        _pools.clear()


def _run_states(src: np.ndarray, dst: np.ndarray, first_state: int, ctx: CipherContext,
                mode: Mode, direction: Direction, counter: Optional[Counter]) -> None:
    """Process a contiguous slab of states; ``src``/``dst`` are views onto just that slab."""
    if mode is Mode.CTR:
        np.bitwise_xor(src, ctr_keystream(counter, first_state, len(src), ctx), out=dst)
    elif direction is Direction.ENCRYPT:
        encrypt_words(src, ctx.enc_words, ctx.ttables, out=dst)
    else:
        decrypt_words(src, ctx.dec_words, ctx.ttables, out=dst)


def _as_counter(mode: Mode, counter) -> Optional[Counter]:
    if mode is Mode.CTR:
        if counter is None:
            raise ValueError("CTR needs a counter")
        return counter if isinstance(counter, Counter) else Counter.from_bytes(counter)
    if counter is not None:
        raise ValueError("ECB takes no counter")
    return None


def _src_words(msg) -> np.ndarray:
    src = blocks_to_words(np.frombuffer(msg, dtype=np.uint8))
    src.flags.writeable = False
    return src


def sequential_apply(msg: bytes, ctx: CipherContext, mode: Mode = Mode.ECB,
                     direction: Direction = Direction.ENCRYPT, counter=None) -> bytes:
    """Single-threaded baseline over the whole message; also the determinism oracle."""
    mode, direction = Mode(mode), Direction(direction)
    if len(msg) % BLOCK:
        raise ValueError(f"message length {len(msg)} is not a multiple of {BLOCK}")
    if classify_parallelism(mode) is not Parallelism.SUITABLE:
        raise ParallelismError(f"{mode.value.upper()} is handled by aesbench.modes, not the engine")
    counter = _as_counter(mode, counter)
    src = _src_words(msg)
    dst = np.empty_like(src)
    _run_states(src, dst, 0, ctx, mode, direction, counter)
    return dst.tobytes()


Observer = Callable[[int, StateTask], None]


def parallel_apply(msg: bytes, ctx: CipherContext, work: WorkPlan, counter=None,
                   observer: Optional[Observer] = None) -> bytes:
    """Run ``work`` over ``msg`` on the worker pool and gather the result.

    ``observer(worker_index, task)`` is called for every task a worker runs
    (intended for tests that audit task ownership).
    """
    if len(msg) != work.total_states * BLOCK:
        raise ValueError(f"plan covers {work.total_states * BLOCK} bytes, message has {len(msg)}")
    counter = _as_counter(work.mode, counter)
    src = _src_words(msg)
    dst = np.empty_like(src)

    def run_shard(worker: int, shard: range) -> None:
        first = work.task(shard.start).first_state
        stop = work.task(shard.stop - 1).stop_state
        if observer is not None:
            for t in shard:
                observer(worker, work.task(t))
        _run_states(src[first:stop], dst[first:stop], first, ctx, work.mode, work.direction, counter)

    pool = _pool(work.worker_count)
    futures = [pool.submit(run_shard, w, shard) for w, shard in enumerate(work.shards())]
    errors = []
    for f in futures:  # join every task before deciding
        exc = f.exception()
        if exc is not None:
            errors.append(exc)
    if errors:
        raise EngineError(f"{len(errors)} of {len(futures)} workers failed") from errors[0]
    return dst.tobytes()
