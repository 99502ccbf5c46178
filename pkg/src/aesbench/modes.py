"""ECB, CBC, CFB, OFB and CTR over the T-table block path.

The per-mode functions take and return block-aligned messages. ``encrypt``
and ``decrypt`` wrap them with padding: every mode pads, including the
stream-like ones, so all modes process identical byte counts.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .context import CipherContext
from .ttables import blocks_to_words, decrypt_words, encrypt_words

BLOCK = 16
COUNTER_MODULUS = 1 << 128


class Mode(str, enum.Enum):
    ECB = "ecb"
    CBC = "cbc"
    CFB = "cfb"
    OFB = "ofb"
    CTR = "ctr"


class Parallelism(str, enum.Enum):
    SUITABLE = "Suitable"
    UNSUITABLE = "Unsuitable"


_PARALLEL_CAPACITY = {
    Mode.ECB: Parallelism.SUITABLE,
    Mode.CBC: Parallelism.UNSUITABLE,
    Mode.CFB: Parallelism.UNSUITABLE,
    Mode.OFB: Parallelism.UNSUITABLE,
    Mode.CTR: Parallelism.SUITABLE,
}


def classify_parallelism(mode: Mode) -> Parallelism:
    return _PARALLEL_CAPACITY[Mode(mode)]


class PaddingError(ValueError):
    """Raised when a decrypted message does not end in a valid padding trailer."""


def pad(data: bytes) -> bytes:
    k = BLOCK - len(data) % BLOCK
    return bytes(data) + bytes([k]) * k


def unpad(data: bytes) -> bytes:
    if not data or len(data) % BLOCK:
        raise PaddingError(f"padded length {len(data)} is not a positive multiple of {BLOCK}")
    k = data[-1]
    if not 1 <= k <= BLOCK:
        raise PaddingError(f"invalid padding count byte 0x{k:02x}")
    if data[-k:] != bytes([k]) * k:
        raise PaddingError("inconsistent padding fill")
    return data[:-k]


@dataclass(frozen=True)
class Counter:
    """Initial counter R; block i uses (R + i) mod 2^128, big-endian."""

    base: int

    def __post_init__(self):
        if not 0 <= self.base < COUNTER_MODULUS:
            raise ValueError("counter base must fit in 128 bits")

    @classmethod
    def from_bytes(cls, raw: bytes) -> "Counter":
        return cls(int.from_bytes(_check_iv(raw), "big"))

    def value(self, i: int) -> int:
        return (self.base + i) % COUNTER_MODULUS

    def block(self, i: int) -> bytes:
        return self.value(i).to_bytes(BLOCK, "big")

    def blocks(self, start: int, count: int) -> np.ndarray:
        """Counter blocks for indices ``start .. start+count-1`` as ``(count, 16)`` uint8."""
        base = self.value(start)
        hi0, lo0 = np.uint64(base >> 64), np.uint64(base & (2**64 - 1))
        lo = lo0 + np.arange(count, dtype=np.uint64)  # wraps mod 2^64
        hi = hi0 + (lo < lo0).astype(np.uint64)
        be = np.empty((count, 2), dtype=">u8")
        be[:, 0] = hi
        be[:, 1] = lo
        return be.view(np.uint8).reshape(count, BLOCK)


def _check_iv(iv) -> bytes:
    if iv is None:
        raise ValueError("this mode requires a 16-byte IV")
    iv = bytes(iv)
    if len(iv) != BLOCK:
        raise ValueError(f"IV must be exactly {BLOCK} bytes, got {len(iv)}")
    return iv


def _words(msg: bytes) -> np.ndarray:
    if len(msg) % BLOCK:
        raise ValueError(f"message length {len(msg)} is not a multiple of {BLOCK}; pad first")
    return blocks_to_words(np.frombuffer(msg, dtype=np.uint8))


def _xor(a: bytes, b: bytes) -> bytes:
    return (np.frombuffer(a, np.uint8) ^ np.frombuffer(b, np.uint8)).tobytes()


def _enc1(block: bytes, ctx: CipherContext) -> bytes:
    return encrypt_words(_words(block), ctx.enc_words, ctx.ttables).tobytes()


def ecb_encrypt(msg: bytes, ctx: CipherContext) -> bytes:
    return encrypt_words(_words(msg), ctx.enc_words, ctx.ttables).tobytes()


def ecb_decrypt(msg: bytes, ctx: CipherContext) -> bytes:
    return decrypt_words(_words(msg), ctx.dec_words, ctx.ttables).tobytes()


def cbc_encrypt(msg: bytes, iv: bytes, ctx: CipherContext) -> bytes:
    prev = _check_iv(iv)
    _words(msg)
    out = bytearray()
    for i in range(0, len(msg), BLOCK):
        prev = _enc1(_xor(msg[i:i + BLOCK], prev), ctx)
        out += prev
    return bytes(out)


def cbc_decrypt(msg: bytes, iv: bytes, ctx: CipherContext) -> bytes:
    iv = _check_iv(iv)
    plain = ecb_decrypt(msg, ctx)
    return _xor(plain, iv + msg[:-BLOCK]) if msg else b""


def cfb_encrypt(msg: bytes, iv: bytes, ctx: CipherContext) -> bytes:
    prev = _check_iv(iv)
    _words(msg)
    out = bytearray()
    for i in range(0, len(msg), BLOCK):
        prev = _xor(msg[i:i + BLOCK], _enc1(prev, ctx))
        out += prev
    return bytes(out)


def cfb_decrypt(msg: bytes, iv: bytes, ctx: CipherContext) -> bytes:
    iv = _check_iv(iv)
    if not msg:
        return b""
    # keystream only needs ciphertext, so it is computed in one batch
    return _xor(msg, ecb_encrypt(iv + msg[:-BLOCK], ctx))


def ofb_keystream(n_blocks: int, iv: bytes, ctx: CipherContext) -> bytes:
    k = _check_iv(iv)
    out = bytearray()
    for _ in range(n_blocks):
        k = _enc1(k, ctx)
        out += k
    return bytes(out)


def ofb_encrypt(msg: bytes, iv: bytes, ctx: CipherContext) -> bytes:
    _words(msg)
    return _xor(msg, ofb_keystream(len(msg) // BLOCK, iv, ctx))


ofb_decrypt = ofb_encrypt


def ctr_keystream(counter: Counter, start: int, n_blocks: int, ctx: CipherContext) -> np.ndarray:
    blocks = counter.blocks(start, n_blocks)
    return encrypt_words(blocks_to_words(blocks), ctx.enc_words, ctx.ttables)


def ctr_encrypt(msg: bytes, counter: Counter, ctx: CipherContext) -> bytes:
    src = _words(msg)
    return (src ^ ctr_keystream(counter, 0, len(src), ctx)).tobytes()


ctr_decrypt = ctr_encrypt


def _counter(iv) -> Counter:
    return iv if isinstance(iv, Counter) else Counter.from_bytes(iv)


def encrypt_padded(msg: bytes, mode: Mode, ctx: CipherContext, iv=None) -> bytes:
    """Apply ``mode`` to an already block-aligned message."""
    mode = Mode(mode)
    if mode is Mode.ECB:
        if iv is not None:
            raise ValueError("ECB takes no IV")
        return ecb_encrypt(msg, ctx)
    if mode is Mode.CBC:
        return cbc_encrypt(msg, iv, ctx)
    if mode is Mode.CFB:
        return cfb_encrypt(msg, iv, ctx)
    if mode is Mode.OFB:
        return ofb_encrypt(msg, iv, ctx)
    return ctr_encrypt(msg, _counter(iv), ctx)


def decrypt_padded(msg: bytes, mode: Mode, ctx: CipherContext, iv=None) -> bytes:
    mode = Mode(mode)
    if mode is Mode.ECB:
        if iv is not None:
            raise ValueError("ECB takes no IV")
        return ecb_decrypt(msg, ctx)
    if mode is Mode.CBC:
        return cbc_decrypt(msg, iv, ctx)
    if mode is Mode.CFB:
        return cfb_decrypt(msg, iv, ctx)
    if mode is Mode.OFB:
        return ofb_decrypt(msg, iv, ctx)
    return ctr_decrypt(msg, _counter(iv), ctx)


def encrypt(data: bytes, mode: Mode, ctx: CipherContext, iv=None) -> bytes:
    return encrypt_padded(pad(data), mode, ctx, iv)


def decrypt(data: bytes, mode: Mode, ctx: CipherContext, iv=None) -> bytes:
    """Decrypt and strip padding; raises :class:`PaddingError` on a bad trailer."""
    if len(data) % BLOCK:
        raise PaddingError(f"ciphertext length {len(data)} is not a multiple of {BLOCK}")
    return unpad(decrypt_padded(data, mode, ctx, iv))


def probe_block_independence(mode: Mode, ctx: CipherContext, msg: bytes, iv=None) -> bool:
    """True if every block of ``msg`` encrypts the same in isolation as in place.

    A block is encrypted alone with only the parameters it can know on its
    own: the IV for chained modes, counter R + i for CTR. Modes whose output
    for block i depends on blocks before it fail this probe.
    """
    mode = Mode(mode)
    whole = encrypt_padded(msg, mode, ctx, iv)
    for i in range(len(msg) // BLOCK):
        block = msg[i * BLOCK:(i + 1) * BLOCK]
        if mode is Mode.CTR:
            alone = encrypt_padded(block, mode, ctx, Counter(_counter(iv).value(i)))
        else:
            alone = encrypt_padded(block, mode, ctx, iv)
        if alone != whole[i * BLOCK:(i + 1) * BLOCK]:
            return False
    return True
