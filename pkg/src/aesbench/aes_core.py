"""Reference AES-128: state transforms, key schedule and the block cipher.

Everything here works on numpy uint8 arrays with arbitrary leading batch
dimensions, so one call can push a whole batch of independent blocks
through the rounds. A block is ``(..., 16)``; a state is ``(..., 4, 4)``
indexed ``[row, column]``, filled column-major (block byte k lands in
row ``k % 4``, column ``k // 4``).

This path is written for clarity and serves as the oracle for the
T-table fast path in :mod:`aesbench.ttables`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gf256 import gf_inv, gf_mul_const, xtime

NB = 4  # words per block
NK = 4  # words per key
NR = 10  # rounds
BLOCK_SIZE = 16
KEY_SIZE = 16

# Published AES S-box; the computed table must match it byte for byte.
PUBLISHED_SBOX = bytes.fromhex(
    "637c777bf26b6fc53001672bfed7ab76ca82c97dfa5947f0add4a2af9ca472c0"
    "b7fd9326363ff7cc34a5e5f171d8311504c723c31896059a071280e2eb27b275"
    "09832c1a1b6e5aa0523bd6b329e32f8453d100ed20fcb15b6acbbe394a4c58cf"
    "d0efaafb434d338545f9027f503c9fa851a3408f929d38f5bcb6da2110fff3d2"
    "cd0c13ec5f974417c4a77e3d645d197360814fdc222a908846eeb814de5e0bdb"
    "e0323a0a4906245cc2d3ac629195e479e7c8376d8dd54ea96c56f4ea657aae08"
    "ba78252e1ca6b4c6e8dd741f4bbd8b8a703eb5664803f60e613557b986c11d9e"
    "e1f8981169d98e949b1e87e9ce5528df8ca1890dbfe6426841992d0fb054bb16"
)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class SBox:
    forward: np.ndarray
    inverse: np.ndarray


@dataclass(frozen=True, eq=False)
class MixMatrix:
    forward: tuple = ((0x02, 0x03, 0x01, 0x01),
                      (0x01, 0x02, 0x03, 0x01),
                      (0x01, 0x01, 0x02, 0x03),
                      (0x03, 0x01, 0x01, 0x02))
    inverse: tuple = ((0x0E, 0x0B, 0x0D, 0x09),
                      (0x09, 0x0E, 0x0B, 0x0D),
                      (0x0D, 0x09, 0x0E, 0x0B),
                      (0x0B, 0x0D, 0x09, 0x0E))


@dataclass(frozen=True, eq=False)
class ExpandedKey:
    """Round keys of shape ``(..., 11, 16)``; leading dims allow one key per block."""

    round_keys: np.ndarray = field(repr=False)

    @property
    def bits(self) -> int:
        return self.round_keys.shape[-2] * self.round_keys.shape[-1] * 8

    def round_key(self, r: int) -> np.ndarray:
        return self.round_keys[..., r, :]


def _affine(b: int) -> int:
    out = 0x63
    for shift in range(5):
        out ^= ((b << shift) | (b >> (8 - shift))) & 0xFF
    return out


def build_sbox() -> SBox:
    """Compute the S-box from field inverses and the affine map.

    Raises ``RuntimeError`` if the result disagrees with the published
    table, which would mean the field arithmetic is broken.
    """
    forward = np.array([_affine(gf_inv(a)) for a in range(256)], dtype=np.uint8)
    check_sbox(forward)
    inverse = np.empty(256, dtype=np.uint8)
    inverse[forward] = np.arange(256, dtype=np.uint8)
    return SBox(_frozen(forward), _frozen(inverse))


def check_sbox(forward: np.ndarray) -> None:
    if bytes(np.asarray(forward, dtype=np.uint8)) != PUBLISHED_SBOX:
        bad = [a for a in range(256) if forward[a] != PUBLISHED_SBOX[a]]
        raise RuntimeError(f"computed S-box disagrees with the published table at {bad[:8]}")


SBOX = build_sbox()
MIX = MixMatrix()


def _rcon() -> tuple[int, ...]:
    r = [0x01]
    while len(r) < NR:
        r.append(xtime(r[-1]))
    return tuple(r)


RCON = _rcon()


# ---------------------------------------------------------------------------
# block <-> state


def as_blocks(data) -> np.ndarray:
    """View bytes or a uint8 array as ``(..., 16)`` blocks."""
    if isinstance(data, (bytes, bytearray, memoryview)):
        if len(data) != BLOCK_SIZE:
            raise ValueError(f"block must be exactly {BLOCK_SIZE} bytes, got {len(data)}")
        return np.frombuffer(bytes(data), dtype=np.uint8)
    arr = np.asarray(data)
    if arr.dtype != np.uint8 or arr.shape[-1:] != (BLOCK_SIZE,):
        raise ValueError(f"expected uint8 array of shape (..., 16), got {arr.dtype} {arr.shape}")
    return arr


def _like_input(out: np.ndarray, data):
    return out.tobytes() if isinstance(data, (bytes, bytearray, memoryview)) else out


def block_to_state(block) -> np.ndarray:
    b = as_blocks(block)
    return b.reshape(b.shape[:-1] + (4, 4)).swapaxes(-1, -2).copy()


def state_to_block(state: np.ndarray) -> np.ndarray:
    s = np.asarray(state, dtype=np.uint8)
    return np.ascontiguousarray(s.swapaxes(-1, -2)).reshape(s.shape[:-2] + (16,))


# ---------------------------------------------------------------------------
# round transforms


def sub_bytes(state: np.ndarray, sbox: SBox = SBOX) -> np.ndarray:
    return sbox.forward[state]


def inv_sub_bytes(state: np.ndarray, sbox: SBox = SBOX) -> np.ndarray:
    return sbox.inverse[state]


# state'[i, j] = state[i, (i + j) mod 4]
_SHIFT_COLS = np.array([[(i + j) % 4 for j in range(4)] for i in range(4)])
_UNSHIFT_COLS = np.array([[(j - i) % 4 for j in range(4)] for i in range(4)])
_ROWS = np.arange(4)[:, None]


def shift_rows(state: np.ndarray) -> np.ndarray:
    return state[..., _ROWS, _SHIFT_COLS]


def inv_shift_rows(state: np.ndarray) -> np.ndarray:
    return state[..., _ROWS, _UNSHIFT_COLS]


def _matmul_columns(state: np.ndarray, coeffs) -> np.ndarray:
    out = np.zeros_like(state)
    for r in range(4):
        acc = out[..., r, :]
        for k in range(4):
            acc ^= gf_mul_const(state[..., k, :], coeffs[r][k])
    return out


def mix_columns(state: np.ndarray, matrix: MixMatrix = MIX) -> np.ndarray:
    return _matmul_columns(np.asarray(state, dtype=np.uint8), matrix.forward)


def inv_mix_columns(state: np.ndarray, matrix: MixMatrix = MIX) -> np.ndarray:
    return _matmul_columns(np.asarray(state, dtype=np.uint8), matrix.inverse)


def add_round_key(state: np.ndarray, round_key) -> np.ndarray:
    return state ^ block_to_state(round_key)


# ---------------------------------------------------------------------------
# key schedule


def key_expansion(key, sbox: SBox = SBOX) -> ExpandedKey:
    """Expand 16-byte key(s) into 44 words, returned as 11 round keys.

    ``key`` may be ``bytes`` or a ``(..., 16)`` uint8 array for a batch of keys.
    """
    if isinstance(key, (bytes, bytearray, memoryview)) and len(key) != KEY_SIZE:
        raise ValueError(f"AES-128 key must be {KEY_SIZE} bytes, got {len(key)}")
    k = as_blocks(key)
    lead = k.shape[:-1]
    words = np.empty(lead + (NB * (NR + 1), 4), dtype=np.uint8)
    words[..., :NK, :] = k.reshape(lead + (NK, 4))
    for i in range(NK, NB * (NR + 1)):
        temp = words[..., i - 1, :]
        if i % NK == 0:
            temp = sbox.forward[np.roll(temp, -1, axis=-1)]
            temp[..., 0] ^= RCON[i // NK - 1]
        words[..., i, :] = words[..., i - NK, :] ^ temp
    return ExpandedKey(_frozen(words.reshape(lead + (NR + 1, BLOCK_SIZE))))


# ---------------------------------------------------------------------------
# block cipher


def encrypt_block(block, ek: ExpandedKey, sbox: SBox = SBOX, matrix: MixMatrix = MIX):
    """Encrypt one block (bytes) or a batch of blocks (array).

    Nine full rounds followed by a final round without mix_columns.
    """
    state = add_round_key(block_to_state(block), ek.round_key(0))
    for r in range(1, NR):
        state = sub_bytes(state, sbox)
        state = shift_rows(state)
        state = mix_columns(state, matrix)
        state = add_round_key(state, ek.round_key(r))
    state = shift_rows(sub_bytes(state, sbox))
    state = add_round_key(state, ek.round_key(NR))
    return _like_input(state_to_block(state), block)


def decrypt_block(block, ek: ExpandedKey, sbox: SBox = SBOX, matrix: MixMatrix = MIX):
    state = add_round_key(block_to_state(block), ek.round_key(NR))
    for r in range(NR - 1, 0, -1):
        state = inv_shift_rows(state)
        state = inv_sub_bytes(state, sbox)
        state = add_round_key(state, ek.round_key(r))
        state = inv_mix_columns(state, matrix)
    state = inv_sub_bytes(inv_shift_rows(state), sbox)
    state = add_round_key(state, ek.round_key(0))
    return _like_input(state_to_block(state), block)
