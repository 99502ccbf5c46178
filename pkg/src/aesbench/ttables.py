"""Fused T-table round tables and the fast block path.

Each table entry is a column vector of four bytes, top row first. The
packed ``uint32`` form puts row ``r`` in bits ``8r..8r+7`` (little-endian
byte order), so a block read as four little-endian words yields its
columns directly and a packed entry can be XORed straight into a column.

Decryption uses the equivalent inverse cipher: tables built from the
inverse S-box with coefficients (0E, 09, 0D, 0B), plus round keys 1..9
passed through inverse mix-columns.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np

from .aes_core import NR, SBOX, ExpandedKey, SBox, as_blocks
from .gf256 import gf_mul_const

_ENC_COLUMN = (0x02, 0x01, 0x01, 0x03)
_DEC_COLUMN = (0x0E, 0x09, 0x0D, 0x0B)


@dataclass(frozen=True, eq=False)
class TTableSet:
    """Encrypt tables T0..T3 and decrypt tables D0..D3.

    ``enc`` and ``dec`` are ``(4, 256, 4)`` uint8 (table, index, row);
    ``enc_packed`` and ``dec_packed`` are the ``(4, 256)`` uint32 forms.
    """

    enc: np.ndarray = field(repr=False)
    dec: np.ndarray = field(repr=False)
    enc_packed: np.ndarray = field(repr=False)
    dec_packed: np.ndarray = field(repr=False)
    sbox: np.ndarray = field(repr=False)
    inv_sbox: np.ndarray = field(repr=False)

    @property
    def t0(self):
        return self.enc[0]

    @property
    def t1(self):
        return self.enc[1]

    @property
    def t2(self):
        return self.enc[2]

    @property
    def t3(self):
        return self.enc[3]

    @property
    def d0(self):
        return self.dec[0]

    @property
    def d1(self):
        return self.dec[1]

    @property
    def d2(self):
        return self.dec[2]

    @property
    def d3(self):
        return self.dec[3]


def pack_columns(vectors: np.ndarray) -> np.ndarray:
    """Pack ``(..., 4)`` byte columns into little-endian uint32 words."""
    v = np.ascontiguousarray(vectors, dtype=np.uint8)
    return v.view("<u4")[..., 0].astype(np.uint32)


def unpack_columns(words: np.ndarray) -> np.ndarray:
    w = np.ascontiguousarray(words, dtype="<u4")
    return w[..., None].view(np.uint8)


def _rotations(base: np.ndarray) -> np.ndarray:
    # T_k is T_0 rotated down by k rows
    return np.stack([np.roll(base, k, axis=-1) for k in range(4)])


def build_t_tables(sbox: SBox = SBOX) -> TTableSet:
    s = sbox.forward
    si = sbox.inverse
    enc0 = np.stack([gf_mul_const(s, c) for c in _ENC_COLUMN], axis=-1)
    dec0 = np.stack([gf_mul_const(si, c) for c in _DEC_COLUMN], axis=-1)
    enc = _rotations(enc0)
    dec = _rotations(dec0)
    arrays = [enc, dec, pack_columns(enc), pack_columns(dec), s.copy(), si.copy()]
    for a in arrays:
        a.flags.writeable = False
    return TTableSet(*arrays)


TTABLES = build_t_tables()


def ttable_round(state: np.ndarray, round_key, tables: TTableSet = TTABLES) -> np.ndarray:
    """One full round on ``(..., 4, 4)`` states via four table lookups per column.

    Column j of the output is T0[p0,j] ^ T1[p1,j+1] ^ T2[p2,j+2] ^ T3[p3,j+3] ^ k_j,
    column offsets taken mod 4.
    """
    p = np.asarray(state, dtype=np.uint8)
    k = as_blocks(round_key)
    k = k.reshape(k.shape[:-1] + (4, 4))  # (..., column, row)
    cols = []
    for j in range(4):
        e = k[..., j, :].copy() if k.ndim > 2 else np.broadcast_to(k[j], p.shape[:-2] + (4,)).copy()
        for r in range(4):
            e ^= tables.enc[r][p[..., r, (j + r) % 4]]
        cols.append(e)
    return np.stack(cols, axis=-1)


# ---------------------------------------------------------------------------
# compiled kernels; blocks are (n, 4) uint32 column words


@numba.njit(nogil=True, cache=True)
def _encrypt_words(src, dst, rk, te, sbox):
    per_block = rk.shape[0] > 1
    for b in range(src.shape[0]):
        k = rk[b] if per_block else rk[0]
        s0 = src[b, 0] ^ k[0]
        s1 = src[b, 1] ^ k[1]
        s2 = src[b, 2] ^ k[2]
        s3 = src[b, 3] ^ k[3]
        for r in range(1, 10):
            o = 4 * r
            t0 = te[0, s0 & 0xFF] ^ te[1, (s1 >> 8) & 0xFF] ^ te[2, (s2 >> 16) & 0xFF] ^ te[3, (s3 >> 24) & 0xFF] ^ k[o]
            t1 = te[0, s1 & 0xFF] ^ te[1, (s2 >> 8) & 0xFF] ^ te[2, (s3 >> 16) & 0xFF] ^ te[3, (s0 >> 24) & 0xFF] ^ k[o + 1]
            t2 = te[0, s2 & 0xFF] ^ te[1, (s3 >> 8) & 0xFF] ^ te[2, (s0 >> 16) & 0xFF] ^ te[3, (s1 >> 24) & 0xFF] ^ k[o + 2]
            t3 = te[0, s3 & 0xFF] ^ te[1, (s0 >> 8) & 0xFF] ^ te[2, (s1 >> 16) & 0xFF] ^ te[3, (s2 >> 24) & 0xFF] ^ k[o + 3]
            s0, s1, s2, s3 = t0, t1, t2, t3
        # final round: S-box + shift rows + key, no mix columns
        dst[b, 0] = (np.uint32(sbox[s0 & 0xFF]) | (np.uint32(sbox[(s1 >> 8) & 0xFF]) << 8)
                     | (np.uint32(sbox[(s2 >> 16) & 0xFF]) << 16) | (np.uint32(sbox[(s3 >> 24) & 0xFF]) << 24)) ^ k[40]
        dst[b, 1] = (np.uint32(sbox[s1 & 0xFF]) | (np.uint32(sbox[(s2 >> 8) & 0xFF]) << 8)
                     | (np.uint32(sbox[(s3 >> 16) & 0xFF]) << 16) | (np.uint32(sbox[(s0 >> 24) & 0xFF]) << 24)) ^ k[41]
        dst[b, 2] = (np.uint32(sbox[s2 & 0xFF]) | (np.uint32(sbox[(s3 >> 8) & 0xFF]) << 8)
                     | (np.uint32(sbox[(s0 >> 16) & 0xFF]) << 16) | (np.uint32(sbox[(s1 >> 24) & 0xFF]) << 24)) ^ k[42]
        dst[b, 3] = (np.uint32(sbox[s3 & 0xFF]) | (np.uint32(sbox[(s0 >> 8) & 0xFF]) << 8)
                     | (np.uint32(sbox[(s1 >> 16) & 0xFF]) << 16) | (np.uint32(sbox[(s2 >> 24) & 0xFF]) << 24)) ^ k[43]


@numba.njit(nogil=True, cache=True)
def _decrypt_words(src, dst, dk, td, inv_sbox):
    per_block = dk.shape[0] > 1
    for b in range(src.shape[0]):
        k = dk[b] if per_block else dk[0]
        s0 = src[b, 0] ^ k[40]
        s1 = src[b, 1] ^ k[41]
        s2 = src[b, 2] ^ k[42]
        s3 = src[b, 3] ^ k[43]
        for r in range(9, 0, -1):
            o = 4 * r
            t0 = td[0, s0 & 0xFF] ^ td[1, (s3 >> 8) & 0xFF] ^ td[2, (s2 >> 16) & 0xFF] ^ td[3, (s1 >> 24) & 0xFF] ^ k[o]
            t1 = td[0, s1 & 0xFF] ^ td[1, (s0 >> 8) & 0xFF] ^ td[2, (s3 >> 16) & 0xFF] ^ td[3, (s2 >> 24) & 0xFF] ^ k[o + 1]
            t2 = td[0, s2 & 0xFF] ^ td[1, (s1 >> 8) & 0xFF] ^ td[2, (s0 >> 16) & 0xFF] ^ td[3, (s3 >> 24) & 0xFF] ^ k[o + 2]
            t3 = td[0, s3 & 0xFF] ^ td[1, (s2 >> 8) & 0xFF] ^ td[2, (s1 >> 16) & 0xFF] ^ td[3, (s0 >> 24) & 0xFF] ^ k[o + 3]
            s0, s1, s2, s3 = t0, t1, t2, t3
        dst[b, 0] = (np.uint32(inv_sbox[s0 & 0xFF]) | (np.uint32(inv_sbox[(s3 >> 8) & 0xFF]) << 8)
                     | (np.uint32(inv_sbox[(s2 >> 16) & 0xFF]) << 16) | (np.uint32(inv_sbox[(s1 >> 24) & 0xFF]) << 24)) ^ k[0]
        dst[b, 1] = (np.uint32(inv_sbox[s1 & 0xFF]) | (np.uint32(inv_sbox[(s0 >> 8) & 0xFF]) << 8)
                     | (np.uint32(inv_sbox[(s3 >> 16) & 0xFF]) << 16) | (np.uint32(inv_sbox[(s2 >> 24) & 0xFF]) << 24)) ^ k[1]
        dst[b, 2] = (np.uint32(inv_sbox[s2 & 0xFF]) | (np.uint32(inv_sbox[(s1 >> 8) & 0xFF]) << 8)
                     | (np.uint32(inv_sbox[(s0 >> 16) & 0xFF]) << 16) | (np.uint32(inv_sbox[(s3 >> 24) & 0xFF]) << 24)) ^ k[2]
        dst[b, 3] = (np.uint32(inv_sbox[s3 & 0xFF]) | (np.uint32(inv_sbox[(s2 >> 8) & 0xFF]) << 8)
                     | (np.uint32(inv_sbox[(s1 >> 16) & 0xFF]) << 16) | (np.uint32(inv_sbox[(s0 >> 24) & 0xFF]) << 24)) ^ k[3]


# ---------------------------------------------------------------------------
# key material in word form


def encryption_words(ek: ExpandedKey) -> np.ndarray:
    """Round keys as ``(m, 44)`` uint32 column words."""
    rk = np.ascontiguousarray(ek.round_keys, dtype=np.uint8)
    return rk.reshape(-1, (NR + 1) * 16).view("<u4").astype(np.uint32)


def decryption_words(ek: ExpandedKey, tables: TTableSet = TTABLES) -> np.ndarray:
    """Equivalent-inverse-cipher schedule: keys 1..9 pass through inverse mix-columns.

    InvMixColumns(x) is computed as D-table lookups of S(x), since the D tables
    already fold in the inverse S-box.
    """
    w = encryption_words(ek)
    mid = w[:, 4:40]
    sb = tables.sbox
    out = w.copy()
    out[:, 4:40] = (tables.dec_packed[0][sb[mid & 0xFF]]
                    ^ tables.dec_packed[1][sb[(mid >> 8) & 0xFF]]
                    ^ tables.dec_packed[2][sb[(mid >> 16) & 0xFF]]
                    ^ tables.dec_packed[3][sb[mid >> 24]])
    return out


def blocks_to_words(data) -> np.ndarray:
    arr = np.ascontiguousarray(data, dtype=np.uint8)
    return arr.reshape(-1, 16).view("<u4")


def encrypt_words(src: np.ndarray, rk_words: np.ndarray, tables: TTableSet = TTABLES,
                  out: np.ndarray | None = None) -> np.ndarray:
    if out is None:
        out = np.empty_like(src)
    _encrypt_words(src, out, rk_words, tables.enc_packed, tables.sbox)
    return out


def decrypt_words(src: np.ndarray, dk_words: np.ndarray, tables: TTableSet = TTABLES,
                  out: np.ndarray | None = None) -> np.ndarray:
    if out is None:
        out = np.empty_like(src)
    _decrypt_words(src, out, dk_words, tables.dec_packed, tables.inv_sbox)
    return out


def _run(block, words_fn, key_words, tables):
    blocks = as_blocks(block)
    lead = blocks.shape[:-1]
    out = words_fn(blocks_to_words(blocks), key_words, tables)
    out = out.view(np.uint8).reshape(lead + (16,))
    if isinstance(block, (bytes, bytearray, memoryview)):
        return out.tobytes()
    return out


def ttable_encrypt_block(block, ek: ExpandedKey, tables: TTableSet = TTABLES, sbox: SBox = SBOX):
    """Fast-path encryption of one block (bytes) or a batch (``(..., 16)`` array).

    ``ek`` may hold one key or one key per block.
    """
    _check_sbox(tables, sbox)
    return _run(block, encrypt_words, encryption_words(ek), tables)


def ttable_decrypt_block(block, ek: ExpandedKey, tables: TTableSet = TTABLES, sbox: SBox = SBOX):
    _check_sbox(tables, sbox)
    return _run(block, decrypt_words, decryption_words(ek, tables), tables)


def _check_sbox(tables: TTableSet, sbox: SBox) -> None:
    if sbox is not SBOX and not np.array_equal(tables.sbox, sbox.forward):
        raise ValueError("tables were built from a different S-box")
