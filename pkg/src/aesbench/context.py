"""Immutable key material shared by every worker."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .aes_core import MIX, SBOX, ExpandedKey, MixMatrix, SBox, key_expansion
from .ttables import TTABLES, TTableSet, decryption_words, encryption_words


@dataclass(frozen=True, eq=False)
class CipherContext:
    """Tables plus one expanded key, frozen after construction.

    All arrays are marked read-only, so a worker that tries to write into
    shared state fails loudly instead of corrupting its neighbours.
    """

    ttables: TTableSet
    expanded_key: ExpandedKey
    sbox: SBox = SBOX
    mix: MixMatrix = MIX
    enc_words: np.ndarray = field(init=False, repr=False)
    dec_words: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.expanded_key.round_keys.shape != (11, 16):
            raise ValueError("CipherContext needs exactly one expanded key")
        enc = encryption_words(self.expanded_key)
        dec = decryption_words(self.expanded_key, self.ttables)
        enc.flags.writeable = False
        dec.flags.writeable = False
        object.__setattr__(self, "enc_words", enc)
        object.__setattr__(self, "dec_words", dec)

    @classmethod
    def from_key(cls, key: bytes) -> "CipherContext":
        return cls(TTABLES, key_expansion(key))

    def fingerprint(self) -> str:
        """SHA-256 over every table and key array; changes iff any byte changes."""
        h = hashlib.sha256()
        t = self.ttables
        for a in (t.enc, t.dec, t.enc_packed, t.dec_packed, t.sbox, t.inv_sbox,
                  self.expanded_key.round_keys, self.sbox.forward, self.sbox.inverse,
                  self.enc_words, self.dec_words):
            h.update(np.ascontiguousarray(a).tobytes())
        h.update(repr((self.mix.forward, self.mix.inverse)).encode())
        return h.hexdigest()
