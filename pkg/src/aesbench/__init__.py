"""AES-128 with a reference round path, a fused T-table fast path, five block
cipher modes, a data-parallel engine and a throughput benchmark."""

from .aes_core import decrypt_block, encrypt_block, key_expansion
from .context import CipherContext
from .modes import Counter, Mode, PaddingError, decrypt, encrypt
from .ttables import ttable_decrypt_block, ttable_encrypt_block

__all__ = [
    "CipherContext", "Counter", "Mode", "PaddingError", "decrypt", "decrypt_block", "encrypt",
    "encrypt_block", "key_expansion", "ttable_decrypt_block", "ttable_encrypt_block",
]
