"""GF(2^8) arithmetic with the AES reduction polynomial x^8 + x^4 + x^3 + x + 1.

Bytes encode polynomials with bit k holding the coefficient of x^k, so
x^7 + x^6 + 1 is 0xC1.
"""

from __future__ import annotations

import numpy as np

REDUCTION_POLY = 0x11B
_REDUCED = REDUCTION_POLY & 0xFF  # x^8 == x^4 + x^3 + x + 1

MIX_CONSTANTS = frozenset({0x01, 0x02, 0x03, 0x09, 0x0B, 0x0D, 0x0E})


def gf_add(a: int, b: int) -> int:
    return a ^ b


def _clmul(a: int, b: int) -> int:
    # carry-less product, degree <= 14
    product = 0
    for k in range(8):
        if (b >> k) & 1:
            product ^= a << k
    return product


def _reduce(p: int) -> int:
    # long division by m(x), high degree first
    for deg in range(14, 7, -1):
        if (p >> deg) & 1:
            p ^= REDUCTION_POLY << (deg - 8)
    return p


def gf_mul(a: int, b: int) -> int:
    """Multiply two field elements: full polynomial product, then reduce mod m(x)."""
    return _reduce(_clmul(a, b))


def xtime(a: int) -> int:
    """Multiply by x (0x02): shift left, fold the carry back in with 0x1B."""
    a <<= 1
    if a & 0x100:
        a ^= REDUCTION_POLY
    return a


def gf_pow(a: int, n: int) -> int:
    result = 1
    while n:
        if n & 1:
            result = gf_mul(result, a)
        a = gf_mul(a, a)
        n >>= 1
    return result


def gf_inv(a: int) -> int:
    """Multiplicative inverse, with the AES convention inv(0) == 0."""
    # a^254 == a^-1 for a != 0, and 0^254 == 0
    return gf_pow(a, 254)


def build_xtime_table() -> np.ndarray:
    """Return the read-only 256-entry table M with M[a] == xtime(a)."""
    table = np.array([xtime(a) for a in range(256)], dtype=np.uint8)
    table.flags.writeable = False
    return table


XTIME = build_xtime_table()


def gf_mul_const(a, c: int):
    """Multiply ``a`` by one of the mix-column constants using only xtime lookups.

    ``a`` may be an int or a uint8 array; the result has the same kind.
    Any ``c`` outside ``MIX_CONSTANTS`` is a programming error and raises
    ``ValueError``.
    """
    if c not in MIX_CONSTANTS:
        raise ValueError(f"unsupported mix-column constant 0x{c:02X}")
    scalar = isinstance(a, (int, np.integer))
    x = np.asarray(a, dtype=np.uint8)
    if c == 0x01:
        out = x.copy()
    else:
        x2 = XTIME[x]
        if c == 0x02:
            out = x2
        elif c == 0x03:
            out = x2 ^ x
        else:
            x4 = XTIME[x2]
            x8 = XTIME[x4]
            if c == 0x09:
                out = x8 ^ x
            elif c == 0x0B:
                out = x8 ^ x2 ^ x
            elif c == 0x0D:
                out = x8 ^ x4 ^ x
            else:  # 0x0E
                out = x8 ^ x4 ^ x2
    return int(out) if scalar else out
