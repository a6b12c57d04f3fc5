"""Elementary arithmetic helpers: smallest-prime-factor sieve and factorisation."""

from functools import lru_cache
import math

import numpy as np
import sympy

# Above this bound factorisation falls back to sympy.factorint.
SIEVE_LIMIT = 1 << 24

INT128_MAX = (1 << 127) - 1


@lru_cache(maxsize=8)
def _spf_table(limit):
    spf = np.zeros(limit + 1, dtype=np.int32)
    if limit >= 1:
        spf[1] = 1
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    rest = spf == 0
    rest[0] = False
    spf[rest] = np.nonzero(rest)[0]
    spf.flags.writeable = False
    return spf


def spf_sieve(limit):
    """Return an array ``spf`` with ``spf[n]`` the least prime factor of n (spf[1] = 1).

    Tables are cached by a power-of-two size bucket, so repeated calls with
    similar limits share work.
    """
    if limit < 1:
        limit = 1
    bucket = 1 << max(10, (limit - 1).bit_length())
    return _spf_table(bucket)


def primes_up_to(limit):
    """Primes p <= limit, ascending, as an int64 array."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    spf = spf_sieve(limit)[: limit + 1]
    idx = np.arange(limit + 1)
    return idx[(spf == idx) & (idx >= 2)]


def factorize(n, spf=None):
    """Prime factorisation of n >= 1 as a list of ``(p, k)`` pairs, p ascending."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    if n > SIEVE_LIMIT:
        return sorted(sympy.factorint(n).items())
    if spf is None or len(spf) <= n:
        spf = spf_sieve(n)
    out = []
    while n > 1:
        p = int(spf[n])
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        out.append((p, k))
    return out


def divisors_from_factors(factors):
    """All divisors, given a factorisation as produced by :func:`factorize`."""
    divs = [1]
    for p, k in factors:
        divs = [d * p**j for d in divs for j in range(k + 1)]
    return divs


def mobius_upto(limit):
    """Moebius function mu(0..limit) as an int8 array (mu(0) set to 0)."""
    spf = spf_sieve(max(limit, 1))[: limit + 1]
    mu = np.ones(limit + 1, dtype=np.int8)
    mu[0] = 0
    for n in range(2, limit + 1):
        p = spf[n]
        m = n // p
        mu[n] = 0 if m % p == 0 else -mu[m]
    return mu


def check_int128(value, what="product"):
    """Raise ProductOverflowError if |value| does not fit in signed 128 bits."""
    from .errors import ProductOverflowError

    if abs(value) > INT128_MAX:
        raise ProductOverflowError(f"{what} {value} exceeds the signed 128-bit range")
    return value
