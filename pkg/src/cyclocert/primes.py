"""Primality testing, prime enumeration, and primitive roots."""

from __future__ import annotations

import math

# Deterministic Miller-Rabin witness set, valid for all n < 3.3 * 10^24
# (Sorenson-Webster); far beyond anything this package touches.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n below 3*10^18 (and well beyond)."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def require_odd_prime(p: int) -> None:
    """Reject anything but an odd prime >= 5 (2 and 3 are out of scope everywhere)."""
    if not isinstance(p, int) or p < 5 or not is_prime(p):
        raise ValueError(f"p must be a prime >= 5, got {p}")


def small_primes(limit: int) -> list[int]:
    """All primes <= limit by a plain sieve."""
    if limit < 2:
        return []
    bs = bytearray(b"\x01") * (limit + 1)
    bs[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if bs[i]:
            start = i * i
            bs[start :: i] = b"\x00" * ((limit - start) // i + 1)
    return [i for i, v in enumerate(bs) if v]


def primes_in_range(start: int, stop: int, segment: int = 1 << 16):
    """Yield primes in [start, stop) via a segmented sieve; memory stays O(segment)."""
    start = max(start, 2)
    if start >= stop:
        return
    base = small_primes(math.isqrt(stop - 1))
    lo = start
    while lo < stop:
        hi = min(lo + segment, stop)
        bs = bytearray(b"\x01") * (hi - lo)
        for q in base:
            first = max(q * q, (lo + q - 1) // q * q)
            if first >= hi:
                continue
            bs[first - lo :: q] = b"\x00" * ((hi - 1 - first) // q + 1)
        for i, v in enumerate(bs):
            if v:
                yield lo + i
        lo = hi


def _factor(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def smallest_primitive_root(p: int) -> int:
    """Least primitive root mod p."""
    require_odd_prime(p)
    facs = _factor(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in facs):
            return g
    raise AssertionError(f"no primitive root found for {p}")
