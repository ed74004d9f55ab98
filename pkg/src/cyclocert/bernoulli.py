"""Bernoulli numbers: exact rationals, tables mod p, irregular pairs, and
character-twisted values B_{n, omega^i} mod p^N.

Convention: B_1 = -1/2.  All interpolation formulas downstream assume it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .padic import ResidueInt, teichmuller_table
from .primes import require_odd_prime

__all__ = [
    "ORACLE_BOUND",
    "IrregularPairSet",
    "bernoulli_exact",
    "bernoulli_mod_p",
    "irregular_pairs",
    "gen_bernoulli",
]

# Exact rational Bernoulli numbers blow up fast; nothing downstream needs
# indices beyond this.
ORACLE_BOUND = 200

_exact_cache: list[Fraction] = [Fraction(1)]


def bernoulli_exact(n: int) -> Fraction:
    """B_n as an exact rational via sum_{j<=n} C(n+1,j) B_j = 0."""
    if n < 0:
        raise ValueError(f"index must be >= 0, got {n}")
    if n > ORACLE_BOUND:
        raise ValueError(f"exact Bernoulli oracle is capped at {ORACLE_BOUND}, got {n}")
    while len(_exact_cache) <= n:
        m = len(_exact_cache)
        s = sum(Fraction(math.comb(m + 1, j)) * _exact_cache[j] for j in range(m))
        _exact_cache.append(-s / (m + 1))
    return _exact_cache[n]


@dataclass(frozen=True)
class IrregularPairSet:
    """The even k in [2, p-3] with p | B_k; empty exactly when p is regular."""

    p: int
    indices: tuple[int, ...]

    def __post_init__(self):
        if any(k % 2 or not (2 <= k <= self.p - 3) for k in self.indices):
            raise ValueError(f"irregular indices out of range for p={self.p}")
        if list(self.indices) != sorted(set(self.indices)):
            raise ValueError("indices must be strictly increasing")

    @property
    def index_of_irregularity(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)


@lru_cache(maxsize=4)
def bernoulli_mod_p(p: int) -> dict[int, int]:
    """B_k mod p for all even k in [2, p-3].

    Inverts (e^t - 1)/t modulo (p, t^{p-2}) by Newton doubling; the relevant
    factorials stay below p so every coefficient is a unit where needed.
    Products fit int64: entries < p, convolution length < p, so partial sums
    are < p^2 * p < 2^63 for p < 2 * 10^6.
    """
    require_odd_prime(p)
    L = p - 2
    # a[j] = 1/(j+1)! mod p for j < L
    fact = np.ones(L + 1, dtype=np.int64)
    for j in range(2, L + 1):
        fact[j] = fact[j - 1] * j % p
    inv_full = pow(int(fact[L]), -1, p)
    inv_fact = np.ones(L + 1, dtype=np.int64)
    inv_fact[L] = inv_full
    for j in range(L, 0, -1):
        inv_fact[j - 1] = inv_fact[j] * j % p
    a = inv_fact[1 : L + 1].copy()  # a[j] = 1/(j+1)!, j = 0..L-1

    # Newton inversion of a to length L
    v = np.array([1], dtype=np.int64)  # a[0] = 1
    length = 1
    while length < L:
        length = min(2 * length, L)
        av = np.convolve(a[:length], v)[:length] % p
        two_minus = (-av) % p
        two_minus[0] = (two_minus[0] + 2) % p
        v = np.convolve(v, two_minus)[:length] % p
    # B_k = k! * v[k]
    out = {}
    for k in range(2, p - 2, 2):
        out[k] = int(v[k] * fact[k] % p)
    return out


def irregular_pairs(p: int) -> IrregularPairSet:
    """All even k in [2, p-3] with B_k ≡ 0 mod p."""
    table = bernoulli_mod_p(p)
    ks = tuple(k for k in sorted(table) if table[k] == 0)
    return IrregularPairSet(p=p, indices=ks)


def _bernoulli_poly(n: int, x: Fraction) -> Fraction:
    """Bernoulli polynomial B_n(x), exact."""
    return sum(
        Fraction(math.comb(n, j)) * bernoulli_exact(j) * x ** (n - j) for j in range(n + 1)
    )


def gen_bernoulli(p: int, i: int, n: int, N: int) -> ResidueInt:
    """B_{n, omega^i} mod p^N for the Teichmuller power omega^i of conductor p.

    Evaluates p^{n-1} * sum_{a=1}^{p-1} omega^i(a) B_n(a/p) with exact Bernoulli
    polynomials and Teichmuller values carried at N + n + 1 digits; the single
    division by p must be exact, anything else means a convention bug.
    """
    require_odd_prime(p)
    if n < 1:
        raise ValueError(f"weight must be >= 1, got {n}")
    if N < 1:
        raise ValueError(f"precision must be >= 1, got {N}")
    if n == 1 and i % (p - 1) == 0:
        raise ValueError("weight 1 with the trivial character is excluded")
    if n >= p - 1:
        raise ValueError(
            f"weight {n} >= p-1 = {p - 1}: exact-polynomial route would hit "
            "von Staudt denominators"
        )
    guard = N + n + 2
    mod = p**guard
    omega = teichmuller_table(p, guard)
    # p^n * B_n(a/p) is p-integral (any p in a B_j denominator is squarefree
    # and j >= 1 comes with p^j); collect terms over a common p-free denominator.
    vals = [p**n * _bernoulli_poly(n, Fraction(a, p)) for a in range(1, p)]
    den = math.lcm(*[v.denominator for v in vals])
    if den % p == 0:
        raise AssertionError("denominator not prime to p; integrality analysis broken")
    total = 0
    exp = i % (p - 1)
    for a in range(1, p):
        w = pow(omega[a], exp, mod)
        total += w * (vals[a - 1] * den).numerator
    total = total * pow(den, -1, mod) % mod
    if total % p != 0:
        raise AssertionError(
            f"B_({n}, omega^{i}) summation not divisible by p at p={p}; "
            "character convention bug"
        )
    return ResidueInt(total // p, p, N)
