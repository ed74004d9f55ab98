"""Independent oracles used by the tests.

These deliberately avoid the production code paths: exact rational Bernoulli
numbers via the defining recurrence, their modular reduction, and the same
recurrence carried directly in F_p.  The production table inverts the power
series (e^t - 1)/t instead, so agreement is a genuine two-route check.
"""

from fractions import Fraction
import math

import numpy as np


def bernoulli_exact_list(nmax: int) -> list[Fraction]:
    out = [Fraction(1)]
    for n in range(1, nmax + 1):
        s = sum(Fraction(math.comb(n + 1, j)) * out[j] for j in range(n))
        out.append(-s / (n + 1))
    return out


def bernoulli_mod_p_recurrence(p: int) -> dict[int, int]:
    """B_k mod p for even k in [2, p-3]: sum_j C(n+1, j) B_j = 0 carried in F_p.

    The Pascal row C(n+1, .) is updated incrementally; int64 is safe for
    p < 2^21 (products < p^2, partial sums < p^3).
    """
    L = p - 2
    B = np.zeros(L, dtype=np.int64)
    B[0] = 1
    B[1] = (p - 1) * pow(2, -1, p) % p  # -1/2
    row = np.zeros(L + 2, dtype=np.int64)
    row[:3] = (1, 2, 1)  # C(2, .)
    for n in range(2, L):
        row[1 : n + 2] = (row[1 : n + 2] + row[: n + 1]) % p  # now C(n+1, .)
        if n % 2 == 0:
            s = int((row[:n:2] * B[:n:2] % p).sum() % p)
            s = (s + int(row[1]) * int(B[1])) % p
            B[n] = -s * pow(n + 1, -1, p) % p
    return {k: int(B[k]) for k in range(2, L, 2)}


def frac_mod(x: Fraction, p: int, exp: int = 1) -> int:
    mod = p**exp
    assert x.denominator % p != 0
    return x.numerator * pow(x.denominator, -1, mod) % mod


def irregular_pairs_oracle(p: int) -> tuple[int, ...]:
    tbl = bernoulli_mod_p_recurrence(p)
    return tuple(k for k in sorted(tbl) if tbl[k] == 0)
