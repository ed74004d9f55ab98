"""Arithmetic in Z/p^N, Teichmuller lifts, and (1+p)-digit decompositions.

Every unit a coprime to p factors uniquely as a = omega(a) * (1+p)^i modulo
p^{n+1}, where omega(a) is the Teichmuller lift (the (p-1)-th root of unity
congruent to a mod p) and 0 <= i < p^n.  This decomposition is the coordinate
system for all character sums downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .primes import require_odd_prime

__all__ = [
    "ResidueInt",
    "DigitDecomposition",
    "ExactRational",
    "teichmuller",
    "decompose",
    "valuation",
]

# Exact rationals are plain stdlib fractions; they are already arbitrary
# precision and always in lowest terms with positive denominator.
ExactRational = Fraction


class ResidueInt:
    """An integer modulo p^N.  Operands must share (p, N) exactly."""

    __slots__ = ("p", "N", "value")

    def __init__(self, value: int, p: int, N: int):
        require_odd_prime(p)
        if N < 1:
            raise ValueError(f"precision exponent must be >= 1, got {N}")
        self.p = p
        self.N = N
        self.value = value % (p**N)

    @property
    def modulus(self) -> int:
        return self.p**self.N

    def _check(self, other: "ResidueInt") -> None:
        if not isinstance(other, ResidueInt):
            raise TypeError(f"expected ResidueInt, got {type(other).__name__}")
        if (self.p, self.N) != (other.p, other.N):
            raise ValueError(
                f"mixed moduli: {self.p}^{self.N} vs {other.p}^{other.N}"
            )

    def __add__(self, other):
        self._check(other)
        return ResidueInt(self.value + other.value, self.p, self.N)

    def __sub__(self, other):
        self._check(other)
        return ResidueInt(self.value - other.value, self.p, self.N)

    def __neg__(self):
        return ResidueInt(-self.value, self.p, self.N)

    def __mul__(self, other):
        self._check(other)
        return ResidueInt(self.value * other.value, self.p, self.N)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return ResidueInt(pow(self.value, e, self.modulus), self.p, self.N)

    def inverse(self) -> "ResidueInt":
        if self.value % self.p == 0:
            raise ZeroDivisionError(f"{self.value} is not a unit mod {self.p}^{self.N}")
        return ResidueInt(pow(self.value, -1, self.modulus), self.p, self.N)

    def is_unit(self) -> bool:
        return self.value % self.p != 0

    def padic_valuation(self):
        """v_p of the residue; math.inf when the residue is 0 (valuation >= N)."""
        if self.value == 0:
            return math.inf
        v, x = 0, self.value
        while x % self.p == 0:
            x //= self.p
            v += 1
        return v

    def reduce(self, N: int) -> "ResidueInt":
        """The image at a lower precision."""
        if N > self.N:
            raise ValueError(f"cannot raise precision {self.N} -> {N}")
        return ResidueInt(self.value, self.p, N)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == other % self.modulus
        return (
            isinstance(other, ResidueInt)
            and (self.p, self.N, self.value) == (other.p, other.N, other.value)
        )

    def __hash__(self):
        return hash((self.p, self.N, self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"ResidueInt({self.value} mod {self.p}^{self.N})"


@dataclass(frozen=True)
class DigitDecomposition:
    """a = omega_part * (1+p)^index modulo p^{n+1}, with 0 <= index < p^n."""

    p: int
    level: int
    omega_part: ResidueInt  # precision level+1
    index: int

    def reconstruct(self) -> int:
        q = self.p ** (self.level + 1)
        return self.omega_part.value * pow(1 + self.p, self.index, q) % q


def teichmuller(a: int, p: int, N: int) -> ResidueInt:
    """The unique (p-1)-th root of unity congruent to a mod p, at precision N.

    Computed by iterating x <- x^p, which converges quadratically; at most N
    iterations are needed.
    """
    require_odd_prime(p)
    if N < 1:
        raise ValueError(f"precision must be >= 1, got {N}")
    if a % p == 0:
        raise ValueError(f"{a} is divisible by {p}; no Teichmuller lift")
    mod = p**N
    x = a % mod
    for _ in range(N + 2):
        y = pow(x, p, mod)
        if y == x:
            break
        x = y
    else:
        raise AssertionError("Teichmuller iteration failed to stabilize")
    return ResidueInt(x, p, N)


def teichmuller_table(p: int, N: int) -> list[int]:
    """omega(a) mod p^N for a = 0..p-1 (entry 0 unused, set to 0).

    Closed form omega(a) = a^(p^(N-1)) mod p^N: raising to the p-th power
    N-1 times lands on the fixed point exactly.
    """
    require_odd_prime(p)
    mod = p**N
    e = p ** (N - 1)
    return [0] + [pow(a, e, mod) for a in range(1, p)]


def decompose(a: int, p: int, n: int) -> DigitDecomposition:
    """Split a into Teichmuller and (1+p)-power coordinates mod p^{n+1}."""
    require_odd_prime(p)
    if n < 1:
        raise ValueError(f"level must be >= 1, got {n}")
    if a % p == 0:
        raise ValueError(f"{a} is divisible by {p}; not a unit")
    q = p ** (n + 1)
    w = teichmuller(a, p, n + 1)
    u = a * pow(w.value, -1, q) % q
    # u lies in 1 + pZ; extract base-(1+p) digits one at a time.  After the
    # first j digits are stripped, u ≡ 1 mod p^{j+1} and the next digit is
    # read off the p^{j+1} place.
    index = 0
    for j in range(n):
        digit = (u - 1) // p ** (j + 1) % p
        if digit:
            index += digit * p**j
            u = u * pow(pow(1 + p, digit * p**j, q), -1, q) % q
    if u != 1:
        raise AssertionError(f"digit walk did not terminate for a={a}, p={p}, n={n}")
    return DigitDecomposition(p=p, level=n, omega_part=w, index=index)


def valuation(x, p: int):
    """p-adic valuation of an integer or exact rational; math.inf for 0.

    Unlike the rest of the package this accepts any prime p (it is also the
    oracle-side valuation for denominators like 2730 = 2*3*5*7*13).
    """
    from .primes import is_prime

    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"p must be a prime, got {p}")
    if isinstance(x, ResidueInt):
        return x.padic_valuation()
    frac = Fraction(x)
    if frac == 0:
        return math.inf
    num, den = frac.numerator, frac.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v
