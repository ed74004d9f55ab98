"""One-sided Vandiver verification per irregular pair via the p-th power test
on cyclotomic units in a prime field with a p-th root of unity.

For an irregular pair (p, k), the epsilon_k-eigencomponent of the real
cyclotomic units is assembled in F_q for witness primes q ≡ 1 (mod p):

    eta_k = prod_{t=0}^{(p-3)/2}  w(g^t)^{e_t},        e_t = g^{-k t} mod p,

where g is the least primitive root mod p, z has multiplicative order p, and
w(a) = z^{a(1-g)/2} (1 - z^{a g}) / (1 - z^a) is the conjugate of the real
cyclotomic unit (the z-power factor makes the global preimage real, so the
test is meaningful even when q ≡ 1 mod p^2 fails).

If eta_k is not a p-th power in F_q it cannot be a global p-th power, and the
eigencomponent of the real class group vanishes: status VERIFIED.  A p-th
power answer says nothing (one-sided); after max_witnesses of those the
status is INCONCLUSIVE, which is a first-class outcome, not an error.

The exponent normalization e_t = g^{-kt} is the idempotent weight, pinned by
the equivariance identity chi(eta(z^u)) = chi(eta(z))^{u^k} for the p-th
power residue character chi; tests exercise that identity directly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bernoulli import irregular_pairs
from .primes import is_prime, require_odd_prime, smallest_primitive_root

__all__ = [
    "EIGENWEIGHT_CONVENTION",
    "WitnessAnswer",
    "WitnessReport",
    "find_witness_primes",
    "vandiver_test",
]

EIGENWEIGHT_CONVENTION = "sigma_{g^t} weight g^(-kt) mod p; real-normalized units"

DEFAULT_MAX_WITNESSES = 8

# Witness search ceiling: r in q = r*p + 1 stops here.  Linnik-scale pathology
# would be needed to hit it at desk scale.
_WITNESS_SCAN_CEILING = 2_000_000


@dataclass(frozen=True)
class WitnessAnswer:
    q: int
    is_pth_power: bool


@dataclass(frozen=True)
class WitnessReport:
    p: int
    k: int
    status: str  # "VERIFIED" | "INCONCLUSIVE"
    witnesses: tuple[WitnessAnswer, ...]

    def __post_init__(self):
        verified = any(not w.is_pth_power for w in self.witnesses)
        if (self.status == "VERIFIED") != verified:
            raise ValueError("status inconsistent with witness answers")
        qs = [w.q for w in self.witnesses]
        if qs != sorted(qs):
            raise ValueError("witnesses must be listed in ascending order")


def find_witness_primes(p: int, count: int) -> list[int]:
    """The `count` smallest primes q ≡ 1 (mod p), scanning q = r*p + 1 over
    even r (odd r gives even q)."""
    require_odd_prime(p)
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    out: list[int] = []
    r = 2
    while len(out) < count:
        if r > _WITNESS_SCAN_CEILING:
            raise RuntimeError(f"witness scan ceiling reached for p={p}")
        q = r * p + 1
        if is_prime(q):
            out.append(q)
        r += 2
    return out


def _order_p_element(p: int, q: int) -> int:
    """Some element of multiplicative order p in F_q (q ≡ 1 mod p)."""
    e = (q - 1) // p
    for h in range(2, q):
        z = pow(h, e, q)
        if z != 1:
            assert pow(z, p, q) == 1
            return z
    raise AssertionError(f"no order-{p} element found in F_{q}")


def eta_image(p: int, k: int, q: int, z: int | None = None) -> int:
    """The eigencomponent eta_k evaluated in F_q at the order-p element z."""
    g = smallest_primitive_root(p)
    if z is None:
        z = _order_p_element(p, q)
    inv2 = (p + 1) // 2  # 1/2 mod p
    # power table of z saves ~3 modpows per conjugate
    zpow = [1] * p
    for j in range(1, p):
        zpow[j] = zpow[j - 1] * z % q
    gk_step = pow(g, (-k) % (p - 1), p)
    eta = 1
    a_t = 1  # g^t mod p
    e_t = 1  # g^{-kt} mod p
    one_minus_g = (1 - g) % p
    for _ in range((p - 1) // 2):
        zc = zpow[a_t * one_minus_g % p * inv2 % p]
        num = (1 - zpow[a_t * g % p]) % q
        den = (1 - zpow[a_t]) % q
        w = zc * num % q * pow(den, -1, q) % q
        eta = eta * pow(w, e_t, q) % q
        a_t = a_t * g % p
        e_t = e_t * gk_step % p
    if eta == 0:
        raise AssertionError(f"eta vanished in F_{q}; z does not have order {p}")
    return eta


def _is_pth_power(p: int, q: int, value: int) -> bool:
    return pow(value, (q - 1) // p, q) == 1


def vandiver_test(p: int, k: int, max_witnesses: int = DEFAULT_MAX_WITNESSES) -> WitnessReport:
    """Run the witness loop for one irregular pair, stopping at the first
    non-p-th-power (VERIFIED)."""
    require_odd_prime(p)
    if k not in irregular_pairs(p).indices:
        raise ValueError(f"({p}, {k}) is not an irregular pair; the test is undefined")
    if max_witnesses < 1:
        raise ValueError(f"max_witnesses must be >= 1, got {max_witnesses}")
    answers: list[WitnessAnswer] = []
    for q in find_witness_primes(p, max_witnesses):
        pth = _is_pth_power(p, q, eta_image(p, k, q))
        answers.append(WitnessAnswer(q=q, is_pth_power=pth))
        if not pth:
            return WitnessReport(p=p, k=k, status="VERIFIED", witnesses=tuple(answers))
    return WitnessReport(p=p, k=k, status="INCONCLUSIVE", witnesses=tuple(answers))
