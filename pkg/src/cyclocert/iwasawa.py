"""Iwasawa power series f(T) of even branch characters omega^k, built from
Stickelberger sums, with f((1+p)^s - 1) = L_p(s, omega^k).

Construction at level n, q = p^{n+1}: every unit x in [1, q) decomposes as
x = omega(x)(1+p)^{i_n(x)} mod q, and

    f_n(T) = sign * (1/q) * sum_x  x * omega(x)^{k-1} * (1+T)^{dir * i_n(x)}

reduced mod ((1+T)^{p^n} - 1).  The remaining orientation freedom (overall
sign, exponent direction, twist offset of the omega power) is pinned once by
interpolation against exact Bernoulli targets -(1 - p^{m-1}) B_m / m at
s = 1 - m; see pin_convention.  Key facts the tests re-verify:

  * each gamma-coefficient of the sum is divisible by q exactly when the
    twist is omega^{k-1} (the odd companion character), so the division is
    exact integer arithmetic;
  * the constant term f(0) = -B_{1, omega^{k-1}} is level-exact;
  * collapsing the level-(n+1) sum mod (1+T)^{p^n} - 1 reproduces p times
    the level-n sum, coefficient by coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .bernoulli import bernoulli_exact
from .padic import ResidueInt, decompose, teichmuller_table
from .primes import require_odd_prime, smallest_primitive_root

__all__ = [
    "ConventionError",
    "PrecisionEscalation",
    "EscalationExhausted",
    "Orientation",
    "TruncatedSeries",
    "BranchInvariants",
    "pin_convention",
    "build_series",
    "lp_eval",
    "invariants",
    "invariants_with_escalation",
    "branch_invariants",
]

# Above this many summands the exact big-int engine hands over to the
# int64 engine (which caps the coefficient precision instead).
_EXACT_ENGINE_LIMIT = 3_000_000


class ConventionError(RuntimeError):
    """A sign/twist convention is broken; results would be garbage."""


class PrecisionEscalation(Exception):
    """The requested invariant is not certifiable at the current precision."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class EscalationExhausted(RuntimeError):
    """Two escalations did not settle the invariant; aborting loudly."""


@dataclass(frozen=True)
class Orientation:
    """Pinned Stickelberger orientation: global constants, independent of (p, k)."""

    sign: int          # overall sign of the transform
    direction: int     # gamma exponent is (direction * i_n(x)) mod p^n
    twist_offset: int  # omega twist exponent is k + twist_offset


@dataclass(frozen=True)
class BranchInvariants:
    """Weierstrass data of one branch: f = p^mu (distinguished poly, deg lambda) * unit."""

    mu: int
    lam: int
    a: int                 # v_p(f(0))
    m: int                 # v_p(f(p)), i.e. v_p at the L-value point s = 1
    c_mod_p: int | None    # when lam = 1: f = (T + c p^a) * unit, c mod p
    precision_used: int


@dataclass(frozen=True)
class TruncatedSeries:
    """f(T) mod (p^precision, T^trunc) for branch omega^k at Stickelberger level n.

    `coeffs[j]` is c_j at the common effective precision; the constant term is
    additionally carried at full working precision in `c0` (it is level-exact).
    """

    p: int
    k: int
    level: int
    precision: int
    trunc: int
    coeffs: tuple[ResidueInt, ...]
    c0: ResidueInt
    orientation: Orientation

    @property
    def c_0(self) -> ResidueInt:
        return self.c0

    def coefficient_rows(self):
        """(index, value, valuation) rows for the text dump."""
        for j, c in enumerate(self.coeffs):
            v = c.padic_valuation()
            yield j, c.value, ("+inf" if v == math.inf else v)


# ---------------------------------------------------------------------------
# Stickelberger engines (gamma basis, canonical +i orientation)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _omega_ints(p: int, exponent: int) -> tuple[int, ...]:
    return tuple(teichmuller_table(p, exponent))


def _gamma_buckets_exact(p: int, k: int, n: int, work: int, twist_exp: int) -> list[int]:
    """S-form buckets mod p^work: buckets[i] = sum over the classes with
    gamma exponent i of x * omega(x)^twist_exp.

    Folds the pair (x, q - x): omega^t(-x) = -omega^t(x) for odd t, giving
    the (2x - q) * w summand over half the delta classes.  Odd twist only.
    """
    if twist_exp % 2 == 0:
        raise ConventionError("even twist has no exact integral sum; nothing to fold")
    q = p ** (n + 1)
    pn = p**n
    mod = p**work
    omega = _omega_ints(p, max(work, n + 1))
    buckets = [0] * pn
    for delta in range(1, (p + 1) // 2):
        w = pow(omega[delta] % mod, twist_exp, mod)
        x = omega[delta] % q
        for i in range(pn):
            buckets[i] = (buckets[i] + (2 * x - q) * w) % mod
            x = x * (1 + p) % q
    return buckets


def _p_buckets_level1(p: int, t: int, c_reg: int, twist_exp: int) -> np.ndarray:
    """Level-1 specialization of the regularized buckets.

    At q = p^2 the walk is affine: omega(d)(1+p)^i ≡ d + p((h_d + i d) mod p)
    with h_d = omega(d) div p, and the floor collapses to
    floor(c x / q) = (floor(c d / p) + c u) div p with u the mod-p residue.
    Everything stays below 2^50, so the pipeline runs exactly in float64 and
    the weight contraction is a BLAS matmul.  Needs p^t < 2^21 for exactness
    of the contraction (t = 1 always; t = 2 up to p ~ 1400).
    """
    if twist_exp % 2 == 0:
        raise ConventionError("even twist is outside the folded engine's contract")
    mod = p**t
    if mod * 2 * c_reg * p > 1 << 52:
        raise ValueError(f"float64 level-1 engine bounds exceeded for p={p}, t={t}")
    omega = _omega_ints(p, max(2, t))
    half = (p - 1) // 2
    mod2 = p * p
    d_col = np.arange(1, half + 1, dtype=np.float64)[:, None]
    h_col = np.array(
        [omega[d] % mod2 // p for d in range(1, half + 1)], dtype=np.float64
    )[:, None]
    alpha_col = np.floor(c_reg * d_col / p)
    w = np.array(
        [pow(omega[d] % mod, twist_exp, mod) for d in range(1, half + 1)],
        dtype=np.float64,
    )
    shift = float(c_reg - 1)
    # Exactness: all intermediate values are integers < 2^31 held in float64,
    # and the two floors use true IEEE division, which returns exact-integer
    # quotients exactly and is otherwise >= 1/p away from an integer, far
    # beyond the ~2^-28 rounding error.  Reciprocal-multiply would break the
    # exact-quotient case.
    block = 64  # keep the (half x block) buffers cache resident
    buckets = np.empty(p, dtype=np.float64)
    v = np.empty((half, block), dtype=np.float64)
    f = np.empty((half, block), dtype=np.float64)
    for lo in range(0, p, block):
        b = min(block, p - lo)
        vb, fb = v[:, :b], f[:, :b]
        i_blk = np.arange(lo, lo + b, dtype=np.float64)
        np.multiply(d_col, i_blk[None, :], out=vb)
        vb += h_col                      # v = h + i*d, exact
        np.divide(vb, p, out=fb)
        np.floor(fb, out=fb)
        fb *= -float(p)
        vb += fb                         # u = v mod p, exact
        vb *= c_reg
        vb += alpha_col                  # z = c*u + alpha, exact
        np.divide(vb, p, out=vb)
        np.floor(vb, out=fb)             # fl = z div p
        fb *= 2.0
        fb -= shift
        buckets[lo : lo + b] = w @ fb
    return buckets.astype(np.int64) % mod


def _p_buckets_int64(p: int, k: int, n: int, t: int, c_reg: int, twist_exp: int) -> np.ndarray:
    """Regularized (division-free) buckets mod p^t:
    buckets[i] = sum_x floor(c_reg * x / q) * omega(x)^twist_exp over gamma class i.

    int64 contract: q^2 < 2^62 (blocked walk products) and
    c_reg * p^t * p < 2^61 (weighted accumulation).
    """
    if twist_exp % 2 == 0:
        raise ConventionError("even twist is outside the folded engine's contract")
    if n == 1 and p ** t * 2 * c_reg * p <= 1 << 52:
        return _p_buckets_level1(p, t, c_reg, twist_exp)
    q = p ** (n + 1)
    pn = p**n
    mod = p**t
    if q.bit_length() * 2 >= 62 or (c_reg * mod * p).bit_length() >= 61:
        raise ValueError(f"int64 engine bounds exceeded for p={p}, n={n}, t={t}")
    omega = _omega_ints(p, n + 1)
    half = (p - 1) // 2
    X = np.array([omega[d] % q for d in range(1, half + 1)], dtype=np.int64)
    W = np.array(
        [pow(omega[d] % mod, twist_exp, mod) for d in range(1, half + 1)],
        dtype=np.int64,
    )
    block = 512
    pw = np.empty(block, dtype=np.int64)
    pw[0] = 1
    for j in range(1, block):
        pw[j] = pw[j - 1] * (1 + p) % q
    step = int(pw[block - 1]) * (1 + p) % q
    buckets = np.zeros(pn, dtype=np.int64)
    shift = c_reg - 1
    for lo in range(0, pn, block):
        b = min(block, pn - lo)
        XB = X[:, None] * pw[None, :b] % q
        FL = (c_reg * XB) // q
        # folded pair contribution: (2*floor - (c_reg - 1)) * w
        buckets[lo : lo + b] = W @ (2 * FL - shift)
        X = X * step % q
    return buckets % mod


def _collapse(buckets, pn: int, mod: int):
    """Reduce a gamma polynomial mod gamma^{pn} - 1 (indices mod pn)."""
    out = [0] * pn
    for i, b in enumerate(buckets):
        j = i % pn
        out[j] = (out[j] + int(b)) % mod
    return out


def _reindex(buckets, direction: int, pn: int, mod: int) -> list[int]:
    """Apply the exponent direction: poly sum b_i gamma^{direction * i}."""
    out = [0] * pn
    for i, b in enumerate(buckets):
        out[(direction * i) % pn] = int(b) % mod
    return out


def _gamma_to_T(buckets: list[int], M: int, mod: int) -> list[int]:
    """T-basis truncation: c_j = sum_i b_i * C(i, j) mod `mod` for j < M."""
    coeffs = [0] * M
    row = [0] * M  # C(i, j) for the current i
    for i, b in enumerate(buckets):
        # update binomial row from i-1 to i (Pascal, right to left)
        top = min(i, M - 1)
        for j in range(top, 0, -1):
            row[j] = (row[j] + row[j - 1]) % mod
        if i == 0:
            row[0] = 1
        if b:
            for j in range(min(i, M - 1) + 1):
                coeffs[j] = (coeffs[j] + b * row[j]) % mod
    return coeffs


def _gamma_to_T_int64(buckets: np.ndarray, M: int, mod: int) -> list[int]:
    """Vectorized T-basis truncation; requires mod < 2^31."""
    if mod.bit_length() >= 31:
        raise ValueError("int64 conversion needs mod < 2^31")
    npts = len(buckets)
    b = np.asarray(buckets, dtype=np.int64) % mod
    i_arr = np.arange(npts, dtype=np.int64)
    col = np.ones(npts, dtype=np.int64)  # C(i, 0)
    out = []
    for j in range(M):
        if j > 0:
            col = col * ((i_arr - (j - 1)) % mod) % mod * pow(j, -1, mod) % mod
        out.append(int((b * col % mod).sum() % mod))
    return out


def _series_inverse(d: list[int], M: int, mod: int, p: int) -> list[int]:
    """Inverse of a power series with unit constant term, mod (mod, T^M)."""
    if d[0] % p == 0:
        raise ConventionError("regularizer polynomial is not a unit; bad c choice")
    inv0 = pow(d[0], -1, mod)
    out = [inv0] + [0] * (M - 1)
    for j in range(1, M):
        s = sum(d[l] * out[j - l] for l in range(1, min(j, len(d) - 1) + 1)) % mod
        out[j] = -inv0 * s % mod
    return out


def _series_mul(a: list[int], b: list[int], M: int, mod: int) -> list[int]:
    out = [0] * M
    for i, ai in enumerate(a[:M]):
        if ai:
            for j in range(M - i):
                out[i + j] = (out[i + j] + ai * b[j]) % mod
    return out


def _binomial_poly(exp: int, M: int, mod: int) -> list[int]:
    """(1+T)^exp mod (mod, T^M) for a nonnegative integer exponent."""
    out = [1] + [0] * (M - 1)
    c = 1
    for j in range(1, M):
        if j > exp:
            break
        c = c * (exp - j + 1) // j
        out[j] = c % mod
    return out


def _regularizer_poly(
    p: int, n: int, M: int, t: int, c_reg: int, twist: int, direction: int
) -> list[int]:
    """D(T) = c_reg - omega(c_reg)^{-twist} (1+T)^{(-direction i_n(c_reg)) mod p^n}
    truncated mod (p^t, T^M): the unit multiplier with P = f * D, where P is
    the floor-weighted (division-free) Stickelberger sum.
    """
    mod = p**t
    idx_c = decompose(c_reg, p, n).index
    omega = _omega_ints(p, max(t, n + 1))
    w_c = pow(pow(omega[c_reg] % mod, twist, mod), -1, mod)
    poly = _binomial_poly((-direction * idx_c) % p**n, M, mod)
    d = [(-w_c * v) % mod for v in poly]
    d[0] = (c_reg + d[0]) % mod
    return d


# ---------------------------------------------------------------------------
# Orientation pinning
# ---------------------------------------------------------------------------

_CALIBRATION_SET = ((5, 2), (7, 2), (7, 4), (11, 2), (13, 8))


def _frac_residue(x: Fraction, p: int, exp: int) -> int:
    mod = p**exp
    if x.denominator % p == 0:
        raise ValueError("target has a p in the denominator")
    return x.numerator * pow(x.denominator, -1, mod) % mod


def _interpolation_target(p: int, m: int) -> Fraction:
    """L_p(1 - m, omega^k) for m ≡ k mod p-1:  -(1 - p^{m-1}) B_m / m."""
    return -(1 - Fraction(p) ** (m - 1)) * bernoulli_exact(m) / m


@lru_cache(maxsize=1)
def pin_convention() -> Orientation:
    """Determine the unique global orientation satisfying the interpolation
    contract f((1+p)^{1-m} - 1) ≡ -(1 - p^{m-1}) B_m / m at two weights per
    calibration branch.  Twist offsets whose sums fail q-integrality are
    rejected outright.  Raises ConventionError unless exactly one candidate
    survives across the whole calibration set.
    """
    n, extra = 2, 3
    work = extra + n + 1
    candidates = {
        (sign, direction, offset)
        for sign in (1, -1)
        for direction in (1, -1)
        for offset in (-1, 0, 1)
    }
    for (p, k) in _CALIBRATION_SET:
        q = p ** (n + 1)
        pn = p**n
        per_offset: dict[int, list[int] | None] = {}
        for offset in (-1, 0, 1):
            twist = (k + offset) % (p - 1)
            if twist % 2 == 0:
                per_offset[offset] = None
                continue
            buckets = _gamma_buckets_exact(p, k, n, work, twist)
            if any(b % q for b in buckets):
                per_offset[offset] = None
                continue
            prec = p ** (work - n - 1)
            per_offset[offset] = [b // q % prec for b in buckets]
        still = set()
        for cand in candidates:
            sign, direction, offset = cand
            f_buckets = per_offset[offset]
            if f_buckets is None:
                continue
            ok = True
            for m in (k, k + (p - 1)):
                s = 1 - m
                pe = min(extra, n + 1)
                modpe = p**pe
                gamma = pow(pow(1 + p, -s, modpe), -1, modpe)  # (1+p)^s, s <= 0
                # evaluate sum_i b_i gamma^{direction * i}
                gd = pow(gamma, -1, modpe) if direction < 0 else gamma
                acc, gp = 0, 1
                for b in f_buckets:
                    acc = (acc + sign * b * gp) % modpe
                    gp = gp * gd % modpe
                if acc != _frac_residue(_interpolation_target(p, m), p, pe):
                    ok = False
                    break
            if ok:
                still.add(cand)
        candidates = still
        if not candidates:
            raise ConventionError(
                "no Stickelberger orientation satisfies the interpolation contract"
            )
    if len(candidates) != 1:
        raise ConventionError(
            f"orientation not unique after calibration: {sorted(candidates)}"
        )
    sign, direction, offset = candidates.pop()
    return Orientation(sign=sign, direction=direction, twist_offset=offset)


# ---------------------------------------------------------------------------
# Series construction
# ---------------------------------------------------------------------------

def _validate_branch(p: int, k: int) -> None:
    require_odd_prime(p)
    if k % 2 or not (2 <= k <= p - 3):
        raise ValueError(
            f"branch must be an even k with 2 <= k <= p-3, got k={k} for p={p}"
        )


def _constant_term(p: int, k: int, N: int, orientation: Orientation) -> int:
    """sign * B_{1, omega^{k + offset}} mod p^N, from the conductor-p sum.

    This equals f(0) at every level (the level correction vanishes at T = 0).
    """
    mod = p ** (N + 1)
    omega = _omega_ints(p, N + 1)
    twist = (k + orientation.twist_offset) % (p - 1)
    total = sum(x * pow(omega[x], twist, mod) for x in range(1, p)) % mod
    if total % p:
        raise ConventionError(f"B_1 sum not divisible by p at (p={p}, k={k})")
    return orientation.sign * (total // p) % (p**N)


def build_series(
    p: int,
    k: int,
    n: int,
    N: int,
    M: int,
    *,
    orientation: Orientation | None = None,
) -> TruncatedSeries:
    """Level-n Stickelberger approximation of f(T), truncated mod (p^N, T^M).

    Coefficients beyond the constant term are certified mod p^{min(N, n)}
    (the level-truncation bound); the constant term is certified mod p^N.
    The int64 engine takes over past the exact-engine size limit and then
    additionally caps the common precision by int64 feasibility.
    """
    _validate_branch(p, k)
    if n < 1:
        raise ValueError(f"level must be >= 1, got {n}")
    if N < 1:
        raise ValueError(f"precision must be >= 1, got {N}")
    if not (1 <= M <= p**n):
        raise ValueError(f"truncation must satisfy 1 <= M <= p^n, got {M}")
    orientation = orientation or pin_convention()
    q = p ** (n + 1)
    pn = p**n
    n_eff = min(N, n)

    if q <= _EXACT_ENGINE_LIMIT:
        work = N + n + 2
        twist = (k + orientation.twist_offset) % (p - 1)
        buckets = _gamma_buckets_exact(p, k, n, work, twist)
        bad = [i for i, b in enumerate(buckets) if b % q]
        if bad:
            raise ConventionError(
                f"Stickelberger sum not divisible by p^{n + 1} at gamma^{bad[0]} "
                f"for (p={p}, k={k}): orientation/twist convention is broken"
            )
        prec_exp = work - (n + 1)
        fdiv = [orientation.sign * (b // q) % p**prec_exp for b in buckets]
        directed = _reindex(fdiv, orientation.direction, pn, p**prec_exp)
        c_t = _gamma_to_T(directed, M, p**prec_exp)
        c0_full = c_t[0] % p**N
    else:
        # regularized engine: division-free, so no extra working digits needed;
        # its precision is capped by the int64 contract instead
        c_reg = smallest_primitive_root(p)
        twist = (k + orientation.twist_offset) % (p - 1)
        t = min(N, n)
        while t > 1 and (c_reg * p**t * p).bit_length() >= 61:
            t -= 1
        P = _p_buckets_int64(p, k, n, t, c_reg, twist)
        mod = p**t
        directed = _reindex(P, orientation.direction, pn, mod)
        p_t = (
            _gamma_to_T_int64(np.array(directed, dtype=np.int64), M, mod)
            if mod.bit_length() < 31
            else _gamma_to_T(directed, M, mod)
        )
        d_full = _regularizer_poly(p, n, M, t, c_reg, twist, orientation.direction)
        d_inv = _series_inverse(d_full, M, mod, p)
        c_t = _series_mul(p_t, d_inv, M, mod)
        c_t = [orientation.sign * v % mod for v in c_t]
        n_eff = min(n_eff, t)
        c0_full = _constant_term(p, k, N, orientation)
        if (c0_full - c_t[0]) % p**n_eff:
            raise ConventionError(
                f"constant-term cross-check failed at (p={p}, k={k})"
            )

    coeffs = tuple(ResidueInt(c, p, n_eff) for c in c_t[:M])
    return TruncatedSeries(
        p=p,
        k=k,
        level=n,
        precision=n_eff,
        trunc=M,
        coeffs=coeffs,
        c0=ResidueInt(c0_full, p, N),
        orientation=orientation,
    )


# ---------------------------------------------------------------------------
# Evaluation and invariants
# ---------------------------------------------------------------------------

def lp_eval(series: TruncatedSeries, s: int) -> ResidueInt:
    """f((1+p)^s - 1) from the truncation.

    Effective precision min(coefficient precision, M, n + 1 + v_p(s)): dropped
    T-powers contribute above p^M since v_p((1+p)^s - 1) = 1, and the level
    truncation contributes above p^{n+1+v_p(s)}.
    """
    p = series.p
    if s == 0:
        return series.c0
    vs = 0
    ss = abs(s)
    while ss % p == 0:
        ss //= p
        vs += 1
    pe = min(series.precision, series.trunc, series.level + 1 + vs)
    mod = p**pe
    if s > 0:
        t_val = (pow(1 + p, s, mod) - 1) % mod
    else:
        t_val = (pow(pow(1 + p, -s, mod), -1, mod) - 1) % mod
    acc, tp = 0, 1
    for c in series.coeffs:
        acc = (acc + c.value * tp) % mod
        tp = tp * t_val % mod
    # the constant term is known beyond series.precision; fold in the sharper value
    acc = (acc - series.coeffs[0].value + series.c0.value) % mod
    return ResidueInt(acc, p, pe)


def _newton_root(coeffs: list[int], p: int, prec: int) -> int:
    """The unique root theta ≡ 0 mod p of the truncated series, mod p^prec.

    Requires the T-coefficient to be a unit (lambda = 1 shape).
    """
    mod = p**prec
    theta = 0
    for _ in range(prec + 2):
        f_val = 0
        fp_val = 0
        tp = 1
        for j, c in enumerate(coeffs):
            f_val = (f_val + c * tp) % mod
            if j + 1 < len(coeffs):
                fp_val = (fp_val + (j + 1) * coeffs[j + 1] * tp) % mod
            tp = tp * theta % mod
        if fp_val % p == 0:
            raise ConventionError("Newton derivative not a unit; lambda != 1 shape")
        new = (theta - f_val * pow(fp_val, -1, mod)) % mod
        if new == theta:
            break
        theta = new
    return theta


def invariants(series: TruncatedSeries) -> BranchInvariants:
    """Extract (mu, lambda, a, m, c mod p) from a truncated series.

    Raises PrecisionEscalation whenever a value cannot be certified at the
    series' precision; never returns a guess.
    """
    p = series.p
    n_eff = series.precision
    vals = [c.padic_valuation() for c in series.coeffs]
    mu_vis = min(vals)
    if mu_vis >= 1:
        # no visible unit coefficient: either mu > 0 (not expected for these
        # fields) or lambda >= M; both need more series.
        raise PrecisionEscalation(
            f"no unit coefficient below T^{series.trunc} at precision {n_eff} "
            f"for (p={p}, k={series.k}); mu > 0 or lambda >= {series.trunc}"
        )
    mu = 0
    lam = vals.index(0)
    a_val = series.c0.padic_valuation()
    if a_val == math.inf:
        raise PrecisionEscalation(
            f"v_p(f(0)) >= {series.c0.N} not resolved for (p={p}, k={series.k})"
        )
    a_val = int(a_val)

    c_mod_p = None
    if lam == 1:
        # theta is determined mod p^{min(c0 precision, n_eff + a)}: coefficient
        # uncertainty p^{n_eff} enters multiplied by theta^j, v_p(theta) = a
        root_prec = min(series.c0.N, n_eff + a_val)
        mod_r = p**root_prec
        cs = [c.value % mod_r for c in series.coeffs]
        cs[0] = series.c0.value % mod_r
        theta = _newton_root(cs, p, root_prec)
        v_theta = 0
        th = theta
        while th and th % p == 0:
            th //= p
            v_theta += 1
        if theta == 0 or v_theta != a_val:
            raise PrecisionEscalation(
                f"Newton root valuation {v_theta} disagrees with a={a_val} "
                f"for (p={p}, k={series.k})"
            )
        c_mod_p = -(theta // p**a_val) % p

    # m = v_p(f(p)); prefer the direct evaluation, cross-check the
    # Weierstrass identity v_p(p + c p^a) when lambda = 1
    direct = lp_eval(series, 1)
    m_direct = direct.padic_valuation()
    m_val = None
    if m_direct != math.inf:
        m_val = int(m_direct)
    if lam == 1 and c_mod_p is not None:
        if a_val > 1:
            m_tri = 1
        elif c_mod_p != p - 1:
            m_tri = 1
        else:
            m_tri = None  # needs c mod p^2; fall back to the direct value
        if m_tri is not None:
            if m_val is not None and m_val != m_tri:
                raise ConventionError(
                    f"m mismatch: direct {m_val} vs Weierstrass {m_tri} "
                    f"at (p={p}, k={series.k})"
                )
            m_val = m_tri
    if m_val is None:
        raise PrecisionEscalation(
            f"v_p(f(p)) >= {direct.N} not resolved for (p={p}, k={series.k})"
        )
    return BranchInvariants(
        mu=mu,
        lam=lam,
        a=a_val,
        m=m_val,
        c_mod_p=c_mod_p,
        precision_used=n_eff,
    )


def invariants_with_escalation(
    p: int,
    k: int,
    *,
    start_precision: int = 8,
    start_level: int = 2,
    max_truncation: int = 32,
) -> BranchInvariants:
    """Escalation driver: start at (N, n) = (8, 2), M = min(p^n, 32); on an
    escalation request double N and raise the level; abort after two failures.
    """
    N, n = start_precision, start_level
    last = None
    for _attempt in range(3):
        M = min(p**n, max_truncation)
        try:
            return invariants(build_series(p, k, n, N, M))
        except PrecisionEscalation as exc:
            last = exc
            N, n = 2 * N, n + 1
    raise EscalationExhausted(
        f"invariants for (p={p}, k={k}) still uncertified after two escalations: {last}"
    )


def branch_invariants(p: int, k: int) -> BranchInvariants:
    """Scan-scale invariant pipeline for an irregular branch.

    a comes from the exact constant term; lambda from the level-1 series
    mod p; for lambda = 1 the root is theta ≡ -c_0/c_1 mod p^{2a}, giving
    c ≡ c_0 / (p^a c_1) mod p and m via v_p(p + c p^a).  Falls back to the
    escalation driver whenever any of those steps cannot certify.
    """
    _validate_branch(p, k)
    orientation = pin_convention()
    c0_prec = 8
    c0 = _constant_term(p, k, c0_prec, orientation)
    a_val = 0
    x = c0
    while x % p == 0 and a_val < c0_prec:
        x //= p
        a_val += 1
    if a_val >= c0_prec - 1:
        c0_prec = 2 * c0_prec
        c0 = _constant_term(p, k, c0_prec, orientation)
        a_val = 0
        x = c0
        while x % p == 0 and a_val < c0_prec:
            x //= p
            a_val += 1
        if a_val >= c0_prec - 1:
            raise EscalationExhausted(f"v_p(f(0)) >= {c0_prec - 1} at (p={p}, k={k})")

    for M in (min(p, 32), min(p, 256)):
        f1 = _level1_coeffs_mod_p(p, k, M, orientation)
        if (f1[0] == 0) != (a_val >= 1):
            raise ConventionError(
                f"constant-term parity mismatch between routes at (p={p}, k={k})"
            )
        nonzero = [j for j, c in enumerate(f1) if c % p]
        if nonzero:
            lam = nonzero[0]
            break
    else:
        return invariants_with_escalation(p, k)

    if lam == 1:
        c1 = f1[1]
        c_mod_p = (c0 // p**a_val) * pow(c1, -1, p) % p
        if a_val > 1 or c_mod_p != p - 1:
            m_val = 1
        else:
            # the rare census-relevant case c ≡ -1 needs the honest series
            return invariants_with_escalation(p, k)
        return BranchInvariants(
            mu=0, lam=lam, a=a_val, m=m_val, c_mod_p=c_mod_p, precision_used=1
        )
    if lam == 0:
        # regular branch: f(0) is a unit
        return BranchInvariants(mu=0, lam=0, a=0, m=0, c_mod_p=None, precision_used=1)
    return invariants_with_escalation(p, k)


def _level1_coeffs_mod_p(p: int, k: int, M: int, orientation: Orientation) -> list[int]:
    """f(T) mod (p, T^M) from the level-1 regularized sum."""
    twist = (k + orientation.twist_offset) % (p - 1)
    c_reg = smallest_primitive_root(p)
    P = _p_buckets_int64(p, k, 1, 1, c_reg, twist)
    directed = _reindex(P, orientation.direction, p, p)
    p_t = _gamma_to_T_int64(np.array(directed, dtype=np.int64), M, p)
    d_full = _regularizer_poly(p, 1, M, 1, c_reg, twist, orientation.direction)
    d_inv = _series_inverse(d_full, M, p, p)
    c_t = _series_mul(p_t, d_inv, M, p)
    return [orientation.sign * v % p for v in c_t]
