"""Per-prime verdicts: combines irregular pairs, branch invariants and
Vandiver witness reports into a certificate for the three-condition
criterion, plus the generator/relation counts (g, s) of the pro-p Galois
group of the maximal p-ramified extension and its consequences.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .bernoulli import irregular_pairs
from .iwasawa import BranchInvariants, branch_invariants, pin_convention
from .primes import require_odd_prime
from .vandiver import (
    DEFAULT_MAX_WITNESSES,
    EIGENWEIGHT_CONVENTION,
    WitnessAnswer,
    WitnessReport,
    vandiver_test,
)

__all__ = [
    "SCHEMA_VERSION",
    "CertConfig",
    "CertificateError",
    "IrregularPairData",
    "PrimeCertificate",
    "certify",
    "lemma2_gs",
    "corollary2_check",
    "theorem2_note",
    "certificate_to_dict",
    "certificate_from_dict",
    "canonical_json",
]

SCHEMA_VERSION = 1

# Condition tags, in the fixed report order.  VANDIVER would mean a definite
# refutation, which the one-sided test can never produce; it is kept for
# schema completeness.
FAILED_VANDIVER = "VANDIVER"
FAILED_LAMBDA = "LAMBDA"
FAILED_M_LE_A = "M_LE_A"
FAILED_INCONCLUSIVE = "INCONCLUSIVE"


class CertificateError(RuntimeError):
    pass


@dataclass(frozen=True)
class CertConfig:
    max_witnesses: int = DEFAULT_MAX_WITNESSES
    n_max: int = 3  # rows in the (g, s) table


@dataclass(frozen=True)
class IrregularPairData:
    k: int
    j: int  # odd companion, j = p - k
    invariants: BranchInvariants
    vandiver: WitnessReport


@dataclass(frozen=True)
class PrimeCertificate:
    p: int
    is_regular: bool
    index_of_irregularity: int
    pairs: tuple[IrregularPairData, ...]
    lambda_p: int  # minus-part, under Vandiver: sum of per-pair lambda
    alpha: int
    alpha_conditional: bool
    theorem1_applies: bool
    failed_conditions: tuple[str, ...]
    theorem1_reason: str  # "regular" | "computed"
    lemma2_table: tuple[tuple[int, int, int, int], ...]  # rows (n, g, s, r_2)
    theorem2_note: str | None
    conventions: dict = field(compare=False)
    schema_version: int = SCHEMA_VERSION


def lemma2_gs(p: int, n: int, alpha: int) -> tuple[int, int, int]:
    """Generator and relation counts (g, s) and r_2 for the p^n-th cyclotomic
    field: r_2 = phi(p^n)/2 = (p^n - p^{n-1})/2, g = r_2 + 1 + alpha, s = alpha.

    The minus sign in r_2 is forced by the degree count phi(p^n) and by the
    n = 1 rank value (p+1)/2 = r_2 + 1; see the README note on the printed
    plus-sign variant.
    """
    require_odd_prime(p)
    if n < 1:
        raise ValueError(f"tower level must be >= 1, got {n}")
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    r2 = (p**n - p ** (n - 1)) // 2
    return r2 + 1 + alpha, alpha, r2


def certify(p: int, config: CertConfig | None = None) -> PrimeCertificate:
    """Full verdict for one prime.

    Regular p: the conclusion holds outright (reason "regular").  Irregular p:
    condition (1) is Vandiver VERIFIED for every pair, condition (2) is
    lambda_p = 1, condition (3) is sum(m) <= sum(a) over the pairs; an
    INCONCLUSIVE witness loop blocks the verdict without refuting anything.
    """
    require_odd_prime(p)
    config = config or CertConfig()
    conventions = {
        "series_orientation": _orientation_string(),
        "eigenweight": EIGENWEIGHT_CONVENTION,
    }
    ks = irregular_pairs(p)
    if not ks.indices:
        alpha = 0
        g1, _s1, r2 = lemma2_gs(p, 1, alpha)
        return PrimeCertificate(
            p=p,
            is_regular=True,
            index_of_irregularity=0,
            pairs=(),
            lambda_p=0,
            alpha=0,
            alpha_conditional=False,
            theorem1_applies=True,
            failed_conditions=(),
            theorem1_reason="regular",
            lemma2_table=tuple(
                (n,) + lemma2_gs(p, n, alpha) for n in range(1, config.n_max + 1)
            ),
            theorem2_note=f"free of rank {r2 + 1}",
            conventions=conventions,
        )

    pairs = []
    for k in ks.indices:
        inv = branch_invariants(p, k)
        vd = vandiver_test(p, k, config.max_witnesses)
        pairs.append(IrregularPairData(k=k, j=p - k, invariants=inv, vandiver=vd))
    pairs = tuple(pairs)

    lambda_p = sum(pr.invariants.lam for pr in pairs)
    all_verified = all(pr.vandiver.status == "VERIFIED" for pr in pairs)
    any_inconclusive = any(pr.vandiver.status == "INCONCLUSIVE" for pr in pairs)
    cond2 = lambda_p == 1
    cond3 = sum(pr.invariants.m for pr in pairs) <= sum(pr.invariants.a for pr in pairs)

    failed = []
    if not cond2:
        failed.append(FAILED_LAMBDA)
    if not cond3:
        failed.append(FAILED_M_LE_A)
    if any_inconclusive:
        failed.append(FAILED_INCONCLUSIVE)
    applies = all_verified and cond2 and cond3

    alpha = len(pairs)  # p-rank of the class group under verified Vandiver
    g1, _s1, r2 = lemma2_gs(p, 1, alpha)
    note = None
    if applies:
        note = f"no free pro-p quotient of rank {r2 + 1}"
    return PrimeCertificate(
        p=p,
        is_regular=False,
        index_of_irregularity=len(pairs),
        pairs=pairs,
        lambda_p=lambda_p,
        alpha=alpha,
        alpha_conditional=any_inconclusive,
        theorem1_applies=applies,
        failed_conditions=tuple(failed),
        theorem1_reason="computed",
        lemma2_table=tuple(
            (n,) + lemma2_gs(p, n, alpha) for n in range(1, config.n_max + 1)
        ),
        theorem2_note=note,
        conventions=conventions,
    )


def corollary2_check(cert: PrimeCertificate, n: int) -> bool:
    """Is the p-class group of the level-n field certified cyclic?

    Regular p: trivially (it is trivial).  Irregular p: cyclic at every level
    when all pairs are VERIFIED with a single pair of lambda 1 (the class
    groups are then Z/p^{a+n} up the tower).  Non-splitness of the prime
    above p (total ramification) and Leopoldt (abelian field) hold
    automatically in this tower.
    """
    if n < 1:
        raise ValueError(f"tower level must be >= 1, got {n}")
    if cert.is_regular:
        return True
    all_verified = all(pr.vandiver.status == "VERIFIED" for pr in cert.pairs)
    return (
        all_verified
        and cert.index_of_irregularity == 1
        and cert.pairs[0].invariants.lam == 1
    )


def theorem2_note(cert: PrimeCertificate) -> str:
    """Free pro-p quotient consequence; only meaningful on certified primes."""
    if not cert.theorem1_applies:
        raise CertificateError(
            f"certificate for p={cert.p} does not apply; the free pro-p "
            "consequence is conditional"
        )
    assert cert.theorem2_note is not None
    return cert.theorem2_note


def _orientation_string() -> str:
    o = pin_convention()
    return (
        f"sign={o.sign}, gamma exponent direction={o.direction}, "
        f"omega twist k{o.twist_offset:+d}"
    )


# ---------------------------------------------------------------------------
# Serialization (the JSON field names below are the wire format)
# ---------------------------------------------------------------------------

def certificate_to_dict(cert: PrimeCertificate) -> dict:
    return {
        "schema_version": cert.schema_version,
        "p": cert.p,
        "is_regular": cert.is_regular,
        "index_of_irregularity": cert.index_of_irregularity,
        "pairs": [
            {
                "k": pr.k,
                "j": pr.j,
                "invariants": {
                    "mu": pr.invariants.mu,
                    "lambda": pr.invariants.lam,
                    "a": pr.invariants.a,
                    "m": pr.invariants.m,
                    "c_mod_p": pr.invariants.c_mod_p,
                    "precision_used": pr.invariants.precision_used,
                },
                "vandiver": {
                    "status": pr.vandiver.status,
                    "witnesses": [
                        {"q": w.q, "is_pth_power": w.is_pth_power}
                        for w in pr.vandiver.witnesses
                    ],
                },
            }
            for pr in cert.pairs
        ],
        "lambda_p": cert.lambda_p,
        "alpha": cert.alpha,
        "alpha_conditional": cert.alpha_conditional,
        "theorem1": {
            "applies": cert.theorem1_applies,
            "failed_conditions": list(cert.failed_conditions),
            "reason": cert.theorem1_reason,
        },
        "lemma2_table": [
            {"n": n, "g": g, "s": s, "r_2": r2} for (n, g, s, r2) in cert.lemma2_table
        ],
        "theorem2_note": cert.theorem2_note,
        "conventions": cert.conventions,
    }


def certificate_from_dict(d: dict) -> PrimeCertificate:
    pairs = tuple(
        IrregularPairData(
            k=pr["k"],
            j=pr["j"],
            invariants=BranchInvariants(
                mu=pr["invariants"]["mu"],
                lam=pr["invariants"]["lambda"],
                a=pr["invariants"]["a"],
                m=pr["invariants"]["m"],
                c_mod_p=pr["invariants"]["c_mod_p"],
                precision_used=pr["invariants"]["precision_used"],
            ),
            vandiver=WitnessReport(
                p=d["p"],
                k=pr["k"],
                status=pr["vandiver"]["status"],
                witnesses=tuple(
                    WitnessAnswer(q=w["q"], is_pth_power=w["is_pth_power"])
                    for w in pr["vandiver"]["witnesses"]
                ),
            ),
        )
        for pr in d["pairs"]
    )
    return PrimeCertificate(
        p=d["p"],
        is_regular=d["is_regular"],
        index_of_irregularity=d["index_of_irregularity"],
        pairs=pairs,
        lambda_p=d["lambda_p"],
        alpha=d["alpha"],
        alpha_conditional=d["alpha_conditional"],
        theorem1_applies=d["theorem1"]["applies"],
        failed_conditions=tuple(d["theorem1"]["failed_conditions"]),
        theorem1_reason=d["theorem1"]["reason"],
        lemma2_table=tuple(
            (row["n"], row["g"], row["s"], row["r_2"]) for row in d["lemma2_table"]
        ),
        theorem2_note=d["theorem2_note"],
        conventions=d["conventions"],
        schema_version=d["schema_version"],
    )


def canonical_json(obj: dict) -> str:
    """The canonical serialized form: sorted keys, no whitespace."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
