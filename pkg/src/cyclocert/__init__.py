"""Certificates for the pseudo-null conjecture over cyclotomic towers."""

from .bernoulli import bernoulli_exact, bernoulli_mod_p, gen_bernoulli, irregular_pairs
from .certificates import (
    CertConfig,
    PrimeCertificate,
    certify,
    corollary2_check,
    lemma2_gs,
    theorem2_note,
)
from .iwasawa import (
    BranchInvariants,
    TruncatedSeries,
    branch_invariants,
    build_series,
    invariants,
    lp_eval,
    pin_convention,
)
from .padic import ResidueInt, decompose, teichmuller, valuation
from .scan import ScanSummary, report, scan
from .vandiver import find_witness_primes, vandiver_test

__version__ = "0.1.0"

__all__ = [
    "BranchInvariants",
    "CertConfig",
    "PrimeCertificate",
    "ResidueInt",
    "ScanSummary",
    "TruncatedSeries",
    "bernoulli_exact",
    "bernoulli_mod_p",
    "branch_invariants",
    "build_series",
    "certify",
    "corollary2_check",
    "decompose",
    "find_witness_primes",
    "gen_bernoulli",
    "invariants",
    "irregular_pairs",
    "lemma2_gs",
    "lp_eval",
    "pin_convention",
    "report",
    "scan",
    "teichmuller",
    "theorem2_note",
    "valuation",
    "vandiver_test",
]
