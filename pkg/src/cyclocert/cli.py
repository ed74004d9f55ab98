"""Command-line surface: check / scan / series / gs / report.

Exit codes are a stable contract:
  0  verdict applies (or the subcommand succeeded)
  1  usage or computation error
  3  verdict does not apply, with a definite failed condition
  4  verdict blocked only by INCONCLUSIVE witness loops
"""

from __future__ import annotations

import argparse
import json
import sys

from .certificates import (
    CertConfig,
    certificate_to_dict,
    certify,
    canonical_json,
    lemma2_gs,
)
from .iwasawa import build_series
from .primes import is_prime
from .scan import report, scan

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FAILED = 3
EXIT_INCONCLUSIVE = 4


def _cert_table(d: dict) -> str:
    rows = [
        ("p", d["p"]),
        ("regular", d["is_regular"]),
        ("index of irregularity", d["index_of_irregularity"]),
        ("lambda_p (minus part, under Vandiver)", d["lambda_p"]),
        ("alpha", f"{d['alpha']}{' (conditional)' if d['alpha_conditional'] else ''}"),
        ("applies", d["theorem1"]["applies"]),
        ("reason", d["theorem1"]["reason"]),
        ("failed conditions", ",".join(d["theorem1"]["failed_conditions"]) or "-"),
        ("consequence", d["theorem2_note"] or "-"),
    ]
    out = [f"{name:<40}{value}" for name, value in rows]
    for pr in d["pairs"]:
        inv = pr["invariants"]
        vd = pr["vandiver"]
        out.append(
            f"  pair k={pr['k']:<6} j={pr['j']:<6} mu={inv['mu']} "
            f"lambda={inv['lambda']} a={inv['a']} m={inv['m']} "
            f"c_mod_p={inv['c_mod_p']} vandiver={vd['status']} "
            f"witnesses={[w['q'] for w in vd['witnesses']]}"
        )
    for (row) in d["lemma2_table"]:
        out.append(
            f"  level n={row['n']}: g={row['g']} s={row['s']} r_2={row['r_2']}"
        )
    return "\n".join(out)


def cmd_check(args) -> int:
    p = args.p
    if p < 5 or not is_prime(p):
        print(f"error: p must be a prime >= 5, got {p}", file=sys.stderr)
        return EXIT_ERROR
    cfg = CertConfig(max_witnesses=args.max_witnesses, n_max=args.nmax)
    cert = certify(p, cfg)
    d = certificate_to_dict(cert)
    if args.json:
        print(canonical_json(d))
    else:
        print(_cert_table(d))
    if cert.theorem1_applies:
        return EXIT_OK
    definite = [c for c in cert.failed_conditions if c != "INCONCLUSIVE"]
    return EXIT_FAILED if definite else EXIT_INCONCLUSIVE


def cmd_scan(args) -> int:
    cfg = CertConfig(max_witnesses=args.max_witnesses, n_max=args.nmax)
    summary = scan(
        args.start,
        args.stop,
        jobs=args.jobs,
        checkpoint_path=args.checkpoint,
        out_path=args.out,
        config=cfg,
    )
    d = summary.to_dict()
    if args.json:
        print(canonical_json(d))
    else:
        for key in (
            "range",
            "primes_processed",
            "irregular_count",
            "index_histogram",
            "lambda1_fraction",
            "c_minus_one_hits",
            "inconclusive",
            "elapsed_seconds",
        ):
            print(f"{key:<20}{d[key]}")
    return EXIT_OK


def cmd_series(args) -> int:
    series = build_series(args.p, args.k, args.level, args.prec, args.trunc)
    for index, value, vp in series.coefficient_rows():
        print(f"{index} {value} {vp}")
    return EXIT_OK


def cmd_gs(args) -> int:
    g, s, r2 = lemma2_gs(args.p, args.n, args.alpha)
    print(f"g={g} s={s} r2={r2}")
    if not args.paper_verbatim:
        alt = (args.p**args.n + args.p ** (args.n - 1)) // 2
        print(
            f"note: r2 = phi(p^n)/2 = {r2}; the plus-sign variant "
            f"(p^n + p^(n-1))/2 = {alt} fails the rank cross-check "
            f"(p+1)/2 = r2 + 1 at n = 1",
            file=sys.stderr,
        )
    return EXIT_OK


def cmd_report(args) -> int:
    print(report(args.input, args.format), end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cyclocert",
        description=(
            "Per-prime certificates over cyclotomic towers: irregular pairs, "
            "Iwasawa series invariants, p-adic L-values, Vandiver witness tests."
        ),
    )
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="certify a single prime")
    c.add_argument("p", type=int)
    c.add_argument("--json", action="store_true", help="canonical JSON output")
    c.add_argument("--max-witnesses", type=int, default=8)
    c.add_argument("--nmax", type=int, default=3, help="rows in the (g, s) table")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("scan", help="certify a prime range with checkpointing")
    s.add_argument("--from", dest="start", type=int, required=True)
    s.add_argument("--to", dest="stop", type=int, required=True)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out", default="certificates.jsonl")
    s.add_argument("--checkpoint", default=None)
    s.add_argument("--max-witnesses", type=int, default=8)
    s.add_argument("--nmax", type=int, default=3)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_scan)

    se = sub.add_parser("series", help="dump Iwasawa series coefficients")
    se.add_argument("p", type=int)
    se.add_argument("k", type=int)
    se.add_argument("--level", type=int, default=2)
    se.add_argument("--prec", type=int, default=8)
    se.add_argument("--trunc", type=int, default=16)
    se.set_defaults(func=cmd_series)

    g = sub.add_parser("gs", help="generator/relation counts for a tower level")
    g.add_argument("p", type=int)
    g.add_argument("n", type=int)
    g.add_argument("--alpha", type=int, required=True)
    g.add_argument(
        "--paper-verbatim",
        action="store_true",
        help="suppress the corrected-r2 note",
    )
    g.set_defaults(func=cmd_gs)

    r = sub.add_parser("report", help="render a certificate stream")
    r.add_argument("--in", dest="input", required=True)
    r.add_argument("--format", choices=("csv", "markdown"), default="csv")
    r.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
