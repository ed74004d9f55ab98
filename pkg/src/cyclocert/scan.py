"""Parallel, checkpointed sweep of a prime range.

Output is a JSONL certificate stream, one canonical-JSON object per prime in
ascending order, each carrying a sha256 over its own canonical form (minus
the hash field).  A sidecar checkpoint file records the largest contiguous
completed prime; the stream plus sidecar survive kills at any point, and a
resumed run reproduces the uninterrupted output byte for byte.  Certificates
contain no timing data, so streams are directly hash-comparable across
worker counts; wall-clock time lives only in the summary.
"""

from __future__ import annotations

import hashlib
import json
import multiprocessing as mp
import os
import time
from dataclasses import dataclass, field

from .certificates import (
    SCHEMA_VERSION,
    CertConfig,
    certificate_to_dict,
    certify,
    canonical_json,
)
from .primes import primes_in_range

__all__ = ["ScanError", "CorruptedCheckpoint", "ScanSummary", "scan", "report"]


class ScanError(RuntimeError):
    pass


class CorruptedCheckpoint(ScanError):
    """The existing stream fails integrity checks; a clean re-run is required."""


@dataclass
class ScanSummary:
    start: int
    stop: int
    primes_processed: int = 0
    irregular_count: int = 0
    index_histogram: dict[int, int] = field(default_factory=dict)
    lambda1_count: int = 0
    c_minus_one_hits: list[tuple[int, int]] = field(default_factory=list)
    inconclusive: list[int] = field(default_factory=list)
    elapsed_seconds: float = 0.0

    @property
    def lambda1_fraction(self) -> float | None:
        if self.irregular_count == 0:
            return None
        return self.lambda1_count / self.irregular_count

    def to_dict(self) -> dict:
        return {
            "range": [self.start, self.stop],
            "primes_processed": self.primes_processed,
            "irregular_count": self.irregular_count,
            "index_histogram": {str(k): v for k, v in sorted(self.index_histogram.items())},
            "lambda1_fraction": self.lambda1_fraction,
            "c_minus_one_hits": [list(t) for t in self.c_minus_one_hits],
            "inconclusive": self.inconclusive,
            "elapsed_seconds": self.elapsed_seconds,
        }

    def absorb(self, cert_dict: dict) -> None:
        self.primes_processed += 1
        if cert_dict["is_regular"]:
            return
        i = cert_dict["index_of_irregularity"]
        self.irregular_count += 1
        self.index_histogram[i] = self.index_histogram.get(i, 0) + 1
        if cert_dict["lambda_p"] == 1:
            self.lambda1_count += 1
        for pair in cert_dict["pairs"]:
            inv = pair["invariants"]
            if inv["a"] == 1 and inv["c_mod_p"] == cert_dict["p"] - 1:
                self.c_minus_one_hits.append((cert_dict["p"], pair["k"]))
            if pair["vandiver"]["status"] == "INCONCLUSIVE":
                self.inconclusive.append(cert_dict["p"])


def _hash_line(cert_dict: dict) -> str:
    return hashlib.sha256(canonical_json(cert_dict).encode()).hexdigest()


def _render_line(cert_dict: dict) -> str:
    with_hash = dict(cert_dict)
    with_hash["sha256"] = _hash_line(cert_dict)
    return canonical_json(with_hash)


def _parse_line(line: str) -> dict:
    obj = json.loads(line)
    got = obj.pop("sha256", None)
    if got != _hash_line(obj):
        raise CorruptedCheckpoint("certificate line failed its integrity hash")
    return obj


_worker_config: CertConfig | None = None


def _init_worker(config: CertConfig) -> None:
    global _worker_config
    _worker_config = config


def _compute_line(p: int) -> tuple[int, str]:
    cert = certify(p, _worker_config)
    return p, _render_line(certificate_to_dict(cert))


def _load_resume_state(out_path: str, expected: list[int]) -> list[str]:
    """Validate an existing stream against the expected prime sequence.

    Returns the good lines.  A truncated final line (kill artifact) is
    dropped; anything else inconsistent raises CorruptedCheckpoint.
    """
    if not os.path.exists(out_path):
        return []
    with open(out_path, "r", encoding="utf-8") as fh:
        raw = fh.read()
    lines = raw.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    good: list[str] = []
    for idx, line in enumerate(lines):
        try:
            obj = _parse_line(line)
        except (json.JSONDecodeError, CorruptedCheckpoint):
            if idx == len(lines) - 1 and not raw.endswith("\n"):
                break  # partial trailing write from a kill; recompute it
            raise CorruptedCheckpoint(
                f"unparseable certificate at line {idx + 1}; delete the output "
                "and checkpoint files and re-run"
            ) from None
        if idx >= len(expected) or obj["p"] != expected[idx]:
            raise CorruptedCheckpoint(
                f"certificate stream does not match the requested range at line "
                f"{idx + 1}; delete the output and checkpoint files and re-run"
            )
        if obj["schema_version"] != SCHEMA_VERSION:
            raise CorruptedCheckpoint(
                f"schema_version {obj['schema_version']} != {SCHEMA_VERSION}"
            )
        good.append(line)
    return good


def _write_checkpoint(path: str, frontier: int) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(canonical_json({"frontier": frontier, "schema_version": SCHEMA_VERSION}))
    os.replace(tmp, path)


def scan(
    start: int,
    stop: int,
    jobs: int = 1,
    checkpoint_path: str | None = None,
    out_path: str = "certificates.jsonl",
    config: CertConfig | None = None,
) -> ScanSummary:
    """Certify every prime in [start, stop) and stream the results.

    Work is distributed per prime; a single writer appends results in
    ascending order, so the stream is deterministic for any job count.
    """
    if not (5 <= start < stop):
        raise ValueError(f"need 5 <= start < stop, got [{start}, {stop})")
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    config = config or CertConfig()
    checkpoint_path = checkpoint_path or out_path + ".ckpt"
    t0 = time.monotonic()

    primes = [p for p in primes_in_range(start, stop)]
    done_lines = _load_resume_state(out_path, primes)
    summary = ScanSummary(start=start, stop=stop)
    for line in done_lines:
        summary.absorb(json.loads(line))
    todo = primes[len(done_lines) :]

    # rewrite the validated prefix so a truncated trailing line disappears
    with open(out_path, "w", encoding="utf-8") as fh:
        for line in done_lines:
            fh.write(line + "\n")
    if done_lines:
        _write_checkpoint(checkpoint_path, primes[len(done_lines) - 1])

    if todo:
        with open(out_path, "a", encoding="utf-8") as fh:
            if jobs == 1:
                _init_worker(config)
                for p in todo:
                    _, line = _compute_line(p)
                    fh.write(line + "\n")
                    fh.flush()
                    summary.absorb(json.loads(line))
                    _write_checkpoint(checkpoint_path, p)
            else:
                with mp.Pool(jobs, initializer=_init_worker, initargs=(config,)) as pool:
                    for p, line in pool.imap(_compute_line, todo, chunksize=4):
                        fh.write(line + "\n")
                        fh.flush()
                        summary.absorb(json.loads(line))
                        _write_checkpoint(checkpoint_path, p)
    summary.elapsed_seconds = time.monotonic() - t0
    return summary


# ---------------------------------------------------------------------------
# Report rendering
# ---------------------------------------------------------------------------

_CSV_COLUMNS = [
    "p", "regular", "i", "lambda_p", "a", "m", "c_mod_p", "vandiver", "applies", "failed",
]


def _cert_row(obj: dict) -> list[str]:
    pairs = obj["pairs"]
    joined = lambda key: ";".join(str(pr["invariants"][key]) for pr in pairs)  # noqa: E731
    if obj["is_regular"]:
        vstat = ""
    elif all(pr["vandiver"]["status"] == "VERIFIED" for pr in pairs):
        vstat = "VERIFIED"
    else:
        vstat = "INCONCLUSIVE"
    return [
        str(obj["p"]),
        "true" if obj["is_regular"] else "false",
        str(obj["index_of_irregularity"]),
        str(obj["lambda_p"]),
        joined("a"),
        joined("m"),
        joined("c_mod_p"),
        vstat,
        "true" if obj["theorem1"]["applies"] else "false",
        ";".join(obj["theorem1"]["failed_conditions"]),
    ]


def _csv_field(s: str) -> str:
    if any(ch in s for ch in ',"\r\n'):
        return '"' + s.replace('"', '""') + '"'
    return s


def report(in_path: str, fmt: str = "csv") -> str:
    """Render a certificate stream as CSV (RFC 4180) or a markdown document."""
    if fmt not in ("csv", "markdown"):
        raise ValueError(f"format must be csv or markdown, got {fmt}")
    objs = []
    with open(in_path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = _parse_line(line)
            if obj["schema_version"] != SCHEMA_VERSION:
                raise ScanError(
                    f"schema mismatch: stream has {obj['schema_version']}, "
                    f"this build writes {SCHEMA_VERSION}"
                )
            objs.append(obj)

    summary = ScanSummary(start=objs[0]["p"] if objs else 0, stop=objs[-1]["p"] + 1 if objs else 0)
    for obj in objs:
        summary.absorb(obj)

    if fmt == "csv":
        lines = [",".join(_CSV_COLUMNS)]
        for obj in objs:
            lines.append(",".join(_csv_field(v) for v in _cert_row(obj)))
        return "\r\n".join(lines) + "\r\n"

    lines = ["| " + " | ".join(_CSV_COLUMNS) + " |"]
    lines.append("|" + "---|" * len(_CSV_COLUMNS))
    for obj in objs:
        if obj["is_regular"]:
            continue
        lines.append("| " + " | ".join(_cert_row(obj)) + " |")
    s = summary
    lines += [
        "",
        f"- primes processed: {s.primes_processed}",
        f"- irregular: {s.irregular_count}",
        f"- index histogram: {dict(sorted(s.index_histogram.items()))}",
        f"- lambda_p = 1 fraction: "
        + (f"{s.lambda1_fraction:.4f}" if s.lambda1_fraction is not None else "n/a"),
        f"- (a = 1, c ≡ -1) hits: {s.c_minus_one_hits}",
        f"- inconclusive: {s.inconclusive}",
    ]
    return "\n".join(lines) + "\n"
