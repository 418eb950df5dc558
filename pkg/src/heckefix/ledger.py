"""Line-delimited run records: manifest, certificates, progress, summary.

A run writes one file.  The first line is the manifest; certificate and
progress lines follow as the sweep advances; a summary line closes the run.
A resumed run appends to the same file without a second manifest, so the
"exactly one manifest per file" rule doubles as an append-integrity check.

Nothing numeric is stored in decimal.  Field elements travel as
little-endian coefficient arrays (plain integers, or "p/q" strings when a
denominator appears), multiprecision values as sign / hex significand /
exponent with the working precision recorded alongside, machine floats as
C99 hex literals.  Parsing rebuilds each value bit for bit at any ambient
precision, so re-verification consumes exactly what the search saw.

Progress records carry cumulative counters (a resumed leg continues the
previous totals rather than restarting at zero).  The cursor of the last
progress record per partition is the resume point; every matrix at or
below it has been fully judged and its certificates written.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction

from mpmath import mp
from mpmath.libmp import from_man_exp

from .field import FieldElement, IntegralElement
from .hecke import CandidateCertificate

SCHEMA = "heckefix-ledger/1"

KINDS = ("manifest", "certificate", "progress", "summary")


# ---------------------------------------------------------------------------
# Scalar encodings

def mpf_to_doc(x):
    if not isinstance(x, mp.mpf):
        x = mp.mpf(x)     # re-wrapping an mpf would round it to the
    raw = x._mpf_         # ambient precision, so only coerce strangers
    sign, man, exp, bc = raw
    if bc < 0:
        raise ValueError(f"non-finite value cannot enter the ledger: {x!r}")
    return {"s": int(sign), "m": hex(int(man)), "e": int(exp),
            "p": int(bc)}


def mpf_from_doc(doc):
    man = int(doc["m"], 16)
    if doc["s"]:
        man = -man
    return mp.make_mpf(from_man_exp(man, doc["e"]))


def mpc_to_doc(z):
    if not isinstance(z, mp.mpc):
        z = mp.mpc(z)
    return {"re": mpf_to_doc(z.real), "im": mpf_to_doc(z.imag)}


def mpc_from_doc(doc):
    return mp.make_mpc((mpf_from_doc(doc["re"])._mpf_,
                        mpf_from_doc(doc["im"])._mpf_))


def float_to_doc(x):
    return float(x).hex()


def float_from_doc(doc):
    return float.fromhex(doc)


def element_to_doc(x: FieldElement):
    out = []
    for c in x.coeffs:
        c = Fraction(c)
        out.append(int(c) if c.denominator == 1
                   else f"{c.numerator}/{c.denominator}")
    return out


def element_from_doc(doc):
    coeffs = [Fraction(c) if isinstance(c, int) else Fraction(str(c))
              for c in doc]
    if all(c.denominator == 1 for c in coeffs):
        return IntegralElement(coeffs)
    return FieldElement(coeffs)


# ---------------------------------------------------------------------------
# Certificates

def certificate_to_doc(cert: CandidateCertificate):
    if cert.witness is None:
        witness = None
    else:
        a_w, b_w, d = cert.witness
        witness = {"a": element_to_doc(a_w), "b": element_to_doc(b_w),
                   "d": int(d)}
    return {
        "ell": cert.ell,
        "d": cert.d,
        "residue_root": cert.residue_root,
        "coset": cert.coset,
        "entries": [element_to_doc(v) for v in cert.entries],
        "det": element_to_doc(cert.det),
        "fixed": [mpc_to_doc(w) for w in cert.fixed],
        "z0": mpc_to_doc(cert.z0),
        "z0_reduced": mpc_to_doc(cert.z0_reduced),
        "word_length": cert.word_length,
        "trace": element_to_doc(cert.trace),
        "witness": witness,
        "sign_vector": cert.sign_vector,
        "weil_ok": cert.weil_ok,
        "cm_shape": cert.cm_shape,
        "residuals": {str(k): float_to_doc(v)
                      for k, v in cert.residuals.items()},
        "tested_labels": list(cert.tested_labels),
        "precision": cert.precision,
        "tolerance": float_to_doc(cert.tolerance),
        "config_id": cert.config_id,
        "dedup_key": cert.dedup_key,
        "status": cert.status,
    }


def certificate_from_doc(doc):
    witness = doc["witness"]
    if witness is not None:
        witness = (element_from_doc(witness["a"]),
                   element_from_doc(witness["b"]), witness["d"])
    return CandidateCertificate(
        ell=doc["ell"],
        d=doc["d"],
        residue_root=doc["residue_root"],
        coset=doc["coset"],
        entries=tuple(element_from_doc(v) for v in doc["entries"]),
        det=element_from_doc(doc["det"]),
        fixed=tuple(mpc_from_doc(w) for w in doc["fixed"]),
        z0=mpc_from_doc(doc["z0"]),
        z0_reduced=mpc_from_doc(doc["z0_reduced"]),
        word_length=doc["word_length"],
        trace=element_from_doc(doc["trace"]),
        witness=witness,
        sign_vector=doc["sign_vector"],
        weil_ok=doc["weil_ok"],
        cm_shape=doc["cm_shape"],
        residuals={int(k): float_from_doc(v)
                   for k, v in doc["residuals"].items()},
        tested_labels=tuple(doc["tested_labels"]),
        precision=doc["precision"],
        tolerance=float_from_doc(doc["tolerance"]),
        config_id=doc["config_id"],
        dedup_key=doc["dedup_key"],
        status=doc["status"],
    )


# ---------------------------------------------------------------------------
# Manifest

def _frac_str(q: Fraction):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 \
        else f"{q.numerator}/{q.denominator}"


def search_config_to_doc(cfg):
    return {
        "ell": cfg.ell,
        "d": cfg.d,
        "height": _frac_str(cfg.height),
        "precision": cfg.precision,
        "tolerance": None if cfg.tolerance is None
        else float_to_doc(cfg.tolerance),
        "seed": cfg.seed,
        "workers": cfg.workers,
        "strict": cfg.strict,
        "waive_validation": cfg.waive_validation,
    }


@dataclass
class RunManifest:
    """First line of every ledger file: what ran, and with what inputs."""

    version: str
    subcommand: str
    config: dict            # resolved search parameters, see search_config_to_doc
    config_id: str          # hash of the embedding configuration entries
    seed: int
    created: str = ""
    schema: str = SCHEMA

    def __post_init__(self):
        if not self.created:
            self.created = datetime.now(timezone.utc).isoformat()

    def to_doc(self):
        return {"schema": self.schema, "version": self.version,
                "subcommand": self.subcommand, "created": self.created,
                "config": self.config, "config_id": self.config_id,
                "seed": self.seed}

    @classmethod
    def from_doc(cls, doc):
        if doc.get("schema") != SCHEMA:
            raise ValueError(f"unsupported ledger schema {doc.get('schema')!r}")
        return cls(version=doc["version"], subcommand=doc["subcommand"],
                   config=doc["config"], config_id=doc["config_id"],
                   seed=doc["seed"], created=doc["created"],
                   schema=doc["schema"])


# ---------------------------------------------------------------------------
# Writing

class LedgerWriter:
    """Append-only writer; the single mutation point of a run.

    Records are flushed line by line, so an interrupted run leaves a
    readable prefix and the resume cursor never points past durable data.
    """

    def __init__(self, path, manifest: RunManifest | None = None):
        self.path = path
        fresh = not os.path.exists(path) or os.path.getsize(path) == 0
        if fresh:
            if manifest is None:
                raise ValueError("a fresh ledger needs a manifest")
        else:
            existing = read_manifest(path)
            if manifest is not None \
                    and manifest.config_id != existing.config_id:
                raise ValueError(
                    "resume with a different embedding configuration: "
                    f"{manifest.config_id} vs {existing.config_id}")
        self._fh = open(path, "a", encoding="utf-8")
        if fresh:
            self._append("manifest", manifest.to_doc())

    def _append(self, kind, body):
        rec = {"kind": kind}
        rec.update(body)
        self._fh.write(json.dumps(rec, separators=(",", ":"),
                                  sort_keys=True) + "\n")
        self._fh.flush()

    def certificate(self, cert, seq, partition=0):
        self._append("certificate", {
            "seq": seq, "partition": partition,
            "body": certificate_to_doc(cert)})

    def progress(self, partition, cursor, counters):
        self._append("progress", {
            "partition": partition, "cursor": cursor,
            "counters": dict(counters)})

    def summary(self, cursors, counters, certificates, caveat=None):
        self._append("summary", {
            "ended": datetime.now(timezone.utc).isoformat(),
            "cursors": {str(k): v for k, v in cursors.items()},
            "counters": dict(counters),
            "certificates": certificates,
            "caveat": caveat})

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


# ---------------------------------------------------------------------------
# Reading

def read_records(path):
    out = []
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            kind = rec.get("kind")
            if kind not in KINDS:
                raise ValueError(f"{path}:{n}: unknown record kind {kind!r}")
            out.append(rec)
    if not out:
        raise ValueError(f"{path}: empty ledger")
    if out[0]["kind"] != "manifest" \
            or any(r["kind"] == "manifest" for r in out[1:]):
        raise ValueError(f"{path}: a ledger has exactly one manifest line, "
                         "first")
    return out


def read_manifest(path):
    with open(path, encoding="utf-8") as fh:
        first = fh.readline().strip()
    if not first:
        raise ValueError(f"{path}: empty ledger")
    doc = json.loads(first)
    if doc.get("kind") != "manifest":
        raise ValueError(f"{path}: first line is not a manifest")
    return RunManifest.from_doc(doc)


def load_certificates(path):
    """(seq, partition, certificate) for every certificate line, in order."""
    out = []
    for rec in read_records(path):
        if rec["kind"] == "certificate":
            out.append((rec["seq"], rec["partition"],
                        certificate_from_doc(rec["body"])))
    return out


def resume_state(path, workers):
    """Cursor and cumulative counters per partition, from the last progress.

    Partitions never touched by a progress record resume from the start;
    the worker count must match the previous run, since the partition of a
    sequence number depends on it.
    """
    manifest = read_manifest(path)
    recorded = manifest.config.get("workers")
    if recorded is not None and recorded != workers:
        raise ValueError(f"ledger was written with {recorded} workers, "
                         f"cannot resume with {workers}")
    cursors = {w: -1 for w in range(workers)}
    counters = {w: None for w in range(workers)}
    for rec in read_records(path):
        if rec["kind"] == "progress":
            w = rec["partition"]
            if w not in cursors:
                raise ValueError(f"progress for partition {w} outside "
                                 f"0..{workers - 1}")
            cursors[w] = max(cursors[w], rec["cursor"])
            counters[w] = rec["counters"]
    return cursors, counters


def merge_counters(base, live):
    """base + live, keywise; base may be None (a fresh partition)."""
    if base is None:
        return dict(live)
    out = dict(base)
    for k, v in live.items():
        out[k] = out.get(k, 0) + v
    return out
