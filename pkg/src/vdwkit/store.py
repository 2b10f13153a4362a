"""On-disk value cache and certificate files.

Both are line-delimited JSON with a fixed field order.  Every write goes
to a temporary file in the same directory followed by ``os.replace``, so
readers see either the old or the new file, never a torn one.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, Iterable, List, Optional

from .apcore import CertificateError, Coloring, IntegerSet, verify_certificate
from .problems import COLORING_FAMILIES, Certificate, Claim, Family, Interval, ProblemSpec
from .reference import canonical, reference_interval

STORE_ENV = "VDWKIT_STORE"


def default_store_path() -> Path:
    env = os.environ.get(STORE_ENV)
    return Path(env) if env else Path.home() / ".vdwkit"


def atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------- certificates

def now_stamp() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _witness_colors(spec: ProblemSpec, n: int) -> Optional[int]:
    if spec.family is Family.CHI:
        return n
    return spec.num_colors


def cert_to_dict(cert: Certificate) -> dict:
    d = {"spec": cert.spec.key(), "n": cert.n, "claim": cert.claim.value}
    w = cert.witness
    if w is not None:
        d["witness"] = w.to_string()
    if cert.attestation is not None:
        d["attestation"] = dict(cert.attestation)
    if cert.created_at is not None:
        d["created_at"] = cert.created_at
    return d


def cert_from_dict(d: dict) -> Certificate:
    try:
        spec = ProblemSpec.from_key(d["spec"])
        n = int(d["n"])
        claim = Claim(d["claim"])
    except (KeyError, ValueError, TypeError) as e:
        raise CertificateError(f"malformed certificate: {e}") from None
    witness = None
    if "witness" in d:
        if claim is not Claim.GOOD_WITNESS:
            raise CertificateError("only GOOD_WITNESS certificates carry a witness")
        text = d["witness"]
        if not isinstance(text, str):
            raise CertificateError("witness must be a string")
        try:
            if spec.family in COLORING_FAMILIES or spec.family is Family.CHI:
                witness = Coloring.from_string(text, _witness_colors(spec, n))
            else:
                witness = IntegerSet.from_string(text)
        except ValueError as e:
            raise CertificateError(f"malformed witness: {e}") from None
    elif claim is Claim.GOOD_WITNESS and n > 0:
        raise CertificateError("GOOD_WITNESS certificate without a witness")
    if claim is Claim.EXTREMAL_ATTESTED and not d.get("attestation"):
        raise CertificateError("EXTREMAL_ATTESTED certificate without an attestation")
    return Certificate(spec, n, claim, witness, d.get("attestation"), d.get("created_at"))


def cert_line(cert: Certificate) -> str:
    return json.dumps(cert_to_dict(cert), ensure_ascii=False)


def read_certificates(path: Path) -> List[Certificate]:
    """Certificates from a JSONL file; a single JSON object or array is also accepted."""
    with open(path, encoding="utf-8") as f:
        text = f.read()
    try:
        whole = json.loads(text)
    except json.JSONDecodeError:
        whole = None
    if isinstance(whole, dict):
        return [cert_from_dict(whole)]
    if isinstance(whole, list):
        if not all(isinstance(d, dict) for d in whole):
            raise CertificateError(f"{path}: expected an array of objects")
        return [cert_from_dict(d) for d in whole]
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            d = json.loads(line)
        except json.JSONDecodeError as e:
            raise CertificateError(f"{path}:{lineno}: not JSON ({e})") from None
        if not isinstance(d, dict):
            raise CertificateError(f"{path}:{lineno}: expected an object")
        out.append(cert_from_dict(d))
    return out


def write_certificates(path: Path, certs: Iterable[Certificate]):
    atomic_write(Path(path), "".join(cert_line(c) + "\n" for c in certs))


# ---------------------------------------------------------------- value cache

class CacheConflict(RuntimeError):
    pass


@dataclass(frozen=True)
class CacheRecord:
    spec: ProblemSpec
    value: int
    exact: bool = True  # False: only value <= true value is known
    certificate: Optional[str] = None  # path relative to the store root
    elapsed_seconds: Optional[float] = None
    solver_version: Optional[str] = None

    def __post_init__(self):
        if self.value < 1:
            raise ValueError("cached values are positive")

    @property
    def interval(self) -> Interval:
        return Interval.exact(self.value) if self.exact else Interval(self.value)

    def to_dict(self) -> dict:
        d = {"spec": self.spec.key(), "value": self.value, "exact": self.exact}
        for name in ("certificate", "elapsed_seconds", "solver_version"):
            v = getattr(self, name)
            if v is not None:
                d[name] = v
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CacheRecord":
        return cls(ProblemSpec.from_key(d["spec"]), int(d["value"]), bool(d.get("exact", True)),
                   d.get("certificate"), d.get("elapsed_seconds"), d.get("solver_version"))


def _file_stem(spec: ProblemSpec) -> str:
    return re.sub(r"[^A-Za-z0-9_]+", "_", spec.key()).strip("_")


class Store:
    """A directory holding ``values.jsonl`` and ``certs/*.jsonl``."""

    def __init__(self, root: Optional[Path] = None):
        self.root = Path(root) if root is not None else default_store_path()

    @property
    def values_path(self) -> Path:
        return self.root / "values.jsonl"

    def cert_path(self, spec: ProblemSpec) -> Path:
        return self.root / "certs" / f"{_file_stem(spec)}.jsonl"

    def _load(self) -> Dict[str, CacheRecord]:
        if not self.values_path.exists():
            return {}
        out = {}
        with open(self.values_path, encoding="utf-8") as f:
            for line in f:
                if line.strip():
                    rec = CacheRecord.from_dict(json.loads(line))
                    out[rec.spec.key()] = rec
        return out

    def records(self) -> List[CacheRecord]:
        return sorted(self._load().values(), key=lambda r: r.spec.key())

    def get(self, spec: ProblemSpec) -> Optional[CacheRecord]:
        recs = self._load()
        rec = recs.get(spec.key())
        if rec is not None:
            return rec
        target = canonical(spec)
        for r in recs.values():
            if canonical(r.spec) == target:
                return r
        return None

    def put(self, record: CacheRecord, certificates: Optional[List[Certificate]] = None) -> CacheRecord:
        """Insert or tighten a record; contradicting a stored value raises CacheConflict."""
        recs = self._load()
        key = record.spec.key()
        old = recs.get(key)
        if old is None:
            for r in recs.values():
                if canonical(r.spec) == canonical(record.spec):
                    old = r
                    key = r.spec.key()
                    record = CacheRecord(r.spec, record.value, record.exact, record.certificate,
                                         record.elapsed_seconds, record.solver_version)
                    break
        if old is not None:
            merged = _merge(old, record)
            if merged is old:
                return old
            record = merged
        if certificates is not None:
            path = self.cert_path(record.spec)
            write_certificates(path, certificates)
            record = CacheRecord(record.spec, record.value, record.exact,
                                 str(path.relative_to(self.root)), record.elapsed_seconds,
                                 record.solver_version)
        recs[key] = record
        text = "".join(json.dumps(recs[k].to_dict()) + "\n" for k in sorted(recs))
        atomic_write(self.values_path, text)
        return record

    def certificates(self, record: CacheRecord) -> List[Certificate]:
        if record.certificate is None:
            return []
        return read_certificates(self.root / record.certificate)

    def verified(self, record: CacheRecord) -> bool:
        """The record's witness certificate re-verifies and sits at value - 1."""
        try:
            certs = self.certificates(record)
        except (OSError, CertificateError):
            return False
        good = [c for c in certs if c.claim is Claim.GOOD_WITNESS]
        if record.spec.family in (Family.R, Family.CHI):
            want = record.value
        else:
            want = record.value - 1
            if record.exact and want == 0 and not good:
                return True
        for c in good:
            try:
                if verify_certificate(c).clean and (c.n == want or not record.exact):
                    return True
            except CertificateError:
                return False
        return False

    def lookup(self, spec: ProblemSpec) -> Optional[Interval]:
        rec = self.get(spec)
        if rec is None or not self.verified(rec):
            return None
        return rec.interval

    def merged_lookup(self, spec: ProblemSpec) -> Optional[Interval]:
        """The tighter of the verified local value and the shipped reference value."""
        got = self.lookup(spec)
        ref = reference_interval(spec)
        if got is None or (ref is not None and not got.is_exact and (ref.is_exact or ref.lo > got.lo)):
            return ref if ref is not None else got
        return got


def _merge(old: CacheRecord, new: CacheRecord) -> CacheRecord:
    if old.exact and new.exact:
        if old.value != new.value:
            raise CacheConflict(f"{old.spec}: stored value {old.value} conflicts with new value {new.value}")
        return old
    if old.exact:
        if new.value > old.value:
            raise CacheConflict(f"{old.spec}: lower bound {new.value} exceeds stored value {old.value}")
        return old
    if new.exact:
        if new.value < old.value:
            raise CacheConflict(f"{old.spec}: value {new.value} is below stored lower bound {old.value}")
        return new
    return new if new.value > old.value else old
