"""Arithmetic-progression primitives and witness verification.

Everything here is deliberately plain Python: this is the trusted kernel
that re-checks what the compiled search engines produce, so it shares no
code with them.

Conventions: integers are 1-based, a Coloring stores the color of ``i`` at
index ``i - 1``, colors are ``0 .. s-1``.  Violation searches scan
progressions by increasing difference, then increasing first term, then
increasing color, so results are deterministic.
"""

from __future__ import annotations

import enum
import string
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

from .problems import Certificate, Claim, Family, ProblemSpec

_DIGITS = string.digits + string.ascii_lowercase


class CertificateError(ValueError):
    """The certificate is malformed (as opposed to describing a bad witness)."""


@dataclass(frozen=True)
class Coloring:
    s: int
    colors: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(int(c) for c in self.colors))
        if self.s < 1:
            raise ValueError("a coloring needs at least one color")
        for c in self.colors:
            if not 0 <= c < self.s:
                raise ValueError(f"color {c} outside [0, {self.s - 1}]")

    @property
    def n(self) -> int:
        return len(self.colors)

    def color(self, i: int) -> int:
        """Color of the integer i (1-based)."""
        return self.colors[i - 1]

    def reversed(self) -> "Coloring":
        return Coloring(self.s, self.colors[::-1])

    def prefix(self, m: int) -> "Coloring":
        return Coloring(self.s, self.colors[:m])

    def to_string(self) -> str:
        if self.s > len(_DIGITS):
            raise ValueError("too many colors for the digit encoding")
        return "".join(_DIGITS[c] for c in self.colors)

    @classmethod
    def from_string(cls, text: str, s: int) -> "Coloring":
        return cls(s, tuple(_DIGITS.index(ch) for ch in text.strip().lower()))


@dataclass(frozen=True)
class IntegerSet:
    elements: Tuple[int, ...]

    def __post_init__(self):
        els = tuple(int(x) for x in self.elements)
        object.__setattr__(self, "elements", els)
        if any(b <= a for a, b in zip(els, els[1:])):
            raise ValueError("elements must be strictly increasing")

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def to_string(self) -> str:
        return ",".join(map(str, self.elements))

    @classmethod
    def from_string(cls, text: str) -> "IntegerSet":
        text = text.strip()
        return cls(tuple(int(x) for x in text.split(",")) if text else ())


@dataclass(frozen=True)
class Progression:
    first: int
    diff: int
    length: int

    def terms(self) -> Tuple[int, ...]:
        return tuple(self.first + j * self.diff for j in range(self.length))

    @property
    def last(self) -> int:
        return self.first + (self.length - 1) * self.diff


class TripleKind(str, enum.Enum):
    AP = "AP"
    AP_PLUS = "AP_PLUS"
    AP_MINUS = "AP_MINUS"
    NONE = "NONE"


@dataclass(frozen=True)
class TripleClass:
    kind: TripleKind
    x: Optional[int] = None
    d: Optional[int] = None


class ViolationKind(str, enum.Enum):
    MONO_AP = "MONO_AP"
    COLOR_AP = "COLOR_AP"
    RUN = "RUN"
    SET_AP = "SET_AP"
    GAP = "GAP"  # G witness with a gap larger than s
    BLOCK = "BLOCK"  # M witness with an element outside its block
    TRIPLE = "TRIPLE"  # residue-coloring triple


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    progression: Optional[Progression] = None
    color: Optional[int] = None
    color_diff: Optional[int] = None
    run_start: Optional[int] = None
    run_length: Optional[int] = None
    detail: Optional[str] = None

    def describe(self) -> str:
        parts = [self.kind.value]
        if self.progression is not None:
            p = self.progression
            parts.append(f"a={p.first} d={p.diff} len={p.length} terms={list(p.terms())}")
        if self.color is not None:
            parts.append(f"color={self.color}")
        if self.color_diff is not None:
            parts.append(f"delta={self.color_diff:+d}")
        if self.run_start is not None:
            parts.append(f"run {self.run_start}..{self.run_start + self.run_length - 1}")
        if self.detail:
            parts.append(self.detail)
        return " ".join(parts)


@dataclass(frozen=True)
class Verdict:
    clean: bool
    violation: Optional[Violation] = None


def enumerate_aps(n: int, k: int) -> Iterator[Progression]:
    """All k-term progressions inside [1, n], ordered by (first, diff)."""
    if k < 2:
        raise ValueError("k must be at least 2")
    for a in range(1, n + 1):
        d = 1
        while a + (k - 1) * d <= n:
            yield Progression(a, d, k)
            d += 1


def count_aps(n: int, k: int) -> int:
    return sum(max(0, n - (k - 1) * d) for d in range(1, n + 1))


def _first_single(c: Coloring, color: int) -> Optional[int]:
    for i, x in enumerate(c.colors, start=1):
        if x == color:
            return i
    return None


def _scan(c: Coloring, rules: Sequence[Tuple[int, int]]) -> Optional[Violation]:
    """First progression of length rules[i][0] in color i with diff <= rules[i][1].

    A max difference of 0 means unbounded; a max difference of 1 is reported
    as a RUN.  One-term rules are hit by any occurrence of their color.
    """
    for color, (length, _) in enumerate(rules):
        if length <= 1:
            pos = _first_single(c, color)
            if pos is not None:
                return Violation(ViolationKind.MONO_AP, Progression(pos, 1, 1), color=color)
    n, cols = c.n, c.colors
    for d in range(1, n):
        for a in range(1, n + 1):
            for color, (length, maxd) in enumerate(rules):
                if length <= 1 or (maxd and d > maxd):
                    continue
                last = a + (length - 1) * d
                if last > n:
                    continue
                if all(cols[a - 1 + j * d] == color for j in range(length)):
                    if maxd == 1:
                        return Violation(ViolationKind.RUN, color=color, run_start=a, run_length=length)
                    return Violation(ViolationKind.MONO_AP, Progression(a, d, length), color=color)
    return None


def find_mono_ap(c: Coloring, k: int) -> Optional[Violation]:
    return _scan(c, [(k, 0)] * c.s)


def find_mixed_violation(c: Coloring, lengths: Sequence[int]) -> Optional[Violation]:
    """A lengths[i]-term progression entirely of color i, if any."""
    if len(lengths) != c.s:
        raise ValueError(f"{len(lengths)} lengths given for a {c.s}-coloring")
    if any(k < 1 for k in lengths):
        raise ValueError("lengths must be positive")
    return _scan(c, [(k, 0) for k in lengths])


def find_w1_violation(c: Coloring, k: int, s_run: int) -> Optional[Violation]:
    """A k-AP of color 0, or s_run consecutive integers of color 1."""
    if c.s != 2:
        raise ValueError("w1 colorings use exactly two colors")
    return _scan(c, [(k, 0), (s_run, 1)])


def find_color_ap(c: Coloring, k: int) -> Optional[Violation]:
    """A k-AP whose colors form an arithmetic sequence.

    A constant color sequence comes back as MONO_AP, any other as COLOR_AP
    carrying the common difference of the colors.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    n, cols = c.n, c.colors
    for d in range(1, n):
        for a in range(1, n - (k - 1) * d + 1):
            seq = [cols[a - 1 + j * d] for j in range(k)]
            delta = seq[1] - seq[0]
            if all(seq[j + 1] - seq[j] == delta for j in range(k - 1)):
                prog = Progression(a, d, k)
                if delta == 0:
                    return Violation(ViolationKind.MONO_AP, prog, color=seq[0])
                return Violation(ViolationKind.COLOR_AP, prog, color_diff=delta)
    return None


def find_residue_triple(c: Coloring) -> Optional[Violation]:
    """A triple a < b < c forbidden in the residue-coloring form of M(3, s).

    Forbidden: an AP whose colors form an arithmetic sequence; an ap+
    (x, x+d, x+2d+1) whose colors, with color(a) < color(b), are an AP mod s
    but not an AP; an ap- (x, x+d, x+2d-1, d >= 2) likewise with
    color(a) > color(b).
    """
    s, n, cols = c.s, c.n, c.colors
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            d = b - a
            ca, cb = cols[a - 1], cols[b - 1]
            step = cb - ca
            for z, kind in ((b + d, TripleKind.AP), (b + d + 1, TripleKind.AP_PLUS), (b + d - 1, TripleKind.AP_MINUS)):
                if z > n or z <= b:
                    continue
                if kind is TripleKind.AP_MINUS and d < 2:
                    continue
                cz = cols[z - 1]
                is_ap = cz - cb == step
                mod_ap = (cz - cb - step) % s == 0
                if kind is TripleKind.AP:
                    bad = is_ap
                elif kind is TripleKind.AP_PLUS:
                    bad = ca < cb and mod_ap and not is_ap
                else:
                    bad = ca > cb and mod_ap and not is_ap
                if bad:
                    return Violation(
                        ViolationKind.TRIPLE,
                        Progression(a, d, 3) if kind is TripleKind.AP else None,
                        detail=f"{kind.value} ({a},{b},{z}) colors ({ca},{cb},{cz})",
                    )
    return None


def set_has_ap(x: IntegerSet, k: int) -> Optional[Progression]:
    """A k-AP contained in x, if any, scanning by (diff, first)."""
    els = x.elements
    if not els:
        return None
    if k <= 1:
        return Progression(els[0], 1, 1)
    members = set(els)
    span = els[-1] - els[0]
    for d in range(1, span // (k - 1) + 1):
        for a in els:
            if a + (k - 1) * d > els[-1]:
                break
            if all(a + j * d in members for j in range(1, k)):
                return Progression(a, d, k)
    return None


def longest_run(c: Coloring, color: int) -> int:
    if not 0 <= color < c.s:
        raise ValueError(f"color {color} outside [0, {c.s - 1}]")
    best = cur = 0
    for x in c.colors:
        cur = cur + 1 if x == color else 0
        best = max(best, cur)
    return best


def classify_triple(x: int, y: int, z: int) -> TripleClass:
    if not 0 < x < y < z:
        raise ValueError(f"need positive x < y < z, got {(x, y, z)}")
    d1, d2 = y - x, z - y
    if d2 == d1:
        return TripleClass(TripleKind.AP, x, d1)
    if d2 == d1 + 1:
        return TripleClass(TripleKind.AP_PLUS, x, d1)
    if d2 == d1 - 1 and d1 >= 2:
        return TripleClass(TripleKind.AP_MINUS, x, d1)
    return TripleClass(TripleKind.NONE)


def _need_coloring(cert: Certificate, s: int, length: int) -> Coloring:
    w = cert.witness
    if not isinstance(w, Coloring):
        raise CertificateError(f"{cert.spec} needs a coloring witness")
    if w.s != s:
        raise CertificateError(f"witness uses {w.s} colors, {cert.spec} needs {s}")
    if w.n != length:
        raise CertificateError(f"witness colors [1,{w.n}], certificate claims n={length}")
    return w


def _need_set(cert: Certificate, size: int) -> IntegerSet:
    w = cert.witness
    if not isinstance(w, IntegerSet):
        raise CertificateError(f"{cert.spec} needs an integer-set witness")
    if len(w) != size:
        raise CertificateError(f"witness has {len(w)} elements, certificate claims n={size}")
    return w


def _set_verdict(x: IntegerSet, k: int) -> Verdict:
    ap = set_has_ap(x, k)
    if ap is None:
        return Verdict(True)
    return Verdict(False, Violation(ViolationKind.SET_AP, ap))


def check_witness(spec: ProblemSpec, n: int, witness) -> Verdict:
    """Verdict for a witness of ``spec`` at size ``n``; raises CertificateError if malformed."""
    return verify_certificate(Certificate(spec, n, Claim.GOOD_WITNESS, witness))


def verify_certificate(cert: Certificate) -> Verdict:
    if cert.claim is not Claim.GOOD_WITNESS:
        raise CertificateError("only GOOD_WITNESS certificates can be re-verified")
    spec, n = cert.spec, cert.n
    fam, p = spec.family, spec.params
    if n < 0:
        raise CertificateError("negative size")

    if fam in (Family.W_MIXED, Family.W_DIAGONAL):
        lengths = spec.mixed_lengths()
        c = _need_coloring(cert, len(lengths), n)
        v = find_mixed_violation(c, lengths)
    elif fam is Family.W1:
        c = _need_coloring(cert, 2, n)
        v = find_w1_violation(c, p[0], p[1])
    elif fam is Family.W_STAR:
        k, s = p
        c = _need_coloring(cert, s, n)
        v = find_mono_ap(c, 1) if k == 1 else find_color_ap(c, k)
    elif fam is Family.BLOCK_COLORING:
        c = _need_coloring(cert, p[0], n)
        v = find_residue_triple(c)
    elif fam is Family.CHI:
        k, m = p
        c = _need_coloring(cert, n, m)
        v = find_mono_ap(c, k)
    elif fam is Family.G:
        k, s = p
        x = _need_set(cert, n)
        for a, b in zip(x.elements, x.elements[1:]):
            if b - a > s:
                return Verdict(False, Violation(ViolationKind.GAP, detail=f"gap {a}->{b} exceeds {s}"))
        return _set_verdict(x, k)
    elif fam is Family.M:
        k, s = p
        x = _need_set(cert, n)
        for i, xi in enumerate(x.elements, start=1):
            if not (i - 1) * s <= xi <= i * s - 1:
                return Verdict(False, Violation(
                    ViolationKind.BLOCK, detail=f"x_{i}={xi} outside [{(i - 1) * s},{i * s - 1}]"))
        return _set_verdict(x, k)
    elif fam is Family.R:
        k, m = p
        x = _need_set(cert, n)
        if x.elements and (x.elements[0] < 1 or x.elements[-1] > m):
            return Verdict(False, Violation(ViolationKind.BLOCK, detail=f"element outside [1,{m}]"))
        return _set_verdict(x, k)
    else:  # pragma: no cover - Family is closed
        raise CertificateError(f"unknown family {fam}")
    return Verdict(v is None, v)
