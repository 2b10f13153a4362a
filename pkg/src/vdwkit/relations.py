"""Instance checks of the inequalities linking the threshold functions,
the block/residue description of 3-term progressions, and the
residue-coloring description of M(3, s)."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from .apcore import IntegerSet, set_has_ap
from .problems import Family, Interval, ProblemSpec
from .reference import reference_interval

Lookup = Callable[[ProblemSpec], Optional[Interval]]


class Status(str, enum.Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class InequalityCheck:
    """A chain t_0 <= t_1 <= ... instantiated at (k, s)."""

    name: str
    k: int
    s: int
    statement: str
    terms: Tuple[Tuple[str, Optional[Interval]], ...]
    status: Status
    informational: bool = False

    @property
    def lhs(self) -> Optional[int]:
        iv = self.terms[0][1]
        return None if iv is None else iv.lo

    @property
    def rhs(self) -> Optional[int]:
        iv = self.terms[-1][1]
        return None if iv is None else iv.lo

    def render(self) -> str:
        parts = []
        for label, iv in self.terms:
            parts.append(f"{label}={'?' if iv is None else iv}")
        tag = "INFO" if self.informational else self.status.value
        return f"{self.name:<22} k={self.k} s={self.s:<3} {tag:<8} {' <= '.join(parts)}"


def _link(a: Optional[Interval], b: Optional[Interval]) -> Status:
    if a is None or b is None:
        return Status.UNKNOWN
    if a.hi is not None and a.hi <= b.lo:
        return Status.HOLDS
    if b.hi is not None and a.lo > b.hi:
        return Status.FAILS
    return Status.UNKNOWN


def chain_status(terms: Sequence[Optional[Interval]]) -> Status:
    links = [_link(a, b) for a, b in zip(terms, terms[1:])]
    if Status.FAILS in links:
        return Status.FAILS
    if all(x is Status.HOLDS for x in links):
        return Status.HOLDS
    return Status.UNKNOWN


def _scaled(iv: Optional[Interval], a: int, b: int = 0) -> Optional[Interval]:
    return None if iv is None else iv.affine(a, b)


# name -> statement, for reports
STATEMENTS = {
    "W1_LE_S_TIMES_M": "w1(k,s) <= s M(k,s)",
    "W1_LE_S_TIMES_G": "w1(k,s) <= s G(k,s)",
    "W1_LE_WDIAG_PLUS_S": "w1(k,s) <= w(k;s) + s",
    "G_LE_S_TIMES_M": "G(k,s) <= s M(k,s)",
    "M_LE_G_WIDER": "M(k,s) <= G(k,2s-1)",
    "G_LE_WDIAG": "G(k,s) <= w(k;s)",
    "M_LE_WDIAG": "M(k,s) <= w(k;s)",
    "WDIAG_LE_M_LONG": "w(k;s) <= M(s(k-1)+1,s)",
    "WDIAG_LE_G_LONG": "w(k;s) <= G(s(k-1)+1,2s-1)",
    "W_LE_W1": "w(k,s) <= w1(k,s)",
    "M_LE_WSTAR_LE_WDIAG": "M(k,s) <= w*(k;s) <= w(k;s)",
    "G_LT_CSM": "G(k,s) < c s M(k,s) for s large (asymptotic, not checked)",
    "W1_WIDE_GE_BLOCKS": "s(M(k,s)-1)+1 <= w1(k,2s-1)",
    "CONJECTURED_CHAIN": "G(k,s) <= w(k,s) <= M(k,s) <= w1(k,s) <= w*(k;s) <= w(k;s)",
}


def check_inequalities(k: int, s_values: Iterable[int], lookup: Lookup = reference_interval) -> List[InequalityCheck]:
    """Instantiate every inequality at (k, s) for s in s_values using known values only."""
    out: List[InequalityCheck] = []
    for s in s_values:
        if s < 1:
            raise ValueError("s must be positive")
        G = lookup(ProblemSpec.gaps(k, s))
        W = lookup(ProblemSpec.mixed(k, s))
        M = lookup(ProblemSpec.blocks(k, s))
        W1 = lookup(ProblemSpec.w1(k, s))
        WS = lookup(ProblemSpec.star(k, s))
        WD = lookup(ProblemSpec.diagonal(k, s))
        G_wide = lookup(ProblemSpec.gaps(k, 2 * s - 1))
        W1_wide = lookup(ProblemSpec.w1(k, 2 * s - 1))
        long_k = s * (k - 1) + 1
        M_long = lookup(ProblemSpec.blocks(long_k, s))
        G_long = lookup(ProblemSpec.gaps(long_k, 2 * s - 1))

        rows = [
            ("W1_LE_S_TIMES_M", [("w1(k,s)", W1), ("s*M(k,s)", _scaled(M, s))]),
            ("W1_LE_S_TIMES_G", [("w1(k,s)", W1), ("s*G(k,s)", _scaled(G, s))]),
            ("W1_LE_WDIAG_PLUS_S", [("w1(k,s)", W1), ("w(k;s)+s", _scaled(WD, 1, s))]),
            ("G_LE_S_TIMES_M", [("G(k,s)", G), ("s*M(k,s)", _scaled(M, s))]),
            ("M_LE_G_WIDER", [("M(k,s)", M), ("G(k,2s-1)", G_wide)]),
            ("G_LE_WDIAG", [("G(k,s)", G), ("w(k;s)", WD)]),
            ("M_LE_WDIAG", [("M(k,s)", M), ("w(k;s)", WD)]),
            ("WDIAG_LE_M_LONG", [("w(k;s)", WD), (f"M({long_k},{s})", M_long)]),
            ("WDIAG_LE_G_LONG", [("w(k;s)", WD), (f"G({long_k},{2 * s - 1})", G_long)]),
            ("W_LE_W1", [("w(k,s)", W), ("w1(k,s)", W1)]),
            ("M_LE_WSTAR_LE_WDIAG", [("M(k,s)", M), ("w*(k;s)", WS), ("w(k;s)", WD)]),
            ("W1_WIDE_GE_BLOCKS", [("s(M(k,s)-1)+1", _scaled(M, s, 1 - s)), ("w1(k,2s-1)", W1_wide)]),
            ("CONJECTURED_CHAIN", [("G", G), ("w", W), ("M", M), ("w1", W1), ("w*", WS), ("w(;)", WD)]),
        ]
        for name, terms in rows:
            status = chain_status([iv for _, iv in terms])
            out.append(InequalityCheck(name, k, s, STATEMENTS[name], tuple(terms), status))
        out.append(InequalityCheck("G_LT_CSM", k, s, STATEMENTS["G_LT_CSM"],
                                   (("G(k,s)", G), ("s*M(k,s)", _scaled(M, s))),
                                   Status.UNKNOWN, informational=True))
    return out


def failures(checks: Iterable[InequalityCheck]) -> List[InequalityCheck]:
    return [c for c in checks if not c.informational and c.status is Status.FAILS]


# ---------------------------------------------------------------- block/residue triples

@dataclass(frozen=True)
class ModularTriple:
    residues: Tuple[int, int, int]  # each in [1, s]
    blocks: Tuple[int, int, int]  # B_i = [(i-1)s + 1, is]

    @classmethod
    def of(cls, x: int, y: int, z: int, s: int) -> "ModularTriple":
        return cls(tuple((v - 1) % s + 1 for v in (x, y, z)), tuple((v - 1) // s + 1 for v in (x, y, z)))


def _is_ap_plus(i1, i2, i3) -> bool:
    d = i2 - i1
    return i1 >= 1 and d >= 1 and i3 == i1 + 2 * d + 1


def _is_ap_minus(i1, i2, i3) -> bool:
    d = i2 - i1
    return i1 >= 1 and d >= 2 and i3 == i1 + 2 * d - 1


def _mod_ap_not_ap(r1, r2, r3, s) -> bool:
    return (r3 - r2 - (r2 - r1)) % s == 0 and r3 - r2 != r2 - r1


def residue_criterion(t: ModularTriple, s: int) -> bool:
    """Decide whether x < y < z form a 3-AP from residues and block indices alone."""
    rx, ry, rz = t.residues
    i1, i2, i3 = t.blocks
    a = ry - rx
    b = i2 - i1
    if rz - ry == a and i3 - i2 == b and (a > 0 or (a <= 0 and b > 0)):
        return True
    if rx < ry and _mod_ap_not_ap(rx, ry, rz, s) and (_is_ap_plus(i1, i2, i3) or i1 == i2 == i3 - 1):
        return True
    if rx > ry and _mod_ap_not_ap(rx, ry, rz, s) and (_is_ap_minus(i1, i2, i3) or i3 == i2 == i1 + 1):
        return True
    return False


def block_residue_check(s: int, block_count: int):
    """Compare the residue criterion with y - x == z - y on every triple in
    [1, s * block_count].  Returns (agree, first disagreement or None)."""
    if s < 2:
        raise ValueError("the residue criterion needs s >= 2")
    if block_count < 3:
        raise ValueError("block_count must be at least 3")
    top = s * block_count
    for x in range(1, top + 1):
        for y in range(x + 1, top + 1):
            for z in range(y + 1, top + 1):
                t = ModularTriple.of(x, y, z, s)
                if residue_criterion(t, s) != (y - x == z - y):
                    return False, (x, y, z, t)
    return True, None


# ---------------------------------------------------------------- M(3, s) two ways

@dataclass(frozen=True)
class CrosscheckResult:
    via_blocks: int
    via_colorings: int
    equal: bool
    witnesses_agree: bool  # the coloring witness, read as block offsets, is the block witness


def residue_coloring_crosscheck(s: int, budget=None) -> CrosscheckResult:
    """M(3, s) from block transversals and from residue colorings."""
    from .solvers import solve

    if s < 2:
        raise ValueError("s must be at least 2")
    blocks = solve(ProblemSpec.blocks(3, s), budget)
    cols = solve(ProblemSpec(Family.BLOCK_COLORING, (s,)), budget)
    agree = False
    if blocks.witness is not None and cols.witness is not None:
        # color c of i picks (i-1)s + c + 1 from the 1-based block; shift by -1
        # to land in [(i-1)s, is-1]
        colors = cols.witness.witness.colors
        translated = IntegerSet(tuple(i * s + c for i, c in enumerate(colors)))
        agree = translated == blocks.witness.witness and set_has_ap(translated, 3) is None
    return CrosscheckResult(blocks.value, cols.value, blocks.value == cols.value, agree)
