"""Closed-form bounds evaluated in log space.

All logarithms are natural except the exponent z = floor(log2 k) of the
diagonal lower bound.  Unspecified constants default to 1; entries that
depend on them are marked ``constant_dependent`` and are never reported
as inconsistent with an exact value.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import total_ordering
from typing import Callable, List, Optional, Tuple

from .problems import Family, ProblemSpec

_T = math.log(1.7976931348623157e308)  # ln of the largest double


@total_ordering
@dataclass(frozen=True)
class LogNumber:
    """A positive number exp^level(x), i.e. ``level`` nested exponentials of x.

    Normalized so that values up to 1e300 are plain floats (level 0) and a
    value at level L >= 1 is always larger than every value at level L - 1.
    Comparison is then lexicographic on (level, x).  ``tower`` optionally records the
    (height, top) of a 2-tower the value was built from.
    """

    level: int
    x: float
    tower: Optional[Tuple[int, float]] = field(default=None, compare=False)

    def __post_init__(self):
        level, x = self.level, float(self.x)
        while level > 0 and x < _T:
            x = math.exp(x)
            level -= 1
        if level == 0 and x > 1e300:
            x = math.log(x)
            level = 1
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "x", x)

    @classmethod
    def of(cls, v: float) -> "LogNumber":
        return cls(0, float(v))

    @classmethod
    def from_ln(cls, ln_value: float) -> "LogNumber":
        return cls(1, ln_value)

    @classmethod
    def iterated_exp(cls, times: int, x: float) -> "LogNumber":
        return cls(times, x)

    @classmethod
    def power(cls, base: float, exponent: "LogNumber | float") -> "LogNumber":
        """base ** exponent for base > 1."""
        if not isinstance(exponent, LogNumber):
            exponent = cls.of(exponent)
        return exponent.scaled(math.log(base)).exp()

    @classmethod
    def two_tower(cls, height: int, top: float) -> "LogNumber":
        """2^2^...^2^top with ``height`` twos."""
        v = cls.of(top)
        for _ in range(height):
            v = cls.power(2.0, v)
        return cls(v.level, v.x, (height, float(top)))

    def exp(self) -> "LogNumber":
        return LogNumber(self.level + 1, self.x)

    def ln(self) -> "LogNumber":
        if self.level > 0:
            return LogNumber(self.level - 1, self.x)
        if self.x <= 0:
            raise ValueError("log of a non-positive number")
        return LogNumber(0, math.log(self.x))

    def scaled(self, c: float) -> "LogNumber":
        """c * self for c > 0."""
        if c <= 0:
            raise ValueError("scale must be positive")
        if self.level == 0:
            v = self.x * c
            if math.isinf(v):
                return LogNumber(1, math.log(self.x) + math.log(c))
            return LogNumber(0, v)
        if self.level == 1:
            return LogNumber(1, self.x + math.log(c))
        return self  # ln c is below double resolution at these magnitudes

    def to_float(self) -> float:
        return self.x if self.level == 0 else math.inf

    def ln_value(self) -> float:
        """Natural log of the value, or inf when even that overflows."""
        if self.level == 0:
            return math.log(self.x)
        if self.level == 1:
            return self.x
        return math.inf

    def __lt__(self, other: "LogNumber") -> bool:
        if not isinstance(other, LogNumber):
            other = LogNumber.of(other)
        return (self.level, self.x) < (other.level, other.x)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LogNumber):
            if isinstance(other, (int, float)):
                other = LogNumber.of(other)
            else:
                return NotImplemented
        return (self.level, self.x) == (other.level, other.x)

    def __hash__(self):
        return hash((self.level, self.x))

    def __str__(self) -> str:
        if self.tower is not None:
            h, top = self.tower
            return "2^" * h + f"{top:g}"
        if self.level == 0:
            return f"{self.x:.6g}"
        if self.level == 1:
            return f"10^{self.x / math.log(10):.6g}"
        return "e^" * self.level + f"{self.x:.6g}"


def compare(a: LogNumber, b: LogNumber) -> int:
    """-1, 0 or 1 as a <, =, > b."""
    return (a > b) - (a < b)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in small:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class BoundConstants:
    c: float = 1.0
    d: float = 1.0

    def __post_init__(self):
        if self.c <= 0 or self.d <= 0:
            raise ValueError("constants must be positive")


class BoundKind(str, enum.Enum):
    LOWER = "LOWER"
    UPPER = "UPPER"


@dataclass(frozen=True)
class AnchorComparison:
    exact: int
    # True/False for constant-free bounds; for constant-dependent ones True
    # when it happens to hold and None (suppressed) otherwise
    consistent: Optional[bool]


@dataclass(frozen=True)
class BoundEntry:
    name: str
    kind: BoundKind
    target: ProblemSpec
    formula: str
    value: LogNumber
    applicable: bool
    constant_dependent: bool
    anchor: Optional[AnchorComparison] = None
    note: str = ""


@dataclass
class BoundReport:
    entries: List[BoundEntry]
    notes: List[str] = field(default_factory=list)

    def get(self, name: str) -> BoundEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)


# imported results, shown but never evaluated
IMPORTED_FORMULAS = (
    "r_4(n) < n e^(-c sqrt(ln ln n))  for n >= 3",
    "chi_k(n) < (2 n ln n / r_k(n)) (1 + o(1))",
    "r_k(n) > n e^(-c (ln n)^(1/(z+1))),  z = floor(log2 k)",
    "the upper-bound constant of w_1(4,s) is d = c^-2 with c from the r_4 estimate",
)

ExactLookup = Callable[[ProblemSpec], Optional[int]]


def _anchor(lookup: Optional[ExactLookup], target: ProblemSpec, kind: BoundKind,
            value: LogNumber, const_dep: bool, applicable: bool) -> Optional[AnchorComparison]:
    if lookup is None:
        return None
    exact = lookup(target)
    if exact is None:
        return None
    holds = value <= LogNumber.of(exact) if kind is BoundKind.LOWER else value >= LogNumber.of(exact)
    if not applicable:
        return AnchorComparison(exact, None)
    if const_dep:
        return AnchorComparison(exact, True if holds else None)
    return AnchorComparison(exact, holds)


def _entry(lookup, name, kind, target, formula, value, applicable, const_dep, note=""):
    return BoundEntry(name, kind, target, formula, value, applicable, const_dep,
                      _anchor(lookup, target, kind, value, const_dep, applicable), note)


def _pow(base: float, exponent: float) -> LogNumber:
    return LogNumber.from_ln(exponent * math.log(base))


def lower_bounds(k: int, m_or_s: int, consts: BoundConstants = BoundConstants(),
                 lookup: Optional[ExactLookup] = None) -> BoundReport:
    """Every lower bound at (k, m) / (k, s); ``lookup`` supplies exact values."""
    if k < 2 or m_or_s < 2:
        raise ValueError("need k >= 2 and m/s >= 2")
    s = m = m_or_s
    c, d = consts.c, consts.d
    out = []

    kp = is_prime(k - 1)
    out.append(_entry(
        lookup, "WKK_LOWER", BoundKind.LOWER, ProblemSpec.mixed(k, k), "(k-1) 2^(k-1) <= w(k,k)",
        LogNumber.of((k - 1) * 2.0 ** (k - 1)) if k < 1000 else LogNumber.from_ln(math.log(k - 1) + (k - 1) * math.log(2)),
        kp, False, "" if kp else f"k-1 = {k - 1} is not prime"))

    z = int(math.floor(math.log2(k)))
    # s^(d (ln s)^z) = exp(d (ln s)^(z+1))
    out.append(_entry(
        lookup, "DIAGONAL_LOWER", BoundKind.LOWER, ProblemSpec.diagonal(k, s),
        f"w(k;s) > s^(d (ln s)^z), z = {z}", LogNumber.from_ln(d * math.log(s) ** (z + 1)),
        k >= 3, True, "holds for sufficiently large s"))

    if k >= 3:
        llk = math.log(math.log(k))
        expo = m - 1 - 1.0 / llk
        val = _pow(k, expo)
    else:
        expo, val = float("nan"), LogNumber.of(1.0)
    out.append(_entry(
        lookup, "LLL_LOWER", BoundKind.LOWER, ProblemSpec.mixed(k, m),
        "w(k,m) > k^(m - 1 - 1/ln ln k)", val, k >= 3 and m >= 3 and k > m, False,
        f"exponent {expo:.4g}; needs m >= 3, k > m, k large"))

    out.append(_entry(
        lookup, "GAPS_LOWER", BoundKind.LOWER, ProblemSpec.gaps(k, s), "G(k,s) > s^(k - c sqrt(k))",
        _pow(s, k - c * math.sqrt(k)), k >= 3, True))

    out.append(_entry(
        lookup, "RUN_LOWER", BoundKind.LOWER, ProblemSpec.w1(3, s), "s^(c ln s) < w_1(3,s)",
        LogNumber.from_ln(c * math.log(s) ** 2), k == 3, True, "" if k == 3 else "concerns k = 3 only"))
    return BoundReport(out, list(IMPORTED_FORMULAS))


def upper_bounds(k_or_s: int, consts: BoundConstants = BoundConstants(),
                 lookup: Optional[ExactLookup] = None) -> BoundReport:
    """Every upper bound, each at the single parameter ``k_or_s``."""
    if k_or_s < 2:
        raise ValueError("parameter must be at least 2")
    x = k_or_s
    c, d = consts.c, consts.d
    lx = math.log(x)
    out = []
    # e^(x^(c ln x)) = exp(exp(c ln^2 x))
    out.append(_entry(
        lookup, "RUN4_UPPER", BoundKind.UPPER, ProblemSpec.w1(4, x), "w_1(4,s) < e^(s^(c ln s))",
        LogNumber.iterated_exp(2, c * lx * lx), True, True))
    out.append(_entry(
        lookup, "W_K4_UPPER", BoundKind.UPPER, ProblemSpec.mixed(x, 4), "w(k,4) < e^(k^(d ln k))",
        LogNumber.iterated_exp(2, d * lx * lx), True, True))
    out.append(_entry(
        lookup, "DIAG4_UPPER", BoundKind.UPPER, ProblemSpec.diagonal(4, x), "w(4;s) < e^(s^(d ln s))",
        LogNumber.iterated_exp(2, d * lx * lx), True, True))
    out.append(_entry(
        lookup, "RUN_UPPER", BoundKind.UPPER, ProblemSpec.w1(3, x), "w_1(3,s) < s^(d s^2)",
        _pow(x, d * x * x), True, True))
    out.append(_entry(
        lookup, "TOWER_UPPER", BoundKind.UPPER, ProblemSpec.mixed(x, x), "w(k,k) < 2^2^2^2^2^(k+9)",
        LogNumber.two_tower(5, x + 9), True, False))
    return BoundReport(out, list(IMPORTED_FORMULAS))
