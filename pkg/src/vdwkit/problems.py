"""Problem descriptions and certificates shared by every module."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union


class Family(str, enum.Enum):
    W_MIXED = "W_MIXED"  # w(k_1, ..., k_s)
    W_DIAGONAL = "W_DIAGONAL"  # w(k; s)
    W1 = "W1"  # w_1(k, s)
    G = "G"  # G(k, s)
    M = "M"  # M(k, s)
    W_STAR = "W_STAR"  # w*(k; s)
    R = "R"  # r_k(n)
    CHI = "CHI"  # chi_k(m)
    # M(3, s) recast as s-colorings avoiding residue triples
    BLOCK_COLORING = "BLOCK_COLORING"


COLORING_FAMILIES = frozenset(
    {Family.W_MIXED, Family.W_DIAGONAL, Family.W1, Family.W_STAR, Family.BLOCK_COLORING}
)
SET_FAMILIES = frozenset({Family.G, Family.M})
SEARCHABLE = COLORING_FAMILIES | SET_FAMILIES

_ARITY = {
    Family.W_DIAGONAL: 2,
    Family.W1: 2,
    Family.G: 2,
    Family.M: 2,
    Family.W_STAR: 2,
    Family.R: 2,
    Family.CHI: 2,
    Family.BLOCK_COLORING: 1,
}


class SpecError(ValueError):
    """A ProblemSpec with the wrong number or range of parameters."""


@dataclass(frozen=True)
class ProblemSpec:
    family: Family
    params: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "params", tuple(int(p) for p in self.params))
        arity = _ARITY.get(self.family)
        if arity is not None and len(self.params) != arity:
            raise SpecError(f"{self.family.value} takes {arity} parameters, got {self.params}")
        if self.family is Family.W_MIXED and not self.params:
            raise SpecError("W_MIXED needs at least one length")
        if any(p < 1 for p in self.params):
            raise SpecError(f"parameters must be positive: {self.params}")
        if self.family is Family.BLOCK_COLORING and self.params[0] < 2:
            raise SpecError("BLOCK_COLORING needs s >= 2")

    @classmethod
    def mixed(cls, *lengths: int) -> "ProblemSpec":
        return cls(Family.W_MIXED, tuple(lengths))

    @classmethod
    def diagonal(cls, k: int, s: int) -> "ProblemSpec":
        return cls(Family.W_DIAGONAL, (k, s))

    @classmethod
    def w1(cls, k: int, s: int) -> "ProblemSpec":
        return cls(Family.W1, (k, s))

    @classmethod
    def gaps(cls, k: int, s: int) -> "ProblemSpec":
        return cls(Family.G, (k, s))

    @classmethod
    def blocks(cls, k: int, s: int) -> "ProblemSpec":
        return cls(Family.M, (k, s))

    @classmethod
    def star(cls, k: int, s: int) -> "ProblemSpec":
        return cls(Family.W_STAR, (k, s))

    @property
    def num_colors(self) -> Optional[int]:
        """Colors used by witnesses of a coloring family, else None."""
        f = self.family
        if f is Family.W_MIXED:
            return len(self.params)
        if f in (Family.W_DIAGONAL, Family.W_STAR):
            return self.params[1]
        if f is Family.W1:
            return 2
        if f is Family.BLOCK_COLORING:
            return self.params[0]
        return None

    def mixed_lengths(self) -> Tuple[int, ...]:
        """Per-color AP lengths for the plain van der Waerden families."""
        if self.family is Family.W_MIXED:
            return self.params
        if self.family is Family.W_DIAGONAL:
            k, s = self.params
            return (k,) * s
        raise SpecError(f"{self.family.value} has no per-color lengths")

    def key(self) -> str:
        return f"{self.family.value}:{','.join(map(str, self.params))}"

    @classmethod
    def from_key(cls, key: str) -> "ProblemSpec":
        fam, _, params = key.partition(":")
        return cls(Family(fam), tuple(int(p) for p in params.split(",") if p))

    def __str__(self) -> str:
        f, p = self.family, self.params
        names = {
            Family.W_MIXED: "w({})".format(",".join(map(str, p))),
            Family.W_DIAGONAL: f"w({p[0]};{p[-1]})",
            Family.W1: f"w1({p[0]},{p[-1]})",
            Family.G: f"G({p[0]},{p[-1]})",
            Family.M: f"M({p[0]},{p[-1]})",
            Family.W_STAR: f"w*({p[0]};{p[-1]})",
            Family.R: f"r_{p[0]}({p[-1]})",
            Family.CHI: f"chi_{p[0]}({p[-1]})",
            Family.BLOCK_COLORING: f"Mcol(3,{p[0]})",
        }
        return names[f]


class Claim(str, enum.Enum):
    GOOD_WITNESS = "GOOD_WITNESS"
    EXTREMAL_ATTESTED = "EXTREMAL_ATTESTED"


@dataclass(frozen=True)
class Certificate:
    """A portable record of a computation.

    ``n`` is the size the witness certifies: the interval length or element
    count for the threshold families, the subset size for R, and the number
    of colors for CHI.
    """

    spec: ProblemSpec
    n: int
    claim: Claim
    witness: Union["Coloring", "IntegerSet", None] = None  # noqa: F821
    attestation: Optional[dict] = None
    created_at: Optional[str] = field(default=None, compare=False)


@dataclass(frozen=True)
class Interval:
    """What is known about a value: lo <= value <= hi (hi None: unbounded)."""

    lo: int
    hi: Optional[int] = None

    @classmethod
    def exact(cls, v: int) -> "Interval":
        return cls(v, v)

    @property
    def is_exact(self) -> bool:
        return self.hi == self.lo

    def affine(self, a: int, b: int = 0) -> "Interval":
        """a * value + b for a > 0."""
        return Interval(a * self.lo + b, None if self.hi is None else a * self.hi + b)

    def __str__(self) -> str:
        if self.is_exact:
            return str(self.lo)
        if self.hi is None:
            return f">={self.lo}"
        return f"[{self.lo},{self.hi}]"
