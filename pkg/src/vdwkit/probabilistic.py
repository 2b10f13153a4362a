"""Random red/blue colorings and Moser-Tardos resampling.

Red is color 0 and must avoid k-term progressions, blue is color 1 and
must avoid m-term progressions.  Natural logarithms throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .apcore import Coloring, find_mixed_violation
from .bounds import LogNumber

RED, BLUE = 0, 1


@dataclass(frozen=True)
class SampleParams:
    k: int
    m: int
    seed: int = 0
    p_red: Optional[float] = None  # None: use 1 - k**(alpha - 1)

    def __post_init__(self):
        if self.k < 3:
            raise ValueError("k must be at least 3 so that log log k > 0")
        if self.m < 1:
            raise ValueError("m must be positive")
        if self.p_red is None:
            p = self.default_p_red
            if not 0.0 < p < 1.0:
                raise ValueError(f"red probability {p} outside (0, 1)")
        elif not 0.0 <= self.p_red <= 1.0:
            raise ValueError("p_red must lie in [0, 1]")

    @property
    def alpha(self) -> float:
        return 1.0 / (2 * self.m * math.log(math.log(self.k)))

    @property
    def default_p_red(self) -> float:
        return 1.0 - self.k ** (self.alpha - 1.0)

    @property
    def red_probability(self) -> float:
        return self.default_p_red if self.p_red is None else self.p_red


@dataclass(frozen=True)
class Resample:
    """One resampling step: the progression that was violated and its new colors."""
    round: int
    color: int
    first: int
    diff: int
    length: int
    new_colors: Tuple[int, ...]

    @property
    def positions(self) -> Tuple[int, ...]:
        return tuple(self.first + j * self.diff for j in range(self.length))


@dataclass
class ResampleReport:
    success: bool
    rounds: int
    final_coloring: Optional[Coloring]
    violations_history: List[int] = field(default_factory=list)
    log: List[Resample] = field(default_factory=list)


def _draw(rng, n, p_red):
    return np.where(rng.random(n) < p_red, RED, BLUE).astype(np.int8)


def sample_coloring(p: SampleParams, n: int) -> Coloring:
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.default_rng(p.seed)
    return Coloring(2, tuple(int(c) for c in _draw(rng, n, p.red_probability)))


def _progressions(n: int, length: int):
    """0-based index matrix of all length-term APs in [1, n], with (d, a) keys."""
    if length == 1:
        idx = np.arange(n).reshape(-1, 1)
        return idx, np.zeros(n, dtype=np.int64), np.arange(1, n + 1)
    rows, ds, As = [], [], []
    for d in range(1, (n - 1) // (length - 1) + 1):
        na = n - (length - 1) * d
        a = np.arange(na)
        rows.append(a[:, None] + d * np.arange(length)[None, :])
        ds.append(np.full(na, d))
        As.append(a + 1)
    if not rows:
        return np.zeros((0, length), dtype=np.int64), np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    return np.vstack(rows), np.concatenate(ds), np.concatenate(As)


def lll_resample(p: SampleParams, n: int, max_rounds: int) -> ResampleReport:
    """Resample the first violated progression, in (d, a, red-before-blue) order,
    until none is left or max_rounds resamplings have been spent."""
    if n < 1 or max_rounds < 1:
        raise ValueError("n and max_rounds must be positive")
    rng = np.random.default_rng(p.seed)
    pr = p.red_probability
    col = _draw(rng, n, pr)

    families = []
    for color, length in ((RED, p.k), (BLUE, p.m)):
        idx, ds, As = _progressions(n, length)
        families.append((color, length, idx, ds, As))
    # one rank per progression so that the earliest violation in (d, a, color) order wins
    keys = np.concatenate([ds * (n + 2) * 2 + As * 2 + color for color, _, _, ds, As in families])
    order = np.argsort(np.argsort(keys, kind="stable"), kind="stable")
    offsets = np.cumsum([0] + [len(f[3]) for f in families])

    history: List[int] = []
    log: List[Resample] = []
    rounds = 0
    while True:
        best = None
        total = 0
        for fi, (color, length, idx, ds, As) in enumerate(families):
            if len(idx) == 0:
                continue
            bad = np.nonzero(np.all(col[idx] == color, axis=1))[0]
            total += len(bad)
            if len(bad):
                ranks = order[offsets[fi] + bad]
                j = int(np.argmin(ranks))
                if best is None or ranks[j] < best[0]:
                    best = (ranks[j], fi, int(bad[j]))
        history.append(total)
        if best is None:
            c = Coloring(2, tuple(int(x) for x in col))
            if find_mixed_violation(c, (p.k, p.m)) is not None:
                raise AssertionError("resampler reported a coloring that does not verify")
            return ResampleReport(True, rounds, c, history, log)
        if rounds >= max_rounds:
            return ResampleReport(False, rounds, None, history, log)
        _, fi, row = best
        color, length, idx, ds, As = families[fi]
        pos = idx[row]
        new = _draw(rng, length, pr)
        col[pos] = new
        rounds += 1
        log.append(Resample(rounds, color, int(As[row]), int(ds[row]), length, tuple(int(x) for x in new)))


def local_lemma_conditions(k: int, m: int) -> Tuple[bool, bool, LogNumber]:
    """The two size conditions on k behind the Local Lemma lower bound for w(k, m).

    Returns (power condition, ratio condition, threshold) where
      power:  k^(1/(2m lnln k)) > (m - 1/(2 lnln k)) ln k
      ratio:  6 < ln k / lnln k
    and the threshold e^(e^(m^3)) is a size of k that guarantees both.
    """
    if k < 3 or m < 3:
        raise ValueError("need k >= 3 and m >= 3")
    lk = math.log(k)
    llk = math.log(lk)
    rhs = (m - 1.0 / (2 * llk)) * lk
    power = rhs <= 0 or lk / (2 * m * llk) > math.log(rhs)
    ratio = 6 < lk / llk
    return power, ratio, LogNumber.iterated_exp(2, float(m) ** 3)
