"""Value search: ascending-n driver around the compiled kernels.

Each level n is searched in lexicographic order starting from the witness
found at level n - 1, so the witness reported at every level is the
lexicographically least one (among canonical colorings where symmetry is
broken).  Parallel runs split the tree into lexicographically ordered
prefixes and keep the earliest prefix that succeeds, which makes the
result independent of scheduling.
"""

from __future__ import annotations

import hashlib
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .. import __version__
from ..apcore import Coloring, IntegerSet, check_witness
from ..problems import Certificate, Claim, Family, ProblemSpec, SpecError, SEARCHABLE
from . import kernels as K

SOLVER_VERSION = f"vdwkit-{__version__}/lexdfs-fc"

_CHUNK = 1 << 22
_NO_STOP = np.iinfo(np.int64).max


@dataclass(frozen=True)
class SearchBudget:
    max_n: Optional[int] = None
    max_nodes: Optional[int] = None
    time_limit: Optional[float] = None  # seconds
    threads: int = 1

    def __post_init__(self):
        for name in ("max_n", "max_nodes", "time_limit"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise ValueError(f"{name} must be positive")
        if self.threads < 1:
            raise ValueError("threads must be positive")


class BudgetExhausted(RuntimeError):
    """The budget ran out before the question was settled.

    ``lower`` is the best proven lower bound on the value (a witness exists
    at ``lower - 1``), ``upper`` the smallest size proven impossible, if any.
    """

    def __init__(self, spec, lower: int, upper: Optional[int] = None,
                 witness=None, nodes: int = 0, reason: str = ""):
        self.spec = spec
        self.lower = lower
        self.upper = upper
        self.witness = witness
        self.nodes = nodes
        self.reason = reason
        msg = f"{spec}: budget exhausted ({reason}); value >= {lower}"
        if upper is not None:
            msg += f", value <= {upper}"
        super().__init__(msg)


@dataclass(frozen=True)
class ComputedValue:
    spec: ProblemSpec
    value: int
    witness: Optional[Certificate]
    elapsed_seconds: float = field(compare=False)
    solver_version: str = SOLVER_VERSION
    nodes_explored: int = 0
    extremal: Optional[Certificate] = None


class _Meter:
    """Shared node/time accounting across chunks and threads."""

    def __init__(self, budget: SearchBudget):
        self.budget = budget
        self.nodes = 0
        self.deadline = None if budget.time_limit is None else time.monotonic() + budget.time_limit
        self._lock = threading.Lock()

    def next_chunk(self) -> int:
        """Node allowance for the next kernel call; 0 when the budget is spent."""
        if self.deadline is not None and time.monotonic() >= self.deadline:
            return 0
        chunk = _CHUNK if self.deadline is None else _CHUNK // 8
        if self.budget.max_nodes is not None:
            with self._lock:
                chunk = min(chunk, self.budget.max_nodes - self.nodes)
        return max(chunk, 0)

    def charge(self, nodes: int):
        with self._lock:
            self.nodes += int(nodes)

    def reason(self) -> str:
        if self.deadline is not None and time.monotonic() >= self.deadline:
            return "time limit"
        return "node limit"


def trivial_lower(spec: ProblemSpec) -> int:
    """A value the function provably reaches, with a witness one below it."""
    f, p = spec.family, spec.params
    if f is Family.W_MIXED:
        return max(p)
    if f is Family.W1:
        return max(p)
    if f is Family.BLOCK_COLORING:
        return 3
    return p[0]


class _Engine:
    """Adapter between a ProblemSpec and one of the kernels."""

    def __init__(self, spec: ProblemSpec):
        if spec.family not in SEARCHABLE:
            raise SpecError(f"{spec.family.value} is not a threshold family")
        self.spec = spec
        f, p = spec.family, spec.params
        self.is_set = f in (Family.G, Family.M)
        self.trivial = False
        if self.is_set:
            self.k, self.s = p
            self.mode = K.SET_GAPS if f is Family.G else K.SET_BLOCKS
            self.trivial = self.k <= 2
            return
        s = spec.num_colors
        self.s = s
        self.first_max = s - 1
        group = [-1] * s
        maxd = [0] * s
        if f is Family.W_MIXED or f is Family.W_DIAGONAL:
            self.mode = K.MODE_AP
            lengths = list(spec.mixed_lengths())
            for c in range(s):
                for g in range(c - 1, -1, -1):
                    if lengths[g] == lengths[c]:
                        group[c] = g
                        break
        elif f is Family.W1:
            self.mode = K.MODE_AP
            lengths = [p[0], p[1]]
            maxd = [0, 1]
        elif f is Family.W_STAR:
            self.mode = K.MODE_COLOR_AP
            lengths = [p[0]] * s
            self.trivial = p[0] == 1
            # reversing the palette maps forbidden patterns to forbidden patterns
            self.first_max = (s - 1) // 2
        else:
            self.mode = K.MODE_BLOCK
            lengths = [3] * s
        self.lengths = np.array(lengths, dtype=np.int64)
        self.maxd = np.array(maxd, dtype=np.int64)
        self.group = np.array(group, dtype=np.int64)

    def run(self, n, cursor, fixed_len, skip, node_limit, stop, index):
        cur = np.array(cursor, dtype=np.int64) if len(cursor) else np.zeros(1, dtype=np.int64)
        out = np.zeros(max(n, 1), dtype=np.int64)
        if self.is_set:
            st, ln, nodes = K.set_search(self.mode, self.k, self.s, n, cur, len(cursor), fixed_len,
                                         skip, node_limit, stop, index, out)
        else:
            st, ln, nodes = K.color_search(self.mode, self.s, self.lengths, self.maxd, self.group,
                                           self.first_max, n, cur, len(cursor), fixed_len, skip,
                                           node_limit, stop, index, out)
        return int(st), [int(v) for v in out[:ln]], int(nodes)

    def trivial_witness(self, n):
        """Witness for the degenerate parameters handled outside the kernels."""
        if self.is_set:
            if self.k == 2 and n == 1:
                return self.to_witness([0])
            if n == 0:
                return self.to_witness([])
            return None
        return Coloring(self.s, ()) if n == 0 else None

    def to_witness(self, seq: Sequence[int]):
        if not self.is_set:
            return Coloring(self.s, tuple(seq))
        if self.mode == K.SET_BLOCKS:
            return IntegerSet(tuple(i * self.s + c for i, c in enumerate(seq)))
        vals, x = [], 0
        for i, c in enumerate(seq):
            x = 1 if i == 0 else x + 1 + c
            vals.append(x)
        return IntegerSet(tuple(vals))

    def from_witness(self, w) -> List[int]:
        if not self.is_set:
            return list(w.colors)
        els = w.elements
        if self.mode == K.SET_BLOCKS:
            return [x - i * self.s for i, x in enumerate(els)]
        return [0] + [b - a - 1 for a, b in zip(els, els[1:])]

    def space_hash(self, n: int) -> str:
        desc = f"{self.spec.key()}|n={n}|{SOLVER_VERSION}"
        if not self.is_set:
            desc += f"|mode={self.mode}|group={self.group.tolist()}|first<={self.first_max}"
        return hashlib.sha256(desc.encode()).hexdigest()


def _prefixes(engine: _Engine, n: int, want: int, cap: int = 4096) -> Tuple[int, List[List[int]]]:
    """Consistent prefixes of a common length, in lexicographic order."""
    best: Tuple[int, List[List[int]]] = (0, [[]])
    stop = np.array([_NO_STOP], dtype=np.int64)
    for length in range(1, min(n, 16)):
        found, cur = [], []
        while len(found) < cap:
            st, seq, _ = engine.run(length, cur, 0, bool(cur), _NO_STOP, stop, 0)
            if st != K.FOUND:
                break
            found.append(seq)
            cur = seq
        if len(found) >= cap:
            break
        best = (length, found)
        if len(found) >= want:
            break
    return best


def _search_level(engine: _Engine, n: int, seed: List[int], meter: _Meter, threads: int):
    """Returns (status, witness sequence or None)."""
    if threads <= 1 or n < 4:
        return _run_task(engine, n, seed, 0, meter, np.array([_NO_STOP], dtype=np.int64), 0)

    length, prefixes = _prefixes(engine, n, 8 * threads)
    head = seed[:length]
    tasks = []
    for pre in prefixes:
        if pre < head:
            continue
        tasks.append(seed if pre == head else pre)
    if not tasks:
        return K.EXHAUSTED, None
    stop = np.array([_NO_STOP], dtype=np.int64)
    lock = threading.Lock()

    def work(i):
        st, seq = _run_task(engine, n, tasks[i], length, meter, stop, i)
        if st == K.FOUND:
            with lock:
                stop[0] = min(stop[0], i)
        return st, seq

    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(work, range(len(tasks))))
    for st, seq in results:
        if st == K.EXHAUSTED:
            continue
        if st == K.FOUND:
            return K.FOUND, seq
        return K.BUDGET, None
    return K.EXHAUSTED, None


def _run_task(engine, n, cursor, fixed_len, meter, stop, index):
    cursor = list(cursor)
    while True:
        if stop[0] < index:
            return K.ABORTED, None
        limit = meter.next_chunk()
        if limit <= 0:
            return K.BUDGET, None
        st, seq, nodes = engine.run(n, cursor, fixed_len, False, limit, stop, index)
        meter.charge(nodes)
        if st == K.BUDGET:
            cursor = seq
            continue
        return st, (seq if st == K.FOUND else None)


def _checked(spec: ProblemSpec, n: int, w):
    """Re-verify a produced witness and its restriction with apcore."""
    v = check_witness(spec, n, w)
    if not v.clean:
        raise AssertionError(f"solver produced a bad witness for {spec} at n={n}: {v.violation.describe()}")
    if n >= 1:
        shorter = w.prefix(n - 1) if isinstance(w, Coloring) else IntegerSet(w.elements[:-1])
        if not check_witness(spec, n - 1, shorter).clean:
            raise AssertionError(f"restriction of a witness for {spec} is not clean")
    return w


def witness_search(spec: ProblemSpec, n: int, budget: Optional[SearchBudget] = None):
    """A witness of size n for spec, or None if none exists.

    Raises BudgetExhausted when the budget runs out first.
    """
    if n < 1:
        raise ValueError("n must be positive")
    budget = budget or SearchBudget()
    engine = _Engine(spec)
    if engine.trivial:
        w = engine.trivial_witness(n)
        return None if w is None else _checked(spec, n, w)
    meter = _Meter(budget)
    st, seq = _search_level(engine, n, [], meter, budget.threads)
    if st == K.BUDGET:
        raise BudgetExhausted(spec, lower=0, nodes=meter.nodes, reason=meter.reason())
    if st != K.FOUND:
        return None
    return _checked(spec, n, engine.to_witness(seq))


def solve(spec: ProblemSpec, budget: Optional[SearchBudget] = None, progress=None) -> ComputedValue:
    """Least n with no witness, by ascending n with seeded searches.

    ``progress`` is called as progress(n, nodes_so_far) after each level
    that still has a witness.
    """
    budget = budget or SearchBudget()
    engine = _Engine(spec)
    t0 = time.perf_counter()
    meter = _Meter(budget)
    n = max(trivial_lower(spec) - 1, 0)
    seed: List[int] = []
    last = None  # (n, sequence) of the latest witness
    while True:
        if budget.max_n is not None and n > budget.max_n:
            raise BudgetExhausted(spec, lower=n, witness=_wit(engine, last), nodes=meter.nodes,
                                  reason=f"max n {budget.max_n}")
        if engine.trivial:
            w = engine.trivial_witness(n)
            st, seq = (K.FOUND, engine.from_witness(w)) if w is not None else (K.EXHAUSTED, None)
        else:
            st, seq = _search_level(engine, n, seed, meter, budget.threads)
        if st == K.FOUND:
            last = (n, seq)
            seed = seq
            if progress is not None:
                progress(n, meter.nodes)
            n += 1
            continue
        if st == K.BUDGET:
            raise BudgetExhausted(spec, lower=n, witness=_wit(engine, last), nodes=meter.nodes,
                                  reason=meter.reason())
        break

    value = n
    cert = None
    if last is not None:
        wn, wseq = last
        assert wn == value - 1
        w = _checked(spec, wn, engine.to_witness(wseq))
        cert = Certificate(spec, wn, Claim.GOOD_WITNESS, w)
    attestation = {"solver": SOLVER_VERSION, "nodes": meter.nodes, "search_space": engine.space_hash(value)}
    extremal = Certificate(spec, value, Claim.EXTREMAL_ATTESTED, attestation=attestation)
    return ComputedValue(spec, value, cert, time.perf_counter() - t0, SOLVER_VERSION, meter.nodes, extremal)


def _wit(engine, last):
    if last is None:
        return None
    n, seq = last
    return Certificate(engine.spec, n, Claim.GOOD_WITNESS, engine.to_witness(seq))


def solve_r(k: int, n: int, budget: Optional[SearchBudget] = None) -> Tuple[int, IntegerSet]:
    """Largest k-AP-free subset of [1, n] (size, witness)."""
    if k < 2 or n < 1:
        raise ValueError("need k >= 2 and n >= 1")
    if n < k:
        return n, IntegerSet(tuple(range(1, n + 1)))
    budget = budget or SearchBudget()
    meter = _Meter(budget)
    rtab = np.zeros(n + 2, dtype=np.int64)
    best_set = np.zeros(n + 2, dtype=np.int8)
    for m in range(1, k):
        rtab[m] = m
        best_set[m] = 1
    for m in range(k, n + 1):
        rtab[m] = m  # trivial bound while m itself is being solved
        inset = np.zeros(m + 2, dtype=np.int8)
        tried = np.zeros(m + 2, dtype=np.int8)
        # incumbent: the optimum for [1, m-1]
        state = np.array([1, 0, rtab[m - 1], 1], dtype=np.int64)
        cand = best_set[: m + 2].copy()
        cand[m] = 0
        while True:
            limit = meter.next_chunk()
            if limit <= 0:
                raise BudgetExhausted(ProblemSpec(Family.R, (k, n)), lower=int(rtab[m - 1]),
                                      nodes=meter.nodes, reason=meter.reason())
            st, nodes = K.r_search(k, m, rtab, inset, tried, state, cand, limit)
            meter.charge(nodes)
            if st == K.EXHAUSTED:
                break
        rtab[m] = state[2]
        best_set = np.zeros(n + 2, dtype=np.int8)
        best_set[: m + 2] = cand
    els = tuple(int(i) for i in np.nonzero(best_set[: n + 1])[0])
    w = IntegerSet(els)
    spec = ProblemSpec(Family.R, (k, n))
    if len(w) != rtab[n] or not check_witness(spec, len(w), w).clean:
        raise AssertionError(f"bad r_{k}({n}) witness")
    return int(rtab[n]), w


def solve_chi(k: int, m: int, budget: Optional[SearchBudget] = None) -> Tuple[int, Coloring]:
    """Fewest colors for [1, m] with no monochromatic k-AP (colors, witness)."""
    if k < 2 or m < 1:
        raise ValueError("need k >= 2 and m >= 1")
    s = 1
    while True:
        w = witness_search(ProblemSpec.diagonal(k, s), m, budget)
        if w is not None:
            spec = ProblemSpec(Family.CHI, (k, m))
            if not check_witness(spec, s, w).clean:
                raise AssertionError(f"bad chi_{k}({m}) witness")
            return s, w
        s += 1
