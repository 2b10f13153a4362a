"""Brute-force oracle: enumerate every candidate and ask apcore."""

import itertools

from ..apcore import Coloring, IntegerSet, check_witness
from ..problems import Family, ProblemSpec, SpecError, COLORING_FAMILIES

NAIVE_CAP = 10**8


def naive_solve(spec: ProblemSpec, n: int, cap: int = NAIVE_CAP):
    """First witness of size n in lexicographic order, or None.

    Colorings are enumerated as color sequences, G sets as gap sequences
    (first element 1) and M sets as in-block offsets.
    """
    if n < 1:
        raise ValueError("n must be positive")
    f = spec.family
    if f in COLORING_FAMILIES:
        s = spec.num_colors
        if s ** n > cap:
            raise ValueError(f"{s}^{n} colorings exceed the naive cap")
        for cols in itertools.product(range(s), repeat=n):
            w = Coloring(s, cols)
            if check_witness(spec, n, w).clean:
                return w
        return None
    if f in (Family.G, Family.M):
        k, s = spec.params
        if s ** (n - 1 if f is Family.G else n) > cap:
            raise ValueError("candidate count exceeds the naive cap")
        if f is Family.G:
            for gaps in itertools.product(range(1, s + 1), repeat=n - 1):
                els = [1]
                for g in gaps:
                    els.append(els[-1] + g)
                w = IntegerSet(tuple(els))
                if check_witness(spec, n, w).clean:
                    return w
        else:
            for offs in itertools.product(range(s), repeat=n):
                w = IntegerSet(tuple(i * s + o for i, o in enumerate(offs)))
                if check_witness(spec, n, w).clean:
                    return w
        return None
    raise SpecError(f"{f.value} has no naive threshold search")
