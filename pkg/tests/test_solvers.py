import pytest
from hypothesis import given, strategies as st

from vdwkit import Family, ProblemSpec, SpecError
from vdwkit.apcore import check_witness, set_has_ap
from vdwkit.solvers import BudgetExhausted, SearchBudget, naive_solve, solve, solve_chi, solve_r, witness_search

# (spec, largest n for the brute-force oracle)
ORACLE_CASES = [
    (ProblemSpec.mixed(3, 3), 9),
    (ProblemSpec.mixed(3, 4), 11),
    (ProblemSpec.mixed(2, 3, 3), 7),
    (ProblemSpec.diagonal(3, 3), 7),
    (ProblemSpec.w1(3, 3), 11),
    (ProblemSpec.gaps(3, 2), 6),
    (ProblemSpec.gaps(3, 3), 9),
    (ProblemSpec.blocks(3, 2), 7),
    (ProblemSpec.blocks(3, 3), 10),
    (ProblemSpec.star(3, 2), 9),
    (ProblemSpec.star(3, 3), 7),
    (ProblemSpec(Family.BLOCK_COLORING, (3,)), 8),
]


@pytest.mark.parametrize("spec,top", ORACLE_CASES, ids=lambda x: str(x))
def test_search_agrees_with_naive(spec, top):
    for n in range(1, top + 1):
        fast = witness_search(spec, n)
        slow = naive_solve(spec, n)
        assert (fast is None) == (slow is None), n
        if fast is not None:
            assert fast == slow, n


# frozen from the brute-force oracle; w(2,3,3) = 14 is the long-known published value
SMALL_VALUES = [
    (ProblemSpec.mixed(3, 1), 3),
    (ProblemSpec.mixed(1, 1), 1),
    (ProblemSpec.mixed(3, 3), 9),
    (ProblemSpec.mixed(3, 4), 18),
    (ProblemSpec.mixed(2, 3, 3), 14),
    (ProblemSpec.gaps(3, 2), 5),
    (ProblemSpec.gaps(3, 3), 9),
    (ProblemSpec.gaps(2, 3), 2),
    (ProblemSpec.blocks(3, 2), 7),
    (ProblemSpec.blocks(3, 3), 11),
    (ProblemSpec.w1(3, 2), 9),
    (ProblemSpec.star(3, 2), 9),
    (ProblemSpec.star(1, 3), 1),
    (ProblemSpec.star(2, 3), 2),
    (ProblemSpec(Family.BLOCK_COLORING, (2,)), 7),
]


@pytest.mark.parametrize("spec,value", SMALL_VALUES, ids=lambda x: str(x))
def test_small_values(spec, value):
    cv = solve(spec)
    assert cv.value == value
    if value > 1:
        w = cv.witness
        assert w.n == value - 1 and check_witness(spec, w.n, w.witness).clean
    assert witness_search(spec, value) is None


def test_budget_exhaustion_reports_lower_bound():
    with pytest.raises(BudgetExhausted) as ei:
        solve(ProblemSpec.mixed(3, 7), SearchBudget(max_nodes=2000))
    e = ei.value
    assert 7 <= e.lower < 46
    assert check_witness(e.spec, e.witness.n, e.witness.witness).clean
    assert e.witness.n == e.lower - 1


def test_max_n_budget():
    with pytest.raises(BudgetExhausted) as ei:
        solve(ProblemSpec.mixed(3, 4), SearchBudget(max_n=10))
    assert ei.value.lower == 11


@pytest.mark.parametrize("threads", [1, 3])
def test_threads_do_not_change_answers(threads):
    cv = solve(ProblemSpec.gaps(3, 5), SearchBudget(threads=threads))
    assert cv.value == 17
    assert cv.witness == solve(ProblemSpec.gaps(3, 5)).witness


R3 = [1, 2, 2, 3, 4, 4, 4, 4, 5, 5, 6, 6, 7, 8, 8, 8, 8, 8, 8, 9]


def test_r3_sequence():
    for n, want in enumerate(R3, start=1):
        size, w = solve_r(3, n)
        assert size == want and len(w) == size and set_has_ap(w, 3) is None
        assert w.elements[0] >= 1 and w.elements[-1] <= n


@given(st.integers(1, 14))
def test_r3_brute_force(n):
    import itertools
    best = max(len(c) for r in range(n + 1) for c in itertools.combinations(range(1, n + 1), r)
               if all(not (a + (b - a) * 2 in c) for a, b in itertools.combinations(c, 2)))
    assert solve_r(3, n)[0] == best


def test_chi_values():
    assert [solve_chi(3, m)[0] for m in (8, 9, 26, 27)] == [2, 3, 3, 4]


def test_r_and_chi_are_not_threshold_families():
    with pytest.raises(SpecError):
        naive_solve(ProblemSpec(Family.R, (3, 5)), 3)


def test_computed_value_carries_attestation():
    cv = solve(ProblemSpec.mixed(3, 3))
    att = cv.extremal.attestation
    assert cv.extremal.n == 9 and att["solver"] == cv.solver_version and len(att["search_space"]) == 64


@pytest.mark.parametrize("k,m", [(a, b) for a in range(1, 6) for b in range(a + 1, 6)])
def test_mixed_symmetry(k, m):
    assert solve(ProblemSpec.mixed(k, m)).value == solve(ProblemSpec.mixed(m, k)).value


def test_monotone_in_parameters():
    w = [solve(ProblemSpec.mixed(3, s)).value for s in range(1, 7)]
    w1 = [solve(ProblemSpec.w1(3, s)).value for s in range(1, 5)]
    wk = [solve(ProblemSpec.mixed(k, 3)).value for k in range(1, 5)]
    for seq in (w, w1, wk):
        assert seq == sorted(seq)


def test_single_thread_runs_are_identical():
    a = solve(ProblemSpec.star(3, 3))
    b = solve(ProblemSpec.star(3, 3))
    assert a == b  # elapsed time is excluded from equality
    assert a.extremal.attestation == b.extremal.attestation
