import itertools

import pytest
from hypothesis import given, strategies as st

from vdwkit import Certificate, Claim, ProblemSpec
from vdwkit.apcore import (
    CertificateError, Coloring, IntegerSet, TripleKind, ViolationKind, check_witness, classify_triple,
    count_aps, enumerate_aps, find_color_ap, find_mixed_violation, find_mono_ap, find_residue_triple,
    find_w1_violation, longest_run, set_has_ap, verify_certificate,
)


def colorings(s, max_n=14):
    return st.lists(st.integers(0, s - 1), min_size=1, max_size=max_n).map(lambda c: Coloring(s, c))


def brute_mono(c, k):
    for a, d in itertools.product(range(1, c.n + 1), range(1, c.n)):
        t = [a + j * d for j in range(k)]
        if t[-1] <= c.n and len({c.color(x) for x in t}) == 1:
            return True
    return False


def test_enumerate_aps_counts():
    assert count_aps(9, 3) == sum(1 for _ in enumerate_aps(9, 3)) == 16
    assert all(p.last <= 9 for p in enumerate_aps(9, 3))


def test_known_extremal_coloring():
    # the unique-up-to-swap good 2-coloring of [1,8] for 3-APs
    c = Coloring.from_string("00110011", 2)
    assert find_mono_ap(c, 3) is None
    v = find_mono_ap(Coloring.from_string("001100110", 2), 3)
    assert v.kind is ViolationKind.MONO_AP and v.progression.terms() == (1, 5, 9)


@given(colorings(2))
def test_mono_ap_matches_brute_force(c):
    assert (find_mono_ap(c, 3) is not None) == brute_mono(c, 3)


@given(colorings(2))
def test_violation_is_real(c):
    v = find_mixed_violation(c, (3, 4))
    if v is not None:
        p = v.progression
        assert p.length == (3, 4)[v.color]
        assert all(c.color(x) == v.color for x in p.terms())


@given(colorings(2), st.integers(1, 5))
def test_w1_run_rule(c, s_run):
    v = find_w1_violation(c, 3, s_run)
    has_run = longest_run(c, 1) >= s_run
    if has_run:
        assert v is not None
    if v is not None and v.kind is ViolationKind.RUN:
        assert all(c.color(i) == 1 for i in range(v.run_start, v.run_start + v.run_length))


@given(colorings(3, 10))
def test_color_ap_contains_mono(c):
    # a monochromatic 3-AP is a (constant) color AP
    if find_mono_ap(c, 3) is not None:
        assert find_color_ap(c, 3) is not None
    v = find_color_ap(c, 3)
    if v is not None and v.kind is ViolationKind.COLOR_AP:
        a, b, z = (c.color(x) for x in v.progression.terms())
        assert b - a == z - b == v.color_diff != 0


@given(colorings(2))
def test_reversal_invariance(c):
    assert (find_mono_ap(c, 3) is None) == (find_mono_ap(c.reversed(), 3) is None)


@given(st.lists(st.integers(1, 40), unique=True, max_size=12).map(lambda x: IntegerSet(tuple(sorted(x)))))
def test_set_ap_matches_brute_force(x):
    s = set(x)
    brute = any(a + d in s and a + 2 * d in s for a in s for d in range(1, 40))
    assert (set_has_ap(x, 3) is not None) == brute


@given(st.integers(1, 30), st.integers(1, 10), st.integers(0, 3))
def test_classify_triple(x, d, extra):
    z = x + 2 * d + (0, 1, -1, 5)[extra]
    if z <= x + d:
        return
    kind = classify_triple(x, x + d, z).kind
    expected = {0: TripleKind.AP, 1: TripleKind.AP_PLUS, 2: TripleKind.AP_MINUS if d >= 2 else TripleKind.NONE,
                3: TripleKind.NONE}[extra]
    assert kind is expected


def test_residue_triple_examples():
    assert find_residue_triple(Coloring(3, (0, 1, 2))) is not None  # colors form an AP on an AP
    assert find_residue_triple(Coloring(3, (0, 0, 1))) is None


def test_string_round_trip():
    c = Coloring(5, (0, 4, 3, 1))
    assert Coloring.from_string(c.to_string(), 5) == c
    x = IntegerSet((0, 3, 5))
    assert IntegerSet.from_string(x.to_string()) == x


def test_malformed_certificates():
    spec = ProblemSpec.mixed(3, 3)
    with pytest.raises(CertificateError):
        check_witness(spec, 5, Coloring(2, (0, 1)))
    with pytest.raises(CertificateError):
        check_witness(spec, 2, IntegerSet((1, 2)))
    with pytest.raises(CertificateError):
        verify_certificate(Certificate(spec, 9, Claim.EXTREMAL_ATTESTED, attestation={"x": 1}))
    with pytest.raises(ValueError):
        Coloring(2, (0, 2))


def test_gap_and_block_checks():
    g = ProblemSpec.gaps(3, 2)
    assert not check_witness(g, 3, IntegerSet((1, 4, 5))).clean
    assert check_witness(g, 3, IntegerSet((1, 2, 4))).clean
    m = ProblemSpec.blocks(3, 2)
    v = check_witness(m, 2, IntegerSet((0, 2))).violation
    assert v is None
    assert check_witness(m, 2, IntegerSet((0, 4))).violation.kind is ViolationKind.BLOCK
