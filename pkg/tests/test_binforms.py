from math import gcd, isqrt

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zariski.binforms import (BinaryEvenForm, ClassicalForm, classical_reduce, compose, enumerate_even_classes,
                              gl2_reduce, is_gl2_reduced, is_sl2_reduced, principal_form, sl2_fiber_size,
                              sl2_reduce)
from zariski.cm import reduced_forms

DETS = range(1, 501)


def _naive_gl2_window(d):
    out = []
    for a in range(2, 2 * isqrt(d) + 3, 2):
        for b in range(0, a // 2 + 1):
            if (d + b * b) % a:
                continue
            c = (d + b * b) // a
            if c % 2 == 0 and c >= a:
                out.append(BinaryEvenForm(a, b, c))
    return sorted(out)


def _naive_sl2_window(d):
    out = []
    for a in range(2, 2 * isqrt(d) + 3, 2):
        for b in range(-a // 2, a // 2 + 1):
            if not -a < 2 * b <= a or (d + b * b) % a:
                continue
            c = (d + b * b) // a
            if c % 2 == 0 and c >= a and (a != c or b >= 0):
                out.append(BinaryEvenForm(a, b, c))
    return out


def test_enumeration_matches_naive_window():
    for d in DETS:
        assert enumerate_even_classes(d) == _naive_gl2_window(d), d


def test_sl2_fibers_match_window_count():
    for d in DETS:
        assert sum(sl2_fiber_size(f) for f in enumerate_even_classes(d)) == len(_naive_sl2_window(d)), d


@pytest.mark.parametrize("d,expected", [
    (55, [(2, 1, 28), (4, 1, 14), (8, 3, 8)]),
    (204, [(2, 0, 102), (4, 2, 52), (6, 0, 34), (10, 4, 22), (12, 6, 20)]),
])
def test_enumeration_examples(d, expected):
    got = [(f.a, f.b, f.c) for f in enumerate_even_classes(d)]
    for t in expected:
        assert t in got
    assert all(f.det == d for f in enumerate_even_classes(d))


def test_reduction_examples():
    assert gl2_reduce(BinaryEvenForm(8, -3, 8)) == BinaryEvenForm(8, 3, 8)
    assert sl2_reduce(BinaryEvenForm(4, -1, 14)) == BinaryEvenForm(4, -1, 14)
    assert sl2_reduce(BinaryEvenForm(14, 1, 4)) == BinaryEvenForm(4, -1, 14)
    assert sl2_fiber_size(BinaryEvenForm(4, 1, 14)) == 2
    assert sl2_fiber_size(BinaryEvenForm(8, 3, 8)) == 1


def test_rejects_bad_forms():
    with pytest.raises(ValueError):
        BinaryEvenForm(3, 0, 2)
    with pytest.raises(ValueError):
        BinaryEvenForm(2, 3, 2)
    with pytest.raises(ValueError):
        sl2_fiber_size(BinaryEvenForm(14, 1, 4))


def _transform(f, P):
    (p, q), (r, s) = P
    a, b, c = f.a, f.b, f.c
    # P^T G P for G = [[a, b], [b, c]]
    na = a * p * p + 2 * b * p * r + c * r * r
    nb = a * p * q + b * (p * s + q * r) + c * r * s
    nc = a * q * q + 2 * b * q * s + c * s * s
    return BinaryEvenForm(na, nb, nc)


def matrices(det_values):
    r = range(-4, 5)
    return st.sampled_from([((p, q), (u, v)) for p in r for q in r for u in r for v in r
                            if p * v - q * u in det_values])


even_forms = st.tuples(st.integers(1, 20), st.integers(-15, 15), st.integers(1, 20)).filter(
    lambda t: 4 * t[0] * t[2] > t[1] ** 2).map(lambda t: BinaryEvenForm(2 * t[0], t[1], 2 * t[2]))


@settings(max_examples=200, deadline=None)
@given(even_forms, matrices({1}))
def test_sl2_reduction_is_invariant(f, P):
    g = sl2_reduce(f)
    assert is_sl2_reduced(g)
    assert sl2_reduce(g) == g
    assert sl2_reduce(_transform(f, P)) == g


@settings(max_examples=200, deadline=None)
@given(even_forms, matrices({1, -1}))
def test_gl2_reduction_is_invariant(f, P):
    g = gl2_reduce(f)
    assert is_gl2_reduced(g)
    assert gl2_reduce(_transform(f, P)) == g
    assert g in enumerate_even_classes(f.det)


# classical forms ------------------------------------------------------------

DISCS = [-55, -23, -47, -71, -84, -104, -420, -3, -4]


def _classical_transform(f, P):
    (p, q), (r, s) = P
    a, b, c = f.a, f.b, f.c
    val = lambda x, y: a * x * x + b * x * y + c * y * y  # noqa: E731
    return ClassicalForm(val(p, r), 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s, val(q, s))


_SL2_SMALL = [((p, q), (r, s)) for p in range(-3, 4) for q in range(-3, 4) for r in range(-3, 4)
              for s in range(-3, 4) if p * s - q * r == 1]


def _dirichlet(f, g):
    """Composition through united forms, found by brute force."""
    D = f.disc
    for P in _SL2_SMALL:
        g2 = _classical_transform(g, P)
        if gcd(gcd(f.a, g2.a), (f.b + g2.b) // 2) != 1:
            continue
        a = f.a * g2.a
        for B in range(-2 * a, 2 * a + 1):
            if (B - f.b) % (2 * f.a) == 0 and (B - g2.b) % (2 * g2.a) == 0 and (B * B - D) % (4 * a) == 0:
                return classical_reduce(ClassicalForm(a, B, (B * B - D) // (4 * a)))
    raise AssertionError("no united pair found")


@pytest.mark.parametrize("D", DISCS)
def test_compose_matches_dirichlet(D):
    forms = reduced_forms(D)
    for f in forms:
        for g in forms:
            assert compose(f, g) == _dirichlet(f, g)


def test_group_axioms_on_minus_55():
    forms = reduced_forms(-55)
    e = principal_form(-55)
    S = set(forms)
    for f in forms:
        assert compose(f, e) == f
        assert compose(f, f.inverse()) == e
        for g in forms:
            assert compose(f, g) in S
            assert compose(f, g) == compose(g, f)
            for h in forms:
                assert compose(compose(f, g), h) == compose(f, compose(g, h))


@pytest.mark.parametrize("D,h", [(-3, 1), (-4, 1), (-23, 3), (-55, 4), (-84, 4), (-420, 8), (-71, 7)])
def test_class_numbers(D, h):
    assert len(reduced_forms(D)) == h


def test_classical_reduce_example():
    assert classical_reduce(ClassicalForm(14, 27, 14)) == ClassicalForm(1, 1, 14)
    assert classical_reduce(ClassicalForm(7, -2, 2)).is_reduced()


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(DISCS), st.sampled_from(_SL2_SMALL), st.integers(0, 10))
def test_classical_reduce_is_canonical(D, P, k):
    forms = reduced_forms(D)
    f = forms[k % len(forms)]
    assert classical_reduce(_classical_transform(f, P)) == f


def test_compose_rejects_mixed_discriminants():
    with pytest.raises(ValueError):
        compose(principal_form(-55), principal_form(-23))
