"""Unit and property tests for the exact multivariate Laurent ring."""

import pytest
from hypothesis import given, settings, strategies as st

from veerpoly.laurent import (
    Inexact,
    Laurent,
    LaurentMatrix,
    all_minors_gcd,
    det_laurent,
    div_exact,
    divides,
    gcd_laurent,
    normalize_unit,
    parse_render,
    render,
    specialize,
    substitute,
)


def laurents(nvars, max_terms=4, max_coeff=5, max_exp=3):
    exps = st.tuples(*[st.integers(-max_exp, max_exp)] * nvars)
    coeffs = st.integers(-max_coeff, max_coeff)
    return st.dictionaries(exps, coeffs, max_size=max_terms).map(
        lambda d: Laurent(nvars, d)
    )


small = laurents(2)


@given(small, small, small)
@settings(deadline=None)
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert (p + q) + r == p + (q + r)
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p + (-p) == Laurent.zero(2)
    assert p * Laurent.one(2) == p
    assert p - q == p + (-q)


@given(small)
@settings(deadline=None)
def test_pow_and_shift(p):
    assert p ** 2 == p * p
    assert p ** 0 == Laurent.one(2)
    shifted = p.shift((1, -2))
    assert shifted == p * Laurent.monomial(2, (1, -2))


def test_units():
    m = Laurent.monomial(2, (3, -1), -1)
    assert m.is_unit()
    assert not Laurent.const(2, 2).is_unit()
    assert not Laurent.zero(2).is_unit()


@given(small)
@settings(deadline=None)
def test_normalize_unit_idempotent_and_unit_invariant(p):
    n = normalize_unit(p)
    assert normalize_unit(n) == n
    for unit in (
        Laurent.monomial(2, (2, -1)),
        Laurent.monomial(2, (0, 3), -1),
        Laurent.const(2, -1),
    ):
        assert normalize_unit(p * unit) == n
    if not p.is_zero():
        assert n.min_exponent() == (0, 0)


@given(small, small)
@settings(deadline=None)
def test_div_exact_inverts_multiplication(p, q):
    if q.is_zero():
        return
    assert div_exact(p * q, q) == p
    assert divides(q, p * q)


def test_div_exact_inexact():
    p = parse_render("a^2 + b", 2)
    q = parse_render("a + 1", 2)
    assert not divides(q, p)
    with pytest.raises(Inexact):
        div_exact(p, q)


@given(small, small, laurents(2, max_terms=2, max_exp=1))
@settings(deadline=None, max_examples=25)
def test_gcd_divides_and_absorbs_common_factor(p, q, r):
    if p.is_zero() and q.is_zero():
        with pytest.raises(ValueError):
            gcd_laurent(p, q)
        return
    g = gcd_laurent(p, q)
    assert divides(g, p) and divides(g, q)
    if not (r.is_zero() or p.is_zero() or q.is_zero()):
        assert divides(r, gcd_laurent(p * r, q * r))


@given(laurents(1) | laurents(2) | laurents(3))
@settings(deadline=None)
def test_render_parse_roundtrip(p):
    assert parse_render(render(p), p.nvars) == p


def test_render_examples():
    p = parse_render("a^2 - 3*a + 1", 1)
    assert p.terms == {(2,): 1, (1,): -3, (0,): 1}
    assert render(p) == "a^2 - 3*a + 1"
    assert render(Laurent.zero(2)) == "0"
    assert render(Laurent.monomial(2, (1, -1))) == "a*b^-1"


@given(small, small, st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
@settings(deadline=None)
def test_specialize_is_a_ring_map(p, q, alpha):
    a = list(alpha)
    assert specialize(p + q, a) == specialize(p, a) + specialize(q, a)
    assert specialize(p * q, a) == specialize(p, a) * specialize(q, a)
    assert specialize(Laurent.one(2), a) == Laurent.one(1)


@given(small)
@settings(deadline=None)
def test_substitute_identity_and_composition(p):
    ident = [[1, 0], [0, 1]]
    assert substitute(p, ident) == p
    m1 = [[1, 1], [0, 1]]
    m2 = [[1, 0], [2, 1]]
    comp = [
        [sum(m1[i][k] * m2[k][j] for k in range(2)) for j in range(2)]
        for i in range(2)
    ]
    assert substitute(substitute(p, m2), m1) == substitute(p, comp)


def _mat(nvars, rows):
    m = LaurentMatrix(len(rows), len(rows[0]), nvars)
    for i, row in enumerate(rows):
        for j, text in enumerate(row):
            m[i, j] = parse_render(text, nvars)
    return m


def test_det_identity_permutation_singular():
    one, zero = "1", "0"
    ident = _mat(1, [[one, zero], [zero, one]])
    assert det_laurent(ident) == Laurent.one(1)
    perm = _mat(1, [[zero, one], [one, zero]])
    assert det_laurent(perm) == Laurent.const(1, -1)
    sing = _mat(1, [["a", "a"], ["1", "1"]])
    assert det_laurent(sing).is_zero()


def test_det_cross_route_on_laurent_entries():
    m = _mat(2, [
        ["a - 1", "b", "0"],
        ["a*b^-1", "2", "1"],
        ["0", "b - 1", "a + b"],
    ])
    # expand along the last column by hand and compare
    minor0 = _mat(2, [["a - 1", "b"], ["0", "b - 1"]])
    minor2 = _mat(2, [["a - 1", "b"], ["a*b^-1", "2"]])
    expected = (
        -det_laurent(minor0) + det_laurent(minor2) * parse_render("a + b", 2)
    )
    assert det_laurent(m) == expected


def test_all_minors_gcd():
    # 2x2 minors: (a-1)^2, (a-1)^2, (a^2-1)(a-1); their gcd is (a-1)^2
    m = _mat(1, [["a - 1", "a^2 - 1", "0"], ["0", "a - 1", "a - 1"]])
    g = all_minors_gcd(m, 2, budget=100)
    assert normalize_unit(g) == normalize_unit(parse_render("a^2 - 2*a + 1", 1))


def test_matmul_shapes_and_values():
    a = _mat(1, [["a", "1"], ["0", "a"]])
    b = _mat(1, [["1", "a"], ["a", "0"]])
    prod = a.matmul(b)
    assert prod[0, 0] == parse_render("2*a", 1)
    assert prod[0, 1] == parse_render("a^2", 1)
    assert prod[1, 0] == parse_render("a^2", 1)
    assert prod[1, 1].is_zero()
