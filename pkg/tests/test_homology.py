"""Smith normal form and homology-model tests."""

import random
from fractions import Fraction

import pytest

import conftest
from veerpoly import homology
from veerpoly.homology import (
    NotClosed,
    NotIncident,
    SwitchConditionViolated,
    chain_class,
    cycle_class,
    homology_basis,
    smith_normal_form,
    weight_class,
)


def _int_det(m):
    m = [list(map(Fraction, row)) for row in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] * inv
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


def _mat_mul(a, b):
    return [
        [sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
        for i in range(len(a))
    ]


@pytest.mark.parametrize(
    "m, expected",
    [
        ([[2, 4], [6, 8]], [2, 4]),
        ([[1, 0], [0, 1]], [1, 1]),
        ([[0, 0], [0, 0]], [0, 0]),
        ([[2, 0, 0], [0, 3, 0]], [1, 6]),
        ([[6, 4], [4, 6]], [2, 10]),
    ],
)
def test_snf_known_values(m, expected):
    diag, U, Uinv, V = smith_normal_form(m)
    assert diag == expected
    # U M V is the diagonal matrix
    prod = _mat_mul(_mat_mul(U, m), V)
    for i in range(len(m)):
        for j in range(len(m[0])):
            assert prod[i][j] == (diag[i] if i == j else 0)
    # transforms are unimodular and Uinv really inverts U
    assert abs(_int_det(U)) == 1
    assert abs(_int_det(V)) == 1
    ident = _mat_mul(U, Uinv)
    assert all(
        ident[i][j] == (1 if i == j else 0)
        for i in range(len(U))
        for j in range(len(U))
    )
    # divisibility chain
    for a, b in zip(diag, diag[1:]):
        assert b == 0 or (a != 0 and b % a == 0)


def test_snf_random_roundtrip():
    rng = random.Random(7)
    for _ in range(15):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        m = [[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)]
        diag, U, Uinv, V = smith_normal_form(m)
        prod = _mat_mul(_mat_mul(U, m), V)
        for i in range(rows):
            for j in range(cols):
                want = diag[i] if i == j and i < len(diag) else 0
                assert prod[i][j] == want
        assert abs(_int_det(U)) == 1
        assert abs(_int_det(V)) == 1


def test_betti_and_torsion_match_manifest():
    for name, entry in conftest.unique_entries():
        tri, hm = conftest.load(entry["file"])
        assert hm.b == entry["b"], name
        assert list(hm.torsion) == entry["torsion"], name


def test_basis_chains_hit_standard_basis():
    for name, entry in conftest.unique_entries():
        tri, hm = conftest.load(entry["file"])
        for i, chain in enumerate(hm.basis_chains):
            want = tuple(1 if j == i else 0 for j in range(hm.b))
            assert chain_class(hm, chain) == want


def test_cycle_class_rotation_invariance():
    tri, hm = conftest.load("FIX-A.vt")
    from veerpoly import graphs

    cycles = graphs.simple_cycles(hm.dual.nvertices, hm.dual.edges)
    assert cycles
    for cyc in cycles:
        base = cycle_class(hm, cyc)
        for k in range(1, len(cyc)):
            assert cycle_class(hm, cyc[k:] + cyc[:k]) == base


def test_cycle_class_rejects_open_paths():
    tri, hm = conftest.load_named("FIX-B")
    dual = hm.dual
    # two edges that do not close up
    for f1 in range(len(dual.edges)):
        for f2 in range(len(dual.edges)):
            a, b = dual.edges[f1], dual.edges[f2]
            if a[1] == b[0] and not (b[1] == a[0]):
                with pytest.raises(NotClosed):
                    cycle_class(hm, [f1, f2])
                return
    pytest.skip("no open two-edge path in this dual graph")


def test_path_label_not_incident():
    tri, hm = conftest.load("FIX-A.vt")
    with pytest.raises(NotIncident):
        homology.path_label(hm, tri, 99, (0, 1))


def test_weight_class_fix_a_fiber():
    tri, hm = conftest.load("FIX-A.vt")
    w = [Fraction(1, 2)] * len(tri.faces)
    assert weight_class(hm, tri, w) == (Fraction(1),)


def test_weight_class_rejects_switch_violation():
    tri, hm = conftest.load("FIX-A.vt")
    w = [Fraction(1)] + [Fraction(0)] * (len(tri.faces) - 1)
    with pytest.raises(SwitchConditionViolated):
        weight_class(hm, tri, w)


def test_tree_choice_changes_basis_by_gl_b_z():
    for name in ("FIX-A", "FIX-B", "FIX-C"):
        tri, hm = conftest.load_named(name)
        nf = len(tri.faces)
        hm2 = homology_basis(
            tri, root=tri.n - 1, edge_order=list(range(nf))[::-1]
        )
        assert (hm2.b, list(hm2.torsion)) == (hm.b, list(hm.torsion))
        if hm.b == 0:
            continue
        # transition matrix: columns are the old classes of the new basis
        cols = [chain_class(hm, ch) for ch in hm2.basis_chains]
        M = [[cols[j][i] for j in range(hm.b)] for i in range(hm.b)]
        assert abs(_int_det(M)) == 1
