"""Validation-layer tests for the triangulation model."""

import pytest

import conftest
from veerpoly import trimodel
from veerpoly.trimodel import (
    CoorientationMismatch,
    GluingNotInvolutive,
    NotOriented,
    Triangulation,
    ValidationError,
    VeerSlotConflict,
    opposite_pair,
    pair_of,
    perm_inverse,
    perm_sign,
)


def fix_a_parts():
    tri, _ = conftest.load("FIX-A.vt")
    gluings = [[list(g) for g in tet] for tet in tri.gluings]
    coor = [list(s) for s in tri.coorientations]
    return gluings, coor, tri


def test_helpers():
    assert pair_of(3, 1) == (1, 3)
    assert opposite_pair((0, 2)) == (1, 3)
    assert perm_sign((0, 1, 2, 3)) == 1
    assert perm_sign((1, 0, 2, 3)) == -1
    p = (2, 0, 3, 1)
    inv = perm_inverse(p)
    assert all(inv[p[i]] == i for i in range(4))


def test_fix_a_counts_and_veers():
    _, _, tri = fix_a_parts()
    assert tri.stats() == {"tetrahedra": 2, "edges": 2, "faces": 4}
    assert sorted(tri.veers.values()) == ["L", "R"]
    # inferred veers agree with the stored ones
    assert tri._infer_veers() == tri.veers


def test_fan_sides_nonempty():
    for name, entry in conftest.unique_entries()[:6]:
        tri, _ = conftest.load(entry["file"])
        for e in trimodel.edge_fans(tri):
            assert len(e.sides[0]) >= 1 and len(e.sides[1]) >= 1


def test_derived_accessors():
    _, _, tri = fix_a_parts()
    for t in range(tri.n):
        assert len(tri.side_pairs(t)) == 4
        targets = tri.tet_relation_targets(t)
        assert len(targets) == 3
        assert targets[0] == (t, tri.top_edge[t])
    # bottom-edge map is a bijection onto the edge classes
    assert {tri.bottom_edge_class(t) for t in range(tri.n)} == {
        e.index for e in tri.edges
    }


def test_gluing_not_involutive():
    gluings, coor, _ = fix_a_parts()
    t2, f2, p = gluings[0][0]
    gluings[t2][f2] = [0, 0, list(range(4))]  # partner no longer glues back
    with pytest.raises(GluingNotInvolutive):
        Triangulation(gluings, coor)


def test_not_oriented_on_even_permutation():
    gluings, coor, _ = fix_a_parts()
    t2, f2, p = gluings[0][0]
    q = list(p)
    others = [i for i in range(4) if i != 0 and q[i] != f2]
    q[others[0]], q[others[1]] = q[others[1]], q[others[0]]
    gluings[0][0] = [t2, f2, q]
    gluings[t2][f2] = [0, 0, list(perm_inverse(q))]
    with pytest.raises(NotOriented):
        Triangulation(gluings, coor)


def test_coorientation_mismatch():
    gluings, coor, _ = fix_a_parts()
    coor[0] = [-s for s in coor[0]]  # glued faces now share signs
    with pytest.raises(CoorientationMismatch):
        Triangulation(gluings, coor)


def test_bad_sign_count():
    gluings, coor, _ = fix_a_parts()
    coor[0] = [1, 1, 1, -1]
    with pytest.raises(ValidationError):
        Triangulation(gluings, coor)


def test_veer_slot_conflict():
    gluings, coor, tri = fix_a_parts()
    wrong = {e: ("L" if v == "R" else "R") for e, v in tri.veers.items()}
    wrong[0] = tri.veers[0]  # one edge right, one flipped: model violated
    with pytest.raises(ValidationError):
        Triangulation(gluings, coor, veers=wrong)
    # per-slot labels that disagree within one edge class
    e = tri.edges[0]
    slot_labels = {e.slots[0]: "L", e.slots[1]: "R"}
    with pytest.raises(VeerSlotConflict):
        Triangulation(gluings, coor, veers=slot_labels)


def test_validate_wrapper():
    gluings, coor, _ = fix_a_parts()
    tri = trimodel.validate(gluings, coor)
    assert tri.n == 2
