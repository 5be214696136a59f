"""Polynomial invariants: matrices, identities, modes, negative control."""

import pytest

import conftest
from veerpoly import graphs, invariants
from veerpoly.laurent import (
    Laurent,
    normalize_unit,
    parse_render,
    render,
)


def test_matrix_shapes():
    tri, hm = conftest.load_named("FIX-B")
    ne, nf = len(tri.edges), len(tri.faces)
    assert invariants.edge_matrix(tri, hm).rows == ne
    assert invariants.edge_matrix(tri, hm).cols == ne
    lface = invariants.face_matrix(tri, hm)
    assert (lface.rows, lface.cols) == (ne, nf)
    lab = invariants.ab_matrix(tri, hm)
    assert (lab.rows, lab.cols) == (nf, nf)
    eps = invariants.epsilon_matrix(tri, hm)
    assert (eps.rows, eps.cols) == (ne, nf)


def test_polynomials_match_manifest():
    for name, entry in conftest.unique_entries():
        tri, hm = conftest.load(entry["file"])
        b = hm.b
        rep = invariants.compute_report(tri, hm)
        assert render(rep.veering) == entry["veering"], name
        assert render(rep.ab) == entry["ab"], name
        assert render(rep.taut.poly) == entry["taut"], name
        assert rep.taut.mode == entry["taut_mode"], name
        assert rep.factorization_ok, name
        assert rep.factorization_factor == entry["factorization_factor"], name
        got = sorted((c.k, list(c.g)) for c in rep.ab_cycles)
        want = sorted((c["k"], c["g"]) for c in entry["ab_cycles"])
        assert got == want, name
        assert all(
            rep.identities[k] for k in ("face_product", "face_sum", "ab_det")
        ), name


def test_veering_oracle_agrees():
    for name, entry in conftest.unique_entries()[:10]:
        tri, hm = conftest.load(entry["file"])
        raw = invariants.veering_polynomial(tri, hm, canonical=False)
        assert raw == invariants.perron_clique_oracle(tri, hm)


def test_oracle_cycle_cap():
    tri, hm = conftest.load("FIX-A.vt")
    with pytest.raises(graphs.CycleBudgetExceeded):
        invariants.perron_clique_oracle(tri, hm, cap=0)


def test_taut_modes_agree():
    for name in ("FIX-A", "FIX-B"):
        tri, hm = conftest.load_named(name)
        exact = invariants.taut_polynomial(tri, hm, mode="exact")
        assert exact.mode == "exact"
        assert exact.caveat == (hm.b == 1)
        full = invariants.taut_polynomial_full(tri, hm)
        assert normalize_unit(full) == exact.poly
        if hm.b >= 2:
            division = invariants.taut_polynomial(tri, hm, mode="division")
            assert division.poly == exact.poly
            assert division.mode == "division"


def test_b1_division_reports_caveat_and_factor():
    tri, hm = conftest.load_named("FIX-A")
    division = invariants.taut_polynomial(tri, hm, mode="division")
    assert division.caveat
    assert division.factor in ("1", "1-t", "1+t")
    exact = invariants.taut_polynomial(tri, hm, mode="exact")
    assert division.poly == exact.poly


def test_fix_a_known_values():
    tri, hm = conftest.load("FIX-A.vt")
    rep = invariants.compute_report(tri, hm)
    assert rep.veering == parse_render("a^3 - 4*a^2 + 4*a - 1", 1)
    assert rep.taut.poly == parse_render("a^2 - 3*a + 1", 1)
    assert rep.factorization_factor == "1-t"
    # the veering polynomial factors as (a - 1) * taut here
    assert rep.veering == normalize_unit(
        rep.taut.poly * parse_render("a - 1", 1)
    )


def test_minor_budget_exceeded():
    tri, hm = conftest.load_named("FIX-B")
    with pytest.raises(invariants.MinorBudgetExceeded) as exc:
        invariants.taut_polynomial_full(tri, hm, minor_budget=1)
    assert exc.value.count > exc.value.budget == 1
    with pytest.raises(invariants.MinorBudgetExceeded):
        invariants.taut_polynomial(tri, hm, mode="exact", minor_budget=1)


def test_check_factorization_rejects_wrong_theta():
    tri, hm = conftest.load("FIX-A.vt")
    v = invariants.veering_polynomial(tri, hm, canonical=False)
    vab, _ = invariants.ab_polynomial(tri, hm)
    bogus = parse_render("a + 5", 1)
    ok, factor = invariants.check_factorization(v, vab, bogus, hm.b)
    assert not ok and factor is None


def test_negative_control_flipped_veer_breaks_identities():
    # bypass validation deliberately: rebuild the triangulation, flip one
    # veer label after construction, then re-derive the matrices; the
    # corruption must be detected, either as falsified identities or as
    # a broken model invariant inside the derivation
    from veerpoly import homology, trimodel

    base, _ = conftest.load("FIX-A.vt")
    tri = trimodel.Triangulation(base.gluings, base.coorientations)
    hm = homology.homology_basis(tri)
    e = min(tri.veers)
    tri.veers[e] = "L" if tri.veers[e] == "R" else "R"
    try:
        verdicts = invariants.structural_identities(tri, hm)
    except AssertionError:
        return  # detected while rebuilding the face permutation
    assert not (
        verdicts["face_product"]
        and verdicts["face_sum"]
        and verdicts["ab_det"]
    )


def test_negative_control_global_veer_swap_fails_identity_b():
    # swapping L and R everywhere keeps the face permutation well
    # defined but changes it, so the column identities must falsify
    from veerpoly import homology, trimodel

    base, _ = conftest.load_named("FIX-B")
    tri = trimodel.Triangulation(base.gluings, base.coorientations)
    hm = homology.homology_basis(tri)
    for e in list(tri.veers):
        tri.veers[e] = "L" if tri.veers[e] == "R" else "R"
    verdicts = invariants.structural_identities(tri, hm)
    assert not verdicts["face_sum"] or not verdicts["face_product"]
    assert verdicts["details"]


def test_epsilon_times_report_is_consistent():
    # identity (a) restated directly on one fixture
    tri, hm = conftest.load_named("FIX-C")
    lface = invariants.face_matrix(tri, hm)
    lab = invariants.ab_matrix(tri, hm)
    ledge = invariants.edge_matrix(tri, hm)
    eps = invariants.epsilon_matrix(tri, hm)
    assert lface.matmul(lab) == ledge.matmul(eps)
