"""Produce the bundled fixtures and their manifest of expected values.

Every fixture comes from the exhaustive small search (search_small.py);
the distinguished ones get aliases:

* FIX-A: the 2-tetrahedron, torsion-free fixture (also importable from
  the taut signature cPcbbbiht_12; the bundled FIX-A.vt is the decoded
  form and is isomorphic to its search twin).
* FIX-B: the least fixture with b >= 2.
* FIX-C: the least nonlayered fixture.

Bundled: every class with at most 4 tetrahedra, plus the nonlayered
classes with 5 (the exhaustive search shows none smaller exist).

Expected values are recomputed here through algorithm-independent
routes before being frozen:

* b and torsion: sympy's Smith normal form (invariant factors) of the
  same boundary matrix, vs the library's hand-rolled SNF.
* veering polynomial: sympy symbolic determinant, vs the library's
  fraction-free eliminations and its clique-polynomial route.
* layeredness: Fourier-Motzkin elimination over exact rationals, vs
  the library's simplex; certificates re-verified directly.
* direction generators: networkx simple-cycle enumeration, vs the
  library's own enumerator.

Usage: python3 make_manifest.py [MAXN]
"""

import json
import os
import sys
from fractions import Fraction

sys.path.insert(
    0, os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "..", "src")
)

import networkx as nx  # noqa: E402
import sympy  # noqa: E402

import search_small as ss  # noqa: E402
from veerpoly import (  # noqa: E402
    cones,
    homology,
    ingest,
    invariants,
    trimodel,
)
from veerpoly.laurent import render  # noqa: E402

FIXDIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..")


# -- independent routes ------------------------------------------------------------


def sympy_homology(tri):
    """Invariant factors of the sector boundary matrix via sympy."""
    dual = None
    hm = homology.homology_basis(tri)
    rows = len(hm.nontree)
    index_of = {ei: j for j, ei in enumerate(hm.nontree)}
    M = sympy.zeros(rows, len(hm.sectors))
    for j, sec in enumerate(hm.sectors):
        for f in sec.sides[0]:
            if f in index_of:
                M[index_of[f], j] += 1
        for f in sec.sides[1]:
            if f in index_of:
                M[index_of[f], j] -= 1
    if rows == 0:
        return 0, []
    from sympy.matrices.normalforms import smith_normal_form

    factors = [int(abs(x)) for x in smith_normal_form(M).diagonal()]
    rank = sum(1 for d in factors if d)
    return rows - rank, sorted(d for d in factors if d > 1)


def laurent_to_sympy(p, gens):
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        term = sympy.Integer(c)
        for g, k in zip(gens, e):
            term *= g ** k
        expr += term
    return expr


def sympy_veering(tri, hm):
    gens = sympy.symbols(f"x0:{max(hm.b, 1)}")
    lmat = invariants.edge_matrix(tri, hm)
    M = sympy.zeros(lmat.rows, lmat.cols)
    for i in range(lmat.rows):
        for j in range(lmat.cols):
            M[i, j] = laurent_to_sympy(lmat[i, j], gens)
    return sympy.expand(M.det())


def fourier_motzkin_layered(gens, b):
    """Feasibility of {eta . g >= 1 for all g} by Fourier-Motzkin."""
    # rows: (a_1..a_b | c) meaning a . eta >= c
    rows = [[Fraction(x) for x in g] + [Fraction(1)] for g in gens]
    for var in range(b):
        pos = [r for r in rows if r[var] > 0]
        neg = [r for r in rows if r[var] < 0]
        zer = [r for r in rows if r[var] == 0]
        new = list(zer)
        for p in pos:
            for q in neg:
                scale_p, scale_q = -q[var], p[var]
                new.append(
                    [
                        scale_p * a + scale_q * c
                        for a, c in zip(p, q)
                    ]
                )
        rows = new
    # all variables eliminated: rows are 0 >= c
    return all(r[-1] <= 0 for r in rows)


def nx_direction_generators(tri, hm):
    g = nx.MultiDiGraph()
    g.add_nodes_from(range(tri.n))
    for f, fc in enumerate(tri.faces):
        g.add_edge(fc.tet_below, fc.tet_above, face=f)
    out = set()
    for cyc in nx.simple_cycles(g):
        # expand node cycles into all face choices between consecutive tets
        k = len(cyc)
        choices = [[] for _ in range(k)]
        for i in range(k):
            a, b = cyc[i], cyc[(i + 1) % k]
            choices[i] = [d["face"] for d in g.get_edge_data(a, b).values()]
        stack = [[]]
        for ch in choices:
            stack = [s + [f] for s in stack for f in ch]
        for faces in stack:
            out.add(cones.primitive(homology.cycle_class(hm, faces)))
    return sorted(out)


# -- manifest construction -----------------------------------------------------------


def ab_cycle_json(rep):
    return [{"k": c.k, "g": list(c.g)} for c in rep.ab_cycles]


def analyze(tri):
    hm = homology.homology_basis(tri)
    rep = invariants.compute_report(tri, hm)
    verdict = cones.is_layered(tri, hm)
    gens = verdict.generators
    entry = {
        "tets": tri.n,
        "b": hm.b,
        "torsion": list(hm.torsion),
        "veering": render(rep.veering),
        "taut": render(rep.taut.poly),
        "taut_mode": rep.taut.mode,
        "ab": render(rep.ab),
        "ab_cycles": ab_cycle_json(rep),
        "factorization_factor": rep.factorization_factor,
        "layered": verdict.layered,
        "direction_generators": [list(g) for g in gens],
    }
    if len(tri.faces) <= cones.DD_FACE_BUDGET and hm.b <= 3:
        cc = cones.carried_cone(tri, hm)
        entry["carried_rays"] = [list(r) for r in cc.rays]
    # cross-checks through independent algorithms
    b2, tor2 = sympy_homology(tri)
    assert (b2, tor2) == (hm.b, list(hm.torsion)), "sympy homology disagrees"
    gens_sym = sympy.symbols(f"x0:{max(hm.b, 1)}")
    det_lib = laurent_to_sympy(
        invariants.veering_polynomial(tri, hm, canonical=False), gens_sym
    )
    assert sympy.expand(det_lib - sympy_veering(tri, hm)) == 0, (
        "sympy determinant disagrees"
    )
    oracle = invariants.perron_clique_oracle(tri, hm)
    assert oracle == invariants.veering_polynomial(tri, hm, canonical=False)
    assert fourier_motzkin_layered(gens, hm.b) == verdict.layered, (
        "Fourier-Motzkin layeredness disagrees"
    )
    assert nx_direction_generators(tri, hm) == gens, (
        "networkx cycle classes disagree"
    )
    if verdict.layered:
        assert all(w > 0 for w in verdict.weights)
        homology.check_switch_conditions(tri, verdict.weights)
        assert all(
            sum(e * x for e, x in zip(verdict.eta, g)) >= 1 for g in gens
        )
    return entry


def main():
    maxn = int(sys.argv[1]) if len(sys.argv) > 1 else 4
    raw = ss.Searcher(maxn).run()
    reps = {}
    for gluings, signs in raw:
        try:
            tri = trimodel.Triangulation(gluings, signs)
        except trimodel.ValidationError:
            continue
        key = ss.canonical_key(gluings, signs)
        reps.setdefault(key, (gluings, signs, tri))
    ordered = sorted(
        reps.items(), key=lambda kv: (kv[1][2].n, kv[0])
    )

    # FIX-A: regenerate from the decoder and locate its search twin
    doc_a = ingest.import_taut_isosig("cPcbbbiht_12")
    tri_a = ingest.to_triangulation(doc_a)
    key_a = ss.canonical_key(
        [list(t) for t in tri_a.gluings], [tuple(s) for s in tri_a.coorientations]
    )
    with open(os.path.join(FIXDIR, "FIX-A.vt"), "w", encoding="utf-8") as fh:
        fh.write(ingest.serialize_vt(ingest.from_triangulation(tri_a)))

    manifest = {"search_maxn": maxn, "fixtures": {}}
    fix_b_name = fix_c_name = None
    bundled = []
    for key, (gluings, signs, tri) in ordered:
        entry = analyze(tri)
        if tri.n <= 4 or not entry["layered"]:
            bundled.append((key, tri, entry))
    for i, (key, tri, entry) in enumerate(bundled):
        name = f"S{i:02d}"
        if key == key_a:
            entry["alias"] = "FIX-A"
            entry["signature"] = "cPcbbbiht_12"
        if fix_b_name is None and entry["b"] >= 2:
            fix_b_name = name
            entry["alias"] = "FIX-B"
        if fix_c_name is None and not entry["layered"]:
            fix_c_name = name
            entry["alias"] = "FIX-C"
        path = os.path.join(FIXDIR, f"{name}.vt")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(ingest.serialize_vt(ingest.from_triangulation(tri)))
        entry["file"] = f"{name}.vt"
        manifest["fixtures"][name] = entry
        print(
            f"{name}: n={entry['tets']} b={entry['b']} "
            f"torsion={entry['torsion']} layered={entry['layered']}"
            + (f" [{entry.get('alias')}]" if "alias" in entry else "")
        )

    # FIX-A as its own decoded file (labeling differs from its twin)
    entry = analyze(tri_a)
    entry["file"] = "FIX-A.vt"
    entry["signature"] = "cPcbbbiht_12"
    manifest["fixtures"]["FIX-A"] = entry
    if fix_b_name:
        manifest["fixtures"]["FIX-B"] = dict(
            manifest["fixtures"][fix_b_name]
        )
    if fix_c_name:
        manifest["fixtures"]["FIX-C"] = dict(
            manifest["fixtures"][fix_c_name]
        )
    with open(
        os.path.join(FIXDIR, "manifest.json"), "w", encoding="utf-8"
    ) as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote manifest with {len(manifest['fixtures'])} entries")


if __name__ == "__main__":
    main()
