"""Veering, taut, and AB polynomials of a veering triangulation.

Three matrices over the Laurent ring Z[x1..xb] (b = first Betti
number) are assembled from one labeling scheme h(t, e) = phi of the
ascending dual path p(t, e):

* L        (E x E)  column for tetrahedron t, placed at column index
                    b(t) (its bottom edge): unit at b(t) minus
                    x^h(t,e) at each e in {top, s1, s2}, the two sides
                    being those whose veer is opposite the top edge's.
                    Equals I - A^G for the labeled flow graph.
* L_face   (E x F)  column for face f (a bottom face of the tet t
                    above it, with edges {b(t), s, r}): unit at b(t)
                    minus x^h(t,s) at s minus x^h(t,r) at r.
* L_ab     (F x F)  I plus, for every face f, the entry x^phi(A(f))
                    in row A(f), column f, where A is the
                    anti-branching face permutation.

The veering polynomial is det(L); the taut polynomial is the gcd of
the E x E minors of a face-matrix presentation; the AB polynomial is
det(L_ab), which factors exactly as a product over the cycles of A.
Using a single labeling makes the structural identities hold on the
nose, not merely up to units:

  (a)  L_face . L_ab = L . eps        (eps = 0/1 bottom-edge matrix)
  (b)  L_face(f) + x^h(t, b(A(f))) . L_face(A(f)) = column of L at t
  (c)  det(L_ab) = prod over A-cycles of (1 + (-1)^(k+1) x^g)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from . import graphs as _graphs
from .homology import cycle_class, path_label, path_sum
from .laurent import (
    Inexact,
    Laurent,
    LaurentMatrix,
    all_minors_gcd,
    det_laurent,
    div_exact,
    normalize_unit,
    render,
)

MINOR_BUDGET_DEFAULT = 2_000_000
CYCLE_CAP_DEFAULT = 100_000


class InternalMismatch(AssertionError):
    """A structural identity failed where the theory guarantees it."""


class MinorBudgetExceeded(RuntimeError):
    def __init__(self, count, budget):
        super().__init__(
            f"{count} minors to evaluate, more than the budget {budget}"
        )
        self.count = count
        self.budget = budget


# -- matrix assembly -----------------------------------------------------------


def _label(hm, tri, t, pair):
    return Laurent.monomial(hm.b, path_label(hm, tri, t, pair))


def edge_matrix(tri, hm):
    """L = I - A^G: rows = edge classes, column of tetrahedron t placed
    at index bottom(t) (the bottom-edge map is a bijection)."""
    ne = len(tri.edges)
    m = LaurentMatrix(ne, ne, hm.b)
    for t in range(tri.n):
        col = tri.bottom_edge_class(t)
        m[col, col] = m[col, col] + Laurent.one(hm.b)
        for (_, pair) in tri.tet_relation_targets(t):
            row = tri.edge_of_slot[(t, pair)]
            m[row, col] = m[row, col] - _label(hm, tri, t, pair)
    return m


def _face_side_pairs(tri, f):
    """(tet above f, its two side-edge vertex pairs belonging to f)."""
    fc = tri.faces[f]
    ta, fa = fc.slot_above
    bpair = tri.bottom_edge[ta]
    pairs = [
        (i, j)
        for (i, j) in ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
        if i != fa and j != fa and (i, j) != bpair
    ]
    assert len(pairs) == 2
    return ta, pairs


def face_matrix(tri, hm):
    """L_face: one column per face class (its face relation)."""
    ne = len(tri.edges)
    nf = len(tri.faces)
    m = LaurentMatrix(ne, nf, hm.b)
    for f in range(nf):
        fc = tri.faces[f]
        m[fc.bottom_edge, f] = m[fc.bottom_edge, f] + Laurent.one(hm.b)
        ta, pairs = _face_side_pairs(tri, f)
        for pair in pairs:
            row = tri.edge_of_slot[(ta, pair)]
            m[row, f] = m[row, f] - _label(hm, tri, ta, pair)
    return m


def epsilon_matrix(tri, hm):
    """0/1 matrix sending face f to its tet's bottom edge b(f)."""
    m = LaurentMatrix(len(tri.edges), len(tri.faces), hm.b)
    for f, fc in enumerate(tri.faces):
        m[fc.bottom_edge, f] = Laurent.one(hm.b)
    return m


def ab_matrix(tri, hm, ab=None):
    """L_ab = I + A^G_F: entry x^phi(A(f)) at row A(f), column f."""
    if ab is None:
        ab = _graphs.ab_permutation(tri)
    nf = len(tri.faces)
    m = LaurentMatrix(nf, nf, hm.b)
    for f in range(nf):
        m[f, f] = Laurent.one(hm.b)
    for f, g in enumerate(ab.mapping):
        m[g, f] = m[g, f] + Laurent.monomial(hm.b, hm.phi[g])
    return m


# -- polynomials ------------------------------------------------------------------


def veering_polynomial(tri, hm, canonical=True):
    """det(L); canonical form unless ``canonical`` is False (the raw
    determinant equals the clique polynomial coefficient for
    coefficient)."""
    d = det_laurent(edge_matrix(tri, hm))
    return normalize_unit(d) if canonical else d


def perron_clique_oracle(tri, hm, fg=None, cap=CYCLE_CAP_DEFAULT):
    """Independent route to det(L): the clique polynomial of the
    labeled flow graph, 1 + sum over nonempty sets of vertex-disjoint
    simple cycles C of (-1)^|C| x^[C].

    Computed by a subset dynamic program over flow-graph vertex sets;
    raises CycleBudgetExceeded when the simple-cycle count passes
    ``cap``.
    """
    if fg is None:
        fg = _graphs.build_flow_graph(tri)
    nv = fg.nvertices
    pairs = [(fe.tail, fe.head) for fe in fg.edges]
    cycles = _graphs.simple_cycles(nv, pairs, cap=cap)
    # W[vertex mask] = sum over simple cycles on exactly that vertex set
    # of -x^class
    W = {}
    for cyc in cycles:
        mask = 0
        cls = [0] * hm.b
        for ei in cyc:
            fe = fg.edges[ei]
            mask |= 1 << fe.tail
            lab = path_sum(hm, fe.gamma_path)
            for i in range(hm.b):
                cls[i] += lab[i]
        mono = Laurent.monomial(hm.b, tuple(cls), -1)
        W[mask] = W.get(mask, Laurent(hm.b)) + mono
    masks_with = [[] for _ in range(nv)]
    for mask in W:
        low = (mask & -mask).bit_length() - 1
        masks_with[low].append(mask)
    memo = {0: Laurent.one(hm.b)}

    def f(mask):
        if mask in memo:
            return memo[mask]
        low = (mask & -mask).bit_length() - 1
        total = f(mask & (mask - 1))  # low vertex unused
        for cmask in masks_with[low]:
            if cmask & ~mask:
                continue
            total = total + W[cmask] * f(mask & ~cmask)
        memo[mask] = total
        return total

    return f((1 << nv) - 1)


@dataclass
class AbCycleData:
    faces: list  # face indices in permutation order
    k: int  # cycle length
    g: tuple  # homology class of the corresponding dual cycle
    sign: int  # (-1)^(k+1)


def ab_polynomial(tri, hm, ab=None):
    """(V_ab, cycle data): the exact product over A-cycles of
    (1 + (-1)^(k+1) x^g), internally cross-checked against det(L_ab)."""
    if ab is None:
        ab = _graphs.ab_permutation(tri)
    data = []
    prod = Laurent.one(hm.b)
    for cyc, gamma in zip(ab.cycles, ab.cycle_gamma_edges):
        k = len(cyc)
        g = cycle_class(hm, gamma)
        sign = 1 if k % 2 == 0 else -1
        sign = -sign  # (-1)^(k+1)
        data.append(AbCycleData(list(cyc), k, g, sign))
        prod = prod * (Laurent.one(hm.b) + Laurent.monomial(hm.b, g, sign))
    det = det_laurent(ab_matrix(tri, hm, ab))
    if det != prod:
        raise InternalMismatch(
            f"det(L_ab) = {render(det)} differs from the cycle product "
            f"{render(prod)}"
        )
    return prod, data


def _b1_candidates():
    one = Laurent.one(1)
    t = Laurent.monomial(1, (1,))
    return [("1", one), ("1-t", one - t), ("1+t", one + t)]


@dataclass
class TautResult:
    poly: Laurent  # canonical
    mode: str  # "exact" or "division"
    caveat: bool  # True when b = 1 (factorization needs a 1 +- t factor)
    factor: str = None  # division mode, b = 1: the candidate that worked


def reduced_face_presentation(tri, hm, ab=None):
    """Lemma-style reduced presentation [L_face(f_1)|...|L_face(f_c)|L]
    with one face (the least) per A-cycle."""
    if ab is None:
        ab = _graphs.ab_permutation(tri)
    lface = face_matrix(tri, hm)
    ledge = edge_matrix(tri, hm)
    cols = []
    for cyc in ab.cycles:
        cols.append([lface[i, cyc[0]] for i in range(lface.rows)])
    for j in range(ledge.cols):
        cols.append([ledge[i, j] for i in range(ledge.rows)])
    data = [[col[i] for col in cols] for i in range(lface.rows)]
    return LaurentMatrix(lface.rows, len(cols), hm.b, data)


def taut_polynomial(
    tri, hm, mode="auto", minor_budget=MINOR_BUDGET_DEFAULT
):
    """The taut polynomial, as a TautResult.

    exact:    gcd of all E x E minors of the reduced presentation.
    division: V / V_ab (valid for b >= 2); for b = 1 the three
              candidates V/V_ab, (1-t)V/V_ab, (1+t)V/V_ab are tried
              and the successful factor is reported with the caveat
              flag set.
    auto:     exact when the minor count fits the budget, else division.
    """
    if mode not in ("exact", "division", "auto"):
        raise ValueError(f"unknown mode {mode!r}")
    ab = _graphs.ab_permutation(tri)
    ne = len(tri.edges)
    if mode in ("exact", "auto"):
        red = reduced_face_presentation(tri, hm, ab)
        count = comb(red.cols, ne)
        if count <= minor_budget:
            g = all_minors_gcd(red, ne, minor_budget)
            poly = g if g is not None else Laurent(hm.b)
            return TautResult(poly, "exact", hm.b == 1)
        if mode == "exact":
            raise MinorBudgetExceeded(count, minor_budget)
    v = veering_polynomial(tri, hm, canonical=False)
    vab, _ = ab_polynomial(tri, hm, ab)
    if hm.b != 1:
        q = div_exact(normalize_unit(v), normalize_unit(vab))
        return TautResult(normalize_unit(q), "division", False)
    last = None
    for name, cand in _b1_candidates():
        try:
            q = div_exact(normalize_unit(v * cand), normalize_unit(vab))
            return TautResult(normalize_unit(q), "division", True, name)
        except Inexact as exc:
            last = exc
    raise Inexact(
        "no candidate factor in {1, 1-t, 1+t} makes V_ab divide V"
    ) from last


def taut_polynomial_full(tri, hm, minor_budget=MINOR_BUDGET_DEFAULT):
    """gcd of the E x E minors of the full E x 2E face matrix; agrees
    with the reduced presentation (cross-check route)."""
    lface = face_matrix(tri, hm)
    count = comb(lface.cols, lface.rows)
    if count > minor_budget:
        raise MinorBudgetExceeded(count, minor_budget)
    g = all_minors_gcd(lface, lface.rows, minor_budget)
    return g if g is not None else Laurent(hm.b)


# -- structural identities -------------------------------------------------------


def _column(m, j):
    return [m[i, j] for i in range(m.rows)]


def structural_identities(tri, hm):
    """Verdict record for the three exact identities; never raises."""
    verdicts = {}
    details = []
    ab = _graphs.ab_permutation(tri)
    lface = face_matrix(tri, hm)
    ledge = edge_matrix(tri, hm)
    lab = ab_matrix(tri, hm, ab)
    eps = epsilon_matrix(tri, hm)

    lhs = lface.matmul(lab)
    rhs = ledge.matmul(eps)
    verdicts["face_product"] = lhs == rhs
    if not verdicts["face_product"]:
        bad = [
            (i, j)
            for i in range(lhs.rows)
            for j in range(lhs.cols)
            if lhs[i, j] != rhs[i, j]
        ]
        details.append(f"face_product: first mismatch at {bad[0]}")

    ok = True
    for f, fc in enumerate(tri.faces):
        t = fc.tet_above
        af = ab.mapping[f]
        # the bottom edge of the tet above A(f), seen as an edge slot of t
        fc2 = tri.faces[af]
        t2, f2 = fc2.slot_above
        tb, fb, pback = tri.gluings[t2][f2]
        assert (tb, fb) == fc2.slot_below == (t, tri.faces[af].slot_below[1])
        bpair2 = tri.bottom_edge[t2]
        mapped = tuple(sorted((pback[bpair2[0]], pback[bpair2[1]])))
        mono = _label(hm, tri, t, mapped)
        col = [
            a + mono * b
            for a, b in zip(_column(lface, f), _column(lface, af))
        ]
        want = _column(ledge, tri.bottom_edge_class(t))
        if col != want:
            ok = False
            details.append(f"face_sum: fails at face {f}")
            break
    verdicts["face_sum"] = ok

    try:
        ab_polynomial(tri, hm, ab)
        verdicts["ab_det"] = True
    except InternalMismatch as exc:
        verdicts["ab_det"] = False
        details.append(f"ab_det: {exc}")
    verdicts["details"] = details
    return verdicts


# -- report ---------------------------------------------------------------------


@dataclass
class InvariantReport:
    b: int
    veering: Laurent  # canonical
    ab: Laurent  # canonical
    ab_cycles: list  # AbCycleData
    taut: TautResult
    factorization_ok: bool
    factorization_factor: str = None
    identities: dict = field(default_factory=dict)


def check_factorization(v, vab, theta, b):
    """Does normalize_unit(V) = normalize_unit(V_ab . Theta), possibly
    after multiplying V by exactly one of {1, 1-t, 1+t} when b = 1?
    Returns (ok, factor name or None)."""
    rhs = normalize_unit(vab * theta)
    if b != 1:
        return normalize_unit(v) == rhs, None
    hits = [
        name
        for name, cand in _b1_candidates()
        if normalize_unit(v * cand) == rhs
    ]
    if len(hits) == 1:
        return True, hits[0]
    return False, None


def compute_report(
    tri, hm, mode="auto", minor_budget=MINOR_BUDGET_DEFAULT
):
    v = veering_polynomial(tri, hm, canonical=False)
    vab, cycles = ab_polynomial(tri, hm)
    taut = taut_polynomial(tri, hm, mode=mode, minor_budget=minor_budget)
    ok, factor = check_factorization(v, vab, taut.poly, hm.b)
    return InvariantReport(
        b=hm.b,
        veering=normalize_unit(v),
        ab=normalize_unit(vab),
        ab_cycles=cycles,
        taut=taut,
        factorization_ok=ok,
        factorization_factor=factor,
        identities=structural_identities(tri, hm),
    )
