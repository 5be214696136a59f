"""Cones of carried classes and homology directions, layeredness,
Thurston norm and Euler-class evaluation.

All computations are exact over the rationals: polyhedral cones via
the double description method, linear programs via a dense-tableau
simplex with Bland's rule.  Extreme rays are scaled to primitive
integer vectors so ray sets compare as exact sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import graphs as _graphs
from .homology import cycle_class, weight_class

DD_FACE_BUDGET = 24
CYCLE_CAP_DEFAULT = 100_000


class DimensionBudgetExceeded(RuntimeError):
    def __init__(self, nfaces, budget):
        super().__init__(
            f"{nfaces} faces exceeds the double-description budget {budget}"
        )


# -- exact linear algebra helpers ----------------------------------------------


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def primitive(vec):
    """Scale a rational vector by a positive rational to a primitive
    integer tuple (gcd 1); zero maps to the zero tuple."""
    fr = [Fraction(x) for x in vec]
    if not any(fr):
        return (0,) * len(fr)
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


def _rref_lattice(vectors):
    """Canonical primitive integer basis (RREF) of the span of the
    given rational vectors."""
    rows = [[Fraction(x) for x in v] for v in vectors]
    dim = len(rows[0]) if rows else 0
    r = 0
    for c in range(dim):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    basis = []
    for row in rows[:r]:
        v = primitive(row)
        lead = next(x for x in v if x)
        basis.append(v if lead > 0 else tuple(-x for x in v))
    return sorted(basis)


# -- double description ----------------------------------------------------------


@dataclass
class _Ray:
    vec: list  # Fractions
    zeros: set  # indices of processed constraints vanishing on the ray


def dd_cone(dim, inequalities, equalities=()):
    """Extreme rays and lineality basis of
    {x : a.x = 0 for a in equalities, a.x >= 0 for a in inequalities}.

    Starts from the full space as lineality and inserts constraints one
    at a time; equalities (processed first, as opposite inequality
    pairs) only ever shrink the lineality.  Returns (rays, lineality)
    as lists of primitive integer tuples, rays sorted.
    """
    constraints = []
    for a in equalities:
        constraints.append(tuple(Fraction(x) for x in a))
        constraints.append(tuple(-Fraction(x) for x in a))
    for a in inequalities:
        constraints.append(tuple(Fraction(x) for x in a))
    lin = [
        [Fraction(1 if i == j else 0) for j in range(dim)]
        for i in range(dim)
    ]
    rays = []
    for ci, a in enumerate(constraints):
        if not any(a):
            continue
        vals_lin = [_dot(a, l) for l in lin]
        hit = next((i for i, v in enumerate(vals_lin) if v), None)
        if hit is not None:
            l0, v0 = lin[hit], vals_lin[hit]
            lin = [
                [x - (vals_lin[i] / v0) * y for x, y in zip(l, l0)]
                for i, l in enumerate(lin)
                if i != hit
            ]
            for r in rays:
                va = _dot(a, r.vec)
                if va:
                    r.vec = [x - (va / v0) * y for x, y in zip(r.vec, l0)]
                r.zeros.add(ci)
            r0 = l0 if v0 > 0 else [-x for x in l0]
            rays.append(_Ray(r0, set(range(ci))))
            continue
        vals = [_dot(a, r.vec) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        zer = [i for i, v in enumerate(vals) if v == 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        if not neg:
            for i in zer:
                rays[i].zeros.add(ci)
            continue
        new = [rays[i] for i in pos]
        for i in zer:
            rays[i].zeros.add(ci)
            new.append(rays[i])
        for p in pos:
            for n in neg:
                common = rays[p].zeros & rays[n].zeros
                adjacent = not any(
                    k != p and k != n and common <= rays[k].zeros
                    for k in range(len(rays))
                )
                if not adjacent:
                    continue
                vec = [
                    vals[p] * rn - vals[n] * rp
                    for rp, rn in zip(rays[p].vec, rays[n].vec)
                ]
                vec = [Fraction(x) for x in primitive(vec)]
                new.append(_Ray(vec, common | {ci}))
        rays = new
    ray_tuples = sorted({primitive(r.vec) for r in rays})
    lin_basis = _rref_lattice(lin) if lin else []
    return ray_tuples, lin_basis


@dataclass
class ConePresentation:
    ambient: int
    rays: list  # primitive integer tuples, sorted
    lineality: list  # primitive integer basis of the maximal subspace
    inequalities: list  # defining a.x >= 0 (with lineality equalities)
    equalities: list  # a.x = 0

    @property
    def lineality_dim(self):
        return len(self.lineality)

    def contains(self, x):
        return all(_dot(a, x) >= 0 for a in self.inequalities) and all(
            _dot(a, x) == 0 for a in self.equalities
        )


def cone_from_inequalities(dim, inequalities, equalities=()):
    rays, lin = dd_cone(dim, inequalities, equalities)
    return ConePresentation(
        dim,
        rays,
        lin,
        [primitive(a) for a in inequalities],
        [primitive(a) for a in equalities],
    )


def cone_from_generators(dim, generators):
    """Nonnegative span of the generators, by double polarity: the
    dual cone's rays and lineality become the inequalities and
    equalities of the primal."""
    dual_rays, dual_lin = dd_cone(dim, generators)
    cone = cone_from_inequalities(dim, dual_rays, dual_lin)
    for g in generators:
        if not cone.contains(g):
            raise AssertionError("double polarity lost a generator")
    return cone


def dual_cone(dim, generators):
    """{y : y.g >= 0 for all generators g} as a ConePresentation."""
    return cone_from_inequalities(dim, generators)


# -- exact simplex with Farkas certificates --------------------------------------


def _phase1(A, rhs):
    """Feasibility of {Ax = rhs, x >= 0} by a phase-1 simplex with
    Bland's rule.  Returns (x, None) when feasible, else (None, y)
    with y.A <= 0 and y.rhs > 0 (a Farkas certificate)."""
    m = len(A)
    n = len(A[0]) if m else 0
    T = []
    for i in range(m):
        row = [Fraction(x) for x in A[i]]
        b = Fraction(rhs[i])
        if b < 0:
            row = [-x for x in row]
            b = -b
        T.append(row + [b])
    # artificial basis; objective = sum of artificials, expressed in
    # terms of the nonbasic columns
    basis = list(range(n, n + m))
    for i in range(m):
        art = [Fraction(1 if j == i else 0) for j in range(m)]
        T[i] = T[i][:n] + art + [T[i][n]]
    ncols = n + m
    obj = [Fraction(0)] * (ncols + 1)
    for i in range(m):
        obj = [o - t for o, t in zip(obj, T[i])]
        obj[n + i] += 1
    while True:
        enter = next((j for j in range(ncols) if obj[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = T[i][ncols] / T[i][enter]
                if best is None or ratio < best[0] or (
                    ratio == best[0] and basis[i] < basis[best[1]]
                ):
                    best = (ratio, i)
        if best is None:
            raise AssertionError("phase-1 objective unbounded")
        _, leave = best
        piv = T[leave][enter]
        T[leave] = [x / piv for x in T[leave]]
        for i in range(m):
            if i != leave and T[i][enter]:
                f = T[i][enter]
                T[i] = [x - f * y for x, y in zip(T[i], T[leave])]
        if obj[enter]:
            f = obj[enter]
            obj = [x - f * y for x, y in zip(obj, T[leave])]
        basis[leave] = enter
    value = -obj[ncols]
    if value == 0:
        x = [Fraction(0)] * n
        for i, bj in enumerate(basis):
            if bj < n:
                x[bj] = T[i][ncols]
        return x, None
    # dual values off the artificial reduced costs: rc(a_i) = 1 - y_i
    y = [1 - obj[n + i] for i in range(m)]
    return None, y


def solve_halfspace_lp(generators, b):
    """Find eta with eta.g >= 1 for every generator, or a Farkas
    combination: lambda >= 0, not all zero, sum lambda_i g_i = 0.

    Returns ("feasible", eta as Fractions) or ("infeasible", lambda)."""
    m = len(generators)
    # G eta+ - G eta- - s = 1, all variables >= 0
    A = []
    for g in generators:
        row = [Fraction(x) for x in g]
        row += [-x for x in row]
        A.append(row)
    for i in range(m):
        A[i] += [Fraction(-1) if j == i else Fraction(0) for j in range(m)]
    x, y = _phase1(A, [1] * m)
    if x is not None:
        eta = [x[i] - x[b + i] for i in range(b)]
        return "feasible", eta
    lam = [v if v > 0 else Fraction(0) for v in y]
    assert any(lam) and all(
        sum(l * g[i] for l, g in zip(lam, generators)) == 0 for i in range(b)
    ), "invalid Farkas certificate"
    return "infeasible", lam


# -- cones of a veering triangulation ----------------------------------------------


def homology_direction_generators(tri, hm, cap=CYCLE_CAP_DEFAULT):
    """Classes of all simple directed dual cycles, primitive and
    deduplicated (zero classes kept: they obstruct layeredness)."""
    dual = hm.dual
    cycles = _graphs.simple_cycles(dual.nvertices, dual.edges, cap=cap)
    out = set()
    for cyc in cycles:
        out.add(primitive(cycle_class(hm, cyc)))
    return sorted(out)


def carried_cone(tri, hm, budget=DD_FACE_BUDGET):
    """Image in Q^b of the cone {w >= 0 : switch conditions}, with
    extreme rays as primitive integer vectors."""
    from .homology import switch_matrix

    nf = len(tri.faces)
    if nf > budget:
        raise DimensionBudgetExceeded(nf, budget)
    ineqs = [[1 if j == i else 0 for j in range(nf)] for i in range(nf)]
    eqs = switch_matrix(tri)
    wrays, wlin = dd_cone(nf, ineqs, eqs)
    assert not wlin, "a nonnegative cone has no lineality"
    classes = sorted(
        {primitive(weight_class(hm, tri, w)) for w in wrays} - {(0,) * hm.b}
    )
    return cone_from_generators(hm.b, classes) if classes else (
        ConePresentation(hm.b, [], [], [], [])
    )


@dataclass
class LayerednessVerdict:
    layered: bool
    generators: list
    eta: tuple = None  # integral, eta.g >= 1 on all generators
    weights: list = None  # fully carried positive integral weight vector
    farkas: list = None  # (coefficient, generator) pairs summing to zero


def _integral(vec):
    den = 1
    for x in vec:
        den = den * x.denominator // gcd(den, x.denominator)
    return tuple(int(x * den) for x in vec)


def _fibered_weights(tri, hm, eta):
    """Strictly positive integral weight vector carried by tau whose
    class pairs like eta: take a cocycle m = eta.phi + du made strictly
    positive by difference-constraint potentials, then clear
    denominators."""
    dual = hm.dual
    nf = len(tri.faces)
    nv = dual.nvertices
    delta = Fraction(1, nf + 1)
    cost = [
        Fraction(_dot(eta, hm.phi[f])) - delta for f in range(nf)
    ]
    # Bellman-Ford: u[tail] - u[head] <= cost(edge), virtual zero source
    u = [Fraction(0)] * nv
    for _ in range(nv):
        changed = False
        for f, (tail, head) in enumerate(dual.edges):
            if u[head] + cost[f] < u[tail]:
                u[tail] = u[head] + cost[f]
                changed = True
        if not changed:
            break
    else:
        raise AssertionError("negative cycle: eta is not strictly positive "
                             "on some dual cycle")
    m = [
        Fraction(_dot(eta, hm.phi[f])) + u[head] - u[tail]
        for f, (tail, head) in enumerate(dual.edges)
    ]
    assert all(x > 0 for x in m)
    return list(_integral(m))


def is_layered(tri, hm, cap=CYCLE_CAP_DEFAULT):
    gens = homology_direction_generators(tri, hm, cap=cap)
    zero = (0,) * hm.b
    if zero in gens:
        # a null-homologous dual cycle kills every open half-space
        lam = [(1, zero)]
        return LayerednessVerdict(False, gens, farkas=lam)
    status, sol = solve_halfspace_lp(gens, hm.b)
    if status == "infeasible":
        lam = _integral(sol)
        farkas = [
            (c, g) for c, g in zip(lam, gens) if c
        ]
        return LayerednessVerdict(False, gens, farkas=farkas)
    # scale eta to integers; scaling up preserves eta.g >= 1
    eta = _integral(sol)
    weights = _fibered_weights(tri, hm, eta)
    return LayerednessVerdict(True, gens, eta=eta, weights=weights)


@dataclass
class NormData:
    y: tuple  # class of the weight vector, rational
    x: Fraction  # Thurston norm value, half the total weight
    euler: Fraction  # -e_tau(y), via the dual-graph pairing
    face_codim: int  # lineality dimension of the direction cone


def norm_data(tri, hm, w, cap=CYCLE_CAP_DEFAULT):
    """Norm and Euler-class data of a switch-respecting weight vector.

    x(y) is half the total weight (each weighted face is an ideal
    triangle of Euler characteristic -1/2 in the carried surface);
    -e_tau(y) is computed independently as half the pairing of y with
    the class of the full dual graph, and the two must agree.
    """
    y = weight_class(hm, tri, w)  # raises SwitchConditionViolated
    x = Fraction(sum(Fraction(v) for v in w), 2)
    gamma_class = [0] * hm.b
    for f in range(len(tri.faces)):
        for i in range(hm.b):
            gamma_class[i] += hm.phi[f][i]
    euler = Fraction(_dot(y, gamma_class), 2)
    if euler != x:
        raise AssertionError(
            f"norm/Euler disagreement: x = {x}, -e = {euler}"
        )
    gens = homology_direction_generators(tri, hm, cap=cap)
    cone1 = cone_from_generators(hm.b, [g for g in gens]) if gens else None
    codim = cone1.lineality_dim if cone1 is not None else 0
    return NormData(tuple(y), x, euler, codim)
