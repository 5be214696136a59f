"""First homology (modulo torsion) of the triangulated manifold, from
the dual spine, plus the labeling cocycle used by every polynomial.

The dual spine has a vertex per tetrahedron, an edge per face class
(the dual graph), and a 2-cell per edge class (the sector).  It is a
deformation retract of the manifold, so its first homology is the
manifold's.  A spanning tree of the dual graph pins a translation
cocycle phi: dual edges -> Z^b with phi(tree edge) = 0; phi of a cycle
is its homology class, and sector boundaries map to zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import graphs as _graphs


class NotClosed(ValueError):
    pass


class NotIncident(ValueError):
    pass


class SwitchConditionViolated(ValueError):
    pass


# -- deterministic Smith normal form ----------------------------------------------


def smith_normal_form(mat):
    """Deterministic SNF over the integers.

    Returns (diag, U, Uinv, V) with U * M * V = D, U and V unimodular,
    D diagonal (as the list ``diag`` of its min(m,n) diagonal entries,
    nonnegative, each dividing the next).  Pivot rule: smallest nonzero
    absolute value, ties broken row-major.
    """
    m = len(mat)
    n = len(mat[0]) if m else 0
    a = [list(row) for row in mat]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    Uinv = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]
        for r in Uinv:
            r[i], r[j] = r[j], r[i]

    def col_swap(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def row_add(i, j, c):
        # row i += c * row j
        a[i] = [x + c * y for x, y in zip(a[i], a[j])]
        U[i] = [x + c * y for x, y in zip(U[i], U[j])]
        for r in Uinv:
            r[j] -= c * r[i]

    def col_add(i, j, c):
        # col i += c * col j
        for r in a:
            r[i] += c * r[j]
        for r in V:
            r[i] += c * r[j]

    def row_negate(i):
        a[i] = [-x for x in a[i]]
        U[i] = [-x for x in U[i]]
        for r in Uinv:
            r[i] = -r[i]

    k = 0
    while k < min(m, n):
        # pivot: smallest |nonzero|, ties row-major
        pivot = None
        for i in range(k, m):
            for j in range(k, n):
                if a[i][j]:
                    key = (abs(a[i][j]), i, j)
                    if pivot is None or key < pivot[0]:
                        pivot = (key, i, j)
        if pivot is None:
            break
        _, pi, pj = pivot
        if pi != k:
            row_swap(k, pi)
        if pj != k:
            col_swap(k, pj)
        if a[k][k] < 0:
            row_negate(k)
        dirty = False
        for i in range(k + 1, m):
            if a[i][k]:
                q = a[i][k] // a[k][k]
                row_add(i, k, -q)
                if a[i][k]:
                    dirty = True
        for j in range(k + 1, n):
            if a[k][j]:
                q = a[k][j] // a[k][k]
                col_add(j, k, -q)
                if a[k][j]:
                    dirty = True
        if dirty:
            continue  # re-pivot on the (smaller) remainder
        # divisibility of the remaining block
        bad = None
        for i in range(k + 1, m):
            for j in range(k + 1, n):
                if a[i][j] % a[k][k]:
                    bad = (i, j)
                    break
            if bad:
                break
        if bad:
            row_add(k, bad[0], 1)
            continue
        k += 1
    diag = [a[i][i] for i in range(min(m, n))]
    return diag, U, Uinv, V


# -- homology model ------------------------------------------------------------------


@dataclass
class HomologyModel:
    b: int
    torsion: list  # invariant factors > 1
    tree_root: int
    tree_edges: tuple  # face-class indices in the spanning tree
    tree_parent: dict  # vertex -> (parent vertex, face index, +1/-1 up)
    phi: list  # per face class: tuple of length b
    nontree: tuple  # face-class indices not in the tree (ordered)
    # chains (dicts face -> coeff) whose classes are the standard basis
    basis_chains: list
    dual: object = None
    sectors: object = None

    def phi_of(self, face):
        return self.phi[face]


def _spanning_tree(dual, root, edge_order=None):
    """BFS spanning tree; returns (tree edge set, parent map)."""
    n = dual.nvertices
    order = list(range(len(dual.edges))) if edge_order is None else list(edge_order)
    adj = [[] for _ in range(n)]
    for i in order:
        a, b = dual.edges[i]
        adj[a].append((b, i, 1))
        adj[b].append((a, i, -1))
    parent = {root: None}
    tree = []
    queue = [root]
    qi = 0
    while qi < len(queue):
        v = queue[qi]
        qi += 1
        for (w, ei, sgn) in adj[v]:
            if w not in parent:
                parent[w] = (v, ei, sgn)
                tree.append(ei)
                queue.append(w)
    if len(parent) != n:
        raise AssertionError("dual graph is not connected")
    return set(tree), parent


def _tree_path_chain(parent, v):
    """Chain (face -> coeff) of the tree path from the root to v."""
    chain = {}
    while parent[v] is not None:
        p, ei, sgn = parent[v]
        chain[ei] = chain.get(ei, 0) + sgn
        v = p
    return chain


def fundamental_chain(parent, dual, ei):
    """Cycle chain of non-tree edge ei: the edge plus the tree path from
    its head back to its tail."""
    a, b = dual.edges[ei]
    chain = {ei: 1}
    for f, c in _tree_path_chain(parent, a).items():
        chain[f] = chain.get(f, 0) + c
    for f, c in _tree_path_chain(parent, b).items():
        chain[f] = chain.get(f, 0) - c
    return {f: c for f, c in chain.items() if c}


def homology_basis(tri, dual=None, sectors=None, root=0, edge_order=None):
    """Build the homology model from the dual spine.

    ``root`` and ``edge_order`` select the spanning tree; any choice
    yields the same b and torsion, and phi differs by a GL(b, Z) change
    of basis (recorded through the basis chains).
    """
    if dual is None:
        dual = _graphs.build_dual_graph(tri)
    if sectors is None:
        sectors = _graphs.build_sectors(tri, dual)
    tree, parent = _spanning_tree(dual, root, edge_order)
    nontree = tuple(i for i in range(len(dual.edges)) if i not in tree)
    index_of = {ei: j for j, ei in enumerate(nontree)}
    # boundary matrix: rows = non-tree edges (coordinates on the cycle
    # space), columns = sectors; a cycle is determined by its non-tree
    # coordinates, so the boundary chain restricted to non-tree edges
    # is its coordinate vector
    rows = len(nontree)
    cols = len(sectors)
    M = [[0] * cols for _ in range(rows)]
    for j, sec in enumerate(sectors):
        for f in sec.sides[0]:
            if f in index_of:
                M[index_of[f]][j] += 1
        for f in sec.sides[1]:
            if f in index_of:
                M[index_of[f]][j] -= 1
    diag, U, Uinv, V = smith_normal_form(M)
    rank = sum(1 for d in diag if d != 0)
    b = rows - rank
    torsion = [d for d in diag if d > 1]
    # free quotient: x -> (Ux)[rank:]
    phi = [(0,) * b for _ in range(len(dual.edges))]
    for j, ei in enumerate(nontree):
        phi[ei] = tuple(U[i][j] for i in range(rank, rows))
    # basis chains: columns of Uinv at the free positions
    basis_chains = []
    for i in range(rank, rows):
        coords = [Uinv[j][i] for j in range(rows)]
        chain = {}
        for j, c in enumerate(coords):
            if not c:
                continue
            for f, cc in fundamental_chain(parent, dual, nontree[j]).items():
                chain[f] = chain.get(f, 0) + c * cc
        basis_chains.append({f: c for f, c in chain.items() if c})
    hm = HomologyModel(
        b=b,
        torsion=torsion,
        tree_root=root,
        tree_edges=tuple(sorted(tree)),
        tree_parent=parent,
        phi=phi,
        nontree=nontree,
        basis_chains=basis_chains,
        dual=dual,
        sectors=sectors,
    )
    # defining relations: both sides of every sector carry equal labels
    for sec in sectors:
        s0 = path_sum(hm, sec.sides[0])
        s1 = path_sum(hm, sec.sides[1])
        if s0 != s1:
            raise AssertionError(
                f"sector {sec.edge}: side labels disagree ({s0} vs {s1})"
            )
    return hm


def path_sum(hm, faces):
    """Sum of phi over a list of dual edges traversed forwards."""
    b = hm.b
    total = [0] * b
    for f in faces:
        v = hm.phi[f]
        for i in range(b):
            total[i] += v[i]
    return tuple(total)


def chain_class(hm, chain):
    """Class of an integral 1-chain given as face -> coefficient."""
    total = [0] * hm.b
    for f, c in chain.items():
        v = hm.phi[f]
        for i in range(hm.b):
            total[i] += c * v[i]
    return tuple(total)


def cycle_class(hm, cycle_faces):
    """Class of a directed dual cycle given by its edge list."""
    dual = hm.dual
    if cycle_faces:
        heads = [dual.edges[f][1] for f in cycle_faces]
        tails = [dual.edges[f][0] for f in cycle_faces]
        for i in range(len(cycle_faces)):
            if heads[i] != tails[(i + 1) % len(cycle_faces)]:
                raise NotClosed("edge list is not a closed directed cycle")
    return path_sum(hm, cycle_faces)


def path_label(hm, tri, t, pair):
    """h(t, e) for an edge slot (t, pair): phi of the ascending dual path
    from v_t to v_U(e); zero for the bottom edge."""
    if (t, pair) not in tri.edge_of_slot:
        raise NotIncident(f"pair {pair} is not an edge slot of tet {t}")
    return path_sum(hm, _graphs.gamma_path(tri, t, (t, pair)))


def _solve_rational(rows, rhs):
    """Solve rows . y = rhs exactly; returns y or None if inconsistent.

    ``rows`` is a list of integer/rational vectors spanning full column
    rank; extra equations are checked for consistency.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    aug = [
        [Fraction(x) for x in row] + [Fraction(v)] for row, v in zip(rows, rhs)
    ]
    piv_cols = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if aug[i][c]:
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
        if r == m:
            break
    # consistency of zero rows
    for i in range(r, m):
        if aug[i][n]:
            return None
    if len(piv_cols) < n:
        return None  # underdetermined; callers always pass full rank
    y = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        y[c] = aug[i][n]
    return y


def weight_class(hm, tri, w):
    """The class y in Q^b pairing a switch-respecting face-weight vector
    with homology: y . phi(c) = sum of w over c, for every dual cycle c.

    Raises SwitchConditionViolated if w fails a switch condition (the
    system is then inconsistent)."""
    w = [Fraction(x) for x in w]
    check_switch_conditions(tri, w)
    # tree potentials: u(root) = 0, u(head) - u(tail) = w(tree edge)
    dual = hm.dual
    u = {hm.tree_root: Fraction(0)}
    order = sorted(hm.tree_parent, key=lambda v: _tree_depth(hm.tree_parent, v))
    for v in order:
        if hm.tree_parent[v] is None:
            continue
        p, ei, sgn = hm.tree_parent[v]
        u[v] = u[p] + sgn * w[ei]
    if hm.b == 0:
        return ()
    rows, rhs = [], []
    for ei in hm.nontree:
        a, bb = dual.edges[ei]
        rows.append(hm.phi[ei])
        rhs.append(w[ei] + u[a] - u[bb])
    y = _solve_rational(rows, rhs)
    if y is None:
        raise SwitchConditionViolated(
            "weight vector pairs inconsistently with homology"
        )
    return tuple(y)


def _tree_depth(parent, v):
    d = 0
    while parent[v] is not None:
        v = parent[v][0]
        d += 1
    return d


def check_switch_conditions(tri, w):
    """Per edge: the weight sums over the two sector sides must agree."""
    for e in tri.edges:
        s0 = sum(w[tri.face_of_slot[s]] for s in e.side_faces[0])
        s1 = sum(w[tri.face_of_slot[s]] for s in e.side_faces[1])
        if s0 != s1:
            raise SwitchConditionViolated(
                f"edge {e.index}: side sums differ ({s0} vs {s1})"
            )


def switch_matrix(tri):
    """Integer matrix with one row per edge: (side-0 faces) - (side-1
    faces); switch conditions are S w = 0."""
    S = [[0] * len(tri.faces) for _ in tri.edges]
    for e in tri.edges:
        for s in e.side_faces[0]:
            S[e.index][tri.face_of_slot[s]] += 1
        for s in e.side_faces[1]:
            S[e.index][tri.face_of_slot[s]] -= 1
    return S
