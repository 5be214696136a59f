"""Dual graph, sectors, flow graph, AB permutation, cycle enumeration.

* The dual graph has a vertex per tetrahedron and a directed edge per
  face class, oriented from the tetrahedron below the face to the one
  above it.
* The sector of an edge e is the 2-cell of the dual spine pierced by e;
  its boundary consists of two ascending dual-graph paths (one per fan
  side) from the vertex of D(e) to the vertex of U(e).
* The flow graph has a vertex per edge class; each tetrahedron t with
  bottom edge b contributes three directed edges, from b to the top
  edge and to the two side edges whose veer is opposite the top edge's.
  Every flow edge carries the ascending dual-graph path it retracts to.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class FacesNotAdjacent(ValueError):
    pass


class CycleBudgetExceeded(RuntimeError):
    def __init__(self, cap):
        super().__init__(f"simple-cycle count exceeds the cap of {cap}")
        self.cap = cap


@dataclass
class DualGraph:
    nvertices: int
    # per face class index: (tail = tet below, head = tet above)
    edges: list

    def out_edges(self, v):
        return [i for i, (a, _) in enumerate(self.edges) if a == v]

    def in_edges(self, v):
        return [i for i, (_, b) in enumerate(self.edges) if b == v]

    def strongly_connected(self):
        for direction in (0, 1):
            seen = {0}
            stack = [0]
            while stack:
                v = stack.pop()
                for (a, b) in self.edges:
                    w = b if a == v and direction == 0 else None
                    if direction == 1 and b == v:
                        w = a
                    if w is not None and w not in seen:
                        seen.add(w)
                        stack.append(w)
            if len(seen) != self.nvertices:
                return False
        return True


def build_dual_graph(tri):
    return DualGraph(
        tri.n, [(fc.tet_below, fc.tet_above) for fc in tri.faces]
    )


@dataclass
class Sector:
    edge: int  # edge class index
    bottom_vertex: int  # D(e)
    top_vertex: int  # U(e)
    # two sides, each an ordered list of face-class indices (dual-graph
    # edges) ascending from D(e) to U(e)
    sides: list
    # ascending chains of tetrahedra: D(e), fan tets..., U(e)
    chains: list


def build_sectors(tri, dual=None):
    """One sector per edge class; asserts every side path is a directed
    ascending dual path and that each dual edge is used exactly three
    times over all sector sides."""
    if dual is None:
        dual = build_dual_graph(tri)
    sectors = []
    usage = [0] * len(tri.faces)
    for e in tri.edges:
        sides = []
        chains = []
        for k in (0, 1):
            chain = [e.d_tet] + [t for (t, _) in e.sides[k]] + [e.u_tet]
            faces = []
            for i, slot in enumerate(e.side_faces[k]):
                fidx = tri.face_of_slot[slot]
                tail, head = dual.edges[fidx]
                if (tail, head) != (chain[i], chain[i + 1]):
                    raise AssertionError(
                        f"sector side of edge {e.index} is not an ascending "
                        f"dual path at step {i}"
                    )
                faces.append(fidx)
                usage[fidx] += 1
            if len(faces) < 2:
                raise AssertionError(
                    f"sector side of edge {e.index} has fewer than 2 edges"
                )
            sides.append(faces)
            chains.append(chain)
        sectors.append(Sector(e.index, e.d_tet, e.u_tet, sides, chains))
    # each face has three edges, so it lies on exactly three sector sides
    if any(u != 3 for u in usage):
        raise AssertionError("some dual edge is not used exactly three "
                             "times across sector sides")
    return sectors


@dataclass
class FlowEdge:
    index: int
    tail: int  # edge class (the bottom edge of the tetrahedron)
    head: int  # edge class (top edge or an opposite-veer side edge)
    tet: int
    target_slot: tuple  # (tet, pair)
    gamma_path: list  # face-class indices, ascending, v_tet .. v_U(head)


@dataclass
class FlowGraph:
    nvertices: int
    edges: list  # FlowEdge, ordered by (tet, slot order)

    def out_edges(self, v):
        return [fe for fe in self.edges if fe.tail == v]


def fan_position(tri, edge_class, slot):
    """(side index, position) of a 0-incidence slot in the edge's fan."""
    e = tri.edges[edge_class]
    for k in (0, 1):
        if slot in e.sides[k]:
            return k, e.sides[k].index(slot)
    raise FacesNotAdjacent(f"slot {slot} is not a fan slot of edge "
                           f"{edge_class}")


def gamma_path(tri, t, slot):
    """The ascending dual path p(t, e) for an incident edge slot of t.

    For the bottom edge the path is empty; for the top edge it is the
    full side-0 path of the edge's sector; for a side edge it is the
    tail of the fan side containing t, from v_t up to v_U(e).
    """
    pair = slot[1]
    ecls = tri.edge_of_slot[slot]
    e = tri.edges[ecls]
    if pair == tri.bottom_edge[t]:
        return []
    if pair == tri.top_edge[t]:
        # t = D(e); side 0 by convention
        return [tri.face_of_slot[s] for s in e.side_faces[0]]
    k, i = fan_position(tri, ecls, slot)
    return [tri.face_of_slot[s] for s in e.side_faces[k][i + 1 :]]


def build_flow_graph(tri):
    edges = []
    for t in range(tri.n):
        b = tri.bottom_edge_class(t)
        for slot in tri.tet_relation_targets(t):
            head = tri.edge_of_slot[slot]
            edges.append(
                FlowEdge(
                    len(edges), b, head, t, slot, gamma_path(tri, t, slot)
                )
            )
    return FlowGraph(len(tri.edges), edges)


def classify_turn(tri, t, f1, f2):
    """Branching or anti-branching turn through tetrahedron t, entering
    along bottom face f1 and leaving along top face f2 (face-class
    indices)."""
    fc1, fc2 = tri.faces[f1], tri.faces[f2]
    if fc1.tet_above != t or fc2.tet_below != t:
        raise FacesNotAdjacent(
            f"faces {f1}, {f2} are not a bottom/top pair of tet {t}"
        )
    a1, a2 = fc1.slot_above[1], fc2.slot_below[1]
    shared = [
        pair
        for pair in tri.side_pairs(t)
        if a1 not in pair and a2 not in pair
    ]
    if len(shared) != 1:
        raise FacesNotAdjacent(
            f"faces {f1}, {f2} share no single side edge in tet {t}"
        )
    s = tri.edge_of_slot[(t, shared[0])]
    top = tri.top_edge_class(t)
    return "branching" if tri.veers[s] != tri.veers[top] else "anti-branching"


@dataclass
class AbPermutation:
    mapping: list  # face index -> face index
    cycles: list  # list of face-index lists
    # per cycle: the dual-graph edge list (the faces themselves, in the
    # order the dual cycle traverses them)
    cycle_gamma_edges: list = field(default_factory=list)

    @property
    def cycle_lengths(self):
        return [len(c) for c in self.cycles]


def ab_permutation(tri):
    """A(f) = the top face of the tetrahedron above f meeting f along the
    edge of f whose veer matches that tetrahedron's top edge."""
    mapping = [None] * len(tri.faces)
    for fc in tri.faces:
        t = fc.tet_above
        top_cls = tri.top_edge_class(t)
        v = tri.veers[top_cls]
        fa = fc.slot_above[1]  # face index within t (opposite vertex)
        # side-edge pairs of f within t (exclude the bottom edge)
        bpair = tri.bottom_edge[t]
        side_pairs = [
            pair
            for pair in tri.side_pairs(t)
            if fa not in pair
        ]
        assert len(side_pairs) == 2
        match = [
            pair
            for pair in side_pairs
            if tri.veers[tri.edge_of_slot[(t, pair)]] == v
        ]
        assert len(match) == 1, "model guarantees exactly one matching veer"
        spair = match[0]
        # the top face of t containing spair: top faces are opposite the
        # bottom-edge vertices; the one containing spair is opposite the
        # bottom vertex not in spair
        tops = [f for f in bpair]  # face indices of the two top faces
        target = [f for f in tops if f not in spair]
        assert len(target) == 1
        mapping[fc.index] = tri.face_of_slot[(t, target[0])]
    # cycle decomposition, deterministic: cycles start at their least face
    seen = [False] * len(mapping)
    cycles = []
    for f in range(len(mapping)):
        if seen[f]:
            continue
        cyc = []
        g = f
        while not seen[g]:
            seen[g] = True
            cyc.append(g)
            g = mapping[g]
        assert g == f, "A must be a permutation"
        cycles.append(cyc)
    # dual-edge list of each cycle: traversing f -> A(f) crosses the dual
    # edge of A(f); starting the edge list with the dual edge of the
    # first face gives the cycle ... -> f -> A(f) -> ... in order
    gamma = [[c[(i + 1) % len(c)] for i in range(len(c))] for c in cycles]
    return AbPermutation(mapping, cycles, gamma)


# -- simple cycle enumeration ----------------------------------------------------


def simple_cycles(nvertices, edges, cap=100000):
    """All simple directed cycles of a multigraph, as edge-index lists.

    ``edges`` is a list of (tail, head) pairs; parallel edges and
    self-loops are allowed and distinguished.  Cycles are rooted at
    their least vertex and emitted in deterministic order.  Raises
    CycleBudgetExceeded if more than ``cap`` cycles exist.
    """
    out = [[] for _ in range(nvertices)]
    for i, (a, b) in enumerate(edges):
        out[a].append((b, i))
    for lst in out:
        lst.sort(key=lambda x: (x[0], x[1]))
    cycles = []

    def dfs(start, v, path, onpath):
        for (w, ei) in out[v]:
            if w < start:
                continue
            if w == start:
                cycles.append(path + [ei])
                if len(cycles) > cap:
                    raise CycleBudgetExceeded(cap)
            elif w not in onpath:
                onpath.add(w)
                dfs(start, w, path + [ei], onpath)
                onpath.remove(w)

    for s in range(nvertices):
        dfs(s, s, [], {s})
    return cycles
