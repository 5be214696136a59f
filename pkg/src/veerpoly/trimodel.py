"""Data model for taut/veering ideal triangulations.

A triangulation record lists, per tetrahedron: the four face gluings,
the four face coorientation signs, and (optionally) veer labels for its
six edge slots.  Validation derives edge classes (with fans), face
classes, and the taut structure, checking every axiom along the way.

Conventions, fixed once for the whole package:

* Every tetrahedron is positively oriented by its vertex order 0,1,2,3;
  gluing permutations must be odd, so the glued-up manifold is oriented.
* A coorientation sign of +1 on a face slot means the face is cooriented
  out of that tetrahedron ("the tetrahedron lies below the face").
* In a taut tetrahedron the two +1 faces share the top edge and the two
  -1 faces share the bottom edge; the remaining four edge slots are the
  side edges (angle 0), the top/bottom pairs carry angle pi.
* Veer labels: write the top edge as (t0, t1) and the bottom edge as
  (b0, b1).  If the permutation (t0, t1, b0, b1) of (0, 1, 2, 3) is
  even, the side edges {t0,b0}, {t1,b1} veer R and {t0,b1}, {t1,b0}
  veer L; if odd, the labels swap.  (Swapping t0/t1 or b0/b1 flips the
  parity and the pairing together, so the rule is well defined.  The
  choice of which alternation class is called "R" is a frozen
  convention; the opposite choice renames every label consistently and
  changes nothing downstream.)
"""

from __future__ import annotations

from dataclasses import dataclass, field


EDGE_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
PAIR_INDEX = {p: i for i, p in enumerate(EDGE_PAIRS)}


def pair_of(i, j):
    return (i, j) if i < j else (j, i)


def opposite_pair(pair):
    rest = tuple(v for v in range(4) if v not in pair)
    return rest


def perm_sign(perm):
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def perm_inverse(perm):
    inv = [0, 0, 0, 0]
    for i, v in enumerate(perm):
        inv[v] = i
    return tuple(inv)


# -- validation errors ------------------------------------------------------


class ValidationError(ValueError):
    """Base for structural axiom violations; carries a location."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class GluingNotInvolutive(ValidationError):
    pass


class NotOriented(ValidationError):
    pass


class CoorientationMismatch(ValidationError):
    pass


class AngleSumViolation(ValidationError):
    pass


class VeerSlotConflict(ValidationError):
    pass


class ModelTetrahedronViolation(ValidationError):
    pass


class EmptyFanSide(ValidationError):
    pass


class Unsatisfiable(ValidationError):
    """The taut structure admits no veering assignment."""


# -- derived classes ---------------------------------------------------------


@dataclass
class EdgeClass:
    index: int
    # cyclic walk around the edge: list of (tet, pair) slots
    slots: list
    # faces crossed between consecutive slots: crossing_faces[i] is the
    # (tet, face) slot of slots[i] crossed when walking to slots[i+1]
    crossing_faces: list
    # the two pi-incidences
    d_slot_pos: int = -1  # position in slots where the edge is a top edge
    u_slot_pos: int = -1  # position where it is a bottom edge
    d_tet: int = -1  # tetrahedron below the edge (edge = its top edge)
    u_tet: int = -1  # tetrahedron above the edge (edge = its bottom edge)
    # fan sides: ordered slot lists ascending from next to D(e) up to
    # next to U(e); and the corresponding face-class chains (Gamma-edge
    # lists, length = side length + 1)
    sides: list = field(default_factory=list)
    side_faces: list = field(default_factory=list)

    @property
    def degree(self):
        return len(self.slots)


@dataclass
class FaceClass:
    index: int
    slot_below: tuple  # (tet, face) slot with sign +1
    slot_above: tuple  # (tet, face) slot with sign -1
    edges: tuple = ()  # the three edge-class indices (by pair order)
    bottom_edge: int = -1  # edge class: bottom edge of the tet above

    @property
    def tet_below(self):
        return self.slot_below[0]

    @property
    def tet_above(self):
        return self.slot_above[0]


class Triangulation:
    """A validated taut (and, with veers, veering) ideal triangulation.

    Immutable after construction; safe to share between threads.
    """

    def __init__(self, gluings, coorientations, veers=None):
        self.n = len(gluings)
        # gluings[t][f] = (t2, f2, perm tuple of length 4)
        self.gluings = tuple(
            tuple((t2, f2, tuple(p)) for (t2, f2, p) in tet) for tet in gluings
        )
        self.coorientations = tuple(tuple(tet) for tet in coorientations)
        self._validate_gluings()
        self._validate_coorientations()
        self._derive_taut()
        self._build_edge_classes()
        self._check_angles()
        self._build_fans()
        self._build_face_classes()
        if veers is None:
            self.veers = self._infer_veers()
        else:
            self.veers = self._check_veers(veers)
        self._check_model()
        self._check_face_veers()

    # -- gluing layer -------------------------------------------------------
    def _validate_gluings(self):
        n = self.n
        for t in range(n):
            if len(self.gluings[t]) != 4:
                raise ValidationError(f"tet {t}: need 4 gluings", (t,))
            for f in range(4):
                t2, f2, p = self.gluings[t][f]
                if not (0 <= t2 < n and 0 <= f2 < 4):
                    raise ValidationError(
                        f"tet {t} face {f}: partner out of range", (t, f)
                    )
                if sorted(p) != [0, 1, 2, 3]:
                    raise ValidationError(
                        f"tet {t} face {f}: not a permutation", (t, f)
                    )
                if p[f] != f2:
                    raise GluingNotInvolutive(
                        f"tet {t} face {f}: permutation does not carry the "
                        f"face to its partner",
                        (t, f),
                    )
                if (t2, f2) == (t, f):
                    raise GluingNotInvolutive(
                        f"tet {t} face {f}: glued to itself", (t, f)
                    )
                if perm_sign(p) != -1:
                    raise NotOriented(
                        f"tet {t} face {f}: gluing permutation is even",
                        (t, f),
                    )
                bt, bf, bp = self.gluings[t2][f2]
                if (bt, bf) != (t, f) or bp != perm_inverse(p):
                    raise GluingNotInvolutive(
                        f"tet {t} face {f}: partner does not glue back",
                        (t, f),
                    )

    def _validate_coorientations(self):
        for t in range(self.n):
            signs = self.coorientations[t]
            if len(signs) != 4 or any(s not in (1, -1) for s in signs):
                raise ValidationError(f"tet {t}: bad coorientation signs", (t,))
            if sum(1 for s in signs if s == 1) != 2:
                raise CoorientationMismatch(
                    f"tet {t}: need exactly two outward (top) faces", (t,)
                )
            for f in range(4):
                t2, f2, _ = self.gluings[t][f]
                if self.coorientations[t2][f2] == signs[f]:
                    raise CoorientationMismatch(
                        f"tet {t} face {f}: glued faces must carry opposite "
                        f"signs",
                        (t, f),
                    )

    def _derive_taut(self):
        self.top_edge = []  # vertex pair per tet
        self.bottom_edge = []
        for t in range(self.n):
            signs = self.coorientations[t]
            top_faces = tuple(f for f in range(4) if signs[f] == 1)
            bottom_faces = tuple(f for f in range(4) if signs[f] == -1)
            # the two top faces are opposite the vertices in top_faces;
            # they share the edge on the remaining two vertices
            self.top_edge.append(opposite_pair(top_faces))
            self.bottom_edge.append(opposite_pair(bottom_faces))

    def slot_angle(self, t, pair):
        """pi (as 1) if the two faces of t adjacent to this edge slot share
        a coorientation sign, else 0."""
        k, l = opposite_pair(pair)
        return 1 if self.coorientations[t][k] == self.coorientations[t][l] else 0

    # -- edge classes ----------------------------------------------------------
    def _build_edge_classes(self):
        n = self.n
        seen = set()
        self.edges = []
        self.edge_of_slot = {}
        for t0 in range(n):
            for pair0 in EDGE_PAIRS:
                if (t0, pair0) in seen:
                    continue
                slots = []
                crossings = []
                # walk: at slot (t, (i, j)), enter through face `enter`
                # (a vertex not in the pair), leave through the other
                t, pair = t0, pair0
                k, l = opposite_pair(pair)
                enter = k  # arbitrary fixed start direction
                while True:
                    slots.append((t, pair))
                    seen.add((t, pair))
                    k, l = opposite_pair(pair)
                    leave = l if enter == k else k
                    crossings.append((t, leave))
                    t2, f2, p = self.gluings[t][leave]
                    pair2 = pair_of(p[pair[0]], p[pair[1]])
                    enter2 = f2
                    if (t2, pair2) == (t0, pair0) and enter2 == opposite_pair(
                        pair0
                    )[0]:
                        break
                    t, pair, enter = t2, pair2, enter2
                    if len(slots) > 6 * n:
                        raise ValidationError(
                            "edge walk failed to close", (t0, pair0)
                        )
                e = EdgeClass(len(self.edges), slots, crossings)
                self.edges.append(e)
                for s in slots:
                    self.edge_of_slot[s] = e.index

    def _check_angles(self):
        for e in self.edges:
            top_pos = []
            bottom_pos = []
            for i, (t, pair) in enumerate(e.slots):
                if self.slot_angle(t, pair) == 1:
                    if pair == self.top_edge[t]:
                        top_pos.append(i)
                    else:
                        bottom_pos.append(i)
            if len(top_pos) != 1 or len(bottom_pos) != 1:
                raise AngleSumViolation(
                    f"edge {e.index}: needs exactly one top and one bottom "
                    f"pi-incidence, found {len(top_pos)} top / "
                    f"{len(bottom_pos)} bottom",
                    ("edge", e.index),
                )
            e.d_slot_pos = top_pos[0]
            e.u_slot_pos = bottom_pos[0]
            e.d_tet = e.slots[top_pos[0]][0]
            e.u_tet = e.slots[bottom_pos[0]][0]

    def _build_fans(self):
        """Split each edge's cyclic walk at its two pi-incidences.

        Each side is ordered ascending: first slot adjacent to D(e),
        last adjacent to U(e).  Side 0 is the side containing the
        lexicographically least fan slot.
        """
        for e in self.edges:
            m = len(e.slots)
            d, u = e.d_slot_pos, e.u_slot_pos
            # arc walking forward from d to u, exclusive
            arc_a = [(e.slots[i % m], (i % m)) for i in range(d + 1, d + 1 + ((u - d) % m) - 1)]
            arc_b = [(e.slots[i % m], (i % m)) for i in range(u + 1, u + 1 + ((d - u) % m) - 1)]
            # arc_a ascends D->U in walk order; arc_b descends (walk order
            # runs U->D there), so reverse it to ascend
            arc_b = list(reversed(arc_b))
            if not arc_a or not arc_b:
                raise EmptyFanSide(
                    f"edge {e.index}: a fan side is empty", ("edge", e.index)
                )
            sides = [[s for s, _ in arc_a], [s for s, _ in arc_b]]
            # crossing faces along each side, from D(e) up to U(e):
            # crossing_faces[i] sits between slots[i] and slots[i+1]
            faces_a = [e.crossing_faces[i % m] for i in range(d, d + ((u - d) % m))]
            faces_b = [e.crossing_faces[i % m] for i in range(u, u + ((d - u) % m))]
            # faces_b is recorded walking U->D; ascending order is reversed
            faces_b = list(reversed(faces_b))
            side_faces = [faces_a, faces_b]
            if min(sides[1]) < min(sides[0]):
                sides.reverse()
                side_faces.reverse()
            e.sides = sides
            e.side_faces = side_faces

    # -- face classes ------------------------------------------------------------
    def _build_face_classes(self):
        self.faces = []
        self.face_of_slot = {}
        seen = set()
        for t in range(self.n):
            for f in range(4):
                if (t, f) in seen:
                    continue
                t2, f2, _ = self.gluings[t][f]
                seen.add((t, f))
                seen.add((t2, f2))
                if self.coorientations[t][f] == 1:
                    below, above = (t, f), (t2, f2)
                else:
                    below, above = (t2, f2), (t, f)
                fc = FaceClass(len(self.faces), below, above)
                ta, fa = above
                pairs = [
                    pair_of(i, j)
                    for i, j in EDGE_PAIRS
                    if i != fa and j != fa
                ]
                fc.edges = tuple(self.edge_of_slot[(ta, p)] for p in pairs)
                bpair = self.bottom_edge[ta]
                if fa in bpair:
                    raise ValidationError(
                        f"face ({ta},{fa}): marked a bottom face but does "
                        f"not contain the bottom edge",
                        (ta, fa),
                    )
                fc.bottom_edge = self.edge_of_slot[(ta, bpair)]
                self.faces.append(fc)
                self.face_of_slot[below] = fc.index
                self.face_of_slot[above] = fc.index

    # -- veers -------------------------------------------------------------------
    def _model_veer(self, t, pair):
        """The veer the frozen model forces on side-edge slot (t, pair).

        None for the top/bottom (angle pi) slots.
        """
        top = self.top_edge[t]
        bottom = self.bottom_edge[t]
        if pair == top or pair == bottom:
            return None
        t0, t1 = top
        b0, b1 = bottom
        even = perm_sign((t0, t1, b0, b1)) == 1
        r_pairs = {pair_of(t0, b0), pair_of(t1, b1)}
        if pair in r_pairs:
            return "R" if even else "L"
        return "L" if even else "R"

    def _infer_veers(self):
        veers = {}
        for e in self.edges:
            want = None
            for (t, pair) in e.slots:
                v = self._model_veer(t, pair)
                if v is None:
                    continue
                if want is None:
                    want = v
                elif want != v:
                    raise Unsatisfiable(
                        f"edge {e.index}: taut structure admits no veering "
                        f"(conflicting slot constraints)",
                        ("edge", e.index),
                    )
            if want is None:
                raise Unsatisfiable(
                    f"edge {e.index}: veer undetermined (no 0-incidence)",
                    ("edge", e.index),
                )
            veers[e.index] = want
        return veers

    def _check_veers(self, veers):
        """Accept veers per edge class, or per slot (dict keyed by
        (tet, pair)); check slot agreement within each class."""
        out = {}
        for e in self.edges:
            vals = set()
            if e.index in veers:
                vals.add(veers[e.index])
            for s in e.slots:
                if s in veers:
                    vals.add(veers[s])
            if not vals:
                raise ValidationError(
                    f"edge {e.index}: no veer given", ("edge", e.index)
                )
            if len(vals) > 1:
                raise VeerSlotConflict(
                    f"edge {e.index}: conflicting veer labels {sorted(vals)}",
                    ("edge", e.index),
                )
            v = vals.pop()
            if v not in ("L", "R"):
                raise ValidationError(
                    f"edge {e.index}: bad veer symbol {v!r}", ("edge", e.index)
                )
            out[e.index] = v
        return out

    def _check_model(self):
        """Every tetrahedron must match the frozen model: each side-edge
        slot carries the veer the model forces (0-edges alternate)."""
        for t in range(self.n):
            for pair in EDGE_PAIRS:
                want = self._model_veer(t, pair)
                if want is None:
                    continue
                have = self.veers[self.edge_of_slot[(t, pair)]]
                if have != want:
                    raise ModelTetrahedronViolation(
                        f"tet {t} edge slot {pair}: veer {have} does not "
                        f"match the model ({want})",
                        ("tet", t),
                    )

    def _check_face_veers(self):
        for fc in self.faces:
            vs = {self.veers[e] for e in fc.edges}
            if len(vs) != 2:
                raise ModelTetrahedronViolation(
                    f"face {fc.index}: edges must carry both veers",
                    ("face", fc.index),
                )

    # -- derived accessors ----------------------------------------------------------
    def top_edge_class(self, t):
        return self.edge_of_slot[(t, self.top_edge[t])]

    def bottom_edge_class(self, t):
        return self.edge_of_slot[(t, self.bottom_edge[t])]

    def side_pairs(self, t):
        """The four side-edge vertex pairs of tetrahedron t."""
        top = self.top_edge[t]
        bottom = self.bottom_edge[t]
        return [p for p in EDGE_PAIRS if p != top and p != bottom]

    def tet_relation_targets(self, t):
        """Slots (t, pair) for the top edge and the two side edges of
        veer opposite to the top edge: the targets of the tetrahedron
        relation b = top + s1 + s2."""
        top_veer = self.veers[self.top_edge_class(t)]
        sides = [
            p for p in self.side_pairs(t) if self._model_veer(t, p) != top_veer
        ]
        assert len(sides) == 2
        return [(t, self.top_edge[t])] + [(t, p) for p in sides]

    def stats(self):
        return {
            "tetrahedra": self.n,
            "edges": len(self.edges),
            "faces": len(self.faces),
        }


def validate(gluings, coorientations, veers=None):
    """Build and fully validate a triangulation; raises a subclass of
    ValidationError naming the first violated axiom and its location."""
    tri = Triangulation(gluings, coorientations, veers)
    if len(tri.edges) != tri.n or len(tri.faces) != 2 * tri.n:
        raise ValidationError(
            f"count invariant broken: |E|={len(tri.edges)} |T|={tri.n} "
            f"|F|={len(tri.faces)}"
        )
    # bottom-edge map must be a bijection
    bottoms = {tri.bottom_edge_class(t) for t in range(tri.n)}
    if len(bottoms) != tri.n:
        raise ValidationError("bottom-edge map is not a bijection")
    return tri


def edge_fans(tri):
    """The edge classes with their fan sides (already derived during
    validation); exposed for reporting."""
    return tri.edges


def infer_veers(tri_or_parts):
    """Recompute veers from the taut structure alone.

    Accepts a validated triangulation (idempotent: returns an equal
    assignment) or raises Unsatisfiable.
    """
    if isinstance(tri_or_parts, Triangulation):
        return tri_or_parts._infer_veers()
    gluings, coorientations = tri_or_parts
    tri = Triangulation(gluings, coorientations, veers=None)
    return tri.veers
