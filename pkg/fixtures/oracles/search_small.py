"""Exhaustive search for small oriented transverse-taut veering
triangulations.

Enumerates, up to combinatorial isomorphism, all closed-up ideal
triangulations with at most MAXN tetrahedra that admit the transverse
taut + veering structure accepted by veerpoly.trimodel.validate, using
a canonical-order depth-first search with angle-sum and veer pruning.
Results are written as .vt documents plus a summary line each.

Conventions match the library: gluing permutations odd; a tetrahedron's
coorientation pattern has exactly two +1 faces (their indices form the
vertex pair of the bottom edge, i.e. the top edge is the opposite
pair).  New tetrahedra are attached with a fixed canonical permutation:
the 12 even relabelings of a fresh tetrahedron are exactly the 12
(facet, odd permutation) attachment choices, so fixing one loses
nothing.

Usage: python3 search_small.py [MAXN] [OUTDIR]
"""

import os
import sys
import time
from itertools import permutations

sys.path.insert(
    0, os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "..", "src")
)

from veerpoly import ingest, trimodel  # noqa: E402

EDGE_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
SIGN_PATTERNS = [
    tuple(1 if i in pair else -1 for i in range(4)) for pair in EDGE_PAIRS
]


def perm_sign(p):
    s = 1
    for i in range(4):
        for j in range(i + 1, 4):
            if p[i] > p[j]:
                s = -s
    return s


ODD_PERMS = [p for p in permutations(range(4)) if perm_sign(p) < 0]


def canonical_new_perm(f):
    """Odd permutation fixing f used for every attach-new-tet gluing."""
    others = sorted(set(range(4)) - {f})
    a, b = others[0], others[1]
    p = list(range(4))
    p[a], p[b] = p[b], p[a]
    return tuple(p)


def opposite_pair(pair):
    return tuple(sorted(set(range(4)) - set(pair)))


def top_edge_of(signs):
    return opposite_pair(tuple(i for i in range(4) if signs[i] == 1))


def model_veer(signs, pair):
    """Forced veer of a side edge in the model tetrahedron (None for the
    top/bottom edges).  Mirrors trimodel._model_veer."""
    top = top_edge_of(signs)
    bottom = opposite_pair(top)
    if pair in (top, bottom):
        return None
    t0, t1 = top
    b0, b1 = bottom
    even = perm_sign((t0, t1, b0, b1)) > 0
    if set(pair) in ({t0, b0}, {t1, b1}):
        return "R" if even else "L"
    return "L" if even else "R"


class Searcher:
    def __init__(self, maxn):
        self.maxn = maxn
        self.found = []  # (gluings, signs)

    def run(self):
        for s0 in range(6):
            self._dfs([[None] * 4], [SIGN_PATTERNS[s0]])
        return self.found

    # -- pruning -------------------------------------------------------------

    def _edge_ok(self, glue, signs):
        """Walk every partial edge orbit; reject angle/veer violations."""
        n = len(glue)
        slot_angle = {}
        for t in range(n):
            top = top_edge_of(signs[t])
            bottom = opposite_pair(top)
            for pair in EDGE_PAIRS:
                slot_angle[(t, pair)] = 1 if pair in (top, bottom) else 0
        seen = set()
        for t in range(n):
            for pair in EDGE_PAIRS:
                if (t, pair) in seen:
                    continue
                # walk both directions from this slot
                chain = [(t, pair)]
                closed = False
                for direction in (0, 1):
                    cur_t, cur_pair = t, pair
                    enter_face = opposite_pair(cur_pair)[direction]
                    while True:
                        # leave through the other face containing the edge
                        leave = [
                            x
                            for x in opposite_pair(cur_pair)
                            if x != enter_face
                        ][0]
                        g = glue[cur_t][leave]
                        if g is None:
                            break
                        t2, f2, p = g
                        pair2 = tuple(sorted((p[cur_pair[0]], p[cur_pair[1]])))
                        if (t2, pair2) == (t, pair) and f2 == opposite_pair(
                            pair
                        )[direction]:
                            closed = True
                            break
                        cur_t, cur_pair, enter_face = t2, pair2, f2
                        if direction == 0:
                            chain.append((cur_t, cur_pair))
                        else:
                            chain.insert(0, (cur_t, cur_pair))
                    if closed:
                        break
                seen.update(chain)
                angle = sum(slot_angle[s] for s in chain)
                if closed:
                    if angle != 2:
                        return False
                elif angle > 2:
                    return False
                veers = {
                    model_veer(signs[s[0]], s[1])
                    for s in chain
                } - {None}
                if len(veers) > 1:
                    return False
                if closed:
                    # both fan sides must be nonempty: the two pi-slots
                    # may not be adjacent in the cyclic order unless the
                    # orbit is all-pi (impossible: angle 2 with >= 2
                    # zero-slots required for veering)
                    pis = [
                        i for i, s in enumerate(chain) if slot_angle[s] == 1
                    ]
                    if len(pis) != 2:
                        return False
                    k = len(chain)
                    gap1 = (pis[1] - pis[0]) % k
                    gap2 = (pis[0] - pis[1]) % k
                    if gap1 < 2 or gap2 < 2:
                        return False
        return True

    # -- depth-first search -----------------------------------------------------

    def _dfs(self, glue, signs):
        spot = None
        for t in range(len(glue)):
            for f in range(4):
                if glue[t][f] is None:
                    spot = (t, f)
                    break
            if spot:
                break
        if spot is None:
            self.found.append(
                ([list(tet) for tet in glue], [tuple(s) for s in signs])
            )
            return
        t, f = spot
        # option 1: attach a new tetrahedron
        if len(glue) < self.maxn:
            p = canonical_new_perm(f)
            inv = tuple(p.index(i) for i in range(4))
            for s2 in SIGN_PATTERNS:
                if s2[f] != -signs[t][f]:
                    continue
                glue.append([None] * 4)
                signs.append(s2)
                t2 = len(glue) - 1
                glue[t][f] = (t2, f, p)
                glue[t2][f] = (t, f, inv)
                if self._edge_ok(glue, signs):
                    self._dfs(glue, signs)
                glue[t][f] = None
                glue.pop()
                signs.pop()
        # option 2: glue to an existing unglued facet
        for t2 in range(len(glue)):
            for f2 in range(4):
                if glue[t2][f2] is not None or (t2, f2) <= (t, f):
                    continue
                if signs[t2][f2] != -signs[t][f]:
                    continue
                for p in ODD_PERMS:
                    if p[f] != f2:
                        continue
                    inv = tuple(p.index(i) for i in range(4))
                    glue[t][f] = (t2, f2, p)
                    glue[t2][f2] = (t, f, inv)
                    if self._edge_ok(glue, signs):
                        self._dfs(glue, signs)
                    glue[t][f] = None
                    glue[t2][f2] = None


# -- canonical form for deduplication ---------------------------------------------

EVEN_PERMS = [p for p in permutations(range(4)) if perm_sign(p) > 0]


def canonical_key(gluings, signs):
    """Lexicographically least relabeling over all (start tet, even
    start relabeling), with greedy even relabeling of tetrahedra in
    breadth-first discovery order."""
    n = len(gluings)
    best = None
    for t0 in range(n):
        for s0 in EVEN_PERMS:
            label = {t0: 0}
            relab = {t0: s0}
            order = [t0]
            rows = {}
            qi = 0
            while qi < len(order):
                told = order[qi]
                qi += 1
                sig = relab[told]
                row = []
                for fnew in range(4):
                    fold = sig.index(fnew)
                    t2, f2, p = gluings[told][fold]
                    if t2 not in label:
                        label[t2] = len(order)
                        # greedy: choose the even relabeling of t2 that
                        # lexicographically minimizes the induced perm
                        bestp = None
                        for s2 in EVEN_PERMS:
                            cand = tuple(
                                s2[p[sig.index(i)]] for i in range(4)
                            )
                            if bestp is None or cand < bestp[0]:
                                bestp = (cand, s2)
                        relab[t2] = bestp[1]
                        order.append(t2)
                    s2 = relab[t2]
                    newp = tuple(s2[p[sig.index(i)]] for i in range(4))
                    row.append((label[t2], s2[f2], newp))
                srow = tuple(signs[told][sig.index(i)] for i in range(4))
                rows[label[told]] = (tuple(row), srow)
            key = tuple(rows[i] for i in range(n))
            if best is None or key < best:
                best = key
    return best


def to_document(gluings, signs):
    tri = trimodel.Triangulation(gluings, signs)
    return ingest.from_triangulation(tri), tri


def main():
    maxn = int(sys.argv[1]) if len(sys.argv) > 1 else 4
    t0 = time.time()
    raw = Searcher(maxn).run()
    reps = {}
    for gluings, signs in raw:
        try:
            tri = trimodel.Triangulation(gluings, signs)
        except trimodel.ValidationError:
            continue
        key = canonical_key(gluings, signs)
        if key not in reps:
            reps[key] = (gluings, signs, tri)
    print(
        f"maxn={maxn}: {len(raw)} completions, "
        f"{len(reps)} up to isomorphism, {time.time() - t0:.1f}s"
    )
    by_size = {}
    for gluings, signs, tri in reps.values():
        by_size.setdefault(tri.n, []).append((gluings, signs, tri))
    for n in sorted(by_size):
        print(f"  n={n}: {len(by_size[n])}")
    return reps


if __name__ == "__main__":
    main()
