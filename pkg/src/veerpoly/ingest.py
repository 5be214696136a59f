"""Parsing and serialization of the native vt/1 triangulation format,
plus optional import of taut isomorphism-signature codes.

The vt/1 format is line oriented::

    vt/1
    tets 2
    tet 0
    glue 1:0:2103 1:1:0321 1:2:3120 1:3:1302
    coor + + - -
    veer R L L L R L
    tet 1
    ...

* ``glue`` gives, for faces 0..3 of the tetrahedron, the partner
  tetrahedron, partner face, and the gluing permutation as the images
  of vertices 0,1,2,3 (four digits).
* ``coor`` gives the coorientation sign of faces 0..3 (``+`` = face
  points out of this tetrahedron; the tetrahedron lies below it).
* ``veer`` gives six symbols (L/R) for the edge slots 01 02 03 12 13 23
  of the tetrahedron, or the single token ``infer``.

Lines starting with ``#`` and blank lines are ignored on input; the
canonical serialization contains neither.  ``parse_vt(serialize_vt(d))``
reproduces ``d`` bit-exactly.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .trimodel import EDGE_PAIRS, Triangulation, perm_sign, validate


class VtSyntaxError(ValueError):
    def __init__(self, message, line, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnknownFormatVersion(ValueError):
    pass


class CountMismatch(ValueError):
    pass


class MalformedCode(ValueError):
    pass


class NonVeering(ValueError):
    """A decoded taut structure fails veering (or transverse-taut)
    validation."""


class FeatureDisabled(RuntimeError):
    pass


@dataclass
class VtDocument:
    ntets: int
    gluings: list  # per tet: list of 4 (t2, f2, perm tuple)
    coorientations: list  # per tet: list of 4 ints in {1, -1}
    veers: list  # per tet: list of 6 symbols, or the string "infer"

    def __eq__(self, other):
        return (
            isinstance(other, VtDocument)
            and self.ntets == other.ntets
            and [[tuple(g) for g in t] for t in self.gluings]
            == [[tuple(g) for g in t] for t in other.gluings]
            and [list(t) for t in self.coorientations]
            == [list(t) for t in other.coorientations]
            and [
                t if isinstance(t, str) else list(t) for t in self.veers
            ]
            == [
                t if isinstance(t, str) else list(t) for t in other.veers
            ]
        )


def parse_vt(text):
    """Parse vt/1 text; total: every failure is a structured error with a
    location, never an uncaught crash."""
    lines = text.splitlines()
    # logical lines with 1-based numbers, comments/blanks skipped
    logical = [
        (i + 1, ln.strip())
        for i, ln in enumerate(lines)
        if ln.strip() and not ln.strip().startswith("#")
    ]
    pos = 0

    def take(expect=None):
        nonlocal pos
        if pos >= len(logical):
            last = logical[-1][0] if logical else 1
            raise VtSyntaxError(
                f"unexpected end of file"
                + (f" (expected {expect})" if expect else ""),
                last + 1,
            )
        item = logical[pos]
        pos += 1
        return item

    lineno, header = take("format tag")
    if header != "vt/1":
        if header.startswith("vt/"):
            raise UnknownFormatVersion(f"unsupported format tag {header!r}")
        raise VtSyntaxError(f"expected format tag 'vt/1', got {header!r}", lineno)

    lineno, tets_line = take("tets count")
    parts = tets_line.split()
    if len(parts) != 2 or parts[0] != "tets":
        raise VtSyntaxError("expected 'tets <count>'", lineno)
    try:
        n = int(parts[1])
    except ValueError:
        raise VtSyntaxError(f"bad tetrahedron count {parts[1]!r}", lineno)
    if n <= 0:
        raise CountMismatch(f"tetrahedron count must be positive, got {n}")

    gluings, coors, veers = [], [], []
    for t in range(n):
        lineno, tet_line = take(f"'tet {t}'")
        if tet_line.split() != ["tet", str(t)]:
            raise VtSyntaxError(f"expected 'tet {t}', got {tet_line!r}", lineno)

        lineno, glue_line = take("glue line")
        parts = glue_line.split()
        if not parts or parts[0] != "glue":
            raise VtSyntaxError("expected 'glue ...'", lineno)
        if len(parts) != 5:
            raise VtSyntaxError(
                f"glue line needs 4 entries, got {len(parts) - 1}", lineno
            )
        row = []
        col = len(parts[0]) + 2
        for entry in parts[1:]:
            bits = entry.split(":")
            ok = (
                len(bits) == 3
                and bits[0].isdigit()
                and bits[1].isdigit()
                and len(bits[2]) == 4
                and all(c in "0123" for c in bits[2])
            )
            if not ok:
                raise VtSyntaxError(
                    f"bad glue entry {entry!r} (want tet:face:perm4)",
                    lineno,
                    col,
                )
            t2, f2 = int(bits[0]), int(bits[1])
            perm = tuple(int(c) for c in bits[2])
            if t2 >= n:
                raise CountMismatch(
                    f"tet {t}: partner tetrahedron {t2} out of range"
                )
            if f2 >= 4 or sorted(perm) != [0, 1, 2, 3]:
                raise VtSyntaxError(f"bad glue entry {entry!r}", lineno, col)
            row.append((t2, f2, perm))
            col += len(entry) + 1
        gluings.append(row)

        lineno, coor_line = take("coor line")
        parts = coor_line.split()
        if parts[:1] != ["coor"] or len(parts) != 5 or any(
            s not in ("+", "-") for s in parts[1:]
        ):
            raise VtSyntaxError("expected 'coor' with 4 signs (+/-)", lineno)
        coors.append([1 if s == "+" else -1 for s in parts[1:]])

        lineno, veer_line = take("veer line")
        parts = veer_line.split()
        if parts[:1] != ["veer"]:
            raise VtSyntaxError("expected 'veer ...'", lineno)
        if parts[1:] == ["infer"]:
            veers.append("infer")
        elif len(parts) == 7 and all(s in ("L", "R") for s in parts[1:]):
            veers.append(parts[1:])
        else:
            raise VtSyntaxError(
                "expected 6 veer symbols (L/R) or the token 'infer'", lineno
            )

    if pos != len(logical):
        lineno, extra = logical[pos]
        raise VtSyntaxError(f"trailing content {extra!r}", lineno)
    return VtDocument(n, gluings, coors, veers)


def serialize_vt(doc):
    """Canonical text: fixed field order, single spaces, trailing newline."""
    out = ["vt/1", f"tets {doc.ntets}"]
    for t in range(doc.ntets):
        out.append(f"tet {t}")
        entries = " ".join(
            f"{t2}:{f2}:{''.join(str(v) for v in perm)}"
            for (t2, f2, perm) in doc.gluings[t]
        )
        out.append(f"glue {entries}")
        out.append(
            "coor " + " ".join("+" if s == 1 else "-" for s in doc.coorientations[t])
        )
        v = doc.veers[t]
        if v == "infer":
            out.append("veer infer")
        else:
            out.append("veer " + " ".join(v))
    return "\n".join(out) + "\n"


def to_triangulation(doc):
    """Validate a document into a Triangulation (inferring veers where
    requested)."""
    if all(v == "infer" for v in doc.veers):
        slot_veers = None
    else:
        slot_veers = {}
        for t, row in enumerate(doc.veers):
            if row == "infer":
                continue
            for k, pair in enumerate(EDGE_PAIRS):
                slot_veers[(t, pair)] = row[k]
    return validate(doc.gluings, doc.coorientations, slot_veers)


def from_triangulation(tri):
    """Document with explicit veer labels for a validated triangulation."""
    veers = []
    for t in range(tri.n):
        veers.append(
            [tri.veers[tri.edge_of_slot[(t, pair)]] for pair in EDGE_PAIRS]
        )
    return VtDocument(
        tri.n,
        [list(tri.gluings[t]) for t in range(tri.n)],
        [list(tri.coorientations[t]) for t in range(tri.n)],
        veers,
    )


# -- taut isomorphism-signature import ----------------------------------------
#
# Optional feature (the byte-level decoding follows an external census
# convention, not anything defined in this package's own format).  It can
# be switched off by setting VEERPOLY_NO_ISOSIG=1 in the environment.

_SIG_ALPHABET = (
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789+-"
)
_SIG_VALUE = {c: i for i, c in enumerate(_SIG_ALPHABET)}

# angle digit d in {0,1,2} selects the opposite-edge pair carrying angle
# pi: 0 -> edges 01 & 23, 1 -> 02 & 13, 2 -> 03 & 12.  Pinned by
# round-tripping the 2-tetrahedron census example against the bundled
# native fixture (see fixtures/oracles).
_DIGIT_PI_PAIRS = {0: ((0, 1), (2, 3)), 1: ((0, 2), (1, 3)), 2: ((0, 3), (1, 2))}


def _perm_from_ordered_index(idx):
    """The idx-th permutation of (0,1,2,3) in lexicographic order."""
    items = [0, 1, 2, 3]
    perm = []
    for k in (6, 2, 1, 1):
        q, idx = divmod(idx, k)
        perm.append(items.pop(q))
    return tuple(perm)


def isosig_enabled():
    return os.environ.get("VEERPOLY_NO_ISOSIG", "") not in ("1", "true", "yes")


def _try_decode(vals, n, nactions):
    """Attempt to decode with the given number of action entries.

    The stream is: packed 2-bit actions (3 per char), then one
    destination char per type-2 join, then one permutation char per
    type-2 join.  The action count fixes the section boundaries;
    joins are applied during the scan, because a join's destination
    facet always comes later in scan order and must be skipped.
    """
    ntypechars = (nactions + 2) // 3
    actions = []
    for k in range(nactions):
        v = vals[1 + k // 3]
        actions.append((v >> (2 * (k % 3))) & 3)
    j = sum(1 for a in actions if a == 2)
    if 1 + ntypechars + 2 * j != len(vals):
        return None
    dests = vals[1 + ntypechars : 1 + ntypechars + j]
    perm_vals = vals[1 + ntypechars + j :]
    if any(v >= 24 for v in perm_vals):
        return None
    glue = [[None] * 4 for _ in range(n)]
    created = 1
    ai = 0
    ji = 0
    for t in range(n):
        for f in range(4):
            if glue[t][f] is not None:
                continue
            if ai >= nactions:
                return None
            a = actions[ai]
            ai += 1
            if a == 0:
                # boundary facet: not a closed-up ideal triangulation
                return None
            if a == 1:
                if created >= n:
                    return None
                glue[t][f] = (created, f, (0, 1, 2, 3))
                glue[created][f] = (t, f, (0, 1, 2, 3))
                created += 1
            elif a == 2:
                t2 = dests[ji]
                p = _perm_from_ordered_index(perm_vals[ji])
                ji += 1
                if t2 >= n:
                    return None
                f2 = p[f]
                if glue[t2][f2] is not None:
                    return None
                glue[t][f] = (t2, f2, p)
                inv = [0, 0, 0, 0]
                for i, v in enumerate(p):
                    inv[v] = i
                glue[t2][f2] = (t, f, tuple(inv))
            else:
                return None
    if ai != nactions or ji != j or created != n:
        return None
    if any(g is None for row in glue for g in row):
        return None
    return glue


def decode_isosig(sig):
    """Decode a (3-dimensional, connected, closed-facet, < 63 simplices)
    isomorphism signature into raw gluings (partner tet, partner face,
    permutation)."""
    if not sig or any(c not in _SIG_VALUE for c in sig):
        raise MalformedCode(f"bad signature characters in {sig!r}")
    vals = [_SIG_VALUE[c] for c in sig]
    n = vals[0]
    if n == 0 or n >= 63:
        raise MalformedCode("only signatures with 1..62 tetrahedra supported")
    for nactions in range(1, 4 * n + 1):
        glue = _try_decode(vals, n, nactions)
        if glue is not None:
            return glue
    raise MalformedCode(f"cannot decode signature {sig!r}")


def _orient_gluings(glue):
    """Relabel tetrahedra (swapping vertices 2,3 where needed) so every
    gluing permutation is odd; returns (gluings, flipped list)."""
    n = len(glue)
    flip = [None] * n
    flip[0] = False
    queue = [0]
    while queue:
        t = queue.pop()
        for f in range(4):
            t2, f2, p = glue[t][f]
            want = flip[t] ^ (perm_sign(p) == 1)
            if flip[t2] is None:
                flip[t2] = want
                queue.append(t2)
            elif flip[t2] != want:
                raise NonVeering("triangulation is not orientable")
    swap = (0, 1, 3, 2)
    out = []
    for t in range(n):
        row = []
        for f in range(4):
            f_orig = swap[f] if flip[t] else f
            t2, f2, p = glue[t][f_orig]
            if flip[t]:
                p = tuple(p[swap[i]] for i in range(4))
            if flip[t2]:
                p = tuple(swap[v] for v in p)
                f2 = swap[f2]
            row.append((t2, f2, p))
        out.append(row)
    return out, flip


def _coorientations_from_pi_pairs(glue, pi_pairs):
    """Transverse-taut propagation: choose which pi-edge of each
    tetrahedron is the top edge, consistently across gluings."""
    n = len(glue)
    for first_top in (0, 1):
        top = [None] * n
        top[0] = pi_pairs[0][first_top]
        queue = [0]
        ok = True
        while queue and ok:
            t = queue.pop()
            bottom_pair = tuple(v for v in range(4) if v not in top[t])
            signs = [1 if f in bottom_pair else -1 for f in range(4)]
            for f in range(4):
                t2, f2, p = glue[t][f]
                want_sign = -signs[f]
                # sign[f2] = +1 iff f2 lies in t2's bottom-edge pair
                cands = []
                for which in (0, 1):
                    cand_top = pi_pairs[t2][which]
                    cand_bottom = tuple(
                        v for v in range(4) if v not in cand_top
                    )
                    s = 1 if f2 in cand_bottom else -1
                    if s == want_sign:
                        cands.append(cand_top)
                if len(cands) != 1:
                    ok = False
                    break
                if top[t2] is None:
                    top[t2] = cands[0]
                    queue.append(t2)
                elif top[t2] != cands[0]:
                    ok = False
                    break
        if ok and all(tp is not None for tp in top):
            coors = []
            for t in range(n):
                bottom_pair = tuple(v for v in range(4) if v not in top[t])
                coors.append([1 if f in bottom_pair else -1 for f in range(4)])
            return coors
    raise NonVeering("taut structure admits no transverse coorientation")


def import_taut_isosig(code):
    """Decode 'isoSig_digits' into a validated veering VtDocument."""
    if not isosig_enabled():
        raise FeatureDisabled(
            "taut signature import disabled (VEERPOLY_NO_ISOSIG is set)"
        )
    if "_" not in code:
        raise MalformedCode("expected 'signature_digits'")
    sig, _, digits = code.partition("_")
    glue = decode_isosig(sig)
    n = len(glue)
    if len(digits) != n or any(c not in "012" for c in digits):
        raise MalformedCode(
            f"angle digit string must be {n} digits over 0/1/2"
        )
    pi_by_digit = [list(_DIGIT_PI_PAIRS[int(c)]) for c in digits]
    glue, flip = _orient_gluings(glue)
    swap = (0, 1, 3, 2)
    pi_pairs = []
    for t in range(n):
        pairs = pi_by_digit[t]
        if flip[t]:
            pairs = [
                tuple(sorted((swap[a], swap[b]))) for (a, b) in pairs
            ]
            pairs.sort()
        pi_pairs.append(tuple(pairs))
    coors = _coorientations_from_pi_pairs(glue, pi_pairs)
    try:
        tri = validate(glue, coors, None)
    except ValueError as exc:
        raise NonVeering(f"decoded taut structure is not veering: {exc}")
    return from_triangulation(tri)
