"""Multivariate Laurent polynomials over the integers.

Exact arithmetic only: coefficients are arbitrary-precision integers,
exponent vectors are small dense integer tuples.  The invertible
elements of this ring are exactly the terms ``+-x^v`` ("units"); many
invariants in this package are only defined up to such a unit, so the
canonical form produced by :func:`normalize_unit` is used whenever two
results must be compared.
"""

from __future__ import annotations

from itertools import combinations


class DivisionByZero(ZeroDivisionError):
    pass


class Inexact(ArithmeticError):
    """Raised by exact division when the divisor does not divide."""


class Laurent:
    """A Laurent polynomial in ``nvars`` variables over the integers.

    Stored as a mapping from exponent tuples (length ``nvars``, entries
    may be negative) to nonzero integer coefficients.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for exp, c in terms.items():
                if c:
                    e = tuple(exp)
                    if len(e) != nvars:
                        raise ValueError("exponent length != nvars")
                    self.terms[e] = self.terms.get(e, 0) + c
            self.terms = {e: c for e, c in self.terms.items() if c}

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, nvars):
        return cls(nvars)

    @classmethod
    def const(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def one(cls, nvars):
        return cls.const(nvars, 1)

    @classmethod
    def monomial(cls, nvars, exp, c=1):
        return cls(nvars, {tuple(exp): c})

    # -- predicates ----------------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_one(self):
        return self.terms == {(0,) * self.nvars: 1}

    def is_unit(self):
        return len(self.terms) == 1 and abs(next(iter(self.terms.values()))) == 1

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, Laurent)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- arithmetic ----------------------------------------------------
    def _check(self, other):
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        r = Laurent(self.nvars)
        r.terms = terms
        return r

    def __neg__(self):
        r = Laurent(self.nvars)
        r.terms = {e: -c for e, c in self.terms.items()}
        return r

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return Laurent(self.nvars)
            r = Laurent(self.nvars)
            r.terms = {e: c * other for e, c in self.terms.items()}
            return r
        self._check(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        r = Laurent(self.nvars)
        r.terms = terms
        return r

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power; invert units explicitly")
        r = Laurent.one(self.nvars)
        base = self
        while k:
            if k & 1:
                r = r * base
            base = base * base
            k >>= 1
        return r

    def shift(self, exp):
        """Multiply by the monomial x^exp."""
        exp = tuple(exp)
        r = Laurent(self.nvars)
        r.terms = {
            tuple(a + b for a, b in zip(e, exp)): c for e, c in self.terms.items()
        }
        return r

    # -- support helpers ------------------------------------------------
    def min_exponent(self):
        """Componentwise minimum exponent over the support."""
        if not self.terms:
            return (0,) * self.nvars
        cols = zip(*self.terms.keys())
        return tuple(min(col) for col in cols)

    def max_exponent(self):
        if not self.terms:
            return (0,) * self.nvars
        cols = zip(*self.terms.keys())
        return tuple(max(col) for col in cols)

    def support(self):
        return sorted(self.terms.keys())

    def num_terms(self):
        return len(self.terms)

    # -- rendering -------------------------------------------------------
    def __repr__(self):
        return f"Laurent({self.nvars}, {render(self)!r})"

    def __str__(self):
        return render(self)


_VAR_NAMES = "abcdefghijklmnopqrstuvwxyz"


def var_name(i):
    if i < len(_VAR_NAMES):
        return _VAR_NAMES[i]
    return f"x{i}"


def render(p):
    """Text form: monomials in graded-lex descending order, e.g. "a*b^-1 + 3"."""
    if p.is_zero():
        return "0"
    keys = sorted(p.terms.keys(), key=lambda e: (sum(e), e), reverse=True)
    parts = []
    for e in keys:
        c = p.terms[e]
        factors = []
        for i, k in enumerate(e):
            if k == 0:
                continue
            if k == 1:
                factors.append(var_name(i))
            else:
                factors.append(f"{var_name(i)}^{k}")
        mono = "*".join(factors)
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)


def parse_render(text, nvars):
    """Inverse of :func:`render` for fixture manifests."""
    text = text.strip()
    if text == "0":
        return Laurent.zero(nvars)
    text = text.replace("- ", "+ -").replace("+ ", "\x00")
    p = Laurent.zero(nvars)
    for chunk in text.split("\x00"):
        chunk = chunk.strip()
        neg = chunk.startswith("-")
        if neg:
            chunk = chunk[1:]
        coeff = 1
        exp = [0] * nvars
        for factor in chunk.split("*"):
            factor = factor.strip()
            if not factor:
                continue
            if factor[0].isdigit():
                coeff *= int(factor)
            else:
                name, _, power = factor.partition("^")
                if name.startswith("x"):
                    idx = int(name[1:])
                else:
                    idx = _VAR_NAMES.index(name)
                exp[idx] += int(power) if power else 1
        p = p + Laurent.monomial(nvars, exp, -coeff if neg else coeff)
    return p


# -- canonical form ------------------------------------------------------


def normalize_unit(p):
    """Canonical representative of the unit class {+-x^v * p}.

    Canonical means: the componentwise-minimum exponent of the support
    is the zero vector, and the coefficient of the lexicographically
    greatest monomial is positive.  Zero maps to zero.
    """
    if p.is_zero():
        return Laurent(p.nvars)
    mins = p.min_exponent()
    q = p.shift(tuple(-m for m in mins))
    top = max(q.terms.keys())
    if q.terms[top] < 0:
        q = -q
    return q


# -- exact division --------------------------------------------------------


def _lex_leading(terms):
    e = max(terms.keys())
    return e, terms[e]


def div_exact(p, q):
    """Return r with p = q * r exactly, or raise Inexact.

    Valid over this integral domain: ordinary lex-leading-term division
    terminates with zero remainder precisely when q divides p.
    """
    if q.is_zero():
        raise DivisionByZero("division by the zero polynomial")
    if p.is_zero():
        return Laurent(p.nvars)
    p._check(q)
    # strip the monomial part of q so that leading-term divisibility of
    # exponents is never an obstruction coming from Laurent shifts
    qmin = q.min_exponent()
    q0 = q.shift(tuple(-m for m in qmin))
    rem = p.shift(tuple(-m for m in qmin))
    le_q, lc_q = _lex_leading(q0.terms)
    # the true quotient's exponents are confined to this box (lowest and
    # highest graded parts multiply over an integral domain); stepping
    # outside proves inexactness and guarantees termination
    box_lo = rem.min_exponent()
    box_hi = tuple(a - b for a, b in zip(rem.max_exponent(), q0.max_exponent()))
    quo = Laurent(p.nvars)
    while not rem.is_zero():
        le_r, lc_r = _lex_leading(rem.terms)
        if lc_r % lc_q != 0:
            raise Inexact(f"coefficient {lc_r} not divisible by {lc_q}")
        te = tuple(a - b for a, b in zip(le_r, le_q))
        if any(x < lo or x > hi for x, lo, hi in zip(te, box_lo, box_hi)):
            raise Inexact("quotient support left its bounding box")
        t = Laurent.monomial(p.nvars, te, lc_r // lc_q)
        quo = quo + t
        rem = rem - t * q0
    return quo


def divides(q, p):
    if q.is_zero():
        return p.is_zero()
    try:
        div_exact(p, q)
        return True
    except Inexact:
        return False


# -- gcd --------------------------------------------------------------------


def _int_content(terms):
    from math import gcd as igcd

    g = 0
    for c in terms.values():
        g = igcd(g, c)
    return g


def _poly_to_recursive(p, var):
    """Split exponent tuples at position var: dict[deg] -> Laurent in other vars."""
    out = {}
    for e, c in p.terms.items():
        d = e[var]
        rest = e[:var] + e[var + 1 :]
        out.setdefault(d, {})[rest] = out.get(d, {}).get(rest, 0) + c
    coeffs = {}
    for d, terms in out.items():
        q = Laurent(p.nvars - 1)
        q.terms = {e: c for e, c in terms.items() if c}
        if q.terms:
            coeffs[d] = q
    return coeffs


def _recursive_to_poly(coeffs, var, nvars):
    p = Laurent(nvars)
    terms = {}
    for d, q in coeffs.items():
        for e, c in q.terms.items():
            terms[e[:var] + (d,) + e[var:]] = c
    p.terms = terms
    return p


def _gcd_many(polys):
    g = None
    for p in polys:
        g = p if g is None else _gcd_poly(g, p)
        if g.is_one():
            return g
    return g


def _mul_scalar_poly(coeffs, s):
    return {d: q * s for d, q in coeffs.items()}


def _prem(a, b, var, nvars):
    """Pseudo-remainder of a by b as polynomials in x_var."""
    ac = _poly_to_recursive(a, var)
    bc = _poly_to_recursive(b, var)
    db = max(bc.keys())
    lb = bc[db]
    while ac:
        da = max(ac.keys())
        if da < db:
            break
        la = ac[da]
        # ac <- lb*ac - la*x^(da-db)*bc
        new = {}
        for d, q in ac.items():
            new[d] = q * lb
        for d, q in bc.items():
            t = q * la
            dd = d + da - db
            new[dd] = new.get(dd, Laurent(nvars - 1)) - t
        ac = {d: q for d, q in new.items() if not q.is_zero()}
    return _recursive_to_poly(ac, var, nvars)


def _primitive_part(p, var):
    """(content, primitive part) of p as a polynomial in x_var."""
    coeffs = _poly_to_recursive(p, var)
    cont = _gcd_many(list(coeffs.values()))
    pp = {d: div_exact(q, cont) for d, q in coeffs.items()}
    return cont, _recursive_to_poly(pp, var, p.nvars)


def _gcd_poly(p, q):
    """gcd of two Laurent polynomials, up to units (not canonicalized)."""
    if p.is_zero():
        return q
    if q.is_zero():
        return p
    # strip monomial content (units)
    p = p.shift(tuple(-m for m in p.min_exponent()))
    q = q.shift(tuple(-m for m in q.min_exponent()))
    if p.nvars == 0:
        from math import gcd as igcd

        return Laurent.const(0, igcd(p.terms.get((), 0), q.terms.get((), 0)))
    # choose the last variable actually occurring in either
    var = None
    for i in range(p.nvars - 1, -1, -1):
        if p.max_exponent()[i] > 0 or q.max_exponent()[i] > 0:
            var = i
            break
    if var is None:
        from math import gcd as igcd

        a = p.terms.get((0,) * p.nvars, 0)
        b = q.terms.get((0,) * q.nvars, 0)
        return Laurent.const(p.nvars, igcd(a, b))
    if p.max_exponent()[var] == 0 or q.max_exponent()[var] == 0:
        # one input is free of x_var: gcd = gcd of the other's coefficients
        # with that input
        if p.max_exponent()[var] == 0:
            free, other = p, q
        else:
            free, other = q, p
        coeffs = list(_poly_to_recursive(other, var).values())
        g = _gcd_many(coeffs + [_drop_var(free, var)])
        return _lift_var(g, var)
    cp, pp = _primitive_part(p, var)
    cq, qq = _primitive_part(q, var)
    cont = _lift_var(_gcd_poly(cp, cq), var)
    a, b = pp, qq
    while True:
        if _deg(b, var) > _deg(a, var):
            a, b = b, a
        r = _prem(a, b, var, p.nvars)
        if r.is_zero():
            _, g = _primitive_part(b, var)
            return cont * g
        if _deg(r, var) == 0:
            return cont
        _, r = _primitive_part(r, var)
        a, b = b, r


def _deg(p, var):
    return p.max_exponent()[var]


def _drop_var(p, var):
    q = Laurent(p.nvars - 1)
    q.terms = {e[:var] + e[var + 1 :]: c for e, c in p.terms.items()}
    return q


def _lift_var(p, var):
    q = Laurent(p.nvars + 1)
    q.terms = {e[:var] + (0,) + e[var:]: c for e, c in p.terms.items()}
    return q


def gcd_laurent(p, q):
    """gcd up to units, returned in canonical form."""
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd(0, 0) undefined")
    return normalize_unit(_gcd_poly(p, q))


# -- specialization ----------------------------------------------------------


def specialize(p, alpha):
    """Push forward along the integral class alpha: x^g -> u^(alpha . g)."""
    alpha = tuple(alpha)
    if len(alpha) != p.nvars:
        raise ValueError("class length != variable count")
    r = Laurent(1)
    terms = {}
    for e, c in p.terms.items():
        k = sum(a * b for a, b in zip(alpha, e))
        s = terms.get((k,), 0) + c
        if s:
            terms[(k,)] = s
        else:
            terms.pop((k,), None)
    r.terms = terms
    return r


def substitute(p, matrix):
    """Apply the exponent substitution x^v -> x^(M v) (M integral b' x b)."""
    if not p.terms:
        return Laurent(len(matrix))
    bnew = len(matrix)
    r = Laurent(bnew)
    terms = {}
    for e, c in p.terms.items():
        newe = tuple(sum(row[j] * e[j] for j in range(p.nvars)) for row in matrix)
        s = terms.get(newe, 0) + c
        if s:
            terms[newe] = s
        else:
            terms.pop(newe, None)
    r.terms = terms
    return r


# -- matrices ------------------------------------------------------------------


class LaurentMatrix:
    """Rectangular matrix of Laurent polynomials."""

    __slots__ = ("rows", "cols", "nvars", "data")

    def __init__(self, rows, cols, nvars, data=None):
        self.rows = rows
        self.cols = cols
        self.nvars = nvars
        if data is None:
            self.data = [
                [Laurent(nvars) for _ in range(cols)] for _ in range(rows)
            ]
        else:
            if len(data) != rows or any(len(r) != cols for r in data):
                raise ValueError("inconsistent dimensions")
            self.data = [list(r) for r in data]

    def __getitem__(self, ij):
        return self.data[ij[0]][ij[1]]

    def __setitem__(self, ij, value):
        self.data[ij[0]][ij[1]] = value

    def __eq__(self, other):
        return (
            isinstance(other, LaurentMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def column(self, j):
        return [self.data[i][j] for i in range(self.rows)]

    def matmul(self, other):
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        out = LaurentMatrix(self.rows, other.cols, self.nvars)
        for i in range(self.rows):
            for k in range(self.cols):
                a = self.data[i][k]
                if a.is_zero():
                    continue
                for j in range(other.cols):
                    b = other.data[k][j]
                    if b.is_zero():
                        continue
                    out.data[i][j] = out.data[i][j] + a * b
        return out

    def submatrix(self, row_idx, col_idx):
        return LaurentMatrix(
            len(row_idx),
            len(col_idx),
            self.nvars,
            [[self.data[i][j] for j in col_idx] for i in row_idx],
        )


_COFACTOR_THRESHOLD = 4


def _det_cofactor(m):
    n = m.rows
    if n == 0:
        return Laurent.one(m.nvars)
    if n == 1:
        return m.data[0][0]
    # expand along the row with the fewest nonzero entries
    best = min(range(n), key=lambda i: sum(1 for p in m.data[i] if p))
    det = Laurent(m.nvars)
    cols = list(range(n))
    rows = [i for i in range(n) if i != best]
    for pos, j in enumerate(cols):
        a = m.data[best][j]
        if a.is_zero():
            continue
        minor = m.submatrix(rows, [c for c in cols if c != j])
        term = a * _det_cofactor(minor)
        det = det + term if (best + pos) % 2 == 0 else det - term
    return det


def det_laurent(m):
    """Exact determinant via fraction-free elimination.

    Bareiss one-step elimination: every division is exact over the
    polynomial ring.  Cofactor expansion below a small size threshold.
    """
    if m.rows != m.cols:
        raise ValueError("determinant of a nonsquare matrix")
    n = m.rows
    if n <= _COFACTOR_THRESHOLD:
        return _det_cofactor(m)
    a = [[m.data[i][j] for j in range(n)] for i in range(n)]
    sign = 1
    prev = Laurent.one(m.nvars)
    for k in range(n - 1):
        # pivot: fewest terms among nonzero entries of the trailing block,
        # ties broken row-major (deterministic)
        pivot = None
        for i in range(k, n):
            for j in range(k, n):
                if a[i][j]:
                    key = (a[i][j].num_terms(), i, j)
                    if pivot is None or key < pivot[0]:
                        pivot = (key, i, j)
        if pivot is None:
            return Laurent(m.nvars)
        _, pi, pj = pivot
        if pi != k:
            a[k], a[pi] = a[pi], a[k]
            sign = -sign
        if pj != k:
            for row in a:
                row[k], row[pj] = row[pj], row[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = div_exact(num, prev)
            a[i][k] = Laurent(m.nvars)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign == 1 else -det


def all_minors_gcd(m, size, budget, early_exit=True):
    """gcd of all size x size minors of m, canonical; None if all are zero.

    Raises ValueError if the number of minors exceeds the budget.
    """
    from math import comb

    if m.rows != size:
        raise ValueError("row count must equal minor size here")
    count = comb(m.cols, size)
    if count > budget:
        raise ValueError(f"minor count {count} exceeds budget {budget}")
    g = None
    rows = list(range(size))
    for cols in combinations(range(m.cols), size):
        d = det_laurent(m.submatrix(rows, list(cols)))
        if d.is_zero():
            continue
        g = d if g is None else _gcd_poly(g, d)
        if early_exit and normalize_unit(g).is_one():
            return Laurent.one(m.nvars)
    return normalize_unit(g) if g is not None else None
