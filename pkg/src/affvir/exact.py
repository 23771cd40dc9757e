"""Exact scalar arithmetic: rationals, optional Gaussian rationals, univariate
polynomials in the indeterminate nu, and exact rank/kernel computations for
sparse matrices over these rings.

Everything here is exact; no floats are accepted or produced.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class ExactArithError(Exception):
    pass


class EmptyMatrix(ExactArithError):
    pass


# ---------------------------------------------------------------------------
# scalars


@dataclass(frozen=True)
class GaussRat:
    """Gaussian rational re + im*i with exact Fraction parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    def _coerce(self, other):
        if isinstance(other, GaussRat):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussRat(Fraction(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRat(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRat(self.re * o.re - self.im * o.im,
                        self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussRat((self.re * o.re + self.im * o.im) / n,
                        (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def conj(self):
        return GaussRat(self.re, -self.im)

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"

    def __repr__(self):
        return f"GaussRat({self.re!r}, {self.im!r})"


def parse_scalar(text, gaussian=False):
    """Parse "p/q" (or "p/q+r/si" when gaussian) into an exact scalar.

    Floats are rejected: the decimal point is not part of the grammar.
    """
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty scalar")
    if "." in s:
        raise ValueError(f"floating point not accepted: {text!r}")
    if not gaussian:
        return Fraction(s)
    if not s.endswith("i"):
        return GaussRat(Fraction(s))
    body = s[:-1]
    # split a trailing imaginary term off an optional real part
    for pos in range(len(body) - 1, 0, -1):
        if body[pos] in "+-" and body[pos - 1] not in "+-/":
            re_part, im_part = body[:pos], body[pos:]
            break
    else:
        re_part, im_part = "", body
    if im_part in ("", "+"):
        im = Fraction(1)
    elif im_part == "-":
        im = Fraction(-1)
    else:
        im = Fraction(im_part)
    re = Fraction(re_part) if re_part else Fraction(0)
    return GaussRat(re, im)


def scalar_str(x):
    """Canonical string form, inverse to parse_scalar."""
    return str(x)


def scalar_floor(x):
    """Floor of the real part; used for normalizing loop parameters mod 1."""
    if isinstance(x, GaussRat):
        return x.re.numerator // x.re.denominator
    return x.numerator // x.denominator


def is_nonneg_int(x) -> bool:
    if isinstance(x, GaussRat):
        return x.im == 0 and is_nonneg_int(x.re)
    return x.denominator == 1 and x.numerator >= 0


# ---------------------------------------------------------------------------
# univariate polynomials in nu


class NuPoly:
    """Dense univariate polynomial over the scalar field, indeterminate nu."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c):
        return cls((c,))

    @classmethod
    def nu(cls):
        return cls((Fraction(0), Fraction(1)))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def leading(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other):
        if isinstance(other, NuPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, GaussRat)):
            return self == NuPoly.const(Fraction(other) if isinstance(other, int) else other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            a[i] = a[i] + c
        return NuPoly(a)

    __radd__ = __add__

    def __neg__(self):
        return NuPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) + (-self)

    def __mul__(self, other):
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return NuPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return NuPoly(out)

    __rmul__ = __mul__

    def divmod(self, other):
        """Exact polynomial division with remainder over the field."""
        other = _as_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(0, len(rem) - len(other.coeffs) + 1)
        d = other.degree
        lead = other.leading()
        while len(rem) - 1 >= d and rem:
            while rem and not rem[-1]:
                rem.pop()
            if len(rem) - 1 < d:
                break
            c = rem[-1] / lead
            k = len(rem) - 1 - d
            q[k] = c
            for i, b in enumerate(other.coeffs):
                rem[k + i] = rem[k + i] - c * b
            rem.pop()
        return NuPoly(q), NuPoly(rem)

    def exact_div(self, other):
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ExactArithError("inexact polynomial division")
        return q

    def eval(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def map_coeffs(self, f):
        return NuPoly(tuple(f(c) for c in self.coeffs))

    def primitive_int(self):
        """Integer-coefficient primitive part (rational coefficients only)."""
        if not self.coeffs:
            return []
        if any(isinstance(c, GaussRat) for c in self.coeffs):
            raise ExactArithError("primitive part needs rational coefficients")
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = gcd(g, abs(v))
        return [v // g for v in ints] if g else ints

    def rational_roots(self):
        """All rational roots, by the rational-root test on the primitive part.

        Gaussian coefficients are handled through the norm polynomial p*conj(p),
        whose rational roots contain every rational root of p.
        """
        if self.is_zero():
            raise ExactArithError("zero polynomial has every root")
        if any(isinstance(c, GaussRat) for c in self.coeffs):
            conj = self.map_coeffs(lambda c: c.conj() if isinstance(c, GaussRat) else c)
            norm = self * conj
            real = norm.map_coeffs(lambda c: c.re if isinstance(c, GaussRat) else c)
            return sorted(r for r in real.rational_roots() if not self.eval(r))
        ints = self.primitive_int()
        # strip nu^k factor: 0 is a root iff the constant term vanishes
        shift = 0
        while ints and ints[0] == 0:
            ints.pop(0)
            shift += 1
        roots = set()
        if shift:
            roots.add(Fraction(0))
        if len(ints) > 1:
            a0, an = abs(ints[0]), abs(ints[-1])
            for p in _divisors(a0):
                for q in _divisors(an):
                    for cand in (Fraction(p, q), Fraction(-p, q)):
                        if cand not in roots and not self.eval(cand):
                            roots.add(cand)
        return sorted(roots)

    def has_nonrational_factor(self):
        """True if some irreducible factor has no rational root (degree > 0 left
        after dividing out all rational roots)."""
        p = self
        for r in self.rational_roots():
            lin = NuPoly((-r, Fraction(1)))
            while True:
                q, rem = p.divmod(lin)
                if rem.is_zero():
                    p = q
                else:
                    break
        return p.degree > 0

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*nu" if c != 1 else "nu")
            else:
                parts.append(f"{c}*nu^{i}" if c != 1 else f"nu^{i}")
        return " + ".join(parts)

    def __repr__(self):
        return f"NuPoly({self.coeffs!r})"


def _as_poly(x):
    if isinstance(x, NuPoly):
        return x
    if isinstance(x, int):
        return NuPoly.const(Fraction(x))
    if isinstance(x, (Fraction, GaussRat)):
        return NuPoly.const(x)
    raise TypeError(f"cannot coerce {type(x)} to NuPoly")


def _divisors(n):
    n = abs(n)
    if n == 0:
        return [1]
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


# ---------------------------------------------------------------------------
# sparse matrices


class SparseMatrix:
    """Sparse matrix with exact entries; zero entries are never stored."""

    def __init__(self, rows, cols, entries=None):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimensions")
        self.rows = rows
        self.cols = cols
        self.entries = {}
        if entries:
            for (r, c), v in entries.items():
                self[r, c] = v

    def __setitem__(self, rc, v):
        r, c = rc
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError(f"entry ({r},{c}) out of range")
        if v:
            self.entries[r, c] = v
        else:
            self.entries.pop((r, c), None)

    def __getitem__(self, rc):
        return self.entries.get(rc, Fraction(0))

    @classmethod
    def from_rows(cls, data):
        m = cls(len(data), len(data[0]) if data else 0)
        for i, row in enumerate(data):
            for j, v in enumerate(row):
                if v:
                    m[i, j] = v if isinstance(v, (Fraction, GaussRat, NuPoly)) else Fraction(v)
        return m

    def row_dicts(self):
        rows = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def subs(self, value):
        """Evaluate a NuPoly matrix at nu = value, giving a scalar matrix."""
        m = SparseMatrix(self.rows, self.cols)
        for (r, c), v in self.entries.items():
            m[r, c] = v.eval(value) if isinstance(v, NuPoly) else v
        return m


def _pick_pivot(rows, live_rows, live_cols, rule):
    """Pivot position among live rows/cols. "markowitz" favours sparsity,
    "first" takes the first structurally nonzero entry. Correctness does not
    depend on the rule."""
    col_count = {}
    for i in live_rows:
        for j in rows[i]:
            if j in live_cols:
                col_count[j] = col_count.get(j, 0) + 1
    best = None
    for i in live_rows:
        for j, v in rows[i].items():
            if j not in live_cols or not v:
                continue
            if rule == "first":
                return i, j
            score = (len(rows[i]) - 1) * (col_count[j] - 1)
            if best is None or score < best[0]:
                best = (score, i, j)
    if best is None:
        return None
    return best[1], best[2]


def rank_and_kernel(m: SparseMatrix, pivot_rule="markowitz"):
    """Exact rank and kernel basis by fraction-free elimination.

    Returns (rank, kernel_basis) where each kernel vector v satisfies m*v = 0
    exactly and rank + len(kernel_basis) == m.cols.
    """
    rows = m.row_dicts()
    live_rows = set(range(m.rows))
    live_cols = set(range(m.cols))
    pivots = []  # (row, col) in elimination order
    while True:
        pos = _pick_pivot(rows, live_rows, live_cols, pivot_rule)
        if pos is None:
            break
        pi, pj = pos
        pivots.append((pi, pj))
        live_rows.discard(pi)
        live_cols.discard(pj)
        pv = rows[pi][pj]
        for i in list(live_rows):
            riv = rows[i].get(pj)
            if not riv:
                continue
            factor = riv / pv
            ri = rows[i]
            for j, v in rows[pi].items():
                if j == pj:
                    ri.pop(j, None)
                    continue
                nv = ri.get(j, Fraction(0)) - factor * v
                if nv:
                    ri[j] = nv
                else:
                    ri.pop(j, None)
            ri.pop(pj, None)
    rank = len(pivots)
    free_cols = sorted(live_cols)
    kernel = []
    # back-substitute one kernel vector per free column
    for fc in free_cols:
        vec = {fc: Fraction(1)}
        for pi, pj in reversed(pivots):
            s = Fraction(0)
            for j, v in rows[pi].items():
                if j != pj and j in vec:
                    s += v * vec[j]
            if s:
                vec[pj] = -s / rows[pi][pj]
        full = [vec.get(j, Fraction(0)) for j in range(m.cols)]
        kernel.append(full)
    return rank, kernel


@dataclass
class FunctionFieldRank:
    generic_rank: int
    exceptional: list  # rational nu-values where the rank drops, verified
    nonrational_factor: bool  # a pivot-minor factor without rational roots


def rank_over_function_field(m: SparseMatrix):
    """Generic rank over Q(nu) plus the exceptional rational specializations.

    The generic rank comes from fraction-free (Bareiss) elimination over
    Q[nu].  Candidate exceptional values are the rational roots of the pivot
    minor determinant; every point where the rank drops must zero out all
    maximal minors, in particular this one, so the candidate set is complete.
    Each candidate is then verified by substituting and rerunning scalar
    elimination on the full matrix.
    """
    if m.rows == 0 or m.cols == 0:
        raise EmptyMatrix("rank over Q(nu) needs a nonempty matrix")
    rows = [{c: (v if isinstance(v, NuPoly) else NuPoly.const(v)) for c, v in rd.items()}
            for rd in m.row_dicts()]
    live_rows = set(range(m.rows))
    live_cols = set(range(m.cols))
    prev = NuPoly.const(Fraction(1))
    pivot_det = NuPoly.const(Fraction(1))
    rank = 0
    while True:
        pos = None
        best = None
        for i in live_rows:
            for j, v in rows[i].items():
                if j in live_cols and not v.is_zero():
                    score = (len(rows[i]), v.degree)
                    if best is None or score < best[0]:
                        best = (score, i, j)
        if best is None:
            break
        _, pi, pj = best
        pv = rows[pi][pj]
        rank += 1
        pivot_det = pv  # Bareiss invariant: pivot = leading minor determinant
        live_rows.discard(pi)
        live_cols.discard(pj)
        for i in list(live_rows):
            riv = rows[i].get(pj)
            ri = rows[i]
            cols = set(ri) | set(rows[pi])
            cols.discard(pj)
            for j in cols:
                if j not in live_cols:
                    ri.pop(j, None)
                    continue
                a = ri.get(j, NuPoly())
                b = rows[pi].get(j, NuPoly())
                num = a * pv - (riv * b if riv else NuPoly())
                nv = num.exact_div(prev)
                if nv.is_zero():
                    ri.pop(j, None)
                else:
                    ri[j] = nv
            ri.pop(pj, None)
        prev = pv
    if rank == 0:
        return FunctionFieldRank(0, [], False)
    candidates = pivot_det.rational_roots()
    confirmed = []
    for root in candidates:
        r_at, _ = rank_and_kernel(m.subs(root))
        if r_at < rank:
            confirmed.append(root)
    return FunctionFieldRank(rank, confirmed, pivot_det.has_nonrational_factor())
