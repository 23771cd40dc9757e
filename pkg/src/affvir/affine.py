"""The affine-Virasoro algebra attached to a simple Lie algebra: loop
generators x(m), Virasoro generators d(m) and two central elements, with the
semidirect-product bracket and the integer grading by d(0).

Generators are plain tuples so they hash fast inside the rewriting engine:

    ("g", b, m)   basis element b of the underlying algebra at loop degree m
    ("d", m)      Virasoro generator of degree m
    ("k",)        central element pairing with the loop part
    ("c",)        central element of the Virasoro part
"""

from __future__ import annotations

from fractions import Fraction


def ge(b, m):
    return ("g", b, m)


def dd(m):
    return ("d", m)


KK = ("k",)
CC = ("c",)


def gen_degree(gen):
    if gen[0] == "g":
        return gen[2]
    if gen[0] == "d":
        return gen[1]
    return 0


class AffVir:
    """Bracket and ordering data for the affine-Virasoro algebra over a loaded
    simple Lie algebra.  Immutable; safe to share."""

    def __init__(self, alg):
        self.alg = alg
        self._neg_order = {b: i for i, b in enumerate(sorted(alg.neg_roots))}
        self._pos_order = {b: i for i, b in enumerate(sorted(alg.pos_roots))}
        self._key_cache = {}
        self._bracket_cache = {}

    # -- ordering ----------------------------------------------------------

    def key(self, gen):
        """Total order on generators.  Negative generators sort into the three
        blocks loop < Virasoro < finite, so that canonical monomials factor
        per the triangular decomposition; Cartan and positive generators sort
        after all negative ones."""
        k = self._key_cache.get(gen)
        if k is not None:
            return k
        kind = gen[0]
        if kind == "g":
            _, b, m = gen
            if m < 0:
                k = (0, m, b)
            elif m > 0:
                k = (7, m, b)
            elif b in self._neg_order:
                k = (2, self._neg_order[b], 0)
            elif b in self._pos_order:
                k = (5, self._pos_order[b], 0)
            else:
                k = (3, b, 0)
        elif kind == "d":
            m = gen[1]
            if m < 0:
                k = (1, m, 0)
            elif m > 0:
                k = (6, m, 0)
            else:
                k = (4, 2, 0)
        elif kind == "k":
            k = (4, 0, 0)
        else:
            k = (4, 1, 0)
        self._key_cache[gen] = k
        return k

    def is_negative(self, gen):
        return self.key(gen)[0] <= 2

    def drop_of_gen(self, gen):
        """Weight drop in simple-root coordinates (lowering operators have
        positive drop)."""
        if gen[0] == "g":
            return tuple(-c for c in self.alg.root_coords[gen[1]])
        return (Fraction(0),) * self.alg.rank

    def describe(self, gen):
        return describe_gen(self.alg, gen)

    # -- bracket -----------------------------------------------------------

    def bracket_gens(self, g1, g2):
        """[g1, g2] as a list of (generator, coefficient) pairs."""
        key = (g1, g2)
        out = self._bracket_cache.get(key)
        if out is None:
            out = self._bracket_raw(g1, g2)
            self._bracket_cache[key] = out
        return out

    def _bracket_raw(self, g1, g2):
        k1, k2 = g1[0], g2[0]
        if k1 in ("k", "c") or k2 in ("k", "c"):
            return []
        if k1 == "g" and k2 == "g":
            _, a, m = g1
            _, b, n = g2
            terms = [(ge(i, m + n), coeff)
                     for i, coeff in self.alg.bracket(a, b).items()]
            if m + n == 0:
                pairing = m * self.alg.form(a, b)
                if pairing:
                    terms.append((KK, Fraction(pairing)))
            return terms
        if k1 == "d" and k2 == "d":
            m, n = g1[1], g2[1]
            terms = []
            if n != m:
                terms.append((dd(m + n), Fraction(n - m)))
            if m + n == 0:
                central = Fraction(m**3 - m, 12)
                if central:
                    terms.append((CC, central))
            return terms
        if k1 == "d" and k2 == "g":
            n = g1[1]
            _, x, m = g2
            return [(ge(x, m + n), Fraction(m))] if m else []
        # [x(m), d(n)] = -[d(n), x(m)]
        m = g1[2]
        return [(ge(g1[1], m + g2[1]), Fraction(-m))] if m else []


class AffVirElement:
    """Finite linear combination of generators; zero coefficients are never
    stored."""

    __slots__ = ("av", "terms")

    def __init__(self, av, terms=None):
        self.av = av
        self.terms = {}
        if terms:
            for g, c in (terms.items() if isinstance(terms, dict) else terms):
                self._add(g, c)

    def _add(self, g, c):
        v = self.terms.get(g, Fraction(0)) + c
        if v:
            self.terms[g] = v
        else:
            self.terms.pop(g, None)

    @classmethod
    def gen(cls, av, g, coeff=Fraction(1)):
        return cls(av, [(g, coeff)])

    def __add__(self, other):
        out = AffVirElement(self.av, dict(self.terms))
        for g, c in other.terms.items():
            out._add(g, c)
        return out

    def __sub__(self, other):
        out = AffVirElement(self.av, dict(self.terms))
        for g, c in other.terms.items():
            out._add(g, -c)
        return out

    def scale(self, s):
        return AffVirElement(self.av, {g: s * c for g, c in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, AffVirElement) and self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{self.av.describe(g)}"
                          for g, c in sorted(self.terms.items(),
                                             key=lambda t: self.av.key(t[0])))


def bracket(x: AffVirElement, y: AffVirElement) -> AffVirElement:
    """Bilinear extension of the generator bracket."""
    if x.av is not y.av:
        raise ValueError("elements live over different algebras")
    out = AffVirElement(x.av)
    for g1, c1 in x.terms.items():
        for g2, c2 in y.terms.items():
            for g, c in x.av.bracket_gens(g1, g2):
                out._add(g, c1 * c2 * c)
    return out


def degree(x: AffVirElement):
    """The d(0)-degree of a homogeneous element, or None when mixed."""
    degs = {gen_degree(g) for g in x.terms}
    if len(degs) == 1:
        return degs.pop()
    return None


def describe_gen(alg, gen):
    if gen[0] == "g":
        name = alg.basis[gen[1]]
        return f"{name}({gen[2]})" if gen[2] else name
    if gen[0] == "d":
        return f"d({gen[1]})"
    return {"k": "K", "c": "C"}[gen[0]]
