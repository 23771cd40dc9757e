"""PBW monomials and straightening for the universal enveloping algebra of the
affine-Virasoro algebra.

A word is canonical when its generators are sorted by the global key of the
ordering: for strictly negative words this puts loop factors first, then
Virasoro factors d(-k_r)...d(-k_1) with k_r >= ... >= k_1, then finite
lowering operators, matching the triangular factorization of the negative
part.  Straightening repeatedly transposes adjacent out-of-order factors,
u*v -> v*u + [u,v]; each step either lowers the inversion count at fixed
length or produces strictly shorter words, so the rewriting terminates.
Results are memoized on the whole word, which straightened subwords of the
worked examples hit constantly.
"""

from __future__ import annotations

from fractions import Fraction

from .affine import AffVir, gen_degree


class PBWError(Exception):
    pass


class PositiveFactorInNegativeMode(PBWError):
    pass


MAX_WORD_LEN = 64


class PBWMonomial:
    """An ordered monomial, stored exponent-compressed as ((gen, exp), ...)."""

    __slots__ = ("factors", "depth", "drop", "_hash")

    def __init__(self, factors, depth, drop):
        self.factors = factors
        self.depth = depth      # minus the total loop degree, >= 0 for negative monomials
        self.drop = drop        # weight drop in simple-root coordinates
        self._hash = hash(factors)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return isinstance(other, PBWMonomial) and self.factors == other.factors

    def __len__(self):
        return sum(e for _, e in self.factors)

    def word(self):
        out = []
        for g, e in self.factors:
            out.extend([g] * e)
        return tuple(out)

    def is_one(self):
        return not self.factors

    def blocks(self, engine):
        """Split a strictly negative monomial into (loop, vir, fin) factor
        lists, expanded to flat words."""
        loop, vir, fin = [], [], []
        for g, e in self.factors:
            blk = engine.av.key(g)[0]
            if blk == 0:
                loop.extend([g] * e)
            elif blk == 1:
                vir.extend([g] * e)
            elif blk == 2:
                fin.extend([g] * e)
            else:
                raise PositiveFactorInNegativeMode(
                    f"monomial has a non-negative factor {g}")
        return loop, vir, fin

    def __repr__(self):
        if not self.factors:
            return "1"
        parts = []
        for g, e in self.factors:
            s = f"{g}"
            parts.append(s if e == 1 else f"{s}^{e}")
        return "*".join(parts)


class UEnvElement:
    """Exact linear combination of PBW monomials."""

    __slots__ = ("engine", "terms")

    def __init__(self, engine, terms=None):
        self.engine = engine
        self.terms = {}
        if terms:
            for m, c in (terms.items() if isinstance(terms, dict) else terms):
                self._add(m, c)

    def _add(self, mono, coeff):
        v = self.terms.get(mono, Fraction(0)) + coeff
        if v:
            self.terms[mono] = v
        else:
            self.terms.pop(mono, None)

    @classmethod
    def one(cls, engine):
        return cls(engine, {engine.monomial(()): Fraction(1)})

    def __add__(self, other):
        out = UEnvElement(self.engine, dict(self.terms))
        for m, c in other.terms.items():
            out._add(m, c)
        return out

    def __sub__(self, other):
        out = UEnvElement(self.engine, dict(self.terms))
        for m, c in other.terms.items():
            out._add(m, -c)
        return out

    def scale(self, s):
        return UEnvElement(self.engine, {m: s * c for m, c in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, UEnvElement) and self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda t: t[0].factors)
        return " + ".join(f"{c}*{m!r}" for m, c in items)


class PBWEngine:
    """Straightening engine bound to one affine-Virasoro algebra."""

    def __init__(self, av: AffVir):
        self.av = av
        self._straighten_cache = {}
        self._mono_cache = {}

    def monomial(self, word):
        """Canonical monomial from an already-sorted word."""
        mono = self._mono_cache.get(word)
        if mono is not None:
            return mono
        factors = []
        for g in word:
            if factors and factors[-1][0] == g:
                factors[-1] = (g, factors[-1][1] + 1)
            else:
                factors.append((g, 1))
        depth = -sum(gen_degree(g) for g in word)
        rank = self.av.alg.rank
        drop = [Fraction(0)] * rank
        for g in word:
            dg = self.av.drop_of_gen(g)
            for i in range(rank):
                drop[i] += dg[i]
        mono = PBWMonomial(tuple(factors), depth, tuple(drop))
        self._mono_cache[word] = mono
        return mono

    def straighten_word(self, word):
        """Canonical form of an arbitrary word, as {sorted word: coeff}."""
        if len(word) > MAX_WORD_LEN:
            raise PBWError(f"word of length {len(word)} exceeds the rewriting cap")
        cached = self._straighten_cache.get(word)
        if cached is not None:
            return cached
        key = self.av.key
        pos = None
        for i in range(len(word) - 1):
            if key(word[i]) > key(word[i + 1]):
                pos = i
                break
        if pos is None:
            result = {word: Fraction(1)}
        else:
            result = {}
            swapped = word[:pos] + (word[pos + 1], word[pos]) + word[pos + 2:]
            for w, c in self.straighten_word(swapped).items():
                v = result.get(w, Fraction(0)) + c
                if v:
                    result[w] = v
                else:
                    result.pop(w, None)
            for g, bc in self.av.bracket_gens(word[pos], word[pos + 1]):
                shorter = word[:pos] + (g,) + word[pos + 2:]
                for w, c in self.straighten_word(shorter).items():
                    v = result.get(w, Fraction(0)) + bc * c
                    if v:
                        result[w] = v
                    else:
                        result.pop(w, None)
        self._straighten_cache[word] = result
        return result

    def straighten(self, word, negative=False) -> UEnvElement:
        """PBW normal form of a product of generators.

        With negative=True the input must lie in the negative part; the output
        then factors per (loop, Virasoro, finite)."""
        word = tuple(word)
        if negative:
            for g in word:
                if not self.av.is_negative(g):
                    raise PositiveFactorInNegativeMode(f"factor {g} is not negative")
        out = UEnvElement(self)
        for w, c in self.straighten_word(word).items():
            out._add(self.monomial(w), c)
        return out

    def multiply(self, p: UEnvElement, q: UEnvElement) -> UEnvElement:
        """Product in the enveloping algebra, in PBW normal form."""
        out = UEnvElement(self)
        for mp, cp in p.terms.items():
            wp = mp.word()
            for mq, cq in q.terms.items():
                for w, c in self.straighten_word(wp + mq.word()).items():
                    out._add(self.monomial(w), cp * cq * c)
        return out

    def clear_caches(self):
        self._straighten_cache.clear()
        self._mono_cache.clear()
