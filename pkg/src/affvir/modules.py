"""Highest-weight modules over the affine-Virasoro algebra, truncated in two
directions: depth (the d(0)-grading) and charge (the height of the weight
drop).  Joint weight spaces are finite-dimensional, and the truncation window
contains each of its weight spaces *completely*, so kernels, contravariant
forms and quotients computed per weight space are exact, not approximate.

Vectors are dicts mapping canonical PBW monomials (acting on the highest
weight vector) to exact scalars.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .affine import CC, KK, AffVir, dd, ge
from .exact import SparseMatrix, rank_and_kernel
from .lie import GWeight, NotDominantIntegral, dual_coxeter, is_dominant
from .pbw import PBWEngine, PBWMonomial, UEnvElement

F0 = Fraction(0)
F1 = Fraction(1)


class ModuleError(Exception):
    pass


class TruncationEscape(ModuleError):
    pass


class InsufficientHeadroom(ModuleError):
    pass


class BoundsTooLargeForMemory(ModuleError):
    pass


class NotDominant(ModuleError):
    pass


class LevelIsMinusDualCoxeter(ModuleError):
    pass


MONOMIAL_BUDGET = 500_000


def height(drop):
    return sum(drop)


@dataclass(frozen=True)
class WeightLabel:
    h_weight: GWeight
    d0_eigen: Fraction
    level: Fraction
    central_charge: Fraction


@dataclass
class AnnGenerators:
    generators: list          # UEnvElement entries
    names: list               # printable generator names, aligned
    provenance: str           # "dominantFormula" | "computedSingular"


# ---------------------------------------------------------------------------
# Verma modules


class VermaModule:
    """Depth- and charge-truncated Verma module.

    Weight spaces are keyed by (depth, drop) where drop is the weight descent
    from the highest weight in simple-root coordinates.  A key is inside the
    window when depth <= depth_bound and height(drop) <= charge_bound; every
    monomial of the full Verma module with that key is then enumerated.
    """

    kind = "verma"

    def __init__(self, av: AffVir, lam: GWeight, l, k, c, depth_bound, charge_bound):
        self.av = av
        self.alg = av.alg
        self.engine = PBWEngine(av)
        self.lam = lam
        self.l = Fraction(l)
        self.k = Fraction(k)
        self.c = Fraction(c)
        self.N = depth_bound
        self.C = charge_bound
        if depth_bound < 0 or charge_bound < 0:
            raise ModuleError("bounds must be nonnegative")
        self._hvals = self.alg.weight_hvals(lam)
        self._slice_cache = {}
        self._ws_cache = {}
        self._act_cache = {}
        self._mono_count = 0

    # -- bookkeeping -----------------------------------------------------

    def params(self):
        return (self.lam, self.l, self.k, self.c)

    def in_window(self, depth, drop):
        return 0 <= depth <= self.N and height(drop) <= self.C

    def weight_label(self, ws):
        depth, drop = ws
        coords = list(self.lam.coords)
        for i, d in enumerate(drop):
            if d:
                alpha_i = self.alg.root_cvals[self.alg.simple_idx[i]]
                for j in range(self.alg.rank):
                    coords[j] -= d * alpha_i[j]
        return WeightLabel(GWeight(tuple(coords)), self.l - depth, self.k, self.c)

    def mono_sort_key(self, mono):
        return tuple(self.av.key(g) for g in mono.word())

    # -- weight space enumeration ----------------------------------------

    def _loop_gens(self, max_depth):
        out = []
        for i in range(1, max_depth + 1):
            for b in range(self.alg.dim):
                out.append(ge(b, -i))
        return out

    def _enumerate_loop(self, gens, start, depth_left):
        """Multisets of loop generators with the given total depth."""
        if depth_left == 0:
            yield ()
            return
        for idx in range(start, len(gens)):
            g = gens[idx]
            d = -g[2]
            if d > depth_left:
                continue
            for rest in self._enumerate_loop(gens, idx, depth_left - d):
                yield (g,) + rest

    def _enumerate_fin(self, roots, start, budget):
        """Multisets of finite lowering operators with drop height <= budget."""
        yield ()
        for idx in range(start, len(roots)):
            b = roots[idx]
            h = -self.alg.heights[b]
            if h > budget:
                continue
            for rest in self._enumerate_fin(roots, idx, budget - h):
                yield (ge(b, 0),) + rest

    @staticmethod
    def _partitions(n, cap=None):
        if n == 0:
            yield ()
            return
        cap = n if cap is None else min(cap, n)
        for first in range(cap, 0, -1):
            for rest in VermaModule._partitions(n - first, first):
                yield (first,) + rest

    def slice_monomials(self, depth):
        """All in-window monomials of the given depth, bucketed by drop."""
        if depth in self._slice_cache:
            return self._slice_cache[depth]
        if depth > self.N:
            raise TruncationEscape(f"depth {depth} beyond bound {self.N}")
        loop_gens = self._loop_gens(depth)
        neg_sorted = sorted(self.alg.neg_roots, key=lambda b: self.av.key(ge(b, 0)))
        buckets = {}
        for dl in range(depth + 1):
            for loop_word in self._enumerate_loop(loop_gens, 0, dl):
                loop_word = tuple(sorted(loop_word, key=self.av.key))
                base_drop = [F0] * self.alg.rank
                for g in loop_word:
                    for i, v in enumerate(self.av.drop_of_gen(g)):
                        base_drop[i] += v
                for dv in range(depth - dl + 1):
                    if dl + dv != depth:
                        continue
                    for part in self._partitions(dv):
                        vir_word = tuple(dd(-p) for p in part)
                        fin_budget = self.C - height(base_drop)
                        for fin_word in self._enumerate_fin(
                                neg_sorted, 0, max(0, fin_budget)):
                            fin_word = tuple(sorted(fin_word, key=self.av.key))
                            word = loop_word + vir_word + fin_word
                            mono = self.engine.monomial(word)
                            if not self.in_window(mono.depth, mono.drop):
                                continue
                            buckets.setdefault((depth, mono.drop), []).append(mono)
                            self._mono_count += 1
                            if self._mono_count > MONOMIAL_BUDGET:
                                raise BoundsTooLargeForMemory(
                                    f"more than {MONOMIAL_BUDGET} basis monomials")
        for key, monos in buckets.items():
            monos.sort(key=self.mono_sort_key)
        self._slice_cache[depth] = buckets
        return buckets

    def weight_space(self, ws):
        """Ordered basis monomials of one weight space."""
        if ws in self._ws_cache:
            return self._ws_cache[ws]
        depth, drop = ws
        if not self.in_window(depth, drop):
            raise TruncationEscape(f"weight space {ws} outside the window")
        monos = self.slice_monomials(depth).get((depth, tuple(drop)), [])
        self._ws_cache[ws] = monos
        return monos

    def weight_keys(self, max_depth=None, charge_window=None):
        """All nonempty weight-space keys with depth <= max_depth."""
        limit = self.N if max_depth is None else min(max_depth, self.N)
        keys = []
        for d in range(limit + 1):
            for key in self.slice_monomials(d):
                if charge_window is not None and not (
                        charge_window[0] <= height(key[1]) <= charge_window[1]):
                    continue
                keys.append(key)
        return sorted(keys, key=lambda ws: (ws[0], tuple(ws[1])))

    # -- action ------------------------------------------------------------

    def highest_weight_vector(self):
        return {self.engine.monomial(()): F1}

    def _eval_word(self, word):
        """Evaluate a canonically sorted word on the highest weight vector.
        Returns (coefficient, negative monomial) or None when it annihilates."""
        split = len(word)
        for i, g in enumerate(word):
            if self.av.key(g)[0] > 2:
                split = i
                break
        coeff = F1
        for g in word[split:]:
            blk = self.av.key(g)[0]
            if blk >= 5:
                return None
            if g[0] == "g":
                coeff *= self._hvals[g[1]]
            elif g[0] == "d":
                coeff *= self.l
            elif g[0] == "k":
                coeff *= self.k
            else:
                coeff *= self.c
            if not coeff:
                return None
        return coeff, self.engine.monomial(word[:split])

    def apply_gen(self, gen, vec):
        """Action of a single generator, without window checks."""
        out = {}
        for mono, coeff in vec.items():
            cached = self._act_cache.get((gen, mono))
            if cached is None:
                cached = {}
                word = (gen,) + mono.word()
                for w, c in self.engine.straighten_word(word).items():
                    ev = self._eval_word(w)
                    if ev is None:
                        continue
                    cv, m = ev
                    v = cached.get(m, F0) + cv * c
                    if v:
                        cached[m] = v
                    else:
                        cached.pop(m, None)
                self._act_cache[(gen, mono)] = cached
            for m, c in cached.items():
                v = out.get(m, F0) + coeff * c
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return out

    def apply_elem(self, elem, vec):
        """Action of a linear combination {generator: coeff}."""
        terms = elem.terms if hasattr(elem, "terms") else elem
        out = {}
        for gen, gc in terms.items():
            part = self.apply_gen(gen, vec)
            for m, c in part.items():
                v = out.get(m, F0) + gc * c
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return out

    def check_window(self, vec):
        for mono in vec:
            if not self.in_window(mono.depth, mono.drop):
                raise TruncationEscape(
                    f"result at (depth {mono.depth}, drop {mono.drop}) left the "
                    f"window (N={self.N}, C={self.C})")
        return vec

    def act(self, x, vec):
        """Checked action of a generator or element on a module vector."""
        if isinstance(x, tuple):
            return self.check_window(self.apply_gen(x, vec))
        return self.check_window(self.apply_elem(x, vec))

    def act_word(self, word, vec):
        """Apply a product of generators factor by factor, rightmost first."""
        for gen in reversed(tuple(word)):
            vec = self.apply_gen(gen, vec)
        return self.check_window(vec)

    def act_uenv(self, u: UEnvElement, vec):
        out = {}
        for mono, coeff in u.terms.items():
            part = self.act_word(mono.word(), vec)
            for m, c in part.items():
                v = out.get(m, F0) + coeff * c
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return out

    # -- contravariant form -------------------------------------------------

    def sigma_gen(self, gen):
        """Anti-involution: fixes the Cartan, swaps raising and lowering."""
        if gen[0] == "d":
            return {dd(-gen[1]): F1}
        if gen[0] == "g":
            b, m = gen[1], gen[2]
            return {ge(j, -m): c for j, c in self.alg.chevalley_elem(b).items()}
        return {gen: F1}

    def pairing(self, p: PBWMonomial, q: PBWMonomial):
        """Shapovalov-type pairing <p u, q u>.

        sigma reverses products, so sigma(p) applied to q u evaluates the
        sigma-images of p's factors leftmost-first."""
        vec = {q: F1}
        for gen in p.word():
            vec = self.apply_elem(self.sigma_gen(gen), vec)
            if not vec:
                return F0
        return vec.get(self.engine.monomial(()), F0)

    def gram(self, ws):
        monos = self.weight_space(ws)
        n = len(monos)
        g = [[F0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                v = self.pairing(monos[i], monos[j])
                g[i][j] = g[j][i] = v
        return g


# ---------------------------------------------------------------------------
# irreducible quotients


class QuotientModule:
    """Quotient of a truncated Verma module by the radical of the
    contravariant form, computed weight space by weight space."""

    kind = "irreducibleQuotient"

    def __init__(self, verma: VermaModule):
        self.verma = verma
        self.av = verma.av
        self.alg = verma.alg
        self.engine = verma.engine
        self.lam = verma.lam
        self.l, self.k, self.c = verma.l, verma.k, verma.c
        self.N, self.C = verma.N, verma.C
        self._reduction = {}

    def params(self):
        return self.verma.params()

    def in_window(self, depth, drop):
        return self.verma.in_window(depth, drop)

    def weight_label(self, ws):
        return self.verma.weight_label(ws)

    def _reduction_data(self, ws):
        """kept monomials and the map expressing every Verma monomial of the
        weight space in the kept basis modulo the radical."""
        data = self._reduction.get(ws)
        if data is not None:
            return data
        monos = self.verma.weight_space(ws)
        gram = self.verma.gram(ws)
        n = len(monos)
        if n == 0:
            data = ([], {})
            self._reduction[ws] = data
            return data
        m = SparseMatrix(n, n)
        for i in range(n):
            for j in range(n):
                if gram[i][j]:
                    m[i, j] = gram[i][j]
        _, kernel = rank_and_kernel(m)
        # row-reduce the radical so each kernel vector pins one monomial
        rows = [list(v) for v in kernel]
        pivots = []
        r = 0
        for col in range(n):
            pr = next((i for i in range(r, len(rows)) if rows[i][col]), None)
            if pr is None:
                continue
            rows[r], rows[pr] = rows[pr], rows[r]
            pv = rows[r][col]
            rows[r] = [x / pv for x in rows[r]]
            for i in range(len(rows)):
                if i != r and rows[i][col]:
                    f = rows[i][col]
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
            pivots.append(col)
            r += 1
        killed = set(pivots)
        kept = [monos[i] for i in range(n) if i not in killed]
        reduce_map = {}
        for row, piv in zip(rows, pivots):
            expr = {}
            for j, v in enumerate(row):
                if j != piv and v:
                    expr[monos[j]] = -v
            reduce_map[monos[piv]] = expr
        data = (kept, reduce_map)
        self._reduction[ws] = data
        return data

    def weight_space(self, ws):
        return self._reduction_data(ws)[0]

    def weight_keys(self, max_depth=None, charge_window=None):
        return [ws for ws in self.verma.weight_keys(max_depth, charge_window)
                if self.weight_space(ws)]

    def highest_weight_vector(self):
        return {self.engine.monomial(()): F1}

    def reduce(self, vec):
        """Project a Verma vector to the kept basis, one weight space at a
        time.  Well-defined because the radical is a submodule."""
        out = {}
        pending = dict(vec)
        while pending:
            mono, coeff = pending.popitem()
            ws = (mono.depth, mono.drop)
            kept, reduce_map = self._reduction_data(ws)
            if mono in reduce_map:
                for m2, c2 in reduce_map[mono].items():
                    v = pending.get(m2, F0) + coeff * c2
                    if v:
                        pending[m2] = v
                    else:
                        pending.pop(m2, None)
            else:
                v = out.get(mono, F0) + coeff
                if v:
                    out[mono] = v
                else:
                    out.pop(mono, None)
        return out

    def apply_gen(self, gen, vec):
        return self.reduce(self.verma.apply_gen(gen, vec))

    def apply_elem(self, elem, vec):
        return self.reduce(self.verma.apply_elem(elem, vec))

    def check_window(self, vec):
        return self.verma.check_window(vec)

    def act(self, x, vec):
        if isinstance(x, tuple):
            return self.check_window(self.apply_gen(x, vec))
        return self.check_window(self.apply_elem(x, vec))

    def act_word(self, word, vec):
        for gen in reversed(tuple(word)):
            vec = self.apply_gen(gen, vec)
        return self.check_window(vec)

    def act_uenv(self, u: UEnvElement, vec):
        out = {}
        for mono, coeff in u.terms.items():
            part = self.act_word(mono.word(), vec)
            for m, c in part.items():
                v = out.get(m, F0) + coeff * c
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return out


def build_verma(alg_or_av, lam, l, k, c, depth_bound, charge_bound):
    av = alg_or_av if isinstance(alg_or_av, AffVir) else AffVir(alg_or_av)
    return VermaModule(av, lam, l, k, c, depth_bound, charge_bound)


def irreducible_quotient(module: VermaModule) -> QuotientModule:
    if module.kind != "verma":
        raise ModuleError("irreducible_quotient expects a Verma module")
    return QuotientModule(module)


# ---------------------------------------------------------------------------
# singular vectors


def raising_generators(av: AffVir):
    """A finite set generating the positive part as a Lie algebra: simple
    raising operators, all x(1), and d(1), d(2)."""
    alg = av.alg
    gens = [ge(i, 0) for i in alg.simple_idx]
    gens += [ge(b, 1) for b in range(alg.dim)]
    gens += [dd(1), dd(2)]
    return gens


def singular_vectors(module, max_depth, charge_window=None, include_trivial=False):
    """Basis of the joint kernel of the raising operators on every weight
    space with depth <= max_depth.  Returns {weight key: [vectors]}.

    Scanned slices need one unit of headroom in both truncation directions:
    verifying annihilation applies x(1), which can raise the drop by the
    height of the highest root."""
    if max_depth > module.N - 1:
        raise InsufficientHeadroom(
            f"singular search at depth {max_depth} needs depth bound >= {max_depth + 1}")
    if charge_window is None:
        h_theta = module.alg.heights[module.alg.theta_idx]
        charge_window = (-module.N * h_theta - 1, module.C - h_theta)
    gens = raising_generators(module.av)
    found = {}
    for ws in module.weight_keys(max_depth, charge_window):
        depth, drop = ws
        monos = module.weight_space(ws)
        if not monos:
            continue
        if ws == (0, tuple([F0] * module.alg.rank)) and not include_trivial:
            continue
        images = []   # per source monomial: dict (gen index, target mono) -> coeff
        target_index = {}
        for ci, mono in enumerate(monos):
            col = {}
            for gi, gen in enumerate(gens):
                out = module.apply_gen(gen, {mono: F1})
                for m, v in out.items():
                    if not module.in_window(m.depth, m.drop):
                        raise InsufficientHeadroom(
                            f"raising image at (depth {m.depth}, drop {m.drop}) "
                            f"leaves the window; enlarge the charge bound")
                    key = (gi, m)
                    target_index.setdefault(key, len(target_index))
                    col[key] = v
            images.append(col)
        mat = SparseMatrix(max(len(target_index), 1), len(monos))
        for ci, col in enumerate(images):
            for key, v in col.items():
                mat[target_index[key], ci] = v
        _, kernel = rank_and_kernel(mat)
        if kernel:
            found[ws] = [
                {monos[i]: v for i, v in enumerate(vec) if v} for vec in kernel
            ]
    return found


# ---------------------------------------------------------------------------
# the Virasoro-only Verma module (used for the extra annihilator generators)


class VirasoroVerma:
    """Verma module of the Virasoro subalgebra with highest weight (l, c).
    Basis monomials are partitions (k_r >= ... >= k_1) labelling
    d(-k_r)...d(-k_1) u."""

    def __init__(self, engine: PBWEngine, l, c):
        self.engine = engine
        self.av = engine.av
        self.l = Fraction(l)
        self.c = Fraction(c)

    @staticmethod
    def partitions(n, cap=None):
        return list(VermaModule._partitions(n, cap))

    def word_of(self, partition):
        return tuple(dd(-p) for p in partition)

    def apply_d(self, n, vec):
        """Action of d(n) on {partition: coeff}."""
        out = {}
        for part, coeff in vec.items():
            word = (dd(n),) + self.word_of(part)
            for w, c in self.engine.straighten_word(word).items():
                scalar = coeff * c
                monos = []
                dead = False
                for g in w:
                    if g[0] == "d":
                        if g[1] > 0:
                            dead = True
                            break
                        if g[1] == 0:
                            scalar *= self.l
                        else:
                            monos.append(-g[1])
                    elif g[0] == "c":
                        scalar *= self.c
                    else:
                        raise ModuleError("non-Virasoro generator in Virasoro module")
                if dead or not scalar:
                    continue
                key = tuple(sorted(monos, reverse=True))
                v = out.get(key, F0) + scalar
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return out

    def singular_at(self, depth):
        """Kernel of d(1), d(2) on the depth slice."""
        basis = self.partitions(depth)
        if not basis:
            return []
        target_index = {}
        cols = []
        for part in basis:
            col = {}
            for n in (1, 2):
                for m, v in self.apply_d(n, {part: F1}).items():
                    key = (n, m)
                    target_index.setdefault(key, len(target_index))
                    col[key] = v
            cols.append(col)
        mat = SparseMatrix(max(len(target_index), 1), len(basis))
        for ci, col in enumerate(cols):
            for key, v in col.items():
                mat[target_index[key], ci] = v
        _, kernel = rank_and_kernel(mat)
        return [{basis[i]: v for i, v in enumerate(vec) if v} for vec in kernel]

    def generating_singular_vectors(self, max_depth):
        """Singular vectors not inside the submodule generated by shallower
        ones; at most two exist."""
        gens = []
        span = {d: [] for d in range(max_depth + 1)}  # echelonized ideal slices

        def add_to_span(depth, vec):
            basis = self.partitions(depth)
            index = {p: i for i, p in enumerate(basis)}
            row = [F0] * len(basis)
            for p, v in vec.items():
                row[index[p]] = v
            for er in span[depth]:
                lead = next(i for i, v in enumerate(er) if v)
                if row[lead]:
                    f = row[lead] / er[lead]
                    row = [a - f * b for a, b in zip(row, er)]
            if any(row):
                span[depth].append(row)
                return True
            return False

        def saturate(depth, vec):
            # push a singular vector down through the window with U(V_-)
            frontier = [(depth, vec)]
            add_to_span(depth, vec)
            while frontier:
                d, v = frontier.pop()
                for step in range(1, max_depth - d + 1):
                    img = self.apply_d(-step, v)
                    if img and add_to_span(d + step, img):
                        frontier.append((d + step, img))

        for depth in range(1, max_depth + 1):
            for vec in self.singular_at(depth):
                basis = self.partitions(depth)
                index = {p: i for i, p in enumerate(basis)}
                row = [F0] * len(basis)
                for p, v in vec.items():
                    row[index[p]] = v
                reduced = list(row)
                for er in span[depth]:
                    lead = next(i for i, v in enumerate(er) if v)
                    if reduced[lead]:
                        f = reduced[lead] / er[lead]
                        reduced = [a - f * b for a, b in zip(reduced, er)]
                if any(reduced):
                    # novel: emit the singular vector itself, normalized on
                    # its first basis partition
                    lead = next(v for v in row if v)
                    newvec = {basis[i]: v / lead for i, v in enumerate(row) if v}
                    gens.append((depth, newvec))
                    saturate(depth, newvec)
        return gens


# ---------------------------------------------------------------------------
# annihilator generators of the irreducible highest weight vector


def ann_generators(module, vir_depth=6, quotient=None,
                   dominant_formula=None) -> AnnGenerators:
    """Generators of the left ideal of the negative enveloping algebra killing
    the highest weight vector of the irreducible quotient.

    On the dominant path these are the powers of the affine simple lowering
    operators plus the Virasoro-coset generators rewritten through the coset
    operators; otherwise generators are read off singular vectors found within
    the truncation window (honest but possibly incomplete).
    """
    from . import sugawara

    alg = module.alg
    av = module.av
    engine = module.engine
    lam, l, k, c = module.params()
    g = dual_coxeter(alg)
    dominant = is_dominant(alg, lam, k)
    if dominant_formula is None:
        dominant_formula = dominant
    if dominant_formula and not dominant:
        raise NotDominant(f"lambda + k Lambda0 with lam={lam.coords}, k={k} is "
                          "not dominant")
    if quotient is None:
        quotient = irreducible_quotient(module)
    hw = quotient.highest_weight_vector()

    gens, names = [], []
    if dominant_formula:
        if k + g == 0:
            raise LevelIsMinusDualCoxeter("level equals minus the dual Coxeter number")
        # affine simple lowering powers f_i^{<Lambda, coroot_i> + 1}
        exp0 = int(k - alg.pair_theta_check(lam)) + 1
        theta_gen = ge(alg.theta_idx, -1)
        gens.append(UEnvElement(engine, {engine.monomial((theta_gen,) * exp0): F1}))
        names.append(f"f0^{exp0}")
        chev = {i: alg.chevalley_elem(i) for i in alg.simple_idx}
        for pos, i in enumerate(alg.simple_idx, start=1):
            (fi, coeff), = chev[i].items()
            expi = int(lam.coords[pos - 1]) + 1
            mono = engine.monomial(tuple(sorted((ge(fi, 0),) * expi, key=av.key)))
            gens.append(UEnvElement(engine, {mono: F1}))
            names.append(f"f{pos}^{expi}")
        # Virasoro-coset generators: singular vectors of the coset Verma
        # module, rewritten with d(-m) replaced by the coset operators
        ctx = sugawara.SugawaraContext(av, lam, l, k, c)
        vir = VirasoroVerma(engine, ctx.lprime, ctx.cprime)
        if vir_depth > module.N:
            raise InsufficientHeadroom(
                f"reading Virasoro generators at depth {vir_depth} needs "
                f"depth bound >= {vir_depth}")
        for idx, (depth, fvec) in enumerate(
                vir.generating_singular_vectors(vir_depth), start=1):
            u = module.highest_weight_vector()
            w = {}
            for part, coeff in fvec.items():
                cur = u
                for p in reversed(part):  # rightmost factor acts first
                    cur = sugawara.apply_D(ctx, -p, module, cur, check=False)
                for m, v in cur.items():
                    nv = w.get(m, F0) + coeff * v
                    if nv:
                        w[m] = nv
                    else:
                        w.pop(m, None)
            # the Verma module is free over its negative part: read the
            # element straight off the basis expansion of the vector
            gens.append(UEnvElement(engine, dict(w)))
            names.append(f"E{idx}")
        provenance = "dominantFormula"
    else:
        found = singular_vectors(module, module.N - 1)
        for ws in sorted(found, key=lambda w: (w[0], tuple(w[1]))):
            for vec in found[ws]:
                gens.append(UEnvElement(engine, dict(vec)))
                names.append(f"sing@d{ws[0]}h{height(ws[1])}")
        provenance = "computedSingular"

    for gen_elt, name in zip(gens, names):
        img = quotient.act_uenv(gen_elt, hw)
        if img:
            raise ModuleError(f"generator {name} does not annihilate the "
                              "irreducible highest weight vector")
    return AnnGenerators(gens, names, provenance)


# ---------------------------------------------------------------------------
# finite-dimensional irreducibles of the underlying algebra


class FiniteModule:
    """Finite-dimensional irreducible module of the underlying simple Lie
    algebra, realized as the depth-zero part of an irreducible quotient."""

    def __init__(self, alg, mu, basis_monos, matrices, weights, hw_index):
        self.alg = alg
        self.mu = mu
        self.basis = basis_monos          # kept monomials, fixed order
        self.matrices = matrices          # basis index of g -> {(row, col): coeff}
        self.weights = weights            # per vector: GWeight coords tuple
        self.hw_index = hw_index
        self.dim = len(basis_monos)

    def apply_basis(self, b, vec):
        mat = self.matrices[b]
        out = {}
        for col, coeff in vec.items():
            for (row, c2), v in mat.items():
                if c2 != col:
                    continue
                nv = out.get(row, F0) + coeff * v
                if nv:
                    out[row] = nv
                else:
                    out.pop(row, None)
        return out

    def apply_elem(self, elem, vec):
        out = {}
        for b, gc in elem.items():
            for row, v in self.apply_basis(b, vec).items():
                nv = out.get(row, F0) + gc * v
                if nv:
                    out[row] = nv
                else:
                    out.pop(row, None)
        return out

    def hw_vector(self):
        return {self.hw_index: F1}


def finite_irrep(alg_or_av, mu: GWeight, max_charge=64) -> FiniteModule:
    """Finite-dimensional irreducible with highest weight mu, built as the
    depth-zero slice of the contravariant-form quotient."""
    av = alg_or_av if isinstance(alg_or_av, AffVir) else AffVir(alg_or_av)
    alg = av.alg
    if not mu.is_dominant_integral():
        raise NotDominantIntegral(f"mu={mu.coords} is not dominant integral")
    theta_pair = int(alg.pair_theta_check(mu))
    charge = theta_pair + 1
    while True:
        verma = VermaModule(av, mu, 0, 0, 0, 0, charge)
        quotient = irreducible_quotient(verma)
        top_empty = all(
            not quotient.weight_space(ws)
            for ws in verma.weight_keys(0, (charge, charge)))
        if top_empty:
            break
        charge += theta_pair + 1
        if charge > max_charge:
            raise BoundsTooLargeForMemory(
                f"charge bound exceeded {max_charge} while closing L(mu)")
    keys = [ws for ws in verma.weight_keys(0) if quotient.weight_space(ws)]
    keys.sort(key=lambda ws: (height(ws[1]), tuple(ws[1])))
    basis = []
    index = {}
    weights = []
    for ws in keys:
        label = quotient.weight_label(ws)
        for mono in quotient.weight_space(ws):
            index[mono] = len(basis)
            basis.append(mono)
            weights.append(label.h_weight.coords)
    matrices = {}
    for b in range(alg.dim):
        mat = {}
        for col, mono in enumerate(basis):
            out = quotient.apply_gen(ge(b, 0), {mono: F1})
            for m, v in out.items():
                mat[(index[m], col)] = v
        matrices[b] = mat
    hw_index = index[verma.engine.monomial(())]
    return FiniteModule(alg, mu, basis, matrices, weights, hw_index)


# ---------------------------------------------------------------------------
# serialization


def monomial_str(alg, mono: PBWMonomial):
    if mono.is_one():
        return "1"
    parts = []
    for g, e in mono.factors:
        if g[0] == "g":
            name = alg.basis[g[1]]
            s = f"{name}({g[2]})" if g[2] else name
        else:
            s = f"d({g[1]})"
        parts.append(s if e == 1 else f"{s}^{e}")
    return " ".join(parts)


def parse_monomial(engine: PBWEngine, text):
    alg = engine.av.alg
    text = text.strip()
    if text == "1":
        return engine.monomial(())
    word = []
    for token in text.split():
        exp = 1
        if "^" in token:
            token, e = token.split("^")
            exp = int(e)
        if "(" in token:
            name, m = token[:-1].split("(")
            m = int(m)
        else:
            name, m = token, 0
        gen = dd(m) if name == "d" else ge(alg.index[name], m)
        word.extend([gen] * exp)
    word.sort(key=engine.av.key)
    return engine.monomial(tuple(word))


def dump_module(module):
    """Deterministic JSON-ready dict for a Verma module or quotient."""
    alg = module.alg
    is_quotient = module.kind == "irreducibleQuotient"
    verma = module.verma if is_quotient else module
    out = {
        "kind": module.kind,
        "params": {
            "lam": [str(x) for x in module.lam.coords],
            "l": str(module.l), "k": str(module.k), "c": str(module.c),
        },
        "bounds": {"depth": module.N, "charge": module.C},
        "weights": [],
    }
    for ws in verma.weight_keys():
        depth, drop = ws
        entry = {
            "depth": depth,
            "drop": [str(x) for x in drop],
            "monomials": [monomial_str(alg, m) for m in verma.weight_space(ws)],
        }
        if is_quotient:
            kept, reduce_map = module._reduction_data(ws)
            monos = verma.weight_space(ws)
            idx = {m: i for i, m in enumerate(monos)}
            entry["kept"] = [idx[m] for m in kept]
            triplets = []
            for mono, expr in reduce_map.items():
                for m2, v in expr.items():
                    triplets.append([idx[mono], idx[m2], str(v)])
            entry["reduce"] = sorted(triplets)
        out["weights"].append(entry)
    return out


def load_module(av: AffVir, dump):
    """Rebuild a module from its dump and verify the dump is consistent."""
    lam = GWeight(tuple(Fraction(x) for x in dump["params"]["lam"]))
    verma = VermaModule(av, lam,
                        Fraction(dump["params"]["l"]),
                        Fraction(dump["params"]["k"]),
                        Fraction(dump["params"]["c"]),
                        dump["bounds"]["depth"], dump["bounds"]["charge"])
    module = verma if dump["kind"] == "verma" else irreducible_quotient(verma)
    redone = dump_module(module)
    if redone != dump:
        raise ModuleError("module dump does not match its parameters")
    return module
