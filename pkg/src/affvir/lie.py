"""Finite-dimensional simple Lie algebra data loaded from structure constants.

The loader derives everything it can (ad matrices, Killing form, root values,
positivity, the highest root) and verifies everything it cannot derive
(Jacobi, invariance of a supplied form, anti-involution axioms).  The
invariant bilinear form is rescaled so that the highest root has squared
length 2; all later normalizations (Casimir eigenvalues, dual Coxeter number,
Sugawara constants) depend on that convention.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction


class AlgebraError(Exception):
    pass


class JacobiViolation(AlgebraError):
    pass


class FormNotInvariant(AlgebraError):
    pass


class NormalizationImpossible(AlgebraError):
    pass


class NonIntegerDualCoxeter(AlgebraError):
    pass


class InvalidInvolution(AlgebraError):
    pass


class NotDominantIntegral(AlgebraError):
    pass


@dataclass(frozen=True)
class GWeight:
    """A weight of the finite-dimensional algebra, stored as its values on the
    simple coroots.  Integral dominance is then coordinate-wise."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    def __add__(self, other):
        return GWeight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        return GWeight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, s):
        return GWeight(tuple(Fraction(s) * a for a in self.coords))

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def is_dominant_integral(self):
        return all(c.denominator == 1 and c >= 0 for c in self.coords)


SL2_CONFIG = {
    "name": "sl2",
    "basis": ["e", "h", "f"],
    "cartan": ["h"],
    "simple": ["e"],
    "brackets": {
        "e f": {"h": "1"},
        "h e": {"e": "2"},
        "h f": {"f": "-2"},
    },
    "chevalley": {"e": "f", "h": "h", "f": "e"},
}


def _solve(matrix, rhs):
    """Solve a small exact linear system; returns None if inconsistent."""
    n = len(matrix)
    m = len(matrix[0]) if n else 0
    a = [list(row) + [r] for row, r in zip(matrix, rhs)]
    piv_cols = []
    r = 0
    for c in range(m):
        pr = next((i for i in range(r, n) if a[i][c]), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(n):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
        if r == n:
            break
    for i in range(r, n):
        if a[i][m]:
            return None
    sol = [Fraction(0)] * m
    for i, c in enumerate(piv_cols):
        sol[c] = a[i][m]
    return sol


class SimpleLieAlgebra:
    """Structure constants, normalized invariant form, root data and dual
    bases for a finite-dimensional simple Lie algebra."""

    def __init__(self, name, basis, struct, form, cartan_idx, root_vals,
                 simple_idx, root_coords, theta_idx, coroot_coords, chevalley):
        self.name = name
        self.basis = list(basis)
        self.dim = len(basis)
        self.struct = struct            # (i, j) -> {k: coeff}, full antisymmetric table
        self.form_matrix = form         # dim x dim, (theta|theta) = 2
        self.cartan_idx = list(cartan_idx)
        self.rank = len(simple_idx)
        self.root_vals = root_vals      # per basis index: tuple of values on cartan, or None
        self.simple_idx = list(simple_idx)
        self.root_coords = root_coords  # per basis index: tuple of simple-root coords, Cartan -> zero tuple
        self.theta_idx = theta_idx
        self.coroot_coords = coroot_coords  # per simple root: coords over the cartan basis
        self.chevalley = chevalley      # basis index -> {basis index: coeff}, or None
        self._finish()

    # -- derived tables ------------------------------------------------

    def _finish(self):
        r = self.rank
        self.index = {n: i for i, n in enumerate(self.basis)}
        self.heights = [sum(c) for c in self.root_coords]
        self.pos_roots = [b for b in range(self.dim)
                          if b not in self.cartan_idx and self.heights[b] > 0]
        self.neg_roots = [b for b in range(self.dim)
                          if b not in self.cartan_idx and self.heights[b] < 0]
        # values of roots on the simple coroots
        self.root_cvals = []
        for b in range(self.dim):
            if self.root_vals[b] is None:
                self.root_cvals.append(None)
            else:
                self.root_cvals.append(tuple(
                    sum(self.coroot_coords[i][c] * self.root_vals[b][c]
                        for c in range(len(self.cartan_idx)))
                    for i in range(r)))
        # Gram matrix of the coroots and its inverse, for the form on weights
        gram = [[self._form_cartan(self.coroot_coords[i], self.coroot_coords[j])
                 for j in range(r)] for i in range(r)]
        self._coroot_gram = gram
        inv = []
        for i in range(r):
            rhs = [Fraction(int(i == j)) for j in range(r)]
            col = _solve(gram, rhs)
            if col is None:
                raise FormNotInvariant("degenerate form on the Cartan subalgebra")
            inv.append(col)
        self._coroot_gram_inv = [[inv[j][i] for j in range(r)] for i in range(r)]
        # dual basis pairs for the normalized form
        self.dual_basis = []
        full = self.form_matrix
        for i in range(self.dim):
            rhs = [Fraction(int(i == j)) for j in range(self.dim)]
            y = _solve(full, rhs)
            if y is None:
                raise FormNotInvariant("normalized form is degenerate")
            self.dual_basis.append({j: v for j, v in enumerate(y) if v})
        self.theta = GWeight(self.root_cvals[self.theta_idx])
        self.rho = GWeight((Fraction(1),) * r)

    def _form_cartan(self, xc, yc):
        total = Fraction(0)
        for a, ca in zip(self.cartan_idx, xc):
            if not ca:
                continue
            for b, cb in zip(self.cartan_idx, yc):
                if cb:
                    total += ca * cb * self.form_matrix[a][b]
        return total

    # -- basic operations ------------------------------------------------

    def bracket(self, i, j):
        return self.struct.get((i, j), {})

    def bracket_elem(self, x, y):
        out = {}
        for i, ci in x.items():
            for j, cj in y.items():
                for k, ck in self.bracket(i, j).items():
                    v = out.get(k, Fraction(0)) + ci * cj * ck
                    if v:
                        out[k] = v
                    else:
                        out.pop(k, None)
        return out

    def form(self, i, j):
        return self.form_matrix[i][j]

    def form_elem(self, x, y):
        return sum((ci * cj * self.form_matrix[i][j]
                    for i, ci in x.items() for j, cj in y.items()), Fraction(0))

    def weight_form(self, lam: GWeight, mu: GWeight):
        """The normalized invariant form transported to weight space."""
        r = self.rank
        out = Fraction(0)
        for i in range(r):
            if not lam.coords[i]:
                continue
            for j in range(r):
                if mu.coords[j]:
                    out += lam.coords[i] * self._coroot_gram_inv[i][j] * mu.coords[j]
        return out

    def weight_hvals(self, lam: GWeight):
        """Values of a weight on the raw Cartan basis elements."""
        mat = [list(self.coroot_coords[i]) for i in range(self.rank)]
        sol = _solve(mat, list(lam.coords))
        if sol is None:
            raise AlgebraError("weight not expressible on this Cartan basis")
        return {c: v for c, v in zip(self.cartan_idx, sol)}

    def pair_theta_check(self, lam: GWeight):
        """<lam, theta-check>; equals (lam|theta) in the chosen normalization."""
        return self.weight_form(lam, self.theta)

    def chevalley_elem(self, i):
        if self.chevalley is None:
            raise AlgebraError(f"algebra {self.name!r} has no anti-involution data")
        return self.chevalley[i]


# ---------------------------------------------------------------------------
# loading and validation


def _parse_brackets(names, table):
    index = {n: i for i, n in enumerate(names)}
    struct = {}
    for key, val in table.items():
        a, b = key.split()
        i, j = index[a], index[b]
        coef = {index[k]: Fraction(v) for k, v in val.items()}
        coef = {k: v for k, v in coef.items() if v}
        if (i, j) in struct and struct[(i, j)] != coef:
            raise AlgebraError(f"conflicting bracket entries for {key!r}")
        struct[(i, j)] = coef
        neg = {k: -v for k, v in coef.items()}
        if (j, i) in struct and struct[(j, i)] != neg:
            raise AlgebraError(f"bracket table not antisymmetric at {key!r}")
        struct[(j, i)] = neg
    for i in range(len(names)):
        struct.setdefault((i, i), {})
        for j in range(len(names)):
            struct.setdefault((i, j), {})
            struct.setdefault((j, i), {})
    return struct


def _check_jacobi(dim, struct):
    def br(i, j):
        return struct[(i, j)]

    def br_elem(x, y):
        out = {}
        for i, ci in x.items():
            for j, cj in y.items():
                for k, ck in br(i, j).items():
                    out[k] = out.get(k, Fraction(0)) + ci * cj * ck
        return {k: v for k, v in out.items() if v}

    for i in range(dim):
        for j in range(i + 1, dim):
            for k in range(j + 1, dim):
                total = {}
                for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                    t = br_elem(br(a, b), {c: Fraction(1)})
                    for idx, v in t.items():
                        total[idx] = total.get(idx, Fraction(0)) + v
                if any(total.values()):
                    raise JacobiViolation(
                        f"Jacobi identity fails on basis triple ({i},{j},{k})")


def _ad_matrix(dim, struct, i):
    mat = [[Fraction(0)] * dim for _ in range(dim)]
    for j in range(dim):
        for k, v in struct[(i, j)].items():
            mat[k][j] = v
    return mat


def _killing(dim, struct):
    ads = [_ad_matrix(dim, struct, i) for i in range(dim)]
    kappa = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(i, dim):
            t = Fraction(0)
            a, b = ads[i], ads[j]
            for p in range(dim):
                for q in range(dim):
                    if a[p][q] and b[q][p]:
                        t += a[p][q] * b[q][p]
            kappa[i][j] = kappa[j][i] = t
    return kappa


def _check_invariance(dim, struct, form):
    def br(i, j):
        return struct[(i, j)]

    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                lhs = sum((v * form[idx][k] for idx, v in br(i, j).items()), Fraction(0))
                rhs = sum((v * form[i][idx] for idx, v in br(j, k).items()), Fraction(0))
                if lhs != rhs:
                    raise FormNotInvariant(
                        f"([x{i},x{j}]|x{k}) != (x{i}|[x{j},x{k}])")


def load_algebra(source):
    """Build and fully validate a SimpleLieAlgebra.

    source may be the preset name "sl2", a config dict, or a path to a JSON
    config file.  Loading fails loudly: Jacobi violations, non-invariant
    forms and impossible normalizations are rejected here, never later.
    """
    if source == "sl2":
        config = SL2_CONFIG
    elif isinstance(source, dict):
        config = source
    else:
        with open(source) as fh:
            config = json.load(fh)

    names = list(config["basis"])
    dim = len(names)
    index = {n: i for i, n in enumerate(names)}
    struct = _parse_brackets(names, config["brackets"])
    _check_jacobi(dim, struct)

    cartan_idx = [index[n] for n in config["cartan"]]
    simple_names = config["simple"]
    # root values on the Cartan basis, requiring the basis to diagonalize ad(h)
    root_vals = [None] * dim
    for c1 in cartan_idx:
        for c2 in cartan_idx:
            if struct[(c1, c2)]:
                raise AlgebraError("declared Cartan subalgebra is not abelian")
    for b in range(dim):
        if b in cartan_idx:
            continue
        vals = []
        for c in cartan_idx:
            t = struct[(c, b)]
            if set(t) - {b}:
                raise AlgebraError(f"basis element {names[b]!r} is not a root vector")
            vals.append(t.get(b, Fraction(0)))
        root_vals[b] = tuple(vals)

    simple_idx = [index[n] for n in simple_names]
    simple_vecs = [root_vals[i] for i in simple_idx]
    root_coords = []
    for b in range(dim):
        if root_vals[b] is None:
            root_coords.append((Fraction(0),) * len(simple_idx))
            continue
        mat = [[simple_vecs[i][c] for i in range(len(simple_idx))]
               for c in range(len(cartan_idx))]
        sol = _solve(mat, list(root_vals[b]))
        if sol is None:
            raise AlgebraError(f"root of {names[b]!r} is not in the simple-root lattice")
        if any(x.denominator != 1 for x in sol):
            raise AlgebraError(f"root of {names[b]!r} has non-integer coordinates")
        if not (all(x >= 0 for x in sol) or all(x <= 0 for x in sol)):
            raise AlgebraError(f"root of {names[b]!r} is neither positive nor negative")
        root_coords.append(tuple(sol))

    heights = [sum(c) for c in root_coords]
    pos = [b for b in range(dim) if b not in cartan_idx and heights[b] > 0]
    if not pos:
        raise AlgebraError("no positive roots found")
    max_h = max(heights[b] for b in pos)
    highest = [b for b in pos if heights[b] == max_h]
    if len(highest) != 1:
        raise AlgebraError("highest root is not unique")
    theta_idx = highest[0]

    kappa = _killing(dim, struct)
    if "form" in config:
        base = [[Fraction(config["form"][i][j]) for j in range(dim)] for i in range(dim)]
        for i in range(dim):
            for j in range(dim):
                if base[i][j] != base[j][i]:
                    raise FormNotInvariant("supplied form is not symmetric")
        _check_invariance(dim, struct, base)
    else:
        base = kappa

    # rescale so that (theta|theta) = 2
    cgram = [[base[a][b] for b in cartan_idx] for a in cartan_idx]
    tvals = list(root_vals[theta_idx])
    tcoords = _solve(cgram, tvals)
    if tcoords is None:
        raise NormalizationImpossible("cannot represent the highest root on the Cartan")
    theta_sq = sum(x * v for x, v in zip(tcoords, tvals))
    if theta_sq <= 0:
        raise NormalizationImpossible("(theta|theta) is not scalable to 2")
    # rescaling the form by c scales squared lengths in weight space by 1/c
    scale = theta_sq / 2
    form = [[base[i][j] * scale for j in range(dim)] for i in range(dim)]
    _check_invariance(dim, struct, form)

    # coroots of the simple roots, as vectors over the Cartan basis
    cgram = [[form[a][b] for b in cartan_idx] for a in cartan_idx]
    coroot_coords = []
    for i in simple_idx:
        vals = list(root_vals[i])
        t = _solve(cgram, vals)
        if t is None:
            raise NormalizationImpossible("degenerate form on the Cartan")
        asq = sum(x * v for x, v in zip(t, vals))
        coroot_coords.append(tuple(2 * x / asq for x in t))

    chev = None
    if "chevalley" in config:
        chev = {}
        for a, tgt in config["chevalley"].items():
            if isinstance(tgt, str):
                chev[index[a]] = {index[tgt]: Fraction(1)}
            else:
                chev[index[a]] = {index[k]: Fraction(v) for k, v in tgt.items()}
        if set(chev) != set(range(dim)):
            raise InvalidInvolution("anti-involution must be defined on the whole basis")

    alg = SimpleLieAlgebra(config.get("name", "custom"), names, struct, form,
                           cartan_idx, root_vals, simple_idx, root_coords,
                           theta_idx, coroot_coords, chev)

    if chev is not None:
        _check_involution(alg)
    return alg


def _check_involution(alg):
    def apply(x):
        out = {}
        for i, ci in x.items():
            for j, cj in alg.chevalley[i].items():
                out[j] = out.get(j, Fraction(0)) + ci * cj
        return {k: v for k, v in out.items() if v}

    for i in range(alg.dim):
        twice = apply(apply({i: Fraction(1)}))
        if twice != {i: Fraction(1)}:
            raise InvalidInvolution(f"map is not an involution at {alg.basis[i]!r}")
        for j in range(alg.dim):
            lhs = apply(alg.bracket(i, j))
            rhs = alg.bracket_elem(apply({j: Fraction(1)}), apply({i: Fraction(1)}))
            if lhs != rhs:
                raise InvalidInvolution(
                    f"sigma([x,y]) != [sigma(y),sigma(x)] at ({alg.basis[i]},{alg.basis[j]})")


# ---------------------------------------------------------------------------
# spectral quantities


def casimir_eigenvalue(alg: SimpleLieAlgebra, lam: GWeight):
    """(lam + 2*rho | lam), the Casimir eigenvalue on the module of highest
    weight lam."""
    return alg.weight_form(lam + alg.rho.scale(2), lam)


def dual_coxeter(alg: SimpleLieAlgebra):
    """Half the Casimir eigenvalue of the highest root; a positive integer
    when the form is correctly normalized."""
    theta_sq = alg.weight_form(alg.theta, alg.theta)
    g = casimir_eigenvalue(alg, alg.theta) / 2
    if theta_sq != 2 or g.denominator != 1 or g <= 0:
        raise NonIntegerDualCoxeter(
            f"(theta|theta)={theta_sq}, g={g}: form is not normalized")
    return g


def is_dominant(alg: SimpleLieAlgebra, lam: GWeight, k):
    """Dominance of lam + k*Lambda0: lam dominant integral and k a nonnegative
    integer with k >= <lam, theta-check>."""
    from .exact import GaussRat

    if isinstance(k, GaussRat):
        if k.im != 0:
            return False
        k = k.re
    k = Fraction(k)
    if not lam.is_dominant_integral():
        return False
    if k.denominator != 1 or k < 0:
        return False
    return k >= alg.pair_theta_check(lam)
