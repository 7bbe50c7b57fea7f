"""Hochschild cohomology via the normalized bar cochain complex.

HH^n(A, M) for a finite-rank graded algebra A and a bimodule M, the action
map mu from A (x) A^op to Hom(A, A), an independent computation of HH as
Ext over the enveloping algebra, and the homology image of the alpha class
under mu for the two-term quotient DGA family.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .algebra import GradedAlgebra, opposite, tensor
from .base import GradedFreeModule, HomogeneousMap, graded_hom_module, hom_pair_index
from .dg import ChainMap, DGAlgebra, QuotientDGA, hom_complex, tensor_complex
from .linalg import ExactMatrix, SubquotientPresentation, kernel_basis, solve, subquotient
from .resolve import AModule, ext_with_coefficients, free_resolution, _slice_keys
from .tables import BigradedTable


class Bimodule:
    """An A-bimodule: ground module plus left/right monomial actions."""

    def __init__(self, algebra: GradedAlgebra, module: GradedFreeModule, left, right):
        self.algebra = algebra
        self.module = module
        self.left = dict(left)
        self.right = dict(right)

    def left_act(self, m, vec):
        f = self.left.get(m)
        return f.apply_coords(vec) if f else {}

    def right_act(self, vec, m):
        f = self.right.get(m)
        return f.apply_coords(vec) if f else {}

    @staticmethod
    def regular(A: GradedAlgebra) -> "Bimodule":
        left = {m: A.left_mult(m) for m in range(A.rank)}
        right = {m: A.right_mult(m) for m in range(A.rank)}
        return Bimodule(A, A.module, left, right)


class BarCochainComplex:
    """Normalized bar cochains C^n = Hom(Abar^{(x)n}, M), with differentials.

    A cochain generator is (word over non-unit monomials, M-coordinate);
    its internal degree is deg(value) - deg(inputs).  d^2 = 0 is asserted
    at construction.
    """

    def __init__(self, A: GradedAlgebra, M: Bimodule, n_max: int = 4,
                 budget: int = 200000):
        self.A = A
        self.M = M
        self.reduced = [m for m in range(A.rank) if m != A.unit_index]
        self.terms = []
        self.deltas = []
        nM = M.module.rank
        # one extra term so the top reported degree still has an outgoing
        # differential
        for n in range(n_max + 2):
            if len(self.reduced) ** n * nM > budget:
                break
            self.terms.append(self._term(n))
        self.completed = len(self.terms) - 2
        if self.completed < 0:
            raise ValueError("budget too small for any cochain degree")
        for n in range(len(self.terms) - 1):
            self.deltas.append(self._delta(n))
        for n in range(len(self.deltas) - 1):
            if not self.deltas[n + 1].compose(self.deltas[n]).is_zero():
                raise AssertionError(f"bar differential fails d^2 = 0 at n = {n}")

    def words(self, n):
        return list(itertools.product(self.reduced, repeat=n))

    def _word_index(self, n):
        return {w: i for i, w in enumerate(self.words(n))}

    def _term(self, n) -> GradedFreeModule:
        A, M = self.A, self.M
        gens = []
        for w in self.words(n):
            wdeg = sum(A.degree(a) for a in w)
            for name, d in M.module.generators:
                gens.append((f"[{','.join(str(a) for a in w)}]->{name}", d - wdeg))
        return GradedFreeModule(A.base, tuple(gens))

    def _delta(self, n) -> HomogeneousMap:
        A, M = self.A, self.M
        g = A.base.ground
        nM = M.module.rank
        u = A.unit_index
        src_words = self.words(n)
        tgt_index = self._word_index(n + 1)
        entries = {}

        def put(tword, bvec, sign_scalar):
            ti = tgt_index[tword]
            for b2, c in bvec.items():
                key = (ti * nM + b2, src)
                entries[key] = g.add(entries.get(key, g.zero), g.mul(sign_scalar, c))

        minus_one = g.normalize(-1)
        for wi, w in enumerate(src_words):
            for b in range(nM):
                src = wi * nM + b
                fpar = (M.module.generators[b][1] - sum(A.degree(a) for a in w)) % 2
                # first face: a1 . f(a2..), Koszul sign (-1)^{|a1||f|}
                for a1 in self.reduced:
                    val = M.left_act(a1, {b: g.one})
                    if val:
                        s = minus_one if (fpar and A.parity(a1)) else g.one
                        put((a1,) + w, val, s)
                # inner faces: (-1)^i f(..., a_i a_{i+1}, ...)
                for i in range(n):
                    for x in self.reduced:
                        for y in self.reduced:
                            c = A.mul_basis(x, y).get(w[i])
                            if c is None:
                                continue
                            tword = w[:i] + (x, y) + w[i + 1:]
                            s = g.mul(c, minus_one if (i + 1) % 2 else g.one)
                            put(tword, {b: g.one}, s)
                # last face: (-1)^{n+1} f(a1..an) . a_{n+1}
                slast = minus_one if (n + 1) % 2 else g.one
                for an in self.reduced:
                    val = M.right_act({b: g.one}, an)
                    if val:
                        put(w + (an,), val, slast)
        return HomogeneousMap(self.terms[n], self.terms[n + 1], 0, entries)


def hochschild_cohomology(A: GradedAlgebra, M: Bimodule | None = None,
                          n_max: int = 4, window=(-16, 16),
                          budget: int = 200000) -> BigradedTable:
    """HH^n(A, M) per internal degree slice, keyed (n, t)."""
    if M is None:
        M = Bimodule.regular(A)
    bar = BarCochainComplex(A, M, n_max, budget)
    g = A.base.ground
    table = BigradedTable(window=tuple(window))
    if bar.completed < n_max:
        table.notes = (f"budget exceeded: completed through n = {bar.completed}",)
    for n in range(min(bar.completed, n_max) + 1):
        mod = bar.terms[n]
        for key in _slice_keys(mod, window):
            mat, src_idx, _ = bar.deltas[n].slice_matrix(key)
            kern = kernel_basis(mat)
            if n > 0:
                imat, _, itgt = bar.deltas[n - 1].slice_matrix(key)
                remap = {idx: r for r, idx in enumerate(itgt)}
                cols = [
                    [imat.data[remap[idx]][c] if idx in remap else g.zero
                     for idx in src_idx]
                    for c in range(imat.cols)
                ]
            else:
                cols = []
            table.set(n, key, subquotient(g, kern, cols))
    return table


# ---------------------------------------------------------------------------
# the action map


def _mu_entries(A: GradedAlgebra):
    """Entries of mu: (e_i (x) e_j) |-> (x |-> (-1)^{|e_j||x|} e_i x e_j)."""
    g = A.base.ground
    r = A.rank
    entries = {}
    for i in range(r):
        for j in range(r):
            src = i * r + j
            for m in range(r):
                sign = -1 if (A.parity(j) and A.parity(m)) else 1
                vec = A.mul_coords(A.mul_basis(i, m), {j: g.normalize(sign)})
                for k, c in vec.items():
                    entries[(hom_pair_index(A.module, A.module, m, k), src)] = c
    return entries


def action_map_mu(A):
    """The action map mu for a GradedAlgebra or DGAlgebra.

    Graded case: a degree-0 HomogeneousMap from tensor(A, A^op) to
    Hom(A, A), verified multiplicative for the composition product.
    DG case: a ChainMap between the tensor and Hom complexes (the chain
    condition is hard-checked by the ChainMap constructor).
    """
    if isinstance(A, DGAlgebra):
        alg = A.algebra
        T = tensor_complex(A.complex(), A.opposite().complex())
        H = hom_complex(A.complex(), A.complex())
        f = HomogeneousMap(T.module, H.module, 0, _mu_entries(alg))
        return ChainMap(T, H, f)
    T = tensor(A, opposite(A))
    H = graded_hom_module(A.module, A.module)
    f = HomogeneousMap(T.module, H, 0, _mu_entries(A))
    if not _mu_is_multiplicative(A, T, f):
        raise AssertionError("mu failed the algebra-map check")
    return f


def _compose_hom_elements(A: GradedAlgebra, p: dict, q: dict) -> dict:
    """Composition (p o q) of Hom(A, A) elements in pair coordinates."""
    g = A.base.ground
    r = A.rank
    out = {}
    for idx1, c1 in p.items():
        m1, k1 = divmod(idx1, r)
        for idx2, c2 in q.items():
            m2, k2 = divmod(idx2, r)
            if k2 == m1:
                key = m2 * r + k1
                out[key] = g.add(out.get(key, g.zero), g.mul(c1, c2))
    return {k: v for k, v in out.items() if v != 0}


def _mu_is_multiplicative(A: GradedAlgebra, T: GradedAlgebra, f: HomogeneousMap) -> bool:
    g = A.base.ground
    for s1 in range(T.rank):
        p1 = f.apply_coords({s1: g.one})
        for s2 in range(T.rank):
            p2 = f.apply_coords({s2: g.one})
            lhs = f.apply_coords(T.mul_basis(s1, s2))
            if lhs != _compose_hom_elements(A, p1, p2):
                return False
    return True


def mu_is_iso(A: GradedAlgebra) -> bool:
    """Whether mu is bijective, slice by slice (unit determinant over Z)."""
    f = action_map_mu(A)
    from .linalg import determinant, rank as mat_rank
    g = A.base.ground
    keys = {A.base.degree_key(d) for d in f.source.degrees} | {
        A.base.degree_key(d) for d in f.target.degrees
    }
    for key in keys:
        m, _, _ = f.slice_matrix(key)
        if m.rows != m.cols:
            return False
        if g.is_field:
            if mat_rank(m) != m.rows:
                return False
        elif not g.is_unit(determinant(m)):
            return False
    return True


# ---------------------------------------------------------------------------
# the enveloping-algebra path


def enveloping_module(A: GradedAlgebra) -> tuple:
    """(E, M): the enveloping algebra E = A (x) A^op and A as an E-module."""
    E = tensor(A, opposite(A))
    g = A.base.ground
    r = A.rank
    action = {}
    for i in range(r):
        for j in range(r):
            entries = {}
            for m in range(r):
                sign = -1 if (A.parity(j) and A.parity(m)) else 1
                vec = A.mul_coords(A.mul_basis(i, m), {j: g.normalize(sign)})
                for k, c in vec.items():
                    entries[(k, m)] = c
            hm = HomogeneousMap(A.module, A.module, A.degree(i) + A.degree(j), entries)
            if not hm.is_zero():
                action[i * r + j] = hm
    return E, AModule(E, A.module, action)


def hochschild_via_enveloping(A: GradedAlgebra, n_max: int = 4,
                              window=(-16, 16), seed: int = 0) -> BigradedTable:
    """Ext_{A (x) A^op}(A, A), asserted rank-equal to the bar-complex table."""
    E, M = enveloping_module(A)
    res = free_resolution(E, M, s_max=n_max + 1, t_window=window, seed=seed)
    table = ext_with_coefficients(res, M, window)
    bar = hochschild_cohomology(A, None, n_max, window)
    period = A.base.period
    # a stage generator of internal degree t is dual to a bar functional of
    # degree -t, hence the sign flip on the Ext side
    for n in range(n_max + 1):
        left = {}
        for (s, t), p in table.entries.items():
            if s == n:
                k = (-t) % period if period else -t
                left[k] = left.get(k, 0) + p.free_rank
        right = {}
        for (s, t), p in bar.entries.items():
            if s == n:
                k = t % period if period else t
                right[k] = right.get(k, 0) + p.free_rank
        if left != right:
            raise AssertionError(
                f"enveloping path disagrees with bar complex at n = {n}: "
                f"{left} vs {right}"
            )
    return table


# ---------------------------------------------------------------------------
# homology image of alpha under mu


@dataclass
class MuImageResult:
    coefficient: object       # scalar c with mu_*(alpha) = c * betabar (implied powers)
    modeled_defect: object    # 2w, the commutator defect of the family
    is_unit: bool
    alpha_choice: str
    note: str = "sign of alpha (hence of c) is a normalization choice"


def mu_homology_image(Q: QuotientDGA) -> MuImageResult:
    """Push the degree-(d+1) homology class alpha through mu.

    alpha is one of y(x)1 -+ 1(x)y in H_{d+1}(A (x) A^op); the candidate
    whose image is a multiple of the betabar class (the functional y -> 1)
    is reported, together with the coefficient and whether it is a unit in
    the homology module.
    """
    A = Q.dga
    g = A.base.ground
    d1 = Q.x_degree + 1
    mu = action_map_mu(A)
    T, H = mu.source, mu.target

    names = [n for n, _ in T.module.generators]
    iy1, i1y = names.index("y|1"), names.index("1|y")
    # homology of the tensor complex at degree d+1
    out_mat, src_idx, _ = T.d.slice_matrix(d1)
    kern = kernel_basis(out_mat)
    in_mat, _, _ = T.d.slice_matrix(d1 + 1)
    image_cols = [[in_mat.data[r][c] for r in range(in_mat.rows)]
                  for c in range(in_mat.cols)]
    pres = subquotient(g, kern, image_cols)
    if pres.free_rank + len(pres.torsion) != 1:
        raise ValueError(f"alpha class is not rank 1: {pres}")

    minus = g.normalize(-1)
    candidates = [
        ("y|1 - 1|y", {iy1: g.one, i1y: minus}),
        ("y|1 + 1|y", {iy1: g.one, i1y: g.one}),
    ]
    # betabar: the functional y -> 1 in Hom(A, A) pair coordinates
    beta_idx = hom_pair_index(A.algebra.module, A.algebra.module, 1, 0)
    hin, _, htgt = H.d.slice_matrix(d1 + 1)
    hsrc_idx = H.module.slice_indices(d1)
    remap = {idx: r for r, idx in enumerate(htgt)}
    boundary_cols = [
        [hin.data[remap[idx]][c] if idx in remap else g.zero for idx in hsrc_idx]
        for c in range(hin.cols)
    ]
    beta_col = [g.one if idx == beta_idx else g.zero for idx in hsrc_idx]
    hpres = None
    for label, vec in candidates:
        # must be a cycle in the tensor complex
        dense = [vec.get(i, g.zero) for i in src_idx]
        if any(x != 0 for x in out_mat.apply(dense)):
            continue
        img = mu.f.apply_coords(vec)
        target = [img.get(idx, g.zero) for idx in hsrc_idx]
        mat = ExactMatrix(
            g, [[col[r] for col in [beta_col] + boundary_cols]
                for r in range(len(hsrc_idx))],
            len(hsrc_idx), 1 + len(boundary_cols),
        )
        sol = solve(mat, target)
        if sol is None:
            continue
        c = sol[0]
        # the homology module containing betabar
        hker = kernel_basis(H.d.slice_matrix(d1)[0])
        hpres = subquotient(g, hker, boundary_cols)
        c, unit = _normalize_class(g, c, hpres)
        return MuImageResult(c, Q.defect, unit, label)
    raise ValueError("neither alpha candidate maps to a betabar multiple")


def _normalize_class(g, c, pres: SubquotientPresentation):
    """Reduce a class coefficient and decide unit-ness in its cyclic module."""
    if pres.free_rank + len(pres.torsion) != 1:
        return c, False
    if pres.torsion:
        n = pres.torsion[0]
        if g.kind == "Z":
            c = c % n
            return c, math.gcd(c, n) == 1
        return c, c != 0
    if g.kind == "Z":
        return c, c in (1, -1)
    return c, c != 0
