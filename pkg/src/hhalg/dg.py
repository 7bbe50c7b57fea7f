"""Chain complexes, DG algebras, Hom/tensor complexes, cones, quasi-isos.

A Complex here is single-graded: one free graded module whose generator
degrees are the total (homological) degrees, with a degree -1 differential.
Over a Laurent base the homology is periodic and is reported per degree
inside an explicit window.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import GradedAlgebra, opposite
from .base import BaseRing, GradedFreeModule, HomogeneousMap, graded_hom_module, hom_pair_index
from .linalg import ExactMatrix, SubquotientPresentation, kernel_basis, solve, subquotient
from .tables import BigradedTable


class Complex:
    """A free graded module with a square-zero degree -1 differential."""

    def __init__(self, module: GradedFreeModule, d: HomogeneousMap, check=True):
        if d.source != module or d.target != module or d.degree != -1:
            raise ValueError("differential must be a degree -1 self-map")
        self.module = module
        self.d = d
        if check and not d.compose(d).is_zero():
            raise ValueError("d^2 != 0")

    @property
    def base(self) -> BaseRing:
        return self.module.base

    def __eq__(self, other):
        return (
            isinstance(other, Complex)
            and self.module == other.module
            and self.d == other.d
        )

    @staticmethod
    def unit(base: BaseRing) -> "Complex":
        M = GradedFreeModule(base, (("1", 0),))
        return Complex(M, HomogeneousMap.zero(M, M, -1))


def homology_at(C: Complex, n: int) -> SubquotientPresentation:
    """H_n(C) = ker(d_n) / im(d_{n+1}) as a ground-module presentation."""
    g = C.base.ground
    out_mat, _, _ = C.d.slice_matrix(n)
    kern = kernel_basis(out_mat)
    in_mat, _, _ = C.d.slice_matrix(n + 1)
    image = [[in_mat.data[r][c] for r in range(in_mat.rows)] for c in range(in_mat.cols)]
    return subquotient(g, kern, image)


def homology(C: Complex, window) -> BigradedTable:
    """Homology table over the window, keyed (0, n)."""
    lo, hi = window
    table = BigradedTable(window=(lo, hi))
    for n in range(lo, hi + 1):
        table.set(0, n, homology_at(C, n))
    return table


def euler_characteristic(C: Complex) -> int:
    """Alternating generator count; only meaningful without a Laurent base."""
    if C.base.laurent:
        raise ValueError("Euler characteristic undefined over a Laurent base")
    return sum(1 if d % 2 == 0 else -1 for d in C.module.degrees)


# ---------------------------------------------------------------------------
# chain maps


class ChainMap:
    """A map of complexes commuting with differentials up to (-1)^degree."""

    def __init__(self, source: Complex, target: Complex, f: HomogeneousMap, check=True):
        if f.source != source.module or f.target != target.module:
            raise ValueError("component map does not match the complexes")
        self.source = source
        self.target = target
        self.f = f
        self.degree = f.degree
        if check:
            lhs = target.d.compose(f)
            rhs = f.compose(source.d)
            if self.degree % 2:
                rhs = rhs.neg()
            if lhs != rhs:
                raise ValueError("not a chain map: fails to commute with d")

    @staticmethod
    def identity(C: Complex) -> "ChainMap":
        return ChainMap(C, C, HomogeneousMap.identity(C.module), check=False)

    @staticmethod
    def zero(C: Complex, D: Complex, degree=0) -> "ChainMap":
        return ChainMap(C, D, HomogeneousMap.zero(C.module, D.module, degree), check=False)


# ---------------------------------------------------------------------------
# tensor and hom complexes


def tensor_complex(C: Complex, D: Complex) -> Complex:
    """C (x) D with d(a(x)b) = da(x)b + (-1)^{|a|} a(x)db."""
    if C.base != D.base:
        raise ValueError("base mismatch")
    g = C.base.ground
    MC, MD = C.module, D.module
    nD = MD.rank
    gens = []
    for an, ad in MC.generators:
        for bn, bd in MD.generators:
            gens.append((f"{an}|{bn}", ad + bd))
    M = GradedFreeModule(C.base, tuple(gens))
    entries = {}
    for (k, i), c in C.d.entries.items():
        for j in range(nD):
            entries[(k * nD + j, i * nD + j)] = c
    for (l, j), c in D.d.entries.items():
        for i in range(MC.rank):
            sign = -1 if MC.generators[i][1] % 2 else 1
            val = c if sign == 1 else g.neg(c)
            key = (i * nD + l, i * nD + j)
            entries[key] = g.add(entries.get(key, g.zero), val)
    return Complex(M, HomogeneousMap(M, M, -1, entries))


def hom_complex(C: Complex, D: Complex) -> Complex:
    """Hom(C, D) with (df) = d o f - (-1)^{|f|} f o d."""
    if C.base != D.base:
        raise ValueError("base mismatch")
    g = C.base.ground
    MC, MD = C.module, D.module
    H = graded_hom_module(MC, MD)
    entries = {}
    for i in range(MC.rank):
        for j in range(MD.rank):
            src = hom_pair_index(MC, MD, i, j)
            fdeg = MD.generators[j][1] - MC.generators[i][1]
            # post-compose with d_D
            for (l, j2), c in D.d.entries.items():
                if j2 == j:
                    key = (hom_pair_index(MC, MD, i, l), src)
                    entries[key] = g.add(entries.get(key, g.zero), c)
            # pre-compose with d_C, signed
            for (i2, k), c in C.d.entries.items():
                if i2 == i:
                    sign = -1 if fdeg % 2 else 1
                    val = g.neg(c) if sign == 1 else c
                    # -(+1)*c for even f, -(-1)*c = +c for odd f
                    key = (hom_pair_index(MC, MD, k, j), src)
                    entries[key] = g.add(entries.get(key, g.zero), val)
    return Complex(H, HomogeneousMap(H, H, -1, entries))


def cone(f: ChainMap) -> Complex:
    """Mapping cone: C[1] (+) D with d(c, x) = (-d_C c, f(c) + d_D x)."""
    if f.degree != 0:
        raise ValueError("cone requires a degree-0 chain map")
    C, D = f.source, f.target
    g = C.base.ground
    gens = [(f"c.{n}", d + 1) for n, d in C.module.generators]
    off = len(gens)
    gens += [(f"d.{n}", d) for n, d in D.module.generators]
    M = GradedFreeModule(C.base, tuple(gens))
    entries = {}
    for (k, i), c in C.d.entries.items():
        entries[(k, i)] = g.neg(c)
    for (j, i), c in f.f.entries.items():
        entries[(off + j, i)] = c
    for (l, j), c in D.d.entries.items():
        entries[(off + l, off + j)] = c
    return Complex(M, HomogeneousMap(M, M, -1, entries))


@dataclass
class QuasiIsoVerdict:
    is_quasi_iso: bool
    window: tuple
    failures: tuple = ()

    def __bool__(self):
        return self.is_quasi_iso


def is_quasi_iso(f: ChainMap, window) -> QuasiIsoVerdict:
    """True iff the cone of f has vanishing homology through the window.

    The verdict is only a statement about the given window; nothing is
    claimed outside it.
    """
    table = homology(cone(f), window)
    failures = tuple(t for (_, t) in table.keys())
    return QuasiIsoVerdict(not failures, tuple(window), failures)


def induced_homology_iso(f: ChainMap, window) -> bool:
    """Independent quasi-iso oracle: H_n(f) is an isomorphism in the window.

    For finitely generated modules this holds iff H_n(C) and H_n(D) have
    equal presentations and the induced map is surjective.
    """
    C, D = f.source, f.target
    g = C.base.ground
    for n in range(window[0], window[1] + 1):
        if homology_at(C, n) != homology_at(D, n):
            return False
        # surjectivity: f(ker d_C) + im d_D spans ker d_D
        kc = kernel_basis(C.d.slice_matrix(n)[0])
        fmat, src_idx, tgt_idx = f.f.slice_matrix(n)
        pushed = [fmat.apply(v) for v in kc]
        dmat, _, _ = D.d.slice_matrix(n + 1)
        im = [[dmat.data[r][c] for r in range(dmat.rows)] for c in range(dmat.cols)]
        cols = pushed + im
        kd = kernel_basis(D.d.slice_matrix(n)[0])
        if not kd:
            continue
        if not cols:
            return False
        mat = ExactMatrix(
            g, [[col[r] for col in cols] for r in range(len(kd[0]))],
            len(kd[0]), len(cols),
        )
        for v in kd:
            if solve(mat, v) is None:
                return False
    return True


# ---------------------------------------------------------------------------
# DG algebras


class DGAlgebra:
    """A graded algebra with a square-zero degree -1 derivation."""

    def __init__(self, algebra: GradedAlgebra, d: HomogeneousMap, check=True):
        if d.source != algebra.module or d.degree != -1:
            raise ValueError("differential must be a degree -1 self-map of the algebra")
        self.algebra = algebra
        self.d = d
        if check:
            if not d.compose(d).is_zero():
                raise ValueError("d^2 != 0")
            self._check_leibniz()

    def _check_leibniz(self):
        A = self.algebra
        g = A.base.ground
        for i in range(A.rank):
            di = self.d.apply_coords({i: g.one})
            sign = g.normalize(-1 if A.parity(i) else 1)
            for j in range(A.rank):
                dj = self.d.apply_coords({j: g.one})
                lhs = self.d.apply_coords(A.mul_basis(i, j))
                rhs = A.mul_coords(di, {j: g.one})
                for k, c in A.mul_coords({i: sign}, dj).items():
                    rhs[k] = g.add(rhs.get(k, g.zero), c)
                rhs = {k: c for k, c in rhs.items() if c != 0}
                if lhs != rhs:
                    raise ValueError(f"Leibniz rule fails on basis pair ({i},{j})")

    @property
    def base(self):
        return self.algebra.base

    def complex(self) -> Complex:
        return Complex(self.algebra.module, self.d, check=False)

    def opposite(self) -> "DGAlgebra":
        return DGAlgebra(opposite(self.algebra), self.d, check=True)


@dataclass
class QuotientDGA:
    """The two-term family: basis {1, y}, |y| = d+1, dy = x, y^2 = w.

    x has even degree d, w degree 2d+2 (degrees realized through implied
    Laurent powers).  The commutator defect of y against itself in the
    enveloping algebra is 2w; over a ground where 2 = 0 the algebra is
    its own opposite.
    """

    dga: DGAlgebra
    x: object
    w: object
    x_degree: int

    @property
    def defect(self):
        g = self.dga.base.ground
        return g.add(self.w, self.w)


def make_quotient_dga(base: BaseRing, x, w, x_degree: int = 0) -> QuotientDGA:
    """Build the rank-2 quotient DGA for a non-zero-divisor x.

    x and w are ground scalars; their degrees (x_degree and 2*x_degree+2)
    are carried by implied Laurent powers, so nonzero w needs a Laurent
    generator whose degree divides 2*x_degree+2.
    """
    g = base.ground
    x = g.normalize(x)
    w = g.normalize(w)
    if x_degree % 2 != 0:
        raise ValueError("x must have even degree")
    if x == 0:
        raise ValueError("x is a zero divisor")
    w_degree = 2 * x_degree + 2
    for val, deg, label in ((x, x_degree, "x"), (w, w_degree, "w")):
        if val != 0 and not base.compatible(deg, 0, 0):
            raise ValueError(f"degree of {label} ({deg}) not a multiple of the Laurent period")
    monomials = (("1", 0), ("y", x_degree + 1))
    mult = {
        (0, 0): {0: g.one}, (0, 1): {1: g.one}, (1, 0): {1: g.one},
        (1, 1): {0: w},
    }
    A = GradedAlgebra(base, monomials, 0, mult)
    M = A.module
    d = HomogeneousMap(M, M, -1, {(0, 1): x})
    return QuotientDGA(DGAlgebra(A, d), x, w, x_degree)


def dg_unit_kernel(A: DGAlgebra):
    """Kernel of ground -> H_0(A) in degree 0.

    Returns (presentation, generator): the kernel is the ideal (generator)
    of the ground ring; generator 0 means zero kernel.
    """
    g = A.base.ground
    u = A.algebra.unit_index
    in_mat, _, tgt = A.d.slice_matrix(1)
    upos = tgt.index(u) if u in tgt else None
    if upos is None:
        raise ValueError("unit not visible in its own degree slice")
    if g.is_field:
        # c*1 in im(d) for c != 0 iff 1 in im(d)
        target = [g.one if r == upos else g.zero for r in range(in_mat.rows)]
        if solve(in_mat, target) is not None:
            return SubquotientPresentation(1, ()), g.one
        return SubquotientPresentation(0, ()), g.zero
    # over Z: the order of the class of e_u in coker(d), via Smith form
    import math

    from .linalg import smith_normal_form
    sf = smith_normal_form(in_mat)
    e_u = [1 if r == upos else 0 for r in range(in_mat.rows)]
    y = sf.U.apply(e_u)
    diag = sf.diagonal()
    n = 1
    for r, yr in enumerate(y):
        dr = diag[r] if r < len(diag) else 0
        if dr == 0:
            if yr != 0:
                return SubquotientPresentation(0, ()), 0  # infinite order: zero kernel
            continue
        if yr % dr != 0:
            n = n * (dr // math.gcd(dr, yr)) // math.gcd(n, dr // math.gcd(dr, yr))
    return SubquotientPresentation(1, ()), n
