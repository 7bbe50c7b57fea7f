"""Exact linear algebra over Z, F_p and Q.

Everything the homology and Ext machinery needs reduces to four primitives
on exact matrices: Smith normal form, kernel bases, cokernel presentations
and linear solving.  Matrices are dense lists of rows; corpus sizes stay in
the low hundreds, where dense exact arithmetic is comfortably fast.

Over Z the Smith form uses minimal-absolute-value pivoting with alternating
row/column reduction sweeps, which keeps coefficient growth tame at this
scale.  Over a field the Smith form degenerates to a 0/1 diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ground import GroundRing


class ExactMatrix:
    """A rows x cols matrix with entries in a GroundRing."""

    __slots__ = ("ground", "rows", "cols", "data")

    def __init__(self, ground: GroundRing, data, rows=None, cols=None):
        self.ground = ground
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        self.rows = rows
        self.cols = cols
        self.data = [[ground.normalize(x) for x in row] for row in data]
        for row in self.data:
            if len(row) != cols:
                raise ValueError("ragged matrix")

    @staticmethod
    def zero(ground: GroundRing, rows: int, cols: int) -> "ExactMatrix":
        return ExactMatrix(ground, [[ground.zero] * cols for _ in range(rows)], rows, cols)

    @staticmethod
    def identity(ground: GroundRing, n: int) -> "ExactMatrix":
        m = ExactMatrix.zero(ground, n, n)
        for i in range(n):
            m.data[i][i] = ground.one
        return m

    def copy(self) -> "ExactMatrix":
        m = ExactMatrix.zero(self.ground, self.rows, self.cols)
        m.data = [row[:] for row in self.data]
        return m

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and self.ground == other.ground
            and self.data == other.data
        )

    def __getitem__(self, ij):
        return self.data[ij[0]][ij[1]]

    def mul(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        g = self.ground
        out = ExactMatrix.zero(g, self.rows, other.cols)
        for i in range(self.rows):
            ai = self.data[i]
            oi = out.data[i]
            for k in range(self.cols):
                a = ai[k]
                if a == 0:
                    continue
                bk = other.data[k]
                for j in range(other.cols):
                    if bk[j] != 0:
                        oi[j] = g.add(oi[j], g.mul(a, bk[j]))
        return out

    def apply(self, vec):
        """Matrix times column vector (a list of scalars)."""
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        g = self.ground
        out = [g.zero] * self.rows
        for i in range(self.rows):
            acc = g.zero
            row = self.data[i]
            for j, v in enumerate(vec):
                if v != 0 and row[j] != 0:
                    acc = g.add(acc, g.mul(row[j], v))
            out[i] = acc
        return out

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(
            self.ground,
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
            self.cols,
            self.rows,
        )

    def __repr__(self):
        return f"ExactMatrix({self.ground}, {self.data})"


@dataclass
class SmithForm:
    """U * M * V = D with U, V invertible and D diagonal (d_i | d_{i+1})."""

    U: ExactMatrix
    D: ExactMatrix
    V: ExactMatrix

    def diagonal(self):
        n = min(self.D.rows, self.D.cols)
        return [self.D.data[i][i] for i in range(n)]


@dataclass(frozen=True)
class SubquotientPresentation:
    """A finitely generated module: free part plus invariant-factor torsion."""

    free_rank: int
    torsion: tuple = field(default_factory=tuple)

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ValueError("torsion factors must form a divisibility chain")

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        if self.free_rank:
            parts.append(f"free^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts)


def _swap_rows(m: ExactMatrix, i, j):
    m.data[i], m.data[j] = m.data[j], m.data[i]


def _swap_cols(m: ExactMatrix, i, j):
    for row in m.data:
        row[i], row[j] = row[j], row[i]


def _addmul_row(m: ExactMatrix, dst, src, c):
    g = m.ground
    row_d, row_s = m.data[dst], m.data[src]
    for j in range(m.cols):
        if row_s[j] != 0:
            row_d[j] = g.add(row_d[j], g.mul(c, row_s[j]))


def _addmul_col(m: ExactMatrix, dst, src, c):
    g = m.ground
    for row in m.data:
        if row[src] != 0:
            row[dst] = g.add(row[dst], g.mul(c, row[src]))


def _scale_row(m: ExactMatrix, i, u):
    g = m.ground
    m.data[i] = [g.mul(u, x) for x in m.data[i]]


def _scale_col(m: ExactMatrix, j, u):
    g = m.ground
    for row in m.data:
        row[j] = g.mul(u, row[j])


def _smith_field(M: ExactMatrix) -> SmithForm:
    g = M.ground
    D = M.copy()
    U = ExactMatrix.identity(g, M.rows)
    V = ExactMatrix.identity(g, M.cols)
    t = 0
    n = min(M.rows, M.cols)
    while t < n:
        piv = None
        for i in range(t, D.rows):
            for j in range(t, D.cols):
                if D.data[i][j] != 0:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i, j = piv
        if i != t:
            _swap_rows(D, i, t)
            _swap_rows(U, i, t)
        if j != t:
            _swap_cols(D, j, t)
            _swap_cols(V, j, t)
        inv = g.inv(D.data[t][t])
        _scale_row(D, t, inv)
        _scale_row(U, t, inv)
        for i in range(D.rows):
            if i != t and D.data[i][t] != 0:
                c = g.neg(D.data[i][t])
                _addmul_row(D, i, t, c)
                _addmul_row(U, i, t, c)
        for j in range(D.cols):
            if j != t and D.data[t][j] != 0:
                c = g.neg(D.data[t][j])
                _addmul_col(D, j, t, c)
                _addmul_col(V, j, t, c)
        t += 1
    return SmithForm(U, D, V)


def _smith_integer(M: ExactMatrix) -> SmithForm:
    g = M.ground
    D = M.copy()
    U = ExactMatrix.identity(g, M.rows)
    V = ExactMatrix.identity(g, M.cols)
    n = min(M.rows, M.cols)
    t = 0
    while t < n:
        # minimal |entry| pivot in the trailing block
        piv = None
        best = None
        for i in range(t, D.rows):
            for j in range(t, D.cols):
                a = D.data[i][j]
                if a != 0 and (best is None or abs(a) < best):
                    best = abs(a)
                    piv = (i, j)
        if piv is None:
            break
        i, j = piv
        if i != t:
            _swap_rows(D, i, t)
            _swap_rows(U, i, t)
        if j != t:
            _swap_cols(D, j, t)
            _swap_cols(V, j, t)
        # alternate row/column reduction until the cross is clear
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, D.rows):
                a = D.data[i][t]
                if a != 0:
                    q = a // D.data[t][t]
                    _addmul_row(D, i, t, -q)
                    _addmul_row(U, i, t, -q)
                    if D.data[i][t] != 0:
                        _swap_rows(D, i, t)
                        _swap_rows(U, i, t)
                        dirty = True
            for j in range(t + 1, D.cols):
                a = D.data[t][j]
                if a != 0:
                    q = a // D.data[t][t]
                    _addmul_col(D, j, t, -q)
                    _addmul_col(V, j, t, -q)
                    if D.data[t][j] != 0:
                        _swap_cols(D, j, t)
                        _swap_cols(V, j, t)
                        dirty = True
            if not dirty:
                # pivot must divide the whole trailing block
                d = D.data[t][t]
                for i in range(t + 1, D.rows):
                    if any(D.data[i][j] % d != 0 for j in range(t + 1, D.cols)):
                        _addmul_row(D, t, i, 1)
                        _addmul_row(U, t, i, 1)
                        dirty = True
                        break
        if D.data[t][t] < 0:
            _scale_row(D, t, -1)
            _scale_row(U, t, -1)
        t += 1
    # enforce the divisibility chain (minimal pivoting usually guarantees it,
    # but keep the invariant explicit and robust)
    changed = True
    while changed:
        changed = False
        for i in range(n - 1):
            a, b = D.data[i][i], D.data[i + 1][i + 1]
            if a != 0 and b % a != 0:
                _addmul_col(D, i, i + 1, 1)
                _addmul_col(V, i, i + 1, 1)
                _smith_integer_block(D, U, V, i)
                changed = True
    return SmithForm(U, D, V)


def _smith_integer_block(D, U, V, t):
    """Clear the cross at position t after a chain-fix column add."""
    dirty = True
    while dirty:
        dirty = False
        for i in range(D.rows):
            if i != t and D.data[i][t] != 0:
                d = D.data[t][t]
                q = D.data[i][t] // d
                _addmul_row(D, i, t, -q)
                _addmul_row(U, i, t, -q)
                if D.data[i][t] != 0:  # remainder: smaller pivot found
                    _swap_rows(D, i, t)
                    _swap_rows(U, i, t)
                    dirty = True
        for j in range(D.cols):
            if j != t and D.data[t][j] != 0:
                d = D.data[t][t]
                q = D.data[t][j] // d
                _addmul_col(D, j, t, -q)
                _addmul_col(V, j, t, -q)
                if D.data[t][j] != 0:
                    _swap_cols(D, j, t)
                    _swap_cols(V, j, t)
                    dirty = True
    if D.data[t][t] < 0:
        _scale_row(D, t, -1)
        _scale_row(U, t, -1)


def smith_normal_form(M: ExactMatrix) -> SmithForm:
    """Diagonalize M as U*M*V = D with a divisibility chain on the diagonal."""
    if M.ground.is_field:
        sf = _smith_field(M)
    else:
        sf = _smith_integer(M)
    return sf


def rank(M: ExactMatrix) -> int:
    sf = smith_normal_form(M)
    return sum(1 for d in sf.diagonal() if d != 0)


def kernel_basis(M: ExactMatrix):
    """An independent generating set of {v : Mv = 0} (a lattice basis over Z)."""
    sf = smith_normal_form(M)
    r = sum(1 for d in sf.diagonal() if d != 0)
    return [[sf.V.data[i][j] for i in range(M.cols)] for j in range(r, M.cols)]


def cokernel(M: ExactMatrix) -> SubquotientPresentation:
    """Present target/im(M) by free rank and invariant factors."""
    sf = smith_normal_form(M)
    diag = sf.diagonal()
    torsion = []
    nonzero = 0
    for d in diag:
        if d == 0:
            continue
        nonzero += 1
        if not M.ground.is_field:
            d = abs(d)
            if d > 1:
                torsion.append(d)
    return SubquotientPresentation(M.rows - nonzero, tuple(torsion))


def solve(M: ExactMatrix, b):
    """Return x with Mx = b, or None when unsolvable (exactly)."""
    if len(b) != M.rows:
        raise ValueError("dimension mismatch")
    g = M.ground
    sf = smith_normal_form(M)
    c = sf.U.apply([g.normalize(x) for x in b])
    diag = sf.diagonal()
    y = [g.zero] * M.cols
    for i in range(M.rows):
        d = diag[i] if i < len(diag) else g.zero
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if not g.divides(d, c[i]):
                return None
            y[i] = g.div(c[i], d)
    return sf.V.apply(y)


def determinant(M: ExactMatrix):
    """Exact determinant (fraction-free over Z), used by audits and tests."""
    if M.rows != M.cols:
        raise ValueError("determinant of non-square matrix")
    g = M.ground
    n = M.rows
    if n == 0:
        return g.one
    if g.is_field:
        A = M.copy()
        det = g.one
        for t in range(n):
            piv = next((i for i in range(t, n) if A.data[i][t] != 0), None)
            if piv is None:
                return g.zero
            if piv != t:
                _swap_rows(A, piv, t)
                det = g.neg(det)
            det = g.mul(det, A.data[t][t])
            inv = g.inv(A.data[t][t])
            for i in range(t + 1, n):
                if A.data[i][t] != 0:
                    c = g.neg(g.mul(A.data[i][t], inv))
                    _addmul_row(A, i, t, c)
        return det
    # Bareiss over Z
    a = [row[:] for row in M.data]
    sign = 1
    prev = 1
    for t in range(n - 1):
        if a[t][t] == 0:
            piv = next((i for i in range(t + 1, n) if a[i][t] != 0), None)
            if piv is None:
                return 0
            a[t], a[piv] = a[piv], a[t]
            sign = -sign
        for i in range(t + 1, n):
            for j in range(t + 1, n):
                a[i][j] = (a[i][j] * a[t][t] - a[i][t] * a[t][j]) // prev
            a[i][t] = 0
        prev = a[t][t]
    return sign * a[n - 1][n - 1]


def subquotient(ground: GroundRing, kernel_vectors, image_vectors) -> SubquotientPresentation:
    """Present span(kernel_vectors)/span(image_vectors).

    Every image vector must lie in the span of the kernel vectors; the image
    is rewritten in kernel coordinates and the presentation is the cokernel
    of that coordinate matrix.
    """
    if not kernel_vectors:
        return SubquotientPresentation(0)
    dim = len(kernel_vectors[0])
    K = ExactMatrix(ground, [[kernel_vectors[j][i] for j in range(len(kernel_vectors))] for i in range(dim)])
    cols = []
    for v in image_vectors:
        x = solve(K, v)
        if x is None:
            raise ValueError("image vector outside the kernel span")
        cols.append(x)
    if not cols:
        return SubquotientPresentation(len(kernel_vectors))
    R = ExactMatrix(ground, [[cols[j][i] for j in range(len(cols))] for i in range(len(kernel_vectors))])
    return cokernel(R)
