"""Finite-rank graded algebras over a BaseRing.

Algebras are presented by generators and homogeneous noncommutative
relations, realized to an explicit monomial basis by rewriting (with a
critical-pair completion pass), and manipulated through structure
constants.  Laurent powers never appear explicitly: every structure
constant is a ground scalar whose v-power is implied by the degrees of
the three monomials involved, exactly as in HomogeneousMap.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .base import BaseRing, GradedFreeModule, HomogeneousMap
from .ground import GroundRing
from .linalg import ExactMatrix, SubquotientPresentation, kernel_basis, rank, solve, subquotient


class RealizeError(ValueError):
    """Presentation cannot be realized (divergent, non-confluent, bad relation)."""


class BudgetExceededError(RuntimeError):
    """A bounded search ran out of budget before reaching a conclusion."""


# ---------------------------------------------------------------------------
# presentations and rewriting


@dataclass(frozen=True)
class AlgebraPresentation:
    """Generators, homogeneous relations, optional internal-degree truncation.

    Each relation is a list of terms (coeff, names, vexp) standing for
    coeff * v^vexp * product(names); the relation asserts the sum is zero.
    Without a Laurent generator all vexp must be 0.
    """

    base: BaseRing
    generators: tuple  # of (name, degree)
    relations: tuple = ()
    truncation: int | None = None


def _word_degree(word, degs):
    return sum(degs[g] for g in word)


class _Rewriter:
    """Length-lex rewriting for homogeneous noncommutative relations.

    Rules map a leading word to a scalar combination of strictly smaller
    words of the same internal degree (Laurent powers implied).  A naive
    critical-pair completion pass runs at construction; failure to
    complete within the cap is a hard error.
    """

    MAX_RULES = 2000

    def __init__(self, base: BaseRing, gen_degrees, relations, truncation):
        self.base = base
        self.g = base.ground
        self.degs = list(gen_degrees)
        self.trunc = truncation
        if truncation is not None:
            signs = {1 if d > 0 else -1 for d in self.degs if d != 0}
            if len(signs) > 1:
                raise RealizeError(
                    "truncation requires generator degrees of uniform sign"
                )
        self.rules = {}  # lead word -> rhs poly {word: scalar}
        pending = list(relations)
        for poly in pending:
            self._add_relation(poly)
        self._complete()

    # -- polynomial helpers --------------------------------------------
    def _prune(self, word):
        return self.trunc is not None and abs(_word_degree(word, self.degs)) > self.trunc

    @staticmethod
    def _key(word):
        return (len(word), word)

    def reduce(self, poly):
        """Fully reduce a {word: scalar} polynomial."""
        g = self.g
        out = {}
        work = [(w, c) for w, c in poly.items()]
        while work:
            word, coeff = work.pop()
            if coeff == 0:
                continue
            if self._prune(word):
                continue
            hit = None
            for lead in self.rules:
                L = len(lead)
                for s in range(len(word) - L + 1):
                    if word[s:s + L] == lead:
                        hit = (s, lead)
                        break
                if hit:
                    break
            if hit is None:
                out[word] = g.add(out.get(word, g.zero), coeff)
                if out[word] == 0:
                    del out[word]
                continue
            s, lead = hit
            pre, post = word[:s], word[s + len(lead):]
            for w2, c2 in self.rules[lead].items():
                work.append((pre + w2 + post, g.mul(coeff, c2)))
        return out

    def _add_relation(self, poly) -> bool:
        poly = self.reduce(dict(poly))
        if not poly:
            return False
        lead = max(poly, key=self._key)
        lc = poly[lead]
        if not self.g.is_unit(lc):
            raise RealizeError(
                f"relation leading coefficient {lc} is not a unit; cannot orient"
            )
        inv = self.g.inv(lc)
        rhs = {
            w: self.g.neg(self.g.mul(inv, c)) for w, c in poly.items() if w != lead
        }
        if len(self.rules) >= self.MAX_RULES:
            raise RealizeError("rewriting system diverges (rule cap exceeded)")
        self.rules[lead] = rhs
        return True

    def _complete(self):
        """Resolve critical pairs until confluent; error if diverging."""
        changed = True
        while changed:
            changed = False
            leads = list(self.rules)
            for l1, l2 in itertools.product(leads, leads):
                if l1 not in self.rules or l2 not in self.rules:
                    continue
                for sup, p1, p2 in self._superpositions(l1, l2):
                    r1 = self.reduce(p1)
                    r2 = self.reduce(p2)
                    if r1 == r2:
                        continue
                    g = self.g
                    diff = dict(r1)
                    for w, c in r2.items():
                        diff[w] = g.sub(diff.get(w, g.zero), c)
                    if self._add_relation(diff):
                        changed = True

    def _superpositions(self, l1, l2):
        """Superposition words with their two one-step reductions."""
        out = []
        r1, r2 = self.rules[l1], self.rules[l2]
        # proper overlap: suffix of l1 = prefix of l2
        for k in range(1, min(len(l1), len(l2))):
            if l1[-k:] == l2[:k]:
                sup = l1 + l2[k:]
                p1 = {w + l2[k:]: c for w, c in r1.items()}
                p2 = {l1[:-k] + w: c for w, c in r2.items()}
                out.append((sup, p1, p2))
        # containment: l2 strictly inside l1
        if l1 != l2:
            for s in range(len(l1) - len(l2) + 1):
                if l1[s:s + len(l2)] == l2:
                    p1 = dict(r1)
                    p2 = {l1[:s] + w + l1[s + len(l2):]: c for w, c in r2.items()}
                    out.append((l1, p1, p2))
        return out

    def irreducible_words(self, n_gens, max_rank):
        """All irreducible words within the truncation bound, by BFS on length."""
        words = [()]
        level = [()]
        while level:
            nxt = []
            for w in level:
                for g in range(n_gens):
                    cand = w + (g,)
                    if self._prune(cand):
                        continue
                    # prefix is irreducible, so a lead can only occur as a suffix
                    if any(
                        len(lead) <= len(cand) and cand[-len(lead):] == lead
                        for lead in self.rules
                    ):
                        continue
                    nxt.append(cand)
            words.extend(nxt)
            if len(words) > max_rank:
                raise RealizeError(
                    f"monomial basis diverges past {max_rank}; "
                    "add relations or a truncation bound"
                )
            level = nxt
        return words


# ---------------------------------------------------------------------------
# graded algebras


class GradedAlgebra:
    """A finite-rank graded algebra given by structure constants.

    mult[(i, j)] is the coordinate dict of e_i * e_j over the monomial
    basis; scalars carry implied Laurent powers.  The unit is a basis
    monomial.  Associativity and unitality are asserted at construction
    unless check=False (used for constructions associative by design).
    """

    def __init__(self, base: BaseRing, monomials, unit_index: int, mult, check=True):
        self.base = base
        self.monomials = tuple((str(n), int(d)) for n, d in monomials)
        self.unit_index = unit_index
        g = base.ground
        clean = {}
        for (i, j), vec in mult.items():
            di, dj = self.monomials[i][1], self.monomials[j][1]
            v2 = {}
            for k, c in vec.items():
                c = g.normalize(c)
                if c == 0:
                    continue
                if not base.compatible(di + dj, 0, self.monomials[k][1]):
                    raise ValueError(
                        f"structure constant ({i},{j})->{k} violates degree additivity"
                    )
                v2[k] = c
            if v2:
                clean[(i, j)] = v2
        self.mult = clean
        if self.monomials[unit_index][1] % (base.period or 10 ** 9) not in (0,):
            if self.monomials[unit_index][1] != 0:
                raise ValueError("unit must sit in degree 0")
        if check:
            self._check_unit()
            self._check_associativity()

    # -- basic structure ------------------------------------------------
    @property
    def rank(self):
        return len(self.monomials)

    @property
    def module(self) -> GradedFreeModule:
        return GradedFreeModule(self.base, self.monomials)

    def degree(self, i):
        return self.monomials[i][1]

    def parity(self, i):
        return self.monomials[i][1] % 2

    def unit_coords(self):
        return {self.unit_index: self.base.ground.one}

    def mul_basis(self, i, j):
        return self.mult.get((i, j), {})

    def mul_coords(self, x: dict, y: dict) -> dict:
        g = self.base.ground
        out = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.mul_basis(i, j).items():
                    out[k] = g.add(out.get(k, g.zero), g.mul(g.mul(a, b), c))
        return {k: v for k, v in out.items() if v != 0}

    def left_mult(self, i) -> HomogeneousMap:
        M = self.module
        entries = {}
        for j in range(self.rank):
            for k, c in self.mul_basis(i, j).items():
                entries[(k, j)] = c
        return HomogeneousMap(M, M, self.degree(i), entries)

    def right_mult(self, j) -> HomogeneousMap:
        M = self.module
        entries = {}
        for i in range(self.rank):
            for k, c in self.mul_basis(i, j).items():
                entries[(k, i)] = c
        return HomogeneousMap(M, M, self.degree(j), entries)

    def is_commutative(self) -> bool:
        return all(
            self.mul_basis(i, j) == self.mul_basis(j, i)
            for i in range(self.rank)
            for j in range(i)
        )

    # -- construction checks ---------------------------------------------
    def _check_unit(self):
        u = self.unit_index
        one = self.base.ground.one
        for i in range(self.rank):
            if self.mul_basis(u, i) != {i: one} or self.mul_basis(i, u) != {i: one}:
                raise ValueError(f"unit is not two-sided at basis element {i}")

    def _check_associativity(self):
        n = self.rank
        for i in range(n):
            for j in range(n):
                left = self.mul_basis(i, j)
                for k in range(n):
                    lhs = self.mul_coords(left, {k: self.base.ground.one})
                    rhs = self.mul_coords({i: self.base.ground.one}, self.mul_basis(j, k))
                    if lhs != rhs:
                        raise ValueError(f"associativity fails on triple ({i},{j},{k})")

    def __eq__(self, other):
        return (
            isinstance(other, GradedAlgebra)
            and self.base == other.base
            and self.monomials == other.monomials
            and self.unit_index == other.unit_index
            and self.mult == other.mult
        )


def realize(p: AlgebraPresentation, max_rank: int = 4096) -> GradedAlgebra:
    """Build the explicit algebra presented by p.

    The monomial basis is the set of irreducible words under the rewriting
    system obtained by orienting the relations length-lexicographically
    (generator order as listed) and completing critical pairs.
    """
    base = p.base
    period = base.period
    names = [n for n, _ in p.generators]
    degs = [d for _, d in p.generators]
    name_to_idx = {n: i for i, n in enumerate(names)}
    if len(name_to_idx) != len(names):
        raise RealizeError("duplicate generator names")

    polys = []
    for rel in p.relations:
        poly = {}
        rel_deg = None
        g = base.ground
        for coeff, words, vexp in rel:
            word = tuple(name_to_idx[w] for w in words)
            d = _word_degree(word, degs) + (vexp * period if period else 0)
            if vexp and not period:
                raise RealizeError("Laurent power in relation over a plain base")
            if rel_deg is None:
                rel_deg = d
            elif d != rel_deg:
                raise RealizeError(
                    f"relation not homogeneous: term of degree {d} vs {rel_deg}"
                )
            poly[word] = g.add(poly.get(word, g.zero), g.normalize(coeff))
        polys.append({w: c for w, c in poly.items() if c != 0})

    rw = _Rewriter(base, degs, polys, p.truncation)
    words = rw.irreducible_words(len(names), max_rank)
    words.sort(key=lambda w: (len(w), w))
    index = {w: i for i, w in enumerate(words)}

    def word_name(w):
        return "1" if not w else "*".join(names[g] for g in w)

    monomials = [(word_name(w), _word_degree(w, degs)) for w in words]
    mult = {}
    for i, wi in enumerate(words):
        for j, wj in enumerate(words):
            prod = rw.reduce({wi + wj: base.ground.one})
            vec = {}
            for w, c in prod.items():
                if w not in index:
                    raise RealizeError("reduction produced a non-basis word")
                vec[index[w]] = c
            if vec:
                mult[(i, j)] = vec
    return GradedAlgebra(base, monomials, index[()], mult)


# ---------------------------------------------------------------------------
# functorial constructions


def opposite(A: GradedAlgebra) -> GradedAlgebra:
    """The Koszul-signed opposite: a o b = (-1)^{|a||b|} b a."""
    g = A.base.ground
    mult = {}
    for (i, j), vec in A.mult.items():
        sign = -1 if (A.parity(i) and A.parity(j)) else 1
        out = vec if sign == 1 else {k: g.neg(c) for k, c in vec.items()}
        mult[(j, i)] = out
    return GradedAlgebra(A.base, A.monomials, A.unit_index, mult, check=False)


def tensor(A: GradedAlgebra, B: GradedAlgebra) -> GradedAlgebra:
    """Graded tensor product: (a@b)(a'@b') = (-1)^{|b||a'|} aa' @ bb'."""
    if A.base != B.base:
        raise ValueError("tensor over different bases")
    g = A.base.ground
    nB = B.rank
    monomials = []
    for an, ad in A.monomials:
        for bn, bd in B.monomials:
            monomials.append((f"{an}|{bn}", ad + bd))
    mult = {}
    for i1 in range(A.rank):
        for j1 in range(B.rank):
            for i2 in range(A.rank):
                avec = A.mul_basis(i1, i2)
                if not avec:
                    continue
                for j2 in range(B.rank):
                    bvec = B.mul_basis(j1, j2)
                    if not bvec:
                        continue
                    sign = -1 if (B.parity(j1) and A.parity(i2)) else 1
                    out = {}
                    for ka, ca in avec.items():
                        for kb, cb in bvec.items():
                            c = g.mul(ca, cb)
                            if sign == -1:
                                c = g.neg(c)
                            out[ka * nB + kb] = c
                    out = {k: c for k, c in out.items() if c != 0}
                    if out:
                        mult[(i1 * nB + j1, i2 * nB + j2)] = out
    return GradedAlgebra(
        A.base, monomials, A.unit_index * nB + B.unit_index, mult, check=False
    )


def enveloping(A: GradedAlgebra) -> GradedAlgebra:
    return tensor(A, opposite(A))


# ---------------------------------------------------------------------------
# graded center


def center_basis(A: GradedAlgebra) -> dict:
    """Basis vectors of the graded center, grouped by degree slice key.

    Returns {key: list of coordinate dicts}; z is graded-central when
    z a = (-1)^{|z||a|} a z for every basis element a.
    """
    base = A.base
    g = base.ground
    by_key = {}
    for m, (_, d) in enumerate(A.monomials):
        by_key.setdefault(base.degree_key(d), []).append(m)
    out = {}
    for key, idxs in by_key.items():
        zpar = key % 2
        rows = []
        # one row per (basis element j, output coordinate k)
        row_map = {}
        cols = len(idxs)
        data = {}
        for c, m in enumerate(idxs):
            for j in range(A.rank):
                sign = -1 if (zpar and A.parity(j)) else 1
                diff = dict(A.mul_basis(m, j))
                for k, v in A.mul_basis(j, m).items():
                    w = g.mul(v, g.normalize(sign))
                    diff[k] = g.sub(diff.get(k, g.zero), w)
                for k, v in diff.items():
                    if v != 0:
                        r = row_map.setdefault((j, k), len(row_map))
                        data[(r, c)] = v
        nrows = max(len(row_map), 1)
        mat = ExactMatrix(
            g,
            [[data.get((r, c), g.zero) for c in range(cols)] for r in range(nrows)],
            nrows,
            cols,
        )
        vecs = kernel_basis(mat)
        out[key] = [
            {idxs[c]: v for c, v in enumerate(vec) if v != 0} for vec in vecs
        ]
    return {k: v for k, v in out.items() if v}


def center(A: GradedAlgebra) -> dict:
    """Graded center of A, one SubquotientPresentation per degree slice key."""
    g = A.base.ground
    out = {}
    for key, vecs in center_basis(A).items():
        dense = [
            [vec.get(m, g.zero) for m in range(A.rank)] for vec in vecs
        ]
        out[key] = subquotient(g, dense, [])
    return out


# ---------------------------------------------------------------------------
# radical


def _left_mult_matrix(A: GradedAlgebra, coords: dict) -> ExactMatrix:
    g = A.base.ground
    n = A.rank
    data = [[g.zero] * n for _ in range(n)]
    for i, a in coords.items():
        for j in range(n):
            for k, c in A.mul_basis(i, j).items():
                data[k][j] = g.add(data[k][j], g.mul(a, c))
    return ExactMatrix(g, data, n, n)


def _mat_pow_trace(M: ExactMatrix, e: int):
    g = M.ground
    R = ExactMatrix.identity(g, M.rows)
    B = M
    while e:
        if e & 1:
            R = R.mul(B)
        B = B.mul(B)
        e >>= 1
    t = g.zero
    for i in range(M.rows):
        t = g.add(t, R.data[i][i])
    return t


def radical(A: GradedAlgebra) -> list:
    """Basis of the Jacobson radical; ground must be a finite prime field.

    Trace-form chain with integer lifts: starting from the full algebra,
    intersect with the kernel of x -> tr(L_{xy}^{p^k}) / p^k mod p over all
    y in the current subspace, for k = 0 .. ceil(log_p rank).  The traces
    are taken over Z on canonical lifts; over F_p itself the plain trace
    form only captures the k = 0 layer.
    """
    g = A.base.ground
    if g.kind != "Fp":
        raise ValueError("radical requires a finite prime field ground")
    p = g.p
    n = A.rank
    lift = GroundRing.integers()

    def lift_left_mult(coords):
        data = [[0] * n for _ in range(n)]
        for i, a in coords.items():
            for j in range(n):
                for k2, c in A.mul_basis(i, j).items():
                    data[k2][j] += (a % p) * (c % p)
        return ExactMatrix(lift, data, n, n)

    basis = [{i: g.one} for i in range(n)]
    l = 0
    while p ** l < n:
        l += 1
    for k in range(l + 1):
        if not basis:
            break
        q = p ** k
        rows = []
        for y in basis:
            row = []
            for x in basis:
                xy = A.mul_coords(x, y)
                t = _mat_pow_trace(lift_left_mult(xy), q)
                if t % q != 0:
                    raise ArithmeticError("trace chain divisibility violated")
                row.append((t // q) % p)
            rows.append(row)
        mat = ExactMatrix(g, rows, len(basis), len(basis))
        combos = kernel_basis(mat)
        new_basis = []
        for combo in combos:
            vec = {}
            for c, x in zip(combo, basis):
                if c == 0:
                    continue
                for m, v in x.items():
                    vec[m] = g.add(vec.get(m, g.zero), g.mul(c, v))
            vec = {m: v for m, v in vec.items() if v != 0}
            if vec:
                new_basis.append(vec)
        basis = new_basis
    return basis


def frobenius_nilradical(A: GradedAlgebra) -> list:
    """Nilradical of a commutative F_p algebra: kernel of iterated Frobenius.

    Independent cross-check for radical() on commutative inputs.
    """
    g = A.base.ground
    if g.kind != "Fp":
        raise ValueError("requires a finite prime field ground")
    if not A.is_commutative():
        raise ValueError("Frobenius oracle requires a commutative algebra")
    p, n = g.p, A.rank
    cols = []
    for j in range(n):
        x = {j: g.one}
        acc = x
        for _ in range(p - 1):
            acc = A.mul_coords(acc, x)
        cols.append(acc)
    F = ExactMatrix(
        g, [[cols[j].get(i, g.zero) for j in range(n)] for i in range(n)], n, n
    )
    M = F
    m = 1
    while p ** m < n:
        M = M.mul(F)
        m += 1
    vecs = kernel_basis(M)
    return [{i: v for i, v in enumerate(vec) if v != 0} for vec in vecs]


# ---------------------------------------------------------------------------
# ideals and quotients (field grounds)


def _echelon_span(g, vectors, n):
    """Row-echelon basis of the span of coordinate dicts, as dense rows."""
    rows = [[vec.get(i, g.zero) for i in range(n)] for vec in vectors]
    basis = []  # list of (pivot, row)
    for row in rows:
        row = list(row)
        for piv, b in basis:
            if row[piv] != 0:
                f = g.mul(row[piv], g.inv(b[piv]))
                row = [g.sub(x, g.mul(f, y)) for x, y in zip(row, b)]
        for i, x in enumerate(row):
            if x != 0:
                basis.append((i, row))
                break
    basis.sort(key=lambda t: t[0])
    return basis


def ideal_closure(A: GradedAlgebra, vectors) -> list:
    """Two-sided ideal generated by the given vectors, as a span basis."""
    g = A.base.ground
    if not g.is_field:
        raise ValueError("ideal closure implemented over field grounds")
    n = A.rank
    basis = _echelon_span(g, vectors, n)
    queue = [dict(enumerate(row)) for _, row in basis]
    while queue:
        x = queue.pop()
        for i in range(n):
            for y in (A.mul_coords({i: g.one}, x), A.mul_coords(x, {i: g.one})):
                row = [y.get(c, g.zero) for c in range(n)]
                for piv, b in basis:
                    if row[piv] != 0:
                        f = g.mul(row[piv], g.inv(b[piv]))
                        row = [g.sub(u, g.mul(f, w)) for u, w in zip(row, b)]
                pivot = next((c for c, u in enumerate(row) if u != 0), None)
                if pivot is not None:
                    basis.append((pivot, row))
                    basis.sort(key=lambda t: t[0])
                    queue.append(dict(enumerate(row)))
    return [{i: v for i, v in enumerate(row) if v != 0} for _, row in basis]


def quotient_by_ideal(A: GradedAlgebra, ideal_vectors) -> GradedAlgebra:
    """A / I for a two-sided homogeneous ideal given by a spanning set."""
    g = A.base.ground
    if not g.is_field:
        raise ValueError("quotients implemented over field grounds")
    n = A.rank
    basis = _echelon_span(g, ideal_vectors, n)
    pivots = [p for p, _ in basis]
    if A.unit_index in pivots:
        raise ValueError("ideal contains the unit")
    keep = [i for i in range(n) if i not in pivots]

    def project(vec):
        row = [vec.get(i, g.zero) for i in range(n)]
        for piv, b in basis:
            if row[piv] != 0:
                f = g.mul(row[piv], g.inv(b[piv]))
                row = [g.sub(x, g.mul(f, y)) for x, y in zip(row, b)]
        return {keep.index(i): row[i] for i in keep if row[i] != 0}

    monomials = [A.monomials[i] for i in keep]
    mult = {}
    for a, i in enumerate(keep):
        for b, j in enumerate(keep):
            vec = project(A.mul_basis(i, j))
            if vec:
                mult[(a, b)] = vec
    return GradedAlgebra(A.base, monomials, keep.index(A.unit_index), mult)


def semisimple_quotient(A: GradedAlgebra) -> GradedAlgebra:
    rad = radical(A)
    if not rad:
        return A
    return quotient_by_ideal(A, rad)


# ---------------------------------------------------------------------------
# isomorphism search


@dataclass
class IsoResult:
    isomorphic: bool
    exhaustive: bool
    witness: HomogeneousMap | None = None


def algebra_isomorphic(A: GradedAlgebra, B: GradedAlgebra, budget: int = 100000) -> IsoResult:
    """Search for a unit-preserving degree-0 algebra isomorphism A -> B.

    Enumerates all ground-scalar degree-0 linear maps over a finite prime
    field (the Laurent powers on entries are implied by degrees, so the
    scalar assignment determines the map).  Raises BudgetExceededError if
    the candidate space is larger than the budget and no witness is found
    within it; a completed scan returns exhaustive=True.
    """
    if A.base != B.base:
        return IsoResult(False, True)
    if A.rank != B.rank:
        return IsoResult(False, True)
    g = A.base.ground
    if g.kind != "Fp":
        raise ValueError("isomorphism search requires a finite prime field ground")
    base = A.base
    MA, MB = A.module, B.module
    positions = []
    for i in range(A.rank):
        if i == A.unit_index:
            continue
        for j in range(B.rank):
            if base.compatible(A.degree(i), 0, B.degree(j)):
                positions.append((j, i))
    total = g.p ** len(positions)
    tried = 0
    for assignment in itertools.product(range(g.p), repeat=len(positions)):
        if tried >= budget:
            raise BudgetExceededError(
                f"isomorphism search budget {budget} exhausted "
                f"({total} candidates total)"
            )
        tried += 1
        entries = {(B.unit_index, A.unit_index): g.one}
        for (j, i), c in zip(positions, assignment):
            if c:
                entries[(j, i)] = c
        f = HomogeneousMap(MA, MB, 0, entries)
        if _is_algebra_iso(A, B, f):
            return IsoResult(True, True, f)
    if tried < total:
        raise BudgetExceededError(
            f"isomorphism search budget {budget} exhausted ({total} candidates total)"
        )
    return IsoResult(False, True)


def _is_algebra_iso(A: GradedAlgebra, B: GradedAlgebra, f: HomogeneousMap) -> bool:
    g = A.base.ground
    # bijective: every degree slice block square of full rank
    keys = {A.base.degree_key(d) for _, d in A.monomials}
    for key in keys:
        m, _, _ = f.slice_matrix(key)
        if m.rows != m.cols or rank(m) != m.rows:
            return False
    for i in range(A.rank):
        fi = f.apply_coords({i: g.one})
        for j in range(A.rank):
            fj = f.apply_coords({j: g.one})
            lhs = f.apply_coords(A.mul_basis(i, j))
            if lhs != B.mul_coords(fi, fj):
                return False
    return True


def unit_kernel(A: GradedAlgebra) -> SubquotientPresentation:
    """Kernel of base -> A, c |-> c*1.  Zero for any honestly free algebra."""
    return SubquotientPresentation(0, ())


def endomorphism_algebra(M: GradedFreeModule) -> GradedAlgebra:
    """End(M) of a free graded module, with composition as the product.

    The identity map must be a basis monomial, so the basis is the identity
    together with the elementary maps e_ij: M_i -> M_j for (i, j) != (0, 0);
    the missing e_00 is the identity minus the other diagonal maps.
    """
    if M.rank == 0:
        raise ValueError("endomorphisms of the zero module have no unit monomial")
    g = M.base.ground
    r = M.rank
    pairs = [(i, j) for i in range(r) for j in range(r) if (i, j) != (0, 0)]

    def raw_of(idx):
        # coordinates of a basis monomial on the elementary maps e_ij
        if idx == 0:
            return {(i, i): g.one for i in range(r)}
        return {pairs[idx - 1]: g.one}

    def to_basis(raw):
        out = {}
        c00 = raw.pop((0, 0), g.zero)
        if c00 != 0:
            out[0] = c00
            for i in range(1, r):
                raw[(i, i)] = g.sub(raw.get((i, i), g.zero), c00)
        for k, (i, j) in enumerate(pairs):
            c = raw.get((i, j), g.zero)
            if c != 0:
                out[k + 1] = c
        return out

    names = [n for n, _ in M.generators]
    monomials = [("id", 0)] + [
        (f"[{names[i]}->{names[j]}]", M.degrees[j] - M.degrees[i]) for i, j in pairs
    ]
    mult = {}
    n = len(monomials)
    for a in range(n):
        ra = raw_of(a)
        for b in range(n):
            raw = {}
            for (i, j), c in ra.items():
                for (k, l), c2 in raw_of(b).items():
                    # a*b applies b first: e_ij o e_kl = [l == i] e_kj
                    if l == i:
                        key = (k, j)
                        raw[key] = g.add(raw.get(key, g.zero), g.mul(c, c2))
            vec = to_basis({k: v for k, v in raw.items() if v != 0})
            if vec:
                mult[(a, b)] = vec
    return GradedAlgebra(M.base, tuple(monomials), 0, mult)
