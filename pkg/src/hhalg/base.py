"""Graded base rings and free graded modules.

A BaseRing is a ground ring, optionally extended by a single invertible
Laurent generator v of even positive degree.  Because v is invertible and
central, a homogeneous map between free graded modules is determined by one
ground-ring scalar per generator pair: the power of v on each entry is
forced by the degree bookkeeping.  HomogeneousMap therefore stores plain
ground scalars, and every kernel/cokernel question reduces to ground-ring
matrices per degree (or per residue class mod |v| when a Laurent generator
is present).
"""

from __future__ import annotations

from dataclasses import dataclass

from .ground import GroundRing
from .linalg import ExactMatrix


@dataclass(frozen=True)
class LaurentGenerator:
    name: str
    degree: int

    def __post_init__(self):
        if self.degree <= 0 or self.degree % 2 != 0:
            raise ValueError(
                f"Laurent generator degree must be positive and even, got {self.degree}"
            )


@dataclass(frozen=True)
class BaseRing:
    """A ground ring, optionally with one invertible even-degree generator."""

    ground: GroundRing
    laurent: LaurentGenerator | None = None

    @property
    def period(self) -> int | None:
        return self.laurent.degree if self.laurent else None

    def degree_key(self, t: int) -> int:
        """Canonical slice key: t itself, or its residue mod |v|."""
        return t % self.period if self.laurent else t

    def compatible(self, src_degree: int, map_degree: int, tgt_degree: int) -> bool:
        """May a map of this degree carry src generator to tgt generator?"""
        gap = src_degree + map_degree - tgt_degree
        if self.laurent:
            return gap % self.period == 0
        return gap == 0

    def exponent(self, src_degree: int, map_degree: int, tgt_degree: int) -> int:
        """The implied v-power on a compatible entry."""
        gap = src_degree + map_degree - tgt_degree
        if self.laurent:
            if gap % self.period != 0:
                raise ValueError("incompatible degrees")
            return gap // self.period
        if gap != 0:
            raise ValueError("incompatible degrees")
        return 0

    def __str__(self):
        if self.laurent:
            return f"{self.ground}[{self.laurent.name}^±1; |{self.laurent.name}|={self.laurent.degree}]"
        return str(self.ground)


@dataclass(frozen=True)
class GradedFreeModule:
    """A finite-rank free graded module with named generators."""

    base: BaseRing
    generators: tuple  # of (name, degree)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple((str(n), int(d)) for n, d in self.generators))

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def degrees(self):
        return [d for _, d in self.generators]

    def slice_indices(self, t: int):
        """Generator indices contributing to internal degree t."""
        base = self.base
        return [i for i, (_, d) in enumerate(self.generators) if base.compatible(d, 0, t)]

    def degree_support(self):
        """Sorted canonical slice keys where this module is nonzero."""
        return sorted({self.base.degree_key(d) for _, d in self.generators})

    def shift(self, k: int) -> "GradedFreeModule":
        return GradedFreeModule(self.base, tuple((n, d + k) for n, d in self.generators))


class HomogeneousMap:
    """A degree-homogeneous map between free graded modules.

    entries[(i, j)] is the ground scalar carrying source generator j to
    target generator i, weighted by the implied power of the Laurent
    generator.  Entries are present only for degree-compatible pairs.
    """

    __slots__ = ("source", "target", "degree", "entries")

    def __init__(self, source: GradedFreeModule, target: GradedFreeModule, degree: int, entries):
        if source.base != target.base:
            raise ValueError("source and target over different bases")
        self.source = source
        self.target = target
        self.degree = degree
        base = source.base
        g = base.ground
        clean = {}
        for (i, j), c in entries.items():
            c = g.normalize(c)
            if c == 0:
                continue
            if not base.compatible(source.generators[j][1], degree, target.generators[i][1]):
                raise ValueError(
                    f"entry ({i},{j}) violates degree homogeneity for a degree-{degree} map"
                )
            clean[(i, j)] = c
        self.entries = clean

    # -- constructors -------------------------------------------------
    @staticmethod
    def zero(source, target, degree):
        return HomogeneousMap(source, target, degree, {})

    @staticmethod
    def identity(module):
        return HomogeneousMap(
            module, module, 0, {(i, i): module.base.ground.one for i in range(module.rank)}
        )

    # -- algebra ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.entries

    def add(self, other: "HomogeneousMap") -> "HomogeneousMap":
        if (self.source, self.target, self.degree) != (other.source, other.target, other.degree):
            raise ValueError("map shape mismatch")
        g = self.source.base.ground
        out = dict(self.entries)
        for k, c in other.entries.items():
            out[k] = g.add(out.get(k, g.zero), c)
        return HomogeneousMap(self.source, self.target, self.degree, out)

    def scale(self, c) -> "HomogeneousMap":
        g = self.source.base.ground
        return HomogeneousMap(
            self.source, self.target, self.degree,
            {k: g.mul(c, v) for k, v in self.entries.items()},
        )

    def neg(self) -> "HomogeneousMap":
        return self.scale(self.source.base.ground.neg(self.source.base.ground.one))

    def compose(self, first: "HomogeneousMap") -> "HomogeneousMap":
        """self o first (apply `first`, then self)."""
        if first.target != self.source:
            raise ValueError("composition mismatch")
        g = self.source.base.ground
        out = {}
        by_src = {}
        for (i, j), c in self.entries.items():
            by_src.setdefault(j, []).append((i, c))
        for (k, j), c in first.entries.items():
            for i, d in by_src.get(k, ()):
                key = (i, j)
                out[key] = g.add(out.get(key, g.zero), g.mul(d, c))
        return HomogeneousMap(first.source, self.target, self.degree + first.degree, out)

    def __eq__(self, other):
        return (
            isinstance(other, HomogeneousMap)
            and self.source == other.source
            and self.target == other.target
            and self.degree == other.degree
            and self.entries == other.entries
        )

    def apply_coords(self, coeffs: dict) -> dict:
        """Apply to a coordinate dict {source index: scalar}."""
        g = self.source.base.ground
        out = {}
        for (i, j), c in self.entries.items():
            x = coeffs.get(j)
            if x:
                out[i] = g.add(out.get(i, g.zero), g.mul(c, x))
        return {i: v for i, v in out.items() if v != 0}

    # -- slicing ------------------------------------------------------
    def slice_matrix(self, t: int):
        """The ground matrix from degree-t source slice to degree-(t+deg) target slice.

        Returns (matrix, source_indices, target_indices).
        """
        src = self.source.slice_indices(t)
        tgt = self.target.slice_indices(t + self.degree)
        g = self.source.base.ground
        data = [[self.entries.get((i, j), g.zero) for j in src] for i in tgt]
        return ExactMatrix(g, data, len(tgt), len(src)), src, tgt

    def __repr__(self):
        return f"HomogeneousMap(deg={self.degree}, entries={self.entries})"


def periodic_reduce(f: HomogeneousMap) -> dict:
    """Ground matrices of f, one per slice key.

    With a Laurent generator the keys are residue classes mod |v| (keyed by
    source residue); otherwise one block per integer degree in the support
    of the source or target.
    """
    base = f.source.base
    if base.laurent:
        keys = sorted(
            {base.degree_key(d) for d in f.source.degrees}
            | {base.degree_key(d - f.degree) for d in f.target.degrees}
        )
    else:
        keys = sorted(
            {d for d in f.source.degrees} | {d - f.degree for d in f.target.degrees}
        )
    return {t: f.slice_matrix(t)[0] for t in keys}


def graded_hom_module(M: GradedFreeModule, N: GradedFreeModule, degree: int = 0) -> GradedFreeModule:
    """The free module of homomorphisms M -> N, shifted by `degree`.

    One generator per generator pair; the pair (i -> j) sits in degree
    deg(N_j) - deg(M_i) + degree.
    """
    if M.base != N.base:
        raise ValueError("modules over different bases")
    gens = []
    for i, (mn, md) in enumerate(M.generators):
        for j, (nn, nd) in enumerate(N.generators):
            gens.append((f"[{mn}->{nn}]", nd - md + degree))
    return GradedFreeModule(M.base, tuple(gens))


def hom_pair_index(M: GradedFreeModule, N: GradedFreeModule, i: int, j: int) -> int:
    """Index of the generator (M_i -> N_j) inside graded_hom_module(M, N)."""
    return i * N.rank + j
