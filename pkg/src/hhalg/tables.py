"""Bigraded tables of subquotient presentations.

The common output shape for homology, Ext and Hochschild computations:
entries indexed by (s, t), each a SubquotientPresentation, plus the
window the computation is valid in.  Zero entries are omitted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .linalg import SubquotientPresentation


@dataclass
class BigradedTable:
    entries: dict = field(default_factory=dict)  # (s, t) -> SubquotientPresentation
    window: tuple | None = None  # (lo, hi) in t, if bounded
    notes: tuple = ()

    def set(self, s: int, t: int, pres: SubquotientPresentation):
        if pres.is_zero:
            self.entries.pop((s, t), None)
        else:
            self.entries[(s, t)] = pres

    def entry(self, s: int, t: int) -> SubquotientPresentation:
        return self.entries.get((s, t), SubquotientPresentation(0, ()))

    def keys(self):
        return sorted(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def rows(self):
        """(s, t, free_rank, torsion) rows in sorted order."""
        out = []
        for (s, t) in self.keys():
            p = self.entries[(s, t)]
            out.append((s, t, p.free_rank, p.torsion))
        return out

    def __eq__(self, other):
        return isinstance(other, BigradedTable) and self.entries == other.entries

    def __str__(self):
        if self.is_zero():
            return "(zero table)"
        return "\n".join(
            f"s={s} t={t}: {self.entries[(s, t)]}" for (s, t) in self.keys()
        )
