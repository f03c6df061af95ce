"""Canonical decomposition of regular vectors and admissible-interval counts."""

from __future__ import annotations

from dataclasses import dataclass

from .core import CanonicalType, DimVector, _check_compatible, e_vector, h_vector


@dataclass(frozen=True)
class CanonicalDecomposition:
    """Presentation ``d = p * h + sum p[i][j] * e_{i,j}`` with a zero per arm."""

    p: int
    table: tuple[tuple[int, ...], ...]  # table[i - 1][j] for j in [0, m_i - 1]

    def entry(self, i: int, j: int) -> int:
        row = self.table[i - 1]
        return row[j % len(row)]

    def reconstruct(self, t: CanonicalType) -> DimVector:
        v = self.p * h_vector(t)
        for i, row in enumerate(self.table, start=1):
            for j, mult in enumerate(row):
                if mult:
                    v = v + mult * e_vector(t, i, j)
        return v


@dataclass(frozen=True)
class IntervalClass:
    """Admissible interval [j1, j2] on arm ``i``, stored with j1 in [0, m_i - 1]."""

    i: int
    j1: int
    j2: int

    @property
    def length(self) -> int:
        return self.j2 - self.j1

    def key(self) -> tuple[int, int, int]:
        return (self.i, self.j1, self.length)


def canonical_decomposition(t: CanonicalType, d: DimVector) -> CanonicalDecomposition:
    """Subtract per-arm minima; the leftover of the end value is the multiplicity.

    Requires equal end values (otherwise no such presentation exists); the
    multiplicity may come out negative when ``d`` is not regular.  Ties in
    the per-arm minimum do not affect the result.
    """
    _check_compatible(t, d)
    if not d.is_nonnegative():
        raise ValueError(f"negative coordinate in {d.flatten()}")
    if d.d0 != d.dinf:
        raise ValueError(
            f"end values differ ({d.d0} vs {d.dinf}); no canonical decomposition"
        )
    table = []
    mins = []
    for i in range(1, t.n + 1):
        row = [d.at(i, j) for j in range(t.m[i - 1])]
        lo = min(row)
        mins.append(lo)
        table.append(tuple(x - lo for x in row))
    p = sum(mins) - (t.n - 1) * d.d0
    return CanonicalDecomposition(p, tuple(table))


def admissible_intervals(t: CanonicalType, d: DimVector) -> tuple[tuple[IntervalClass, ...], ...]:
    """Per arm, the classes [j1, j2] with equal endpoint profile values and
    strictly larger values inside.  Each j1 starts at most one class."""
    dec = canonical_decomposition(t, d)
    out = []
    for i in range(1, t.n + 1):
        mi = t.m[i - 1]
        row = dec.table[i - 1]
        classes = []
        for j1 in range(mi):
            base = row[j1]
            for j2 in range(j1 + 1, j1 + mi + 1):
                val = row[j2 % mi]
                if val > base:
                    continue
                if val == base:
                    classes.append(IntervalClass(i, j1, j2))
                break
        out.append(tuple(classes))
    return tuple(out)


def all_classes(t: CanonicalType, d: DimVector) -> tuple[IntervalClass, ...]:
    return tuple(c for arm in admissible_intervals(t, d) for c in arm)


def ad(t: CanonicalType, d: DimVector) -> int:
    """Total number of admissible classes over all arms."""
    return sum(len(arm) for arm in admissible_intervals(t, d))


def lies_inside(t: CanonicalType, cls: IntervalClass, j: int) -> bool:
    """Whether slot ``j`` lies inside the class: j1 + u*m <= j < j2 + u*m."""
    mi = t.m[cls.i - 1]
    shift = (j - cls.j1) % mi
    return shift < cls.length


def inside_multiplicity(t: CanonicalType, d: DimVector, i: int, j: int) -> int:
    """Number of arm-``i`` admissible classes with slot ``j`` inside."""
    if not 0 <= j <= t.m[i - 1] - 1:
        raise ValueError(f"slot {j} out of range for arm {i}")
    arm = admissible_intervals(t, d)[i - 1]
    return sum(1 for cls in arm if lies_inside(t, cls, j))
