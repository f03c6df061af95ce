"""Exceptional-tube module classes, their Hom/Ext calculus, and enumeration.

Tube-``i`` indecomposables are indexed by a socle slot and a length; the
socle slot is kept in ``[0, m_i - 1]`` so that equality of the dataclass is
isomorphism.  Linear (type A) interval modules mirror the calculus inside a
single period of a tube.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Optional, Sequence, Union

from .core import (
    CanonicalType,
    DimVector,
    _check_compatible,
    euler_form,
    homogeneous_multiplicity,
)


@dataclass(frozen=True)
class TubeClass:
    """Indecomposable in tube ``i`` with socle slot ``j1`` and top index ``j2``."""

    i: int
    j1: int
    j2: int

    @property
    def length(self) -> int:
        return self.j2 - self.j1 + 1

    def key(self) -> tuple[int, int, int]:
        return (self.i, self.j1, self.length)

    def __str__(self) -> str:
        return f"{self.i}:{self.j1}-{self.j2}"


def tube_class(t: CanonicalType, i: int, j1: int, j2: int) -> TubeClass:
    """Normalize the socle slot into [0, m_i - 1]."""
    if not 1 <= i <= t.n:
        raise ValueError(f"arm index out of range: {i}")
    if j2 < j1:
        raise ValueError(f"empty tube interval [{j1}, {j2}]")
    mi = t.m[i - 1]
    shift = j1 % mi - j1
    return TubeClass(i, j1 + shift, j2 + shift)


@dataclass(frozen=True)
class RegularPart:
    """Multiset of tube classes, kept sorted; the exceptional part of a module."""

    classes: tuple[TubeClass, ...]

    def key(self):
        return tuple(c.key() for c in self.classes)

    def tube(self, i: int) -> tuple[TubeClass, ...]:
        return tuple(c for c in self.classes if c.i == i)

    def __iter__(self) -> Iterator[TubeClass]:
        return iter(self.classes)

    def __len__(self) -> int:
        return len(self.classes)

    def __str__(self) -> str:
        return "+".join(str(c) for c in self.classes) if self.classes else "0"


def regular_part(classes: Iterable[TubeClass]) -> RegularPart:
    return RegularPart(tuple(sorted(classes, key=TubeClass.key)))


ClassOrPart = Union[TubeClass, RegularPart]


def _as_classes(x: ClassOrPart) -> tuple[TubeClass, ...]:
    if isinstance(x, TubeClass):
        return (x,)
    return tuple(x.classes)


def tube_dim_vector(t: CanonicalType, x: ClassOrPart) -> DimVector:
    """Sum of the dimension vectors of the classes, via coverage counts."""
    covs = [[0] * mi for mi in t.m]
    for c in _as_classes(x):
        cov = _coverage_of(t.m[c.i - 1], c.j1, c.length)
        row = covs[c.i - 1]
        for r, v in enumerate(cov):
            row[r] += v
    d0 = sum(row[0] for row in covs)
    arms = []
    for i, row in enumerate(covs):
        foreign = d0 - row[0]
        arms.append(tuple(v + foreign for v in row[1:]))
    return DimVector(d0, d0, tuple(arms))


def tau(t: CanonicalType, c: TubeClass, power: int = 1) -> TubeClass:
    """Auslander-Reiten shift: both indices move down by ``power``."""
    return tube_class(t, c.i, c.j1 - power, c.j2 - power)


def hom_tube(t: CanonicalType, a: TubeClass, b: TubeClass) -> int:
    """Hom dimension between tube indecomposables by the shift-count rule."""
    if a.i != b.i:
        return 0
    mi = t.m[a.i - 1]
    count = 0
    # need a.j1 <= b.j1 + u*m <= a.j2 <= b.j2 + u*m
    lo = -((b.j1 - a.j1) // mi)  # ceil((a.j1 - b.j1) / m)
    hi = (a.j2 - b.j1) // mi
    for u in range(lo, hi + 1):
        if a.j2 <= b.j2 + u * mi:
            count += 1
    return count


def ext1_tube(t: CanonicalType, a: TubeClass, b: TubeClass) -> int:
    """First extension dimension via the Euler form (second one vanishes)."""
    return hom_tube(t, a, b) - euler_form(
        t, tube_dim_vector(t, a), tube_dim_vector(t, b)
    )


def hom_regular(t: CanonicalType, x: ClassOrPart, y: ClassOrPart) -> int:
    """Hom dimension between direct sums, additively over the summands."""
    return sum(
        hom_tube(t, a, b) for a in _as_classes(x) for b in _as_classes(y)
    )


@lru_cache(maxsize=None)
def _coverage_of(m: int, socle: int, length: int) -> tuple[int, ...]:
    full, rest = divmod(length, m)
    return tuple(full + (1 if (r - socle) % m < rest else 0) for r in range(m))


@lru_cache(maxsize=None)
def _cyclic_multisets(m: int, coverage: tuple[int, ...]) -> tuple[tuple[tuple[int, int], ...], ...]:
    """All multisets of (socle, length) pairs with the given slot-coverage.

    Depth-first over the classes in (socle, length) order, pruning on slot
    overshoot and on slots no later class can still reach.
    """
    total = sum(coverage)
    if total == 0:
        return ((),)
    max_len = m * (min(coverage) + 1) - 1 if min(coverage) else m - 1
    max_len = min(max_len, total)
    classes = [
        (s, l) for s in range(m) for l in range(1, max_len + 1)
    ]
    covs = [_coverage_of(m, s, l) for s, l in classes]
    # slots still reachable by classes from index idx onward
    suffix = [0] * (len(classes) + 1)
    for idx in range(len(classes) - 1, -1, -1):
        mask = suffix[idx + 1]
        for r in range(m):
            if covs[idx][r]:
                mask |= 1 << r
        suffix[idx] = mask

    results: list[tuple[tuple[int, int], ...]] = []

    def walk(idx: int, remaining: tuple[int, ...], acc: tuple[tuple[int, int], ...]):
        if all(v == 0 for v in remaining):
            results.append(acc)
            return
        if idx == len(classes):
            return
        need = 0
        for r in range(m):
            if remaining[r]:
                need |= 1 << r
        if need & ~suffix[idx]:
            return
        cov = covs[idx]
        cap = min(
            (remaining[r] // cov[r] for r in range(m) if cov[r]), default=0
        )
        cls = classes[idx]
        for mult in range(cap + 1):
            if mult:
                remaining = tuple(remaining[r] - cov[r] for r in range(m))
                acc = acc + (cls,)
            walk(idx + 1, remaining, acc)

    walk(0, coverage, ())
    return tuple(results)


def tube_coverage(t: CanonicalType, classes: Iterable[TubeClass], i: int) -> tuple[int, ...]:
    """Slot-coverage profile of the tube-``i`` part of a multiset."""
    mi = t.m[i - 1]
    cov = [0] * mi
    for c in classes:
        if c.i == i:
            for r, v in enumerate(_coverage_of(mi, c.j1, c.length)):
                cov[r] += v
    return tuple(cov)


def enumerate_regular(t: CanonicalType, r: DimVector) -> list[RegularPart]:
    """All multisets of tube classes with total dimension vector ``r``.

    The per-arm offsets of ``r`` pin each tube's coverage up to whole-period
    padding; the homogeneous multiplicity of ``r`` is split over the tubes
    and each resulting coverage is realized independently.
    """
    _check_compatible(t, r)
    if not r.is_nonnegative() or r.d0 != r.dinf:
        return []
    p = homogeneous_multiplicity(t, r)
    if p < 0:
        return []
    profiles = []
    for i in range(1, t.n + 1):
        row = [r.at(i, j) for j in range(t.m[i - 1])]
        lo = min(row)
        profiles.append(tuple(x - lo for x in row))

    out: list[RegularPart] = []
    for pads in _compositions(p, t.n):
        per_tube = []
        for i in range(1, t.n + 1):
            coverage = tuple(v + pads[i - 1] for v in profiles[i - 1])
            msets = _cyclic_multisets(t.m[i - 1], coverage)
            per_tube.append(
                [
                    tuple(TubeClass(i, s, s + l - 1) for s, l in mset)
                    for mset in msets
                ]
            )
        for combo in product(*per_tube):
            out.append(regular_part(c for part in combo for c in part))
    out.sort(key=RegularPart.key)
    return out


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# Equioriented type A calculus (one period of a tube, unrolled)


@dataclass(frozen=True)
class TypeAModule:
    """Multiset of interval modules over the linear quiver with ``m`` slots."""

    m: int
    intervals: tuple[tuple[int, int], ...]

    def dim_vector(self) -> tuple[int, ...]:
        d = [0] * self.m
        for a, b in self.intervals:
            for j in range(a, b + 1):
                d[j - 1] += 1
        return tuple(d)


def type_a_module(m: int, intervals: Iterable[Sequence[int]]) -> TypeAModule:
    ivs = []
    for a, b in intervals:
        if not 1 <= a <= b <= m:
            raise ValueError(f"interval [{a}, {b}] out of range for m={m}")
        ivs.append((a, b))
    return TypeAModule(m, tuple(sorted(ivs)))


def hom_type_a(m: int, ab: Sequence[int], cd: Sequence[int]) -> int:
    """Hom dimension between interval modules; socle sits at the left end."""
    a, b = ab
    c, d = cd
    return 1 if a <= c <= b <= d else 0


def hom_type_a_modules(x: TypeAModule, y: TypeAModule) -> int:
    if x.m != y.m:
        raise ValueError("quiver length mismatch")
    return sum(hom_type_a(x.m, p, q) for p in x.intervals for q in y.intervals)


def euler_type_a(m: int, d: Sequence[int], d2: Sequence[int]) -> int:
    total = sum(a * b for a, b in zip(d, d2))
    total -= sum(d[j + 1] * d2[j] for j in range(m - 1))
    return total


def to_type_a(
    t: CanonicalType, x: ClassOrPart, i: int, cut: Optional[int] = None
) -> tuple[int, TypeAModule]:
    """Unroll the tube-``i`` part at an uncovered slot (smallest by default).

    Fails when every slot is covered (a full period is present); the chosen
    cut slot does not affect Hom dimensions of the images.
    """
    mi = t.m[i - 1]
    classes = [c for c in _as_classes(x) if c.i == i]
    cov = tube_coverage(t, classes, i)
    zeros = [r for r, v in enumerate(cov) if v == 0]
    if not zeros:
        raise ValueError(f"tube {i} part covers every slot; cannot unroll")
    if cut is None:
        cut = zeros[0]
    elif cut not in zeros:
        raise ValueError(f"slot {cut} of tube {i} is covered; cannot cut there")
    intervals = []
    for c in classes:
        start = cut + (c.j1 - cut - 1) % mi + 1  # representative in (cut, cut + m)
        end = start + c.length - 1
        if end >= cut + mi:
            raise ValueError(f"summand {c} wraps past the cut slot {cut}")
        intervals.append((start - cut, end - cut))
    return cut, type_a_module(mi - 1, intervals)


def enumerate_type_a(m: int, d: Sequence[int]) -> list[TypeAModule]:
    """All interval multisets over the linear quiver with coverage ``d``."""
    d = tuple(d)
    if len(d) != m or any(v < 0 for v in d):
        raise ValueError(f"bad dimension vector {d} for m={m}")
    intervals = [(a, b) for a in range(1, m + 1) for b in range(a, m + 1)]
    results: list[TypeAModule] = []

    def walk(idx: int, remaining: tuple[int, ...], acc: tuple[tuple[int, int], ...]):
        if all(v == 0 for v in remaining):
            results.append(TypeAModule(m, acc))
            return
        if idx == len(intervals):
            return
        a, b = intervals[idx]
        if any(remaining[j] for j in range(a - 1)):
            return  # earlier slots can no longer be covered
        cap = min(remaining[j] for j in range(a - 1, b))
        for mult in range(cap + 1):
            if mult:
                remaining = tuple(
                    v - 1 if a - 1 <= j < b else v for j, v in enumerate(remaining)
                )
                acc = acc + ((a, b),)
            walk(idx + 1, remaining, acc)

    walk(0, d, ())
    results.sort(key=lambda mod: mod.intervals)
    return results


def verify_cw_bound(m: int, d: Sequence[int], aprime: Iterable[Sequence[int]]) -> bool:
    """Check the self-Hom lower bound over every module meeting the hypotheses.

    Each supplied interval must be admissible for ``d`` (equal positive
    endpoint values, strictly larger inside).  For every module of dimension
    ``d`` whose Hom from each shifted interval module is nonzero, the
    self-Hom dimension must be at least the Euler square plus the number of
    supplied intervals.
    """
    d = tuple(d)
    chosen = []
    for j1, j2 in aprime:
        if not (1 <= j1 < j2 <= m):
            raise ValueError(f"interval [{j1}, {j2}] out of range")
        if not (d[j1 - 1] == d[j2 - 1] > 0):
            raise ValueError(f"interval [{j1}, {j2}] not admissible for {d}")
        if any(d[j - 1] <= d[j1 - 1] for j in range(j1 + 1, j2)):
            raise ValueError(f"interval [{j1}, {j2}] not admissible for {d}")
        chosen.append((j1, j2))
    bound = euler_type_a(m, d, d) + len(chosen)
    for module in enumerate_type_a(m, d):
        if all(
            sum(hom_type_a(m, (j1 + 1, j2), iv) for iv in module.intervals)
            for j1, j2 in chosen
        ):
            if hom_type_a_modules(module, module) < bound:
                return False
    return True
