"""Star-quiver algebra descriptors, dimension vectors, and the Euler form.

The quiver has a source vertex ``0``, a sink vertex ``inf`` and ``n`` arms;
arm ``i`` has ``m_i`` arrows and ``m_i - 1`` interior vertices ``(i, j)``.
All arithmetic is exact (ints and fractions).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

Vertex = Union[str, tuple]  # "0", "inf", or (i, j)


class PreconditionError(ValueError):
    """A mathematical gate failed (operation not applicable to this input)."""


class VerificationError(RuntimeError):
    """A claim the library is supposed to certify failed on a concrete input."""


@dataclass(frozen=True)
class CanonicalType:
    """Algebra descriptor: arm lengths ``m`` and tube parameters ``lam``.

    ``lam[k]`` is the parameter of tube ``k + 3``; tubes 1 and 2 sit at the
    symbolic points 0 and infinity and carry no stored parameter.
    """

    m: tuple[int, ...]
    lam: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.m) < 3:
            raise ValueError(f"need at least 3 arms, got {len(self.m)}")
        if any(mi < 2 for mi in self.m):
            raise ValueError(f"every arm length must be >= 2, got {self.m}")
        if len(self.lam) != len(self.m) - 2:
            raise ValueError(
                f"expected {len(self.m) - 2} tube parameters, got {len(self.lam)}"
            )
        if self.lam[0] != 1:
            raise ValueError("the first tube parameter (tube 3) must be 1")
        if any(l == 0 for l in self.lam):
            raise ValueError("tube parameters must be nonzero")
        if len(set(self.lam)) != len(self.lam):
            raise ValueError(f"tube parameters must be pairwise distinct: {self.lam}")

    @property
    def n(self) -> int:
        return len(self.m)

    @property
    def vertex_count(self) -> int:
        return 2 + sum(mi - 1 for mi in self.m)

    @property
    def arrow_count(self) -> int:
        return sum(self.m)

    @property
    def relation_count(self) -> int:
        return self.n - 2

    def vertices(self) -> list[Vertex]:
        """All vertices in the canonical order: 0, inf, then (i, j) lex."""
        out: list[Vertex] = ["0", "inf"]
        for i, mi in enumerate(self.m, start=1):
            out.extend((i, j) for j in range(1, mi))
        return out

    def tube_parameter(self, i: int) -> Optional[Fraction]:
        """Parameter of tube ``i``; ``None`` for the symbolic tubes 1 and 2."""
        if not 1 <= i <= self.n:
            raise ValueError(f"arm index out of range: {i}")
        if i <= 2:
            return None
        return self.lam[i - 3]


def canonical_type(m: Sequence[int], lam: Optional[Sequence] = None) -> CanonicalType:
    """Build a :class:`CanonicalType`; defaults are ``lam_i = i - 2``."""
    m = tuple(int(x) for x in m)
    if lam is None:
        lam = tuple(Fraction(i - 2) for i in range(3, len(m) + 1))
    else:
        lam = tuple(Fraction(x) for x in lam)
    return CanonicalType(m, lam)


@dataclass(frozen=True)
class DimVector:
    """Integer vector on the star quiver.

    ``arms[i - 1][j - 1]`` is the value at vertex ``(i, j)``.  The accessor
    :meth:`at` applies the boundary convention (index 0 means ``d0``) and
    reduces arm indices periodically.
    """

    d0: int
    dinf: int
    arms: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "_shape", tuple(len(a) + 1 for a in self.arms))

    @property
    def shape(self) -> tuple[int, ...]:
        return self._shape

    def at(self, i: int, j: int) -> int:
        """Value at arm ``i`` slot ``j mod m_i`` (slot 0 is the source value)."""
        arm = self.arms[i - 1]
        j %= len(arm) + 1
        return self.d0 if j == 0 else arm[j - 1]

    def delta(self, i: int, j: int) -> int:
        """Difference ``d_{i,j-1} - d_{i,j}``; ``j`` reduced periodically to [1, m_i]."""
        m = len(self.arms[i - 1]) + 1
        j = (j - 1) % m + 1
        upper = self.dinf if j == m else self.at(i, j)
        return self.at(i, j - 1) - upper

    def flatten(self) -> tuple[int, ...]:
        """Entries in the canonical vertex order (0, inf, arms lex)."""
        out = [self.d0, self.dinf]
        for arm in self.arms:
            out.extend(arm)
        return tuple(out)

    def total(self) -> int:
        return sum(self.flatten())

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.flatten())

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.flatten())

    def leq(self, other: "DimVector") -> bool:
        return all(a <= b for a, b in zip(self.flatten(), other.flatten()))

    def __add__(self, other: "DimVector") -> "DimVector":
        self._check_shape(other)
        return DimVector(
            self.d0 + other.d0,
            self.dinf + other.dinf,
            tuple(
                tuple(a + b for a, b in zip(x, y))
                for x, y in zip(self.arms, other.arms)
            ),
        )

    def __sub__(self, other: "DimVector") -> "DimVector":
        self._check_shape(other)
        return DimVector(
            self.d0 - other.d0,
            self.dinf - other.dinf,
            tuple(
                tuple(a - b for a, b in zip(x, y))
                for x, y in zip(self.arms, other.arms)
            ),
        )

    def __mul__(self, k: int) -> "DimVector":
        return DimVector(
            self.d0 * k,
            self.dinf * k,
            tuple(tuple(a * k for a in arm) for arm in self.arms),
        )

    __rmul__ = __mul__

    def __neg__(self) -> "DimVector":
        return self * -1

    def _check_shape(self, other: "DimVector") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")


def _check_compatible(t: CanonicalType, d: DimVector) -> None:
    if d.shape != t.m:
        raise ValueError(f"vector shape {d.shape} does not match type {t.m}")


def zero_vector(t: CanonicalType) -> DimVector:
    return DimVector(0, 0, tuple(tuple(0 for _ in range(mi - 1)) for mi in t.m))


def h_vector(t: CanonicalType) -> DimVector:
    """The all-ones vector."""
    return DimVector(1, 1, tuple(tuple(1 for _ in range(mi - 1)) for mi in t.m))


def unit_vector(t: CanonicalType, x: Vertex) -> DimVector:
    """Coordinate vector of a single vertex."""
    if x == "0" or x == 0:
        return DimVector(1, 0, tuple(tuple(0 for _ in range(mi - 1)) for mi in t.m))
    if x == "inf":
        return DimVector(0, 1, tuple(tuple(0 for _ in range(mi - 1)) for mi in t.m))
    i, j = x
    if not (1 <= i <= t.n and 1 <= j <= t.m[i - 1] - 1):
        raise ValueError(f"malformed vertex: {x!r}")
    arms = [[0] * (mi - 1) for mi in t.m]
    arms[i - 1][j - 1] = 1
    return DimVector(0, 0, tuple(tuple(a) for a in arms))


def e_vector(t: CanonicalType, i: int, j: int) -> DimVector:
    """Dimension vector of the j-th simple in tube ``i`` (periodic in ``j``).

    Slot 0 is the full-period complement: ``e_{i,0} = h - sum_j e_{i,j}``.
    """
    if not 1 <= i <= t.n:
        raise ValueError(f"malformed arm index: {i}")
    mi = t.m[i - 1]
    j %= mi
    if j != 0:
        return unit_vector(t, (i, j))
    arms = [[1] * (mk - 1) for mk in t.m]
    arms[i - 1] = [0] * (mi - 1)
    return DimVector(1, 1, tuple(tuple(a) for a in arms))


def e_interval(t: CanonicalType, i: int, j1: int, j2: int) -> DimVector:
    """Sum of tube-``i`` simple vectors over the index interval [j1, j2].

    Built directly from the slot-coverage counts of the interval: the count
    at slot 0 lands on both end vertices and on every foreign-arm vertex.
    """
    if j1 > j2:
        raise ValueError(f"empty interval: [{j1}, {j2}]")
    mi = t.m[i - 1]
    count = j2 - j1 + 1
    full, rest = divmod(count, mi)
    start = j1 % mi
    cov = [full + (1 if (r - start) % mi < rest else 0) for r in range(mi)]
    arms = []
    for k, mk in enumerate(t.m, start=1):
        if k == i:
            arms.append(tuple(cov[1:]))
        else:
            arms.append(tuple(cov[0] for _ in range(mk - 1)))
    return DimVector(cov[0], cov[0], tuple(arms))


def delta_invariant(t: CanonicalType) -> Fraction:
    """The weight invariant ``(n - 2 - sum 1/m_i) / 2`` controlling tameness."""
    return Fraction(t.n - 2 - sum(Fraction(1, mi) for mi in t.m), 2)


def is_tame(t: CanonicalType) -> bool:
    return delta_invariant(t) <= 0


def threshold_N(t: CanonicalType) -> Optional[int]:
    """Homogeneous-multiplicity threshold for the complete-intersection
    guarantee on tame types.

    ``n`` for negative weight invariant, ``n + 1`` at the tubular boundary,
    absent for wild types.
    """
    delta = delta_invariant(t)
    if delta < 0:
        return t.n
    if delta == 0:
        return t.n + 1
    return None


def euler_form(t: CanonicalType, a: DimVector, b: DimVector) -> int:
    """Bilinear form: vertices minus arrows plus relations."""
    _check_compatible(t, a)
    _check_compatible(t, b)
    total = sum(x * y for x, y in zip(a.flatten(), b.flatten()))
    for i, mi in enumerate(t.m, start=1):
        for j in range(1, mi + 1):
            src = a.dinf if j == mi else a.at(i, j)
            tgt = b.d0 if j == 1 else b.at(i, j - 1)
            total -= src * tgt
    total += (t.n - 2) * a.dinf * b.d0
    return total


def delta_interval(t: CanonicalType, d: DimVector, i: int, j1: int, j2: int) -> int:
    """Sum of ``delta_{i,j}(d)`` over j in [j1, j2] with periodic reduction."""
    _check_compatible(t, d)
    if j1 > j2:
        raise ValueError(f"empty interval: [{j1}, {j2}]")
    mi = t.m[i - 1]
    count = j2 - j1 + 1
    full, rest = divmod(count, mi)
    # each whole period telescopes to d0 - dinf
    total = full * (d.d0 - d.dinf)
    for j in range(j1, j1 + rest):
        total += d.delta(i, j)
    return total


def homogeneous_multiplicity(t: CanonicalType, d: DimVector) -> int:
    """Coefficient of the all-ones vector in the canonical decomposition."""
    _check_compatible(t, d)
    return sum(
        min(d.at(i, j) for j in range(t.m[i - 1])) for i in range(1, t.n + 1)
    ) - (t.n - 1) * d.d0


@dataclass(frozen=True)
class Classification:
    in_P: bool
    in_R: bool
    in_Q: bool


def classify(t: CanonicalType, d: DimVector) -> Classification:
    """Membership of ``d`` in the preprojective / regular / preinjective cones.

    Regular membership uses: equal end values and nonnegative homogeneous
    multiplicity (such vectors are exactly the dimension vectors of direct
    sums of tube and homogeneous modules).
    """
    _check_compatible(t, d)
    if not d.is_nonnegative():
        raise ValueError(f"negative coordinate in {d.flatten()}")
    if d.is_zero():
        return Classification(True, True, True)
    deltas = [
        d.delta(i, j) for i in range(1, t.n + 1) for j in range(1, t.m[i - 1] + 1)
    ]
    in_p = d.d0 > d.dinf and all(x >= 0 for x in deltas)
    in_q = d.d0 < d.dinf and all(x <= 0 for x in deltas)
    in_r = d.d0 == d.dinf and homogeneous_multiplicity(t, d) >= 0
    return Classification(in_p, in_r, in_q)


def in_P(t: CanonicalType, d: DimVector) -> bool:
    return classify(t, d).in_P


def in_R(t: CanonicalType, d: DimVector) -> bool:
    return classify(t, d).in_R


def in_Q(t: CanonicalType, d: DimVector) -> bool:
    return classify(t, d).in_Q


def a_dim(t: CanonicalType, d: DimVector) -> int:
    """Expected dimension of the module variety: dim GL(d) - <d, d>.

    Also evaluates the arrow-space count minus relation count and insists
    the two formulas agree.
    """
    _check_compatible(t, d)
    if not d.is_nonnegative():
        raise ValueError(f"negative coordinate in {d.flatten()}")
    gl = sum(x * x for x in d.flatten())
    value = gl - euler_form(t, d, d)
    arrow_space = 0
    for i, mi in enumerate(t.m, start=1):
        for j in range(1, mi + 1):
            src = d.dinf if j == mi else d.at(i, j)
            tgt = d.d0 if j == 1 else d.at(i, j - 1)
            arrow_space += src * tgt
    alt = arrow_space - (t.n - 2) * d.dinf * d.d0
    if value != alt:
        raise VerificationError(
            f"dimension formulas disagree: {value} vs {alt} on {d.flatten()}"
        )
    return value


def unflatten(t: CanonicalType, flat: Sequence[int]) -> DimVector:
    arms = []
    pos = 2
    for mi in t.m:
        arms.append(tuple(flat[pos : pos + mi - 1]))
        pos += mi - 1
    return DimVector(flat[0], flat[1], tuple(arms))
