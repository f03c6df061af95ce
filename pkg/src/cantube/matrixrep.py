"""Concrete matrix realizations of modules and the exact Hom oracle.

Everything here is ground truth for the combinatorial tube calculus: modules
are tuples of exact-rational matrices satisfying the parallel-path relations,
and Hom dimensions come from eliminating the intertwiner system.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .core import (
    CanonicalType,
    DimVector,
    PreconditionError,
    _check_compatible,
    in_R,
    homogeneous_multiplicity,
    unflatten,
)
from .candecomp import all_classes
from .tubes import TubeClass, tube_class, tube_dim_vector


@dataclass(frozen=True)
class Mat:
    rows: int
    cols: int
    data: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValueError("matrix data does not match declared shape")

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.data for v in row)


def mat_from_rows(rows: Sequence[Sequence], ncols: Optional[int] = None) -> Mat:
    data = tuple(tuple(Fraction(v) for v in row) for row in rows)
    cols = len(data[0]) if data else (ncols or 0)
    return Mat(len(data), cols, data)


def mat_zeros(r: int, c: int) -> Mat:
    return Mat(r, c, tuple(tuple(Fraction(0) for _ in range(c)) for _ in range(r)))


def mat_identity(k: int) -> Mat:
    return Mat(
        k,
        k,
        tuple(
            tuple(Fraction(1 if i == j else 0) for j in range(k)) for i in range(k)
        ),
    )


def mat_mul(a: Mat, b: Mat) -> Mat:
    if a.cols != b.rows:
        raise ValueError(f"shape mismatch: {a.rows}x{a.cols} times {b.rows}x{b.cols}")
    data = tuple(
        tuple(
            sum((a.data[i][k] * b.data[k][j] for k in range(a.cols)), Fraction(0))
            for j in range(b.cols)
        )
        for i in range(a.rows)
    )
    return Mat(a.rows, b.cols, data)


def mat_add(a: Mat, b: Mat, coef: Fraction = Fraction(1)) -> Mat:
    if (a.rows, a.cols) != (b.rows, b.cols):
        raise ValueError("shape mismatch in addition")
    return Mat(
        a.rows,
        a.cols,
        tuple(
            tuple(x + coef * y for x, y in zip(ra, rb))
            for ra, rb in zip(a.data, b.data)
        ),
    )


def mat_block_diag(blocks: Sequence[Mat]) -> Mat:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    data = [[Fraction(0)] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                data[r0 + i][c0 + j] = b.data[i][j]
        r0 += b.rows
        c0 += b.cols
    return Mat(rows, cols, tuple(tuple(row) for row in data))


# ---------------------------------------------------------------------------
# quiver bookkeeping


def arrow_names(t: CanonicalType) -> list[tuple[str, int, int]]:
    """All arrows as (name, arm, position); position m_i starts at the sink."""
    return [
        (f"a_{i}_{j}", i, j)
        for i in range(1, t.n + 1)
        for j in range(1, t.m[i - 1] + 1)
    ]


def vertex_label(i: int, j: int, m: int) -> str:
    if j == 0:
        return "0"
    if j == m:
        return "inf"
    return f"{i}_{j}"


def _dim_at(d: DimVector, i: int, j: int, m: int) -> int:
    if j == 0:
        return d.d0
    if j == m:
        return d.dinf
    return d.arms[i - 1][j - 1]


@dataclass(frozen=True)
class MatrixModule:
    """A point of the module variety: one exact matrix per arrow."""

    t: CanonicalType
    dims: DimVector
    mats: tuple[tuple[str, Mat], ...]

    def maps(self) -> dict[str, Mat]:
        return dict(self.mats)

    def mat(self, name: str) -> Mat:
        for key, m in self.mats:
            if key == name:
                return m
        raise KeyError(name)

    def total_dim(self) -> int:
        return self.dims.total()


def _make_module(t: CanonicalType, dims: DimVector, maps: dict[str, Mat]) -> MatrixModule:
    _check_compatible(t, dims)
    for name, i, j in arrow_names(t):
        m = t.m[i - 1]
        want = (_dim_at(dims, i, j - 1, m), _dim_at(dims, i, j, m))
        got = maps[name]
        if (got.rows, got.cols) != want:
            raise ValueError(f"arrow {name}: expected shape {want}, got {(got.rows, got.cols)}")
    return MatrixModule(t, dims, tuple(sorted(maps.items())))


def zero_maps_module(t: CanonicalType, dims: DimVector) -> MatrixModule:
    """The semisimple point: every arrow acts by zero."""
    maps = {}
    for name, i, j in arrow_names(t):
        m = t.m[i - 1]
        maps[name] = mat_zeros(_dim_at(dims, i, j - 1, m), _dim_at(dims, i, j, m))
    return _make_module(t, dims, maps)


def _tube_scalars(t: CanonicalType, i: int) -> dict[int, tuple[Fraction, Fraction]]:
    """Per foreign arm k, coefficients (c, s) of the composite c*I + s*N.

    The tube arm's own composite is the nilpotent level shift; these scalars
    make every parallel-path relation vanish identically.
    """
    one, zero = Fraction(1), Fraction(0)
    out: dict[int, tuple[Fraction, Fraction]] = {}
    if i == 1:
        out[2] = (-one, zero)
        for k in range(3, t.n + 1):
            out[k] = (-t.lam[k - 3], one)
    elif i == 2:
        out[1] = (one, zero)
        for k in range(3, t.n + 1):
            out[k] = (one, t.lam[k - 3])
    else:
        lam_i = t.lam[i - 3]
        out[1] = (lam_i, one)
        out[2] = (-one, zero)
        for k in range(3, t.n + 1):
            if k != i:
                out[k] = (lam_i - t.lam[k - 3], one)
    return out


def build_tube_module(t: CanonicalType, c: TubeClass) -> MatrixModule:
    """Uniserial chain with levels ``j1..j2``; level ``l`` sits at slot ``l mod m``.

    Arm arrows move a level down by one (killing the socle level); foreign
    arms are constant with the whole composite on their first arrow.
    """
    i, m = c.i, t.m[c.i - 1]
    levels = list(range(c.j1, c.j2 + 1))
    by_slot = [[l for l in levels if l % m == r] for r in range(m)]
    lev0 = by_slot[0]
    k0 = len(lev0)

    dims = tube_dim_vector(t, c)
    one, zero = Fraction(1), Fraction(0)

    def step(src: list[int], tgt: list[int]) -> Mat:
        data = tuple(
            tuple(one if tv == sv - 1 else zero for sv in src) for tv in tgt
        )
        return Mat(len(tgt), len(src), data)

    nil = Mat(
        k0,
        k0,
        tuple(
            tuple(one if tv == sv - m else zero for sv in lev0) for tv in lev0
        ),
    )
    scalars = _tube_scalars(t, i)

    maps: dict[str, Mat] = {}
    for name, k, j in arrow_names(t):
        mk = t.m[k - 1]
        if k == i:
            src = by_slot[j % m]
            tgt = by_slot[(j - 1) % m]
            maps[name] = step(src, tgt)
        elif j == 1:
            cs, ss = scalars[k]
            comp = mat_add(
                Mat(k0, k0, tuple(tuple(cs if a == b else zero for b in range(k0)) for a in range(k0))),
                nil,
                coef=ss,
            )
            maps[name] = comp
        else:
            maps[name] = mat_identity(k0)
    return _make_module(t, dims, maps)


def build_homogeneous(t: CanonicalType, mu) -> MatrixModule:
    """Simple module of the tube at parameter ``mu``: all-ones dimensions,
    identity maps, and the scalar composite on each arm's first arrow."""
    mu = Fraction(mu)
    if mu == 0 or mu in t.lam:
        raise ValueError(f"parameter {mu} collides with an exceptional tube")
    from .core import h_vector

    comps = {1: mu, 2: Fraction(-1)}
    for k in range(3, t.n + 1):
        comps[k] = mu - t.lam[k - 3]
    maps = {}
    for name, k, j in arrow_names(t):
        maps[name] = Mat(1, 1, ((comps[k] if j == 1 else Fraction(1),),))
    return _make_module(t, h_vector(t), maps)


def direct_sum(t: CanonicalType, ms: Sequence[MatrixModule]) -> MatrixModule:
    """Block-diagonal sum; the empty sum is the zero module."""
    from .core import zero_vector

    dims = zero_vector(t)
    for m in ms:
        if m.t != t:
            raise ValueError("direct sum across different algebras")
        dims = dims + m.dims
    maps = {}
    for name, _, _ in arrow_names(t):
        maps[name] = mat_block_diag([m.mat(name) for m in ms]) if ms else mat_zeros(0, 0)
    if not ms:
        # fix up the shapes of the empty sum
        for name, i, j in arrow_names(t):
            mi = t.m[i - 1]
            maps[name] = mat_zeros(_dim_at(dims, i, j - 1, mi), _dim_at(dims, i, j, mi))
    return _make_module(t, dims, maps)


def arm_composite(M: MatrixModule, i: int) -> Mat:
    """Product of the arm-``i`` maps, from the sink space to the source space."""
    m = M.t.m[i - 1]
    out = M.mat(f"a_{i}_1")
    for j in range(2, m + 1):
        out = mat_mul(out, M.mat(f"a_{i}_{j}"))
    return out


def validate_module(M: MatrixModule) -> tuple[tuple[int, Mat], ...]:
    """Exact residual of each parallel-path relation; all zero means valid."""
    comps = {i: arm_composite(M, i) for i in range(1, M.t.n + 1)}
    out = []
    for k in range(3, M.t.n + 1):
        res = mat_add(mat_add(comps[1], comps[2], coef=M.t.lam[k - 3]), comps[k], coef=Fraction(-1))
        out.append((k, res))
    return tuple(out)


def is_valid_module(M: MatrixModule) -> bool:
    return all(res.is_zero() for _, res in validate_module(M))


# ---------------------------------------------------------------------------
# exact rank / Hom-space dimension


def _int_rank(rows: list[list[int]], ncols: int) -> int:
    rows = [r for r in rows if any(r)]
    rank = 0
    col = 0
    while rows and col < ncols:
        piv_idx = next((k for k, r in enumerate(rows) if r[col]), None)
        if piv_idx is None:
            col += 1
            continue
        piv = rows.pop(piv_idx)
        p = piv[col]
        nxt = []
        for r in rows:
            v = r[col]
            if v:
                nr = [p * a - v * b for a, b in zip(r, piv)]
                g = 0
                for x in nr:
                    g = gcd(g, x)
                if g > 1:
                    nr = [x // g for x in nr]
                if any(nr):
                    nxt.append(nr)
            else:
                nxt.append(r)
        rows = nxt
        rank += 1
        col += 1
    return rank


def hom_space_dim(M: MatrixModule, N: MatrixModule) -> int:
    """Dimension of the space of intertwiners from ``M`` to ``N``.

    One unknown block per vertex; one linear equation block per arrow; the
    answer is unknowns minus the exact rank of the system.
    """
    if M.t != N.t:
        raise ValueError("modules over different algebras")
    t = M.t
    offsets: dict[str, int] = {}
    nvars = 0
    sizes: dict[str, tuple[int, int]] = {}
    for i in range(1, t.n + 1):
        m = t.m[i - 1]
        for j in range(m + 1):
            label = vertex_label(i, j, m)
            if label in sizes:
                continue
            dm, dn = _dim_at(M.dims, i, j, m), _dim_at(N.dims, i, j, m)
            sizes[label] = (dm, dn)
            if dm and dn:
                offsets[label] = nvars
                nvars += dm * dn
    rows: list[list[int]] = []
    for name, i, j in arrow_names(t):
        m = t.m[i - 1]
        src = vertex_label(i, j, m)
        tgt = vertex_label(i, j - 1, m)
        a = M.mat(name)  # dM_tgt x dM_src
        b = N.mat(name)  # dN_tgt x dN_src
        dm_s, dn_s = sizes[src]
        dm_t, dn_t = sizes[tgt]
        for r in range(dn_t):
            for c in range(dm_s):
                coeffs: dict[int, Fraction] = {}
                if dm_t and dn_t:
                    base = offsets[tgt] + r * dm_t
                    for k in range(dm_t):
                        v = a.data[k][c]
                        if v:
                            coeffs[base + k] = coeffs.get(base + k, Fraction(0)) + v
                if dm_s and dn_s:
                    base = offsets[src]
                    for k in range(dn_s):
                        v = b.data[r][k]
                        if v:
                            idx = base + k * dm_s + c
                            coeffs[idx] = coeffs.get(idx, Fraction(0)) - v
                if coeffs:
                    denom = 1
                    for v in coeffs.values():
                        denom = denom * v.denominator // gcd(denom, v.denominator)
                    row = [0] * nvars
                    for idx, v in coeffs.items():
                        row[idx] = int(v * denom)
                    rows.append(row)
    return nvars - _int_rank(rows, nvars)


def orbit_dim(M: MatrixModule) -> int:
    """Dimension of the isomorphism-class orbit: dim GL(d) minus self-Homs."""
    gl = sum(x * x for x in M.dims.flatten())
    return gl - hom_space_dim(M, M)


@dataclass(frozen=True)
class ZMembership:
    value: bool
    generic_hom: int
    interval_homs: tuple[tuple[int, int, int, int], ...]  # (arm, j1, j2, hom)
    failures: tuple[str, ...]


def z_membership(M: MatrixModule) -> ZMembership:
    """Common-zero-set membership test for a concrete module.

    Interval condition: nonzero Hom from the shifted interval module of every
    admissible class.  Generic condition: the Hom system from the parameter
    family of homogeneous simples is affine in the parameter, so its generic
    solution dimension is the minimum over total-dimension-plus-one distinct
    sample parameters off the exceptional points.
    """
    t, d = M.t, M.dims
    if not in_R(t, d):
        raise PreconditionError(f"dimension vector {d.flatten()} is not regular")
    if homogeneous_multiplicity(t, d) <= 0:
        raise PreconditionError("zero-set description needs positive homogeneous multiplicity")
    failures = []
    interval_homs = []
    for cls in all_classes(t, d):
        probe = build_tube_module(t, tube_class(t, cls.i, cls.j1 + 1, cls.j2))
        h = hom_space_dim(probe, M)
        interval_homs.append((cls.i, cls.j1, cls.j2, h))
        if h == 0:
            failures.append(f"interval condition fails on arm {cls.i} class [{cls.j1},{cls.j2}]")
    count = M.total_dim() + 1
    samples: list[Fraction] = []
    v = 2
    banned = set(t.lam) | {Fraction(0)}
    while len(samples) < count:
        if Fraction(v) not in banned:
            samples.append(Fraction(v))
        v += 1
    generic = min(hom_space_dim(build_homogeneous(t, mu), M) for mu in samples)
    if generic == 0:
        failures.append("generic homogeneous simple has no Hom into the module")
    return ZMembership(not failures, generic, tuple(interval_homs), tuple(failures))


# ---------------------------------------------------------------------------
# module file documents


def _frac_to_doc(v: Fraction):
    return int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def module_to_doc(M: MatrixModule) -> dict:
    t = M.t
    dims = {}
    for i in range(1, t.n + 1):
        m = t.m[i - 1]
        for j in range(m + 1):
            dims[vertex_label(i, j, m)] = _dim_at(M.dims, i, j, m)
    matrices = {
        name: [_frac_to_doc(v) for row in mat.data for v in row]
        for name, mat in M.mats
    }
    return {
        "type": {"m": list(t.m), "lambda": [_frac_to_doc(l) for l in t.lam]},
        "dims": dims,
        "matrices": matrices,
    }


def module_from_doc(doc: dict) -> MatrixModule:
    from .core import canonical_type

    t = canonical_type(doc["type"]["m"], doc["type"].get("lambda"))
    dims_map = doc["dims"]
    flat = [int(dims_map["0"]), int(dims_map["inf"])]
    for i, mi in enumerate(t.m, start=1):
        flat.extend(int(dims_map[f"{i}_{j}"]) for j in range(1, mi))
    dims = unflatten(t, flat)
    maps = {}
    for name, i, j in arrow_names(t):
        m = t.m[i - 1]
        r, c = _dim_at(dims, i, j - 1, m), _dim_at(dims, i, j, m)
        raw = doc["matrices"][name]
        if len(raw) != r * c:
            raise ValueError(f"arrow {name}: expected {r * c} entries, got {len(raw)}")
        vals = [Fraction(v) for v in raw]
        maps[name] = Mat(r, c, tuple(tuple(vals[k * c : (k + 1) * c]) for k in range(r)))
    return _make_module(t, dims, maps)
