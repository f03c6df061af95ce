"""Exhaustive verification campaigns over configurable boxes.

Each campaign checks one family of claims against an independent route
(matrix oracle, honest enumeration, brute force) and reports the number of
instances checked plus any violations found.  The CLI's verify verbs and the
acceptance suite are thin wrappers around these functions.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, product
from typing import Iterable, Iterator, Optional

from .core import (
    CanonicalType,
    DimVector,
    PreconditionError,
    VerificationError,
    canonical_type,
    e_vector,
    euler_form,
    h_vector,
    homogeneous_multiplicity,
    in_R,
    unflatten,
)
from .candecomp import ad, admissible_intervals, canonical_decomposition, inside_multiplicity
from .tubes import (
    TubeClass,
    enumerate_type_a,
    ext1_tube,
    euler_type_a,
    hom_regular,
    hom_tube,
    hom_type_a,
    hom_type_a_modules,
    regular_part,
    tau,
    tube_class,
    tube_dim_vector,
)
from .matrixrep import build_tube_module, direct_sum, hom_space_dim
from .strata import (
    _C3Engine,
    enumerate_strata,
    generator_count,
    min_quantity_c3,
    reduce_q,
    reduce_to_c3,
    _x_multiplicity,
)


@dataclass(frozen=True)
class CampaignReport:
    name: str
    checked: int
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def _worker_count(jobs: Optional[int]) -> int:
    cap = os.environ.get("CANTUBE_THREADS")
    limit = int(cap) if cap else os.cpu_count() or 1
    if jobs is None:
        jobs = limit
    return max(1, min(jobs, limit))


# ---------------------------------------------------------------------------
# dimension-vector boxes


def iter_regular_vectors(
    t: CanonicalType,
    coord_bound: Optional[int] = None,
    p_min: int = 0,
    p_max: Optional[int] = None,
    tube_bound: Optional[int] = None,
) -> Iterator[DimVector]:
    """Regular vectors of a box, in a deterministic order.

    With ``tube_bound`` the box is given in canonical form (homogeneous
    multiplicity in ``[p_min, p_max]``, tube-part table entries up to the
    bound, one zero per arm), which hits every regular vector exactly once.
    Otherwise all coordinates are bounded and regularity is filtered.
    """
    if tube_bound is not None:
        if p_max is None:
            raise ValueError("a canonical-form box needs an explicit p range")
        base = h_vector(t)
        arm_profiles = []
        for mi in t.m:
            rows = [
                row
                for row in product(range(tube_bound + 1), repeat=mi)
                if min(row) == 0
            ]
            arm_profiles.append(rows)
        for p in range(p_min, p_max + 1):
            for table in product(*arm_profiles):
                d = p * base
                for i, row in enumerate(table, start=1):
                    for j, mult in enumerate(row):
                        if mult:
                            d = d + mult * e_vector(t, i, j)
                if coord_bound is not None and max(d.flatten()) > coord_bound:
                    continue
                yield d
        return
    if coord_bound is None:
        raise ValueError("need a coordinate bound or a canonical-form box")
    interior = sum(mi - 1 for mi in t.m)
    for d0 in range(coord_bound + 1):
        for rest in product(range(coord_bound + 1), repeat=interior):
            d = unflatten(t, (d0, d0) + rest)
            if not in_R(t, d):
                continue
            p = homogeneous_multiplicity(t, d)
            if p < p_min or (p_max is not None and p > p_max):
                continue
            yield d


# ---------------------------------------------------------------------------
# oracle equivalence (combinatorial Hom rule vs matrix elimination)


def _classes_up_to(t: CanonicalType, length_factor: int) -> list[TubeClass]:
    out = []
    for i, mi in enumerate(t.m, start=1):
        for s in range(mi):
            for length in range(1, length_factor * mi + 1):
                out.append(TubeClass(i, s, s + length - 1))
    return out


def oracle_hom_check(t: CanonicalType, length_factor: int = 2) -> CampaignReport:
    """Hom rule against the intertwiner oracle on every pair of classes,
    plus the Euler-form and shift-formula consistency of Ext."""
    classes = _classes_up_to(t, length_factor)
    built = {c: build_tube_module(t, c) for c in classes}
    violations = []
    checked = 0
    for a in classes:
        for b in classes:
            rule = hom_tube(t, a, b)
            oracle = hom_space_dim(built[a], built[b])
            checked += 1
            if rule != oracle:
                violations.append(f"hom rule {a}->{b}: rule {rule}, oracle {oracle}")
            ar = hom_tube(t, b, tau(t, a))
            if ext1_tube(t, a, b) != ar:
                violations.append(f"ext route mismatch {a}->{b}")
            euler = euler_form(t, tube_dim_vector(t, a), tube_dim_vector(t, b))
            shifted = built.get(tau(t, a)) or build_tube_module(t, tau(t, a))
            if oracle - hom_space_dim(built[b], shifted) != euler:
                violations.append(f"euler route mismatch {a}->{b}")
    return CampaignReport(f"hom-oracle {t.m}", checked, tuple(violations))


# ---------------------------------------------------------------------------
# inside-multiplicity bound


def adm_bound_check(t: CanonicalType, coord_bound: int) -> CampaignReport:
    violations = []
    checked = 0
    for d in iter_regular_vectors(t, coord_bound=coord_bound):
        dec = canonical_decomposition(t, d)
        for i in range(1, t.n + 1):
            for j in range(t.m[i - 1]):
                checked += 1
                if inside_multiplicity(t, d, i, j) > dec.entry(i, j + 1) + 1:
                    violations.append(f"bound fails at d={d.flatten()}, arm {i}, slot {j}")
    return CampaignReport(f"inside-multiplicity bound {t.m}", checked, tuple(violations))


# ---------------------------------------------------------------------------
# matrix-level duality of the two nonvanishing conditions


def duality_check(
    t: CanonicalType, max_summands: int = 3, length_factor: int = 1
) -> CampaignReport:
    """For sums of built tube modules, Hom from the shifted interval module
    vanishes exactly when Hom into the dropped interval module does."""
    classes = _classes_up_to(t, length_factor)
    built = {c: build_tube_module(t, c) for c in classes}
    violations = []
    checked = 0
    for k in range(max_summands + 1):
        for combo in combinations_with_replacement(classes, k):
            M = direct_sum(t, [built[c] for c in combo])
            d = M.dims
            for arm in admissible_intervals(t, d):
                for cls in arm:
                    up = build_tube_module(
                        t, tube_class(t, cls.i, cls.j1 + 1, cls.j2)
                    )
                    down = build_tube_module(
                        t, tube_class(t, cls.i, cls.j1, cls.j2 - 1)
                    )
                    lhs = hom_space_dim(up, M) != 0
                    rhs = hom_space_dim(M, down) != 0
                    checked += 1
                    if lhs != rhs:
                        violations.append(
                            f"duality fails for {[str(c) for c in combo]} at arm {cls.i} [{cls.j1},{cls.j2}]"
                        )
    return CampaignReport(f"hom duality {t.m}", checked, tuple(violations))


# ---------------------------------------------------------------------------
# crossing-swap identity and the reduction chain claims


def swap_identity_check(m_values: Iterable[int] = (2, 3, 4, 5)) -> CampaignReport:
    """Nested-to-crossing swap raises the self-Hom count by exactly one.

    Exhausts all index windows v1 < l1 <= l2 < v2 with v2 - l2 < m and
    v2 - v1 < 2m on a single tube.
    """
    violations = []
    checked = 0
    for m in m_values:
        t = canonical_type([max(m, 2), 2, 2]) if m >= 2 else None
        for v1 in range(m):
            for l1 in range(v1 + 1, v1 + m):
                for l2 in range(l1, l1 + m):
                    for v2 in range(max(l2 + 1, v1 + 1), l2 + m):
                        if v2 - v1 >= 2 * m:
                            continue
                        nested = regular_part(
                            [tube_class(t, 1, l1, l2), tube_class(t, 1, v1, v2)]
                        )
                        crossed = regular_part(
                            [tube_class(t, 1, v1, l2), tube_class(t, 1, l1, v2)]
                        )
                        checked += 1
                        lhs = hom_regular(t, crossed, crossed)
                        rhs = hom_regular(t, nested, nested) + 1
                        if lhs != rhs:
                            violations.append(
                                f"swap identity fails: m={m}, l=[{l1},{l2}], v=[{v1},{v2}]: {lhs} != {rhs}"
                            )
    return CampaignReport("crossing-swap identity", checked, tuple(violations))


def reduction_check(t: CanonicalType, coord_bound: int = 2) -> CampaignReport:
    """Run both reductions on every admissible stratum of a small box.

    The reduction functions carry their own contracts (level preservation,
    monotone quantity, shrinking support) and raise on violation; this
    campaign also confirms the level minima coincide with the fast engine.
    """
    violations = []
    checked = 0
    for d in iter_regular_vectors(t, coord_bound=coord_bound):
        if homogeneous_multiplicity(t, d) <= 0:
            continue
        reports = enumerate_strata(t, d, "cprime")
        mins = {"cprime": None, "c2": None, "c3": None}
        for rep in reports:
            checked += 1
            for level, flag in (
                ("cprime", True),
                ("c2", rep.in_c2),
                ("c3", rep.in_c3),
            ):
                if flag and (mins[level] is None or rep.quantity < mins[level]):
                    mins[level] = rep.quantity
            try:
                if rep.index.q > 0:
                    reduce_q(t, d, rep.index)
                final, trace = reduce_to_c3(t, d, rep.index)
                if _x_multiplicity(t, final.x) != 0 or final.q != 0:
                    violations.append(f"reduction did not land period-free at {d.flatten()}")
            except VerificationError as err:
                violations.append(f"d={d.flatten()} index={rep.index}: {err}")
        got = min_quantity_c3(t, d)
        fast = got[0] if got else None
        if not (mins["cprime"] == mins["c2"] == mins["c3"] == fast):
            violations.append(
                f"level minima disagree at d={d.flatten()}: {mins} vs engine {fast}"
            )
    return CampaignReport(f"reduction chain {t.m}", checked, tuple(violations))


# ---------------------------------------------------------------------------
# the three arm inequalities over a box


def _margin_args(t: CanonicalType, coord_bound: int, p_max: int) -> list[tuple]:
    return [
        (t.m, [str(l) for l in t.lam], d.flatten())
        for d in iter_regular_vectors(t, coord_bound=coord_bound, p_max=p_max)
    ]


def _margin_worker(args: tuple) -> tuple[int, list[str]]:
    m, lam, flat = args
    t = canonical_type(m, lam)
    d = unflatten(t, flat)
    engine = _C3Engine(t, d)
    checked = 0
    bad: list[str] = []
    for raw in engine.iter_raw():
        rec = engine.margin_record(raw)
        checked += 1
        if rec.margin1 < 0 or rec.margin2 < 0 or rec.margin3 < 0:
            bad.append(
                f"margins ({rec.margin1},{rec.margin2},{rec.margin3}) at d={flat}, index={engine.build_index(raw)}"
            )
    return checked, bad


def margins_check(
    t: CanonicalType, coord_bound: int, p_max: int, jobs: Optional[int] = None
) -> CampaignReport:
    """All three arm inequalities on every period-free stratum of the box."""
    tasks = _margin_args(t, coord_bound, p_max)
    checked = 0
    violations: list[str] = []
    for got, bad in _run_tasks(_margin_worker, tasks, jobs):
        checked += got
        violations.extend(bad)
    return CampaignReport(
        f"arm inequalities {t.m} (coords<={coord_bound}, p<={p_max})",
        checked,
        tuple(violations),
    )


def _run_tasks(worker, tasks: list, jobs: Optional[int]):
    count = _worker_count(jobs)
    if count <= 1 or len(tasks) < 4:
        return [worker(task) for task in tasks]
    import multiprocessing as mp

    with mp.Pool(count) as pool:
        return pool.map(worker, tasks, chunksize=max(1, len(tasks) // (count * 8)))


# ---------------------------------------------------------------------------
# complete-intersection sweep


@dataclass(frozen=True)
class SweepRow:
    d: tuple[int, ...]
    p: int
    ad: int
    s: Optional[int]
    codim: Optional[int]
    verdict: str  # "true" | "false" | "anomaly" | "vacuous" | "inapplicable: ..."

    @property
    def is_counterexample(self) -> bool:
        return self.verdict in ("false", "anomaly")


def _sweep_worker(args: tuple) -> SweepRow:
    m, lam, flat, assume, level = args
    t = canonical_type(m, lam)
    d = unflatten(t, flat)
    p = homogeneous_multiplicity(t, d)
    add = ad(t, d)
    try:
        s = generator_count(t, d, assume_irreducible=assume)
        if level == "cprime":
            reports = enumerate_strata(t, d, "cprime")
            if not reports:
                return SweepRow(flat, p, add, s, None, "vacuous")
            codim = min(rep.quantity for rep in reports)
        else:
            got = min_quantity_c3(t, d)
            if got is None:
                return SweepRow(flat, p, add, s, None, "vacuous")
            codim = got[0]
    except PreconditionError as err:
        return SweepRow(flat, p, add, None, None, f"inapplicable: {err}")
    if codim > s:
        word = "anomaly"
    else:
        word = "true" if codim == s else "false"
    return SweepRow(flat, p, add, s, codim, word)


def ci_sweep(
    t: CanonicalType,
    p_min: int,
    p_max: int,
    tube_bound: int,
    coord_bound: Optional[int] = None,
    assume_irreducible: bool = False,
    jobs: Optional[int] = None,
    level: str = "c3",
) -> list[SweepRow]:
    """One complete-intersection verdict per regular vector of the box.

    ``level='cprime'`` recomputes the codimension by honest enumeration of
    the admissible level (slow; meant for small cross-check boxes).
    """
    if level not in ("c3", "cprime"):
        raise ValueError(f"unsupported sweep level {level!r}")
    tasks = [
        (t.m, [str(l) for l in t.lam], d.flatten(), assume_irreducible, level)
        for d in iter_regular_vectors(
            t,
            coord_bound=coord_bound,
            p_min=p_min,
            p_max=p_max,
            tube_bound=tube_bound,
        )
    ]
    rows = _run_tasks(_sweep_worker, tasks, jobs)
    rows.sort(key=lambda r: r.d)
    return rows


# ---------------------------------------------------------------------------
# type A bound


def type_a_bound_check(m_values: Iterable[int] = (2, 3, 4), coord_bound: int = 3) -> CampaignReport:
    """Self-Hom bound over every module and every admissible subset."""
    violations = []
    checked = 0
    for m in m_values:
        for d in product(range(coord_bound + 1), repeat=m):
            adm = [
                (j1, j2)
                for j1 in range(1, m + 1)
                for j2 in range(j1 + 1, m + 1)
                if d[j1 - 1] == d[j2 - 1] > 0
                and all(d[j - 1] > d[j1 - 1] for j in range(j1 + 1, j2))
            ]
            modules = enumerate_type_a(m, d)
            bound0 = euler_type_a(m, d, d)
            for r in range(len(adm) + 1):
                for chosen in combinations(adm, r):
                    for module in modules:
                        if all(
                            sum(
                                hom_type_a(m, (j1 + 1, j2), iv)
                                for iv in module.intervals
                            )
                            for j1, j2 in chosen
                        ):
                            checked += 1
                            if hom_type_a_modules(module, module) < bound0 + r:
                                violations.append(
                                    f"bound fails: m={m}, d={d}, subset={chosen}, module={module.intervals}"
                                )
    return CampaignReport("linear-quiver self-Hom bound", checked, tuple(violations))
