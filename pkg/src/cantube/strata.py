"""Stratification of the module variety and the complete-intersection check.

A stratum index is a quadruple (preprojective part, preinjective part,
exceptional regular part, homogeneous multiplicity).  The codimension of the
common zero set of the nonconstant semi-invariants is the minimum of the
stratum "quantity" over the admissible level; the reductions implemented
here push any admissible index down to the period-free level without
increasing the quantity, which is what makes the fast minimizer exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional

from .core import (
    CanonicalType,
    DimVector,
    PreconditionError,
    VerificationError,
    a_dim,
    classify,
    delta_interval,
    e_interval,
    euler_form,
    h_vector,
    homogeneous_multiplicity,
    in_R,
    is_tame,
    zero_vector,
)
from .candecomp import ad, admissible_intervals, all_classes
from .tubes import (
    RegularPart,
    TubeClass,
    _cyclic_multisets,
    enumerate_regular,
    hom_regular,
    hom_tube,
    regular_part,
    tube_class,
    tube_coverage,
    tube_dim_vector,
)


@dataclass(frozen=True)
class StratumIndex:
    dp: DimVector
    dq: DimVector
    x: RegularPart
    q: int

    def key(self):
        return (self.dp.flatten(), self.dq.flatten(), self.x.key(), self.q)


@dataclass(frozen=True)
class ConditionTrace:
    arm: int
    j1: int
    j2: int
    delta_dp: int
    hom_x: int

    @property
    def satisfied_by(self) -> Optional[str]:
        if self.delta_dp > 0:
            return "delta"
        if self.hom_x != 0:
            return "hom"
        return None


@dataclass(frozen=True)
class StratumReport:
    index: StratumIndex
    dim: int
    quantity: int
    in_c: bool
    in_c_prime: bool
    in_c2: bool
    in_c3: bool


@dataclass(frozen=True)
class ZReport:
    empty: bool
    dim_z: Optional[int]
    codim: Optional[int]
    witness: Optional[StratumIndex]


@dataclass(frozen=True)
class CiVerdict:
    s: int
    codim: Optional[int]
    min_quantity: Optional[int]
    witness: Optional[StratumIndex]
    verdict: bool
    anomaly: bool
    vacuous: bool


@dataclass(frozen=True)
class MarginsReport:
    ad1: int
    ad2: int
    ad3: int
    margin1: int
    margin2: int
    margin3: int
    corollary_margin: int
    quantity: int


def check_index(t: CanonicalType, d: DimVector, s: StratumIndex) -> None:
    """Reject indices whose parts do not classify or do not sum to ``d``."""
    if s.q < 0:
        raise ValueError(f"negative homogeneous multiplicity {s.q}")
    cp = classify(t, s.dp)
    cq = classify(t, s.dq)
    if not cp.in_P:
        raise ValueError(f"first part {s.dp.flatten()} is not preprojective")
    if not cq.in_Q:
        raise ValueError(f"second part {s.dq.flatten()} is not preinjective")
    total = s.dp + s.dq + tube_dim_vector(t, s.x) + s.q * h_vector(t)
    if total != d:
        raise ValueError(
            f"inconsistent stratum index: parts sum to {total.flatten()}, not {d.flatten()}"
        )


def stratum_quantity(t: CanonicalType, d: DimVector, s: StratumIndex) -> int:
    """Self-Homs of the exceptional part minus the cross Euler pairing.

    Equals the codimension of the stratum inside the module variety.
    """
    check_index(t, d, s)
    return hom_regular(t, s.x, s.x) - euler_form(t, d - s.dp, d - s.dq)


def stratum_dim(t: CanonicalType, d: DimVector, s: StratumIndex) -> int:
    check_index(t, d, s)
    return a_dim(t, d) + euler_form(t, d - s.dp, d - s.dq) - hom_regular(t, s.x, s.x)


def in_c_prime(
    t: CanonicalType, d: DimVector, s: StratumIndex
) -> tuple[bool, tuple[ConditionTrace, ...]]:
    """Whether the stratum meets the zero set, with a per-interval trace.

    Needs a nonzero preprojective part and, for every admissible class,
    either a positive interval drop of that part or a nonzero Hom from the
    exceptional part onto the class's shifted-down interval module.
    """
    check_index(t, d, s)
    trace = []
    ok = not s.dp.is_zero()
    for cls in all_classes(t, d):
        dlt = delta_interval(t, s.dp, cls.i, cls.j1 + 1, cls.j2)
        target = tube_class(t, cls.i, cls.j1, cls.j2 - 1)
        hom = sum(hom_tube(t, c, target) for c in s.x)
        trace.append(ConditionTrace(cls.i, cls.j1, cls.j2, dlt, hom))
        if dlt <= 0 and hom == 0:
            ok = False
    return ok, tuple(trace)


def _x_multiplicity(t: CanonicalType, x: RegularPart) -> int:
    """Homogeneous multiplicity of the exceptional part's dimension vector."""
    return sum(min(tube_coverage(t, x.classes, i)) for i in range(1, t.n + 1))


def build_report(t: CanonicalType, d: DimVector, s: StratumIndex) -> StratumReport:
    quantity = stratum_quantity(t, d, s)
    prime, _ = in_c_prime(t, d, s)
    c2 = prime and s.q == 0
    c3 = c2 and _x_multiplicity(t, s.x) == 0
    return StratumReport(s, a_dim(t, d) - quantity, quantity, True, prime, c2, c3)


# ---------------------------------------------------------------------------
# structural generators for preprojective / preinjective vectors


@lru_cache(maxsize=None)
def _monotone_chains(
    top: int, bottom: int, caps: tuple[int, ...], decreasing: bool
) -> tuple[tuple[int, ...], ...]:
    """Interior chains between two end values, within per-slot caps."""
    if not caps:
        return ((),)
    out = []

    def walk(pos: int, prev: int, acc: tuple[int, ...]):
        if pos == len(caps):
            if (prev >= bottom) if decreasing else (prev <= bottom):
                out.append(acc)
            return
        lo, hi = (bottom, min(prev, caps[pos])) if decreasing else (prev, min(bottom, caps[pos]))
        for v in range(lo, hi + 1):
            walk(pos + 1, v, acc + (v,))

    walk(0, top, ())
    return tuple(out)


def p_vectors_within(t: CanonicalType, cap: DimVector) -> Iterator[DimVector]:
    """All preprojective vectors below ``cap``, zero first, then by end values."""
    from itertools import product as iproduct

    yield zero_vector(t)
    for v0 in range(1, cap.d0 + 1):
        for vinf in range(0, min(v0 - 1, cap.dinf) + 1):
            chain_lists = [
                _monotone_chains(v0, vinf, cap.arms[i], True) for i in range(t.n)
            ]
            for arms in iproduct(*chain_lists):
                yield DimVector(v0, vinf, arms)


def q_vectors_with_defect(
    t: CanonicalType, cap: DimVector, defect: int
) -> Iterator[DimVector]:
    """Preinjective vectors below ``cap`` with prescribed sink-minus-source gap."""
    from itertools import product as iproduct

    if defect == 0:
        yield zero_vector(t)
        return
    if defect < 0:
        return
    for v0 in range(0, cap.d0 + 1):
        vinf = v0 + defect
        if vinf > cap.dinf:
            break
        chain_lists = [
            _monotone_chains(v0, vinf, cap.arms[i], False) for i in range(t.n)
        ]
        for arms in iproduct(*chain_lists):
            yield DimVector(v0, vinf, arms)


LEVELS = ("c", "cprime", "c2", "c3")


def enumerate_strata(
    t: CanonicalType, d: DimVector, level: str = "c"
) -> list[StratumReport]:
    """Every stratum index at the requested level, in canonical order.

    Direct nested enumeration; fine for small vectors.  The level names
    nest: ``c`` (all), ``cprime`` (meets the zero set), ``c2`` (and no
    homogeneous part), ``c3`` (and period-free exceptional part).
    """
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}; expected one of {LEVELS}")
    if not in_R(t, d):
        raise PreconditionError(f"{d.flatten()} is not a regular dimension vector")
    if level != "c" and homogeneous_multiplicity(t, d) <= 0:
        raise PreconditionError(
            "zero-set levels need positive homogeneous multiplicity"
        )
    h = h_vector(t)
    out = []
    for dp in p_vectors_within(t, d):
        rem1 = d - dp
        for dq in q_vectors_with_defect(t, rem1, dp.d0 - dp.dinf):
            r = rem1 - dq
            if not r.is_nonnegative():
                continue
            for q in range(min(r.flatten()) + 1):
                rr = r - q * h
                for x in enumerate_regular(t, rr):
                    report = build_report(t, d, StratumIndex(dp, dq, x, q))
                    if level == "cprime" and not report.in_c_prime:
                        continue
                    if level == "c2" and not report.in_c2:
                        continue
                    if level == "c3" and not report.in_c3:
                        continue
                    out.append(report)
    out.sort(key=lambda rep: rep.index.key())
    return out


# ---------------------------------------------------------------------------
# fast period-free-level engine
#
# The quantity splits, for fixed end values of the three parts, into one
# term per arm plus a scalar term; arms only interact through how the
# exceptional part's source dimension is distributed over the tubes.  The
# engine enumerates arm configurations independently and joins them.


@lru_cache(maxsize=None)
def _pair_hom(m: int, s1: int, l1: int, s2: int, l2: int) -> int:
    j2 = s1 + l1 - 1
    t2 = s2 + l2 - 1
    count = 0
    lo = -((s2 - s1) // m)
    hi = (j2 - s2) // m
    for u in range(lo, hi + 1):
        if j2 <= t2 + u * m:
            count += 1
    return count


@lru_cache(maxsize=None)
def _mset_self_hom(m: int, mset: tuple[tuple[int, int], ...]) -> int:
    return sum(
        _pair_hom(m, s1, l1, s2, l2) for s1, l1 in mset for s2, l2 in mset
    )


def _mset_hom_to(m: int, mset: tuple[tuple[int, int], ...], target: tuple[int, int]) -> int:
    s2, l2 = target
    return sum(_pair_hom(m, s1, l1, s2, l2) for s1, l1 in mset)


def _t_form(m: int, a_full, b_full) -> int:
    """Arm part of the Euler form: on-vertex products minus arrow products."""
    return sum(a_full[j] * b_full[j] for j in range(1, m)) - sum(
        a_full[j] * b_full[j - 1] for j in range(1, m + 1)
    )


class _C3Engine:
    """Per-vector engine for the period-free level.

    For fixed end values of the three parts, the quantity and all margin
    components split into one piece per arm; arm pieces are enumerated and
    cached independently and joined over the distribution of the exceptional
    part's source dimension.  Each arm option carries:

        (quantity term, interior chain, multiset,
         T(d, dp), T(dq, x), T(x, x), T(dp, dp), self-Homs, ad1, ad2, ad3)
    """

    def __init__(self, t: CanonicalType, d: DimVector):
        if not in_R(t, d):
            raise PreconditionError(f"{d.flatten()} is not a regular dimension vector")
        self.t = t
        self.d = d
        self.p = homogeneous_multiplicity(t, d)
        self.classes = admissible_intervals(t, d)
        self._memo: dict[tuple, tuple] = {}

    def _arm_options(self, i: int, u0: int, uinf: int, a: int, ebar: int):
        key = (i, u0, uinf, a, ebar)
        got = self._memo.get(key)
        if got is not None:
            return got
        t, d = self.t, self.d
        m = t.m[i - 1]
        caps = d.arms[i - 1]
        d_arm = (d.d0,) + caps + (d.dinf,)
        w0 = d.d0 - u0 - a - ebar
        winf = d.dinf - uinf - a - ebar
        options = []
        if w0 >= 0 and winf >= w0:
            # hom-condition target of class [j1, j2] is the tube class [j1, j2 - 1]
            arm_classes = self.classes[i - 1]
            for chain in _monotone_chains(u0, uinf, caps, True):
                u_full = (u0,) + chain + (uinf,)
                unsat = []
                ad1 = 0
                for cls in arm_classes:
                    full, rest = divmod(cls.length, m)
                    dlt = full * (u0 - uinf)
                    for j in range(cls.j1 + 1, cls.j1 + 1 + rest):
                        jr = (j - 1) % m + 1
                        dlt += u_full[jr - 1] - u_full[jr]
                    if dlt == 0:
                        unsat.append(cls)
                    else:
                        ad1 += 1
                for cov_int in self._coverage_profiles(d_arm, u_full, ebar, w0, winf):
                    full_cov = (a,) + cov_int
                    if min(full_cov) != 0:
                        continue
                    x_full = tuple(full_cov[j % m] + ebar for j in range(m + 1))
                    w_full = tuple(
                        d_arm[j] - u_full[j] - x_full[j] for j in range(m + 1)
                    )
                    ad2 = ad3 = 0
                    hom_targets = []
                    for cls in unsat:
                        full, rest = divmod(cls.length, m)
                        dw = full * (w0 - winf)
                        for j in range(cls.j1 + 1, cls.j1 + 1 + rest):
                            jr = (j - 1) % m + 1
                            dw += w_full[jr - 1] - w_full[jr]
                        if dw < 0:
                            ad2 += 1
                        else:
                            ad3 += 1
                        hom_targets.append((cls.j1, cls.length))
                    t_d_dp = _t_form(m, d_arm, u_full)
                    t_dq_x = _t_form(m, w_full, x_full)
                    t_x_x = _t_form(m, x_full, x_full)
                    t_dp_dp = _t_form(m, u_full, u_full)
                    a_q = tuple(d_arm[j] - u_full[j] for j in range(m + 1))
                    b_q = tuple(u_full[j] + x_full[j] for j in range(m + 1))
                    tterm = _t_form(m, a_q, b_q)
                    for mset in _cyclic_multisets(m, full_cov):
                        if any(
                            _mset_hom_to(m, mset, tgt) == 0 for tgt in hom_targets
                        ):
                            continue
                        selfhom = _mset_self_hom(m, mset)
                        options.append(
                            (
                                selfhom - tterm,
                                chain,
                                mset,
                                t_d_dp,
                                t_dq_x,
                                t_x_x,
                                t_dp_dp,
                                selfhom,
                                ad1,
                                ad2,
                                ad3,
                            )
                        )
        result = tuple(options)
        self._memo[key] = result
        return result

    @staticmethod
    def _coverage_profiles(d_arm, u_full, ebar, w0, winf):
        """Interior coverage tuples compatible with a monotone leftover chain."""
        m = len(d_arm) - 1
        out = []

        def walk(j: int, wprev: int, acc: tuple[int, ...]):
            if j == m:
                if wprev <= winf:
                    out.append(acc)
                return
            room = d_arm[j] - u_full[j] - ebar
            lo = max(0, room - winf)
            hi = room - wprev
            for cj in range(lo, hi + 1):
                walk(j + 1, room - cj, acc + (cj,))

        walk(1, w0, ())
        return out

    def scalar_combos(self) -> Iterator[tuple[int, int, int, int]]:
        d = self.d
        for u0 in range(1, d.d0 + 1):
            for uinf in range(0, min(u0 - 1, d.dinf) + 1):
                for x0 in range(0, min(d.d0 - u0, d.dinf - uinf) + 1):
                    ep = (
                        (d.d0 - u0) * (u0 + x0)
                        + (d.dinf - uinf) * (uinf + x0)
                        + (self.t.n - 2) * (d.dinf - uinf) * (u0 + x0)
                    )
                    yield u0, uinf, x0, ep

    def minimum(self) -> Optional[tuple[int, StratumIndex]]:
        """Exact minimum of the quantity over the period-free level."""
        t, d = self.t, self.d
        best: Optional[tuple[int, StratumIndex]] = None
        for u0, uinf, x0, ep in self.scalar_combos():
            # per arm and per tube-source-dimension: best option
            table = []
            feasible = True
            for i in range(1, t.n + 1):
                per_a = {}
                for a in range(x0 + 1):
                    opts = self._arm_options(i, u0, uinf, a, x0 - a)
                    if opts:
                        per_a[a] = min(opts, key=lambda o: o[0])
                if not per_a:
                    feasible = False
                    break
                table.append(per_a)
            if not feasible:
                continue
            # distribute x0 over the tubes
            states: dict[int, tuple[int, tuple]] = {0: (0, ())}
            for per_a in table:
                nxt: dict[int, tuple[int, tuple]] = {}
                for used, (tot, picks) in states.items():
                    for a, opt in per_a.items():
                        if used + a > x0:
                            continue
                        cand = (tot + opt[0], picks + ((a, opt),))
                        cur = nxt.get(used + a)
                        if cur is None or cand[0] < cur[0]:
                            nxt[used + a] = cand
                states = nxt
            final = states.get(x0)
            if final is None:
                continue
            value = final[0] - ep
            if best is None or value < best[0]:
                best = (value, self.build_index((u0, uinf, x0, final[1])))
        return best

    def iter_raw(self) -> Iterator[tuple[int, int, int, tuple]]:
        """Every period-free-level index as raw (u0, uinf, x0, picks) data."""
        t = self.t
        for u0, uinf, x0, _ep in self.scalar_combos():
            table = []
            feasible = True
            for i in range(1, t.n + 1):
                per_a = {}
                for a in range(x0 + 1):
                    opts = self._arm_options(i, u0, uinf, a, x0 - a)
                    if opts:
                        per_a[a] = opts
                if not per_a:
                    feasible = False
                    break
                table.append(per_a)
            if not feasible:
                continue

            def walk(arm_idx: int, used: int, picks: tuple):
                if arm_idx == t.n:
                    if used == x0:
                        yield picks
                    return
                for a, opts in table[arm_idx].items():
                    if used + a > x0:
                        continue
                    for opt in opts:
                        yield from walk(arm_idx + 1, used + a, picks + ((a, opt),))

            for picks in walk(0, 0, ()):
                yield (u0, uinf, x0, picks)

    def iter_indices(self) -> Iterator[StratumIndex]:
        for raw in self.iter_raw():
            yield self.build_index(raw)

    def margin_record(self, raw) -> MarginsReport:
        """Margins assembled from the per-arm pieces of a raw index."""
        u0, uinf, x0, picks = raw
        d, n, p = self.d, self.t.n, self.p
        t_d_dp = t_dq_x = t_x_x = t_dp_dp = selfhom = 0
        a1 = a2 = a3 = quantity_terms = 0
        for _a, opt in picks:
            quantity_terms += opt[0]
            t_d_dp += opt[3]
            t_dq_x += opt[4]
            t_x_x += opt[5]
            t_dp_dp += opt[6]
            selfhom += opt[7]
            a1 += opt[8]
            a2 += opt[9]
            a3 += opt[10]
        w0 = d.d0 - u0 - x0
        winf = d.dinf - uinf - x0
        ep_d_dp = d.d0 * u0 + d.dinf * uinf + (n - 2) * d.dinf * u0
        ep_dq_x = w0 * x0 + winf * x0 + (n - 2) * winf * x0
        ep_x_x = n * x0 * x0
        ep_dp_dp = u0 * u0 + uinf * uinf + (n - 2) * uinf * u0
        ep_q = (
            (d.d0 - u0) * (u0 + x0)
            + (d.dinf - uinf) * (uinf + x0)
            + (n - 2) * (d.dinf - uinf) * (u0 + x0)
        )
        m1 = -(ep_d_dp + t_d_dp) - ((p - n) * (u0 - uinf) + a1)
        m2 = -(ep_dq_x + t_dq_x) - a2
        m3 = selfhom - (ep_x_x + t_x_x) - a3
        cor = (ep_dp_dp + t_dp_dp - 1) + (p - n) * (u0 - uinf - 1)
        return MarginsReport(a1, a2, a3, m1, m2, m3, cor, quantity_terms - ep_q)

    def build_index(self, raw) -> StratumIndex:
        u0, uinf, _x0, picks = raw
        t, d = self.t, self.d
        arms = tuple(opt[1] for _a, opt in picks)
        dp = DimVector(u0, uinf, arms)
        classes = []
        for i, (_a, opt) in enumerate(picks, start=1):
            classes.extend(TubeClass(i, s, s + l - 1) for s, l in opt[2])
        x = regular_part(classes)
        dq = d - dp - tube_dim_vector(t, x)
        return StratumIndex(dp, dq, x, 0)


def iter_c3(t: CanonicalType, d: DimVector) -> Iterator[StratumIndex]:
    """All period-free admissible indices, via the arm-separated engine."""
    yield from _C3Engine(t, d).iter_indices()


def min_quantity_c3(
    t: CanonicalType, d: DimVector
) -> Optional[tuple[int, StratumIndex]]:
    """Minimum quantity over the admissible levels (attained period-free).

    The q-shift and tube reductions push every admissible index to the
    period-free level without increasing the quantity, so this minimum
    equals the minimum over the whole admissible set.
    """
    return _C3Engine(t, d).minimum()


# ---------------------------------------------------------------------------
# zero-set dimension, generator count, complete-intersection verdict


def z_dimension(t: CanonicalType, d: DimVector) -> ZReport:
    """Dimension/codimension of the common zero set of nonconstant
    semi-invariants, as the best admissible stratum."""
    if not in_R(t, d):
        raise PreconditionError(f"{d.flatten()} is not a regular dimension vector")
    if homogeneous_multiplicity(t, d) <= 0:
        raise PreconditionError(
            "zero-set description needs positive homogeneous multiplicity"
        )
    got = min_quantity_c3(t, d)
    if got is None:
        return ZReport(True, None, None, None)
    minq, witness = got
    return ZReport(False, a_dim(t, d) - minq, minq, witness)


def generator_count(
    t: CanonicalType, d: DimVector, assume_irreducible: bool = False
) -> int:
    """Number of generators of the semi-invariant ring (polynomiality regime)."""
    if not in_R(t, d):
        raise PreconditionError(f"{d.flatten()} is not a regular dimension vector")
    p = homogeneous_multiplicity(t, d)
    if p < t.n - 1:
        raise PreconditionError(
            f"homogeneous multiplicity {p} is below n - 1 = {t.n - 1}"
        )
    if not is_tame(t) and not assume_irreducible:
        raise PreconditionError(
            "wild type: the module variety is not known to be irreducible; "
            "pass assume_irreducible=True for a conditional report"
        )
    return p + 1 + ad(t, d) - t.n


def ci_check(
    t: CanonicalType, d: DimVector, assume_irreducible: bool = False
) -> CiVerdict:
    """Compare zero-set codimension with the generator count.

    Complete intersection exactly when they agree; an empty admissible set
    is reported as vacuously true; codimension exceeding the generator
    count is flagged as an anomaly (it cannot happen when the gates hold).
    """
    s = generator_count(t, d, assume_irreducible=assume_irreducible)
    got = min_quantity_c3(t, d)
    if got is None:
        return CiVerdict(s, None, None, None, True, False, True)
    minq, witness = got
    return CiVerdict(s, minq, minq, witness, minq == s, minq > s, False)


# ---------------------------------------------------------------------------
# reductions


def _replace_tube_part(
    x: RegularPart, remove: Iterable[TubeClass], add: Iterable[TubeClass]
) -> RegularPart:
    pool = list(x.classes)
    for c in remove:
        pool.remove(c)
    pool.extend(add)
    return regular_part(pool)


def reduce_q(t: CanonicalType, d: DimVector, s: StratumIndex) -> StratumIndex:
    """Absorb the homogeneous part into the preprojective one.

    Stays admissible and strictly decreases the quantity.
    """
    check_index(t, d, s)
    if s.q == 0:
        raise PreconditionError("nothing to absorb: homogeneous multiplicity is zero")
    if s.dp.is_zero():
        raise PreconditionError("preprojective part is zero")
    ok, _ = in_c_prime(t, d, s)
    if not ok:
        raise PreconditionError("index is not admissible (does not meet the zero set)")
    out = StratumIndex(s.dp + s.q * h_vector(t), s.dq, s.x, 0)
    ok2, _ = in_c_prime(t, d, out)
    if not ok2:
        raise VerificationError("q-shift left the admissible level")
    if stratum_quantity(t, d, out) >= stratum_quantity(t, d, s):
        raise VerificationError("q-shift did not decrease the quantity")
    return out


def _tube_part(x: RegularPart, i: int) -> list[TubeClass]:
    return [c for c in x.classes if c.i == i]


def _min_top(t: CanonicalType, part: list[TubeClass], i: int, anchor: int) -> Optional[int]:
    """Smallest level >= anchor that is the top of a summand covering ``anchor``."""
    m = t.m[i - 1]
    for l in range(anchor, anchor + m):
        res = l % m
        need = l - anchor + 1
        for c in part:
            if (c.j1 + c.length - 1) % m == res and c.length >= need:
                return l
    return None


def _reduce_x_detail(
    t: CanonicalType, d: DimVector, s: StratumIndex
) -> tuple[StratumIndex, dict]:
    if s.q != 0:
        raise PreconditionError("tube reduction applies to indices with no homogeneous part")
    ok, _ = in_c_prime(t, d, s)
    if not ok:
        raise PreconditionError("index is not admissible (does not meet the zero set)")
    arm = next(
        (
            i
            for i in range(1, t.n + 1)
            if min(tube_coverage(t, s.x.classes, i)) > 0
        ),
        None,
    )
    if arm is None:
        raise PreconditionError("exceptional part is already period-free")
    m = t.m[arm - 1]
    dp, dq = s.dp, s.dq
    j0 = next(j for j in range(1, m + 1) if dp.delta(arm, j) > 0)

    detail: dict = {"arm": arm, "j0": j0, "swapped": False}
    x = s.x

    def locate(xpart: list[TubeClass]) -> tuple[int, int]:
        l2 = _min_top(t, xpart, arm, j0)
        if l2 is None:
            raise VerificationError("tube covers every slot but no summand reaches the drop")
        tops = [c for c in xpart if (c.j1 + c.length - 1) % m == l2 % m]
        l1 = min(l2 - c.length + 1 for c in tops)
        return l1, l2

    part = _tube_part(x, arm)
    l1, l2 = locate(part)

    # at most one admissible class can be critical for this index
    critical = None
    for cls in admissible_intervals(t, d)[arm - 1]:
        if cls.j2 % m != j0 % m:
            continue
        j1r = j0 - cls.length
        if j1r >= l1:
            continue
        if delta_interval(t, dp, arm, j1r + 1, j0) != 1:
            continue
        if delta_interval(t, dq, arm, j1r + 1, j0) != 0:
            continue
        target = tube_class(t, arm, j1r, j0 - 1)
        if any(hom_tube(t, c, target) for c in part):
            continue
        if critical is not None:
            raise VerificationError("more than one critical pair")
        critical = (cls, j1r)

    if critical is not None:
        _cls, j1r = critical
        v2 = _min_top(t, part, arm, j1r)
        if v2 is None:
            raise VerificationError("critical pair but no summand covers its start")
        # largest start among the summands that reach v2 and cover the
        # critical slot; shorter summands ending at v2 would break nesting
        starts = [
            v2 - c.length + 1
            for c in part
            if (c.j1 + c.length - 1) % m == v2 % m and v2 - c.length + 1 <= j1r
        ]
        v1 = max(starts)
        if not (v1 < l1 <= l2 < v2 < l2 + m):
            raise VerificationError(
                f"crossing-swap indices out of order: v1={v1}, l1={l1}, l2={l2}, v2={v2}"
            )
        before = hom_regular(t, x, x)
        x = _replace_tube_part(
            x,
            [tube_class(t, arm, l1, l2), tube_class(t, arm, v1, v2)],
            [tube_class(t, arm, v1, l2), tube_class(t, arm, l1, v2)],
        )
        after = hom_regular(t, x, x)
        if after != before + 1:
            raise VerificationError(
                f"crossing swap changed self-Homs by {after - before}, expected 1"
            )
        swapped_index = StratumIndex(dp, dq, x, 0)
        ok_sw, _ = in_c_prime(t, d, swapped_index)
        if not ok_sw:
            raise VerificationError("crossing swap left the admissible level")
        detail.update(swapped=True, v1=v1, v2=v2)
        part = _tube_part(x, arm)
        l1, l2 = locate(part)

    detail.update(l1=l1, l2=l2)
    removed = tube_class(t, arm, l1, l2)
    added = [tube_class(t, arm, l1, j0 - 1)] if l1 <= j0 - 1 else []
    new_x = _replace_tube_part(x, [removed], added)
    out = StratumIndex(dp + e_interval(t, arm, j0, l2), dq, new_x, 0)

    ok2, _ = in_c_prime(t, d, out)
    if not ok2:
        raise VerificationError("tube reduction left the admissible level")
    old_total = tube_dim_vector(t, s.x).total()
    new_total = tube_dim_vector(t, out.x).total()
    if new_total >= old_total:
        raise VerificationError("tube reduction did not shrink the exceptional part")
    q_old = stratum_quantity(t, d, s)
    q_new = stratum_quantity(t, d, out)
    if q_new > q_old:
        raise VerificationError(f"tube reduction increased the quantity: {q_old} -> {q_new}")
    if _x_multiplicity(t, out.x) == 0 and q_new >= q_old:
        raise VerificationError(
            "tube reduction reached the period-free level without a strict drop"
        )
    detail.update(quantity_before=q_old, quantity_after=q_new)
    return out, detail


def reduce_X(t: CanonicalType, d: DimVector, s: StratumIndex) -> StratumIndex:
    """One tube-reduction step; see the module docstring for the contract."""
    out, _ = _reduce_x_detail(t, d, s)
    return out


@dataclass(frozen=True)
class ReductionStep:
    op: str
    index: StratumIndex
    quantity: int


def reduce_to_c3(
    t: CanonicalType, d: DimVector, s: StratumIndex
) -> tuple[StratumIndex, tuple[ReductionStep, ...]]:
    """Iterate the two reductions down to the period-free level."""
    ok, _ = in_c_prime(t, d, s)
    if not ok:
        raise PreconditionError("index is not admissible (does not meet the zero set)")
    trace: list[ReductionStep] = []
    cur = s
    if cur.q > 0:
        cur = reduce_q(t, d, cur)
        trace.append(ReductionStep("reduce_q", cur, stratum_quantity(t, d, cur)))
    while _x_multiplicity(t, cur.x) > 0:
        cur, _detail = _reduce_x_detail(t, d, cur)
        trace.append(ReductionStep("reduce_x", cur, stratum_quantity(t, d, cur)))
    qs = [stratum_quantity(t, d, s)] + [step.quantity for step in trace]
    if any(b > a for a, b in zip(qs, qs[1:])):
        raise VerificationError(f"non-monotone reduction trace: {qs}")
    return cur, tuple(trace)


# ---------------------------------------------------------------------------
# staircase decomposition and the three-way interval split


def staircase_decomposition(
    t: CanonicalType, v: DimVector, side: str
) -> tuple[int, tuple[tuple[int, ...], ...]]:
    """Write a one-sided vector as a balanced part plus unit staircases.

    Preprojective side: the arm-``i`` drop at ``j`` contributes level
    ``j - 1``; preinjective side: the rise at ``j`` contributes level ``j``.
    Rows are sorted ascending and reconstruct the vector exactly.
    """
    cls = classify(t, v)
    if side == "P":
        if not cls.in_P:
            raise PreconditionError(f"{v.flatten()} is not preprojective")
        steps = v.d0 - v.dinf
        base = v.dinf
    elif side == "Q":
        if not cls.in_Q:
            raise PreconditionError(f"{v.flatten()} is not preinjective")
        steps = v.dinf - v.d0
        base = v.d0
    else:
        raise ValueError(f"side must be 'P' or 'Q', got {side!r}")
    levels = []
    for i in range(1, t.n + 1):
        row = []
        for j in range(1, t.m[i - 1] + 1):
            dlt = v.delta(i, j)
            if side == "P":
                row.extend([j - 1] * dlt)
            else:
                row.extend([j] * (-dlt))
        if len(row) != steps:
            raise VerificationError(
                f"arm {i} drop count {len(row)} does not match gap {steps}"
            )
        levels.append(tuple(sorted(row)))
    # reconstruction audit
    recon = base * h_vector(t)
    for col in range(steps):
        recon = recon + _staircase_vector(t, [levels[i][col] for i in range(t.n)], side)
    if recon != v:
        raise VerificationError("staircase decomposition does not reconstruct the input")
    return base, tuple(levels)


def _staircase_vector(t: CanonicalType, ls, side: str) -> DimVector:
    from .core import unit_vector

    if side == "P":
        v = unit_vector(t, "0")
        for i, li in enumerate(ls, start=1):
            for j in range(1, li + 1):
                v = v + unit_vector(t, (i, j))
    else:
        v = unit_vector(t, "inf")
        for i, li in enumerate(ls, start=1):
            for j in range(li, t.m[i - 1]):
                v = v + unit_vector(t, (i, j))
    return v


def ad_split(t: CanonicalType, d: DimVector, s: StratumIndex) -> tuple[int, int, int]:
    """Partition the admissible classes by which part carries their drop."""
    check_index(t, d, s)
    if s.q != 0:
        raise ValueError("the split is defined for indices with no homogeneous part")
    a1 = a2 = a3 = 0
    for cls in all_classes(t, d):
        dp = delta_interval(t, s.dp, cls.i, cls.j1 + 1, cls.j2)
        dq = delta_interval(t, s.dq, cls.i, cls.j1 + 1, cls.j2)
        if dp > 0:
            a1 += 1
        elif dq < 0:
            a2 += 1
        else:
            a3 += 1
    return a1, a2, a3


def inequality_report(t: CanonicalType, d: DimVector, s: StratumIndex) -> MarginsReport:
    """Margins (left minus right) of the three arm inequalities and the
    derived generator-count inequality."""
    check_index(t, d, s)
    if s.q != 0:
        raise ValueError("margins are defined for indices with no homogeneous part")
    a1 = a2 = a3 = 0
    for cls in all_classes(t, d):
        dp = delta_interval(t, s.dp, cls.i, cls.j1 + 1, cls.j2)
        dq = delta_interval(t, s.dq, cls.i, cls.j1 + 1, cls.j2)
        if dp > 0:
            a1 += 1
        elif dq < 0:
            a2 += 1
        else:
            a3 += 1
    x = tube_dim_vector(t, s.x)
    selfhom = hom_regular(t, s.x, s.x)
    p = homogeneous_multiplicity(t, d)
    n = t.n
    m1 = -euler_form(t, d, s.dp) - ((p - n) * (s.dp.d0 - s.dp.dinf) + a1)
    m2 = -euler_form(t, s.dq, x) - a2
    m3 = selfhom - (euler_form(t, x, x) + a3)
    cor = (euler_form(t, s.dp, s.dp) - 1) + (p - n) * (
        euler_form(t, s.dp, h_vector(t)) - 1
    )
    quantity = selfhom - euler_form(t, d - s.dp, d - s.dq)
    return MarginsReport(a1, a2, a3, m1, m2, m3, cor, quantity)
