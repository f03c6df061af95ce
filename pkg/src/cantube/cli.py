"""Command-line surface: single-vector reports, sweeps, and verification runs.

Exit codes: 0 success, 1 usage error, 2 malformed input, 3 violated
mathematical precondition.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    CanonicalType,
    DimVector,
    PreconditionError,
    canonical_type,
    classify,
    delta_invariant,
    homogeneous_multiplicity,
    is_tame,
    threshold_N,
)
from .candecomp import ad, admissible_intervals, canonical_decomposition, inside_multiplicity
from .tubes import RegularPart, ext1_tube, hom_regular, regular_part, tube_class
from .matrixrep import hom_space_dim, module_from_doc
from .strata import (
    StratumIndex,
    ci_check,
    enumerate_strata,
    reduce_to_c3,
    stratum_quantity,
    z_dimension,
)
from . import campaigns


class UsageError(Exception):
    pass


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# text formats


def parse_type(spec: str, lam_spec: Optional[str]) -> CanonicalType:
    try:
        m = [int(x) for x in spec.split(",")]
    except ValueError as err:
        raise InputError(f"bad arm lengths {spec!r}: {err}") from None
    lam = None
    if lam_spec:
        try:
            lam = [Fraction(x) for x in lam_spec.split(",")]
        except ValueError as err:
            raise InputError(f"bad tube parameters {lam_spec!r}: {err}") from None
    try:
        return canonical_type(m, lam)
    except ValueError as err:
        raise InputError(str(err)) from None


def parse_dim_vector(t: CanonicalType, spec: str) -> DimVector:
    blocks = spec.split(";")
    if len(blocks) != t.n + 1:
        raise InputError(
            f"vector {spec!r}: expected 1 + {t.n} semicolon blocks, got {len(blocks)}"
        )
    try:
        ends = [int(x) for x in blocks[0].split(",")]
        arms = [tuple(int(x) for x in b.split(",")) if b else () for b in blocks[1:]]
    except ValueError as err:
        raise InputError(f"vector {spec!r}: {err}") from None
    if len(ends) != 2:
        raise InputError(f"vector {spec!r}: first block must be 'd0,dinf'")
    for i, arm in enumerate(arms, start=1):
        if len(arm) != t.m[i - 1] - 1:
            raise InputError(
                f"vector {spec!r}: arm {i} needs {t.m[i - 1] - 1} entries, got {len(arm)}"
            )
    return DimVector(ends[0], ends[1], tuple(arms))


def format_dim_vector(d: DimVector) -> str:
    return ";".join(
        [f"{d.d0},{d.dinf}"] + [",".join(str(x) for x in arm) for arm in d.arms]
    )


def parse_regular_part(t: CanonicalType, spec: str) -> RegularPart:
    spec = spec.strip()
    if not spec or spec == "0":
        return regular_part([])
    classes = []
    for piece in spec.split("+"):
        try:
            arm, rng = piece.split(":")
            j1, j2 = rng.split("-")
            classes.append(tube_class(t, int(arm), int(j1), int(j2)))
        except (ValueError, IndexError) as err:
            raise InputError(f"bad tube class {piece!r}: {err}") from None
    return regular_part(classes)


def _frac(v: Fraction):
    return str(v)


def _index_doc(s: StratumIndex) -> dict:
    return {
        "dp": format_dim_vector(s.dp),
        "dq": format_dim_vector(s.dq),
        "x": str(s.x),
        "q": s.q,
    }


def _emit(doc: dict, fmt: str, out) -> None:
    if fmt == "json":
        json.dump(doc, out, indent=2)
        out.write("\n")
        return
    _emit_text(doc, out)


def _emit_text(doc, out, indent: str = "") -> None:
    if isinstance(doc, dict):
        for key, val in doc.items():
            if isinstance(val, list) and all(
                not isinstance(v, (dict, list)) for v in val
            ):
                out.write(f"{indent}{key}: [{', '.join(str(v) for v in val)}]\n")
            elif isinstance(val, (dict, list)):
                out.write(f"{indent}{key}:\n")
                _emit_text(val, out, indent + "  ")
            else:
                out.write(f"{indent}{key}: {val}\n")
    elif isinstance(doc, list):
        for val in doc:
            if isinstance(val, (dict, list)):
                _emit_text(val, out, indent + "  ")
                out.write("\n" if indent == "" else "")
            else:
                out.write(f"{indent}- {val}\n")
    else:
        out.write(f"{indent}{doc}\n")


# ---------------------------------------------------------------------------
# verbs


def _cmd_classify(t, args, out):
    d = parse_dim_vector(t, args.d)
    flags = classify(t, d)
    doc = {
        "command": "classify",
        "type": list(t.m),
        "d": format_dim_vector(d),
        "in_P": flags.in_P,
        "in_R": flags.in_R,
        "in_Q": flags.in_Q,
        "delta_invariant": _frac(delta_invariant(t)),
        "tame": is_tame(t),
        "threshold_N": threshold_N(t),
    }
    if flags.in_R:
        doc["p"] = homogeneous_multiplicity(t, d)
    return doc


def _cmd_candecomp(t, args, out):
    d = parse_dim_vector(t, args.d)
    dec = canonical_decomposition(t, d)
    return {
        "command": "candecomp",
        "type": list(t.m),
        "d": format_dim_vector(d),
        "p": dec.p,
        "table": [list(row) for row in dec.table],
    }


def _cmd_intervals(t, args, out):
    d = parse_dim_vector(t, args.d)
    arms = admissible_intervals(t, d)
    return {
        "command": "intervals",
        "type": list(t.m),
        "d": format_dim_vector(d),
        "classes": [
            [{"j1": c.j1, "j2": c.j2} for c in arm] for arm in arms
        ],
        "ad": ad(t, d),
        "inside_multiplicity": [
            [inside_multiplicity(t, d, i, j) for j in range(t.m[i - 1])]
            for i in range(1, t.n + 1)
        ],
    }


def _cmd_strata(t, args, out):
    d = parse_dim_vector(t, args.d)
    reports = enumerate_strata(t, d, args.level)
    return {
        "command": "strata",
        "type": list(t.m),
        "d": format_dim_vector(d),
        "level": args.level,
        "count": len(reports),
        "strata": [
            {
                **_index_doc(rep.index),
                "dim": rep.dim,
                "quantity": rep.quantity,
                "in_c_prime": rep.in_c_prime,
                "in_c2": rep.in_c2,
                "in_c3": rep.in_c3,
            }
            for rep in reports
        ],
    }


def _cmd_zdim(t, args, out):
    d = parse_dim_vector(t, args.d)
    rep = z_dimension(t, d)
    doc = {
        "command": "zdim",
        "type": list(t.m),
        "d": format_dim_vector(d),
        "empty": rep.empty,
    }
    if rep.empty:
        doc["note"] = "zero set is empty (no admissible stratum)"
    else:
        doc.update(
            dim_z=rep.dim_z, codim=rep.codim, witness=_index_doc(rep.witness)
        )
    return doc


def _cmd_ci_check(t, args, out):
    d = parse_dim_vector(t, args.d)
    verdict = ci_check(t, d, assume_irreducible=args.assume_irreducible)
    doc = {
        "command": "ci-check",
        "type": list(t.m),
        "d": format_dim_vector(d),
        "s": verdict.s,
        "codim": verdict.codim,
        "min_quantity": verdict.min_quantity,
        "verdict": verdict.verdict,
        "anomaly": verdict.anomaly,
        "vacuous": verdict.vacuous,
    }
    if verdict.witness is not None:
        doc["witness"] = _index_doc(verdict.witness)
    return doc


def _cmd_reduce(t, args, out):
    d = parse_dim_vector(t, args.d)
    s = StratumIndex(
        parse_dim_vector(t, args.dp),
        parse_dim_vector(t, args.dq),
        parse_regular_part(t, args.x),
        args.q,
    )
    start_quantity = stratum_quantity(t, d, s)
    final, trace = reduce_to_c3(t, d, s)
    return {
        "command": "reduce",
        "type": list(t.m),
        "d": format_dim_vector(d),
        "start": {**_index_doc(s), "quantity": start_quantity},
        "steps": [
            {"op": step.op, **_index_doc(step.index), "quantity": step.quantity}
            for step in trace
        ],
        "final": _index_doc(final),
    }


def _cmd_hom(t, args, out):
    if args.mfile_a or args.mfile_b:
        if not (args.mfile_a and args.mfile_b):
            raise InputError("module-file Hom needs both --mfile-a and --mfile-b")
        with open(args.mfile_a) as fh:
            ma = module_from_doc(json.load(fh))
        with open(args.mfile_b) as fh:
            mb = module_from_doc(json.load(fh))
        if ma.t != mb.t:
            raise InputError("module files live over different algebras")
        return {
            "command": "hom",
            "route": "matrix-oracle",
            "type": list(ma.t.m),
            "hom": hom_space_dim(ma, mb),
        }
    if not (args.a and args.b):
        raise InputError("need either --a/--b tube parts or --mfile-a/--mfile-b files")
    xa = parse_regular_part(t, args.a)
    xb = parse_regular_part(t, args.b)
    doc = {
        "command": "hom",
        "route": "tube-rule",
        "type": list(t.m),
        "a": str(xa),
        "b": str(xb),
        "hom": hom_regular(t, xa, xb),
    }
    if len(xa) == 1 and len(xb) == 1:
        doc["ext1"] = ext1_tube(t, xa.classes[0], xb.classes[0])
    return doc


def _cmd_sweep(t, args, out):
    rows = campaigns.ci_sweep(
        t,
        p_min=args.p_min,
        p_max=args.p_max,
        tube_bound=args.tube_bound,
        coord_bound=args.coord_bound,
        assume_irreducible=args.assume_irreducible,
        jobs=args.jobs,
        level=args.level,
    )
    counters = sum(1 for r in rows if r.is_counterexample)
    if args.format == "csv":
        writer = csv.writer(out)
        writer.writerow(["d", "p", "ad", "s", "codim", "verdict"])
        for r in rows:
            writer.writerow(
                [
                    format_dim_vector_from_flat(t, r.d),
                    r.p,
                    r.ad,
                    "" if r.s is None else r.s,
                    "" if r.codim is None else r.codim,
                    r.verdict,
                ]
            )
        writer.writerow(["# counterexamples", counters])
        return None
    return {
        "command": "sweep",
        "type": list(t.m),
        "rows": [
            {
                "d": format_dim_vector_from_flat(t, r.d),
                "p": r.p,
                "ad": r.ad,
                "s": r.s,
                "codim": r.codim,
                "verdict": r.verdict,
            }
            for r in rows
        ],
        "counterexamples": counters,
    }


def format_dim_vector_from_flat(t: CanonicalType, flat: Sequence[int]) -> str:
    from .core import unflatten

    return format_dim_vector(unflatten(t, flat))


_LEMMA_CHECKS = ("bound", "duality", "swap", "reductions", "margins", "typea")


def _cmd_verify_lemmas(t, args, out):
    wanted = args.checks.split(",") if args.checks else list(_LEMMA_CHECKS)
    for name in wanted:
        if name not in _LEMMA_CHECKS:
            raise InputError(f"unknown check {name!r}; choose from {_LEMMA_CHECKS}")
    reports = []
    if "bound" in wanted:
        reports.append(campaigns.adm_bound_check(t, args.coord_bound))
    if "duality" in wanted:
        reports.append(
            campaigns.duality_check(t, max_summands=args.max_summands, length_factor=1)
        )
    if "swap" in wanted:
        reports.append(campaigns.swap_identity_check())
    if "reductions" in wanted:
        reports.append(campaigns.reduction_check(t, coord_bound=min(args.coord_bound, 2)))
    if "margins" in wanted:
        reports.append(
            campaigns.margins_check(
                t, coord_bound=args.coord_bound, p_max=args.p_max, jobs=args.jobs
            )
        )
    if "typea" in wanted:
        reports.append(campaigns.type_a_bound_check())
    return {
        "command": "verify-lemmas",
        "type": list(t.m),
        "reports": [
            {
                "name": rep.name,
                "checked": rep.checked,
                "violations": list(rep.violations),
                "ok": rep.ok,
            }
            for rep in reports
        ],
        "all_ok": all(rep.ok for rep in reports),
    }


def _cmd_verify_oracle(t, args, out):
    rep = campaigns.oracle_hom_check(t, length_factor=args.length_factor)
    return {
        "command": "verify-oracle",
        "type": list(t.m),
        "checked": rep.checked,
        "violations": list(rep.violations),
        "ok": rep.ok,
    }


# ---------------------------------------------------------------------------
# argument wiring


def build_parser() -> _Parser:
    parser = _Parser(prog="cantube", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, need_d=True):
        p.add_argument("--type", required=True, help="arm lengths, e.g. 2,2,2")
        p.add_argument("--lambda", dest="lam", default=None, help="tube parameters from the third arm on")
        if need_d:
            p.add_argument("--d", required=True, help="dimension vector 'd0,dinf;arm1;arm2;...'")
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")

    for verb in ("classify", "candecomp", "intervals", "zdim"):
        common(sub.add_parser(verb))

    p = sub.add_parser("strata")
    common(p)
    p.add_argument("--level", choices=("c", "cprime", "c2", "c3"), default="c")

    p = sub.add_parser("ci-check")
    common(p)
    p.add_argument("--assume-irreducible", action="store_true")

    p = sub.add_parser("reduce")
    common(p)
    p.add_argument("--dp", required=True)
    p.add_argument("--dq", required=True)
    p.add_argument("--x", required=True, help="tube classes 'i:j1-j2+i:j1-j2+...' or '0'")
    p.add_argument("--q", type=int, default=0)

    p = sub.add_parser("hom")
    common(p, need_d=False)
    p.add_argument("--a", default=None, help="tube classes 'i:j1-j2+...'")
    p.add_argument("--b", default=None)
    p.add_argument("--mfile-a", default=None, help="module file (JSON)")
    p.add_argument("--mfile-b", default=None)

    p = sub.add_parser("sweep")
    common(p, need_d=False)
    p.add_argument("--p-min", type=int, required=True)
    p.add_argument("--p-max", type=int, required=True)
    p.add_argument("--tube-bound", type=int, required=True)
    p.add_argument("--coord-bound", type=int, default=None)
    p.add_argument("--level", choices=("c3", "cprime"), default="c3")
    p.add_argument("--assume-irreducible", action="store_true")
    p.add_argument("--jobs", type=int, default=None)

    p = sub.add_parser("verify-lemmas")
    common(p, need_d=False)
    p.add_argument("--coord-bound", type=int, default=3)
    p.add_argument("--p-max", type=int, default=3)
    p.add_argument("--max-summands", type=int, default=2)
    p.add_argument("--checks", default=None, help=f"comma list from {_LEMMA_CHECKS}")
    p.add_argument("--jobs", type=int, default=None)

    p = sub.add_parser("verify-oracle")
    common(p, need_d=False)
    p.add_argument("--length-factor", type=int, default=2)

    return parser


_HANDLERS = {
    "classify": _cmd_classify,
    "candecomp": _cmd_candecomp,
    "intervals": _cmd_intervals,
    "strata": _cmd_strata,
    "zdim": _cmd_zdim,
    "ci-check": _cmd_ci_check,
    "reduce": _cmd_reduce,
    "hom": _cmd_hom,
    "sweep": _cmd_sweep,
    "verify-lemmas": _cmd_verify_lemmas,
    "verify-oracle": _cmd_verify_oracle,
}


def run(argv: Sequence[str], out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 1
    try:
        t = parse_type(args.type, args.lam)
        doc = _HANDLERS[args.verb](t, args, out)
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 1
    except PreconditionError as err:
        print(f"precondition violated: {err}", file=sys.stderr)
        return 3
    except (InputError, ValueError, OSError, json.JSONDecodeError) as err:
        print(f"malformed input: {err}", file=sys.stderr)
        return 2
    if doc is not None:
        _emit(doc, args.format if args.format != "csv" else "json", out)
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))
