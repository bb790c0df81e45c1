"""Command-line interface.

    lnrbounds bound --settings-file sym.json
    lnrbounds violation --structured 36.87 --visibility 0.95
    lnrbounds scan --from 90 --to 120 --step 0.25 --format csv
    lnrbounds optimize --emit-settings best.json
    lnrbounds oracle --random 20 --seed 1
    lnrbounds hvcheck --table table.csv
    lnrbounds robustness --structured 36.87 --epsilon 0.5
    lnrbounds reproduce

Angles are degrees unless --radians is given. Output format comes from
--format, else $LNRBOUNDS_FORMAT, else "human". Exit codes: 0 success,
1 domain or degeneracy error (or a failed check), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import logging
import math
import os
import sys
from typing import Any, Sequence

import numpy as np

from . import __version__
from .analysis import (
    DEFAULT_SCAN_STEP,
    optimize_category_I,
    robustness_sweep,
    scan_symmetric_II,
    structured_category_I,
    symmetric_category_II,
    threshold_visibility,
)
from .bounds import (
    SettingsCategoryI,
    SettingsCategoryII,
    bound,
    min_abs_projection_angle_form,
    min_abs_projection_closed_form,
)
from .errors import LNRError
from .geometry import UnitVec3, angle_between
from .hvchecks import (
    OutcomeTable,
    check_pointwise_identity,
    check_subensemble_inequality,
    check_triangle_step,
    random_table,
)
from .oracle import DEFAULT_COARSE_STEP, random_independent_triples, vertex_minimum_check
from .quantum import CorrelationModel, evaluate_violation
from .reproduce import reproduce_headline, rows_as_dicts
from .settings_file import SettingsFormatError, dump_settings, load_settings

FORMAT_ENV = "LNRBOUNDS_FORMAT"
FORMATS = ("human", "json", "csv")

log = logging.getLogger("lnrbounds")


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------- output


def _emit(fmt: str, record: dict[str, Any] | None = None, rows: list[dict] | None = None, out=None) -> None:
    """Write one record (or a list of rows) in the requested format."""
    out = out or sys.stdout
    if fmt == "json":
        payload = record if rows is None else {**(record or {}), "rows": rows}
        out.write(json.dumps(payload, indent=2) + "\n")
        return
    table = rows if rows is not None else [record]
    if fmt == "csv":
        writer = csv.DictWriter(out, fieldnames=list(table[0]), lineterminator="\n")
        writer.writeheader()
        for r in table:
            writer.writerow({k: _csv_cell(v) for k, v in r.items()})
        return
    if record is not None:
        width = max(len(k) for k in record)
        for k, v in record.items():
            out.write(f"{k:<{width}}  {_human(v)}\n")
    if rows is not None:
        if record is not None:
            out.write("\n")
        keys = list(rows[0])
        cells = [[_human(r[k]) for k in keys] for r in rows]
        widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
        out.write("  ".join(k.rjust(w) for k, w in zip(keys, widths)) + "\n")
        for c in cells:
            out.write("  ".join(x.rjust(w) for x, w in zip(c, widths)) + "\n")


def _csv_cell(v: Any) -> Any:
    if isinstance(v, (list, tuple)):
        return ";".join(repr(float(x)) for x in v)
    if v is None:
        return ""
    return v


def _human(v: Any) -> str:
    if isinstance(v, float):
        return f"{v:.6f}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_human(x) for x in v) + "]"
    if v is None:
        return "-"
    return str(v)


def _deg(x: float) -> float:
    return math.degrees(x)


# --------------------------------------------------------------------------- parsing


def _angle(args, value: float) -> float:
    return value if args.radians else math.radians(value)


def _parse_triple(text: str, flag: str) -> list[list[float]]:
    vecs = [v for v in text.replace(" ", "").split(";") if v]
    if len(vecs) != 3:
        raise UsageError(f"{flag} needs 3 vectors 'x,y,z;x,y,z;x,y,z', got {len(vecs)}")
    out = []
    for v in vecs:
        parts = v.split(",")
        if len(parts) != 3:
            raise UsageError(f"{flag}: vector '{v}' must have 3 components")
        try:
            out.append([float(p) for p in parts])
        except ValueError as exc:
            raise UsageError(f"{flag}: vector '{v}' is not numeric") from exc
    return out


def _settings(args):
    sources = [args.settings_file is not None, args.structured is not None, args.symmetric is not None,
               args.a is not None]
    if sum(sources) != 1:
        raise UsageError("give exactly one settings source: --settings-file, --structured, --symmetric or --a/--b[/--b2]")
    if args.settings_file is not None:
        s = load_settings(args.settings_file)
    elif args.structured is not None:
        s = structured_category_I(_angle(args, args.structured))
    elif args.symmetric is not None:
        s = symmetric_category_II(_angle(args, args.symmetric))
    else:
        if args.b is None:
            raise UsageError("--a requires --b")
        a = [UnitVec3.of(v) for v in _parse_triple(args.a, "--a")]
        b = [UnitVec3.of(v) for v in _parse_triple(args.b, "--b")]
        if args.b2 is not None:
            s = SettingsCategoryI(a=a, b=b, b2=[UnitVec3.of(v) for v in _parse_triple(args.b2, "--b2")])
        else:
            s = SettingsCategoryII(a=a, b=b)
    if args.category is not None and args.category != s.category:
        raise UsageError(f"settings are category {s.category}, but --category {args.category} was given")
    if args.emit_settings:
        dump_settings(s, args.emit_settings)
    return s


# --------------------------------------------------------------------------- commands


def _bound_record(rep) -> dict[str, Any]:
    return {
        "category": rep.category,
        "L": rep.L,
        "extremal_angle_deg": _deg(rep.extremal_angle),
        "bound": rep.bound,
        "degenerate": rep.degenerate,
        "per_pair_angles_deg": [_deg(x) for x in rep.per_pair_angles],
    }


def cmd_bound(args) -> int:
    _emit(args.format, _bound_record(bound(_settings(args))))
    return 0


def _violation_record(rep, visibility: float) -> dict[str, Any]:
    br = rep.bound_report
    return {
        "category": br.category,
        "visibility": visibility,
        "L": br.L,
        "extremal_angle_deg": _deg(br.extremal_angle),
        "bound": rep.bound,
        "lhs": rep.lhs,
        "S": rep.S,
        "ratio": rep.ratio,
        "degenerate": br.degenerate,
    }


def cmd_violation(args) -> int:
    s = _settings(args)
    rep = evaluate_violation(CorrelationModel(args.visibility), s)
    _emit(args.format, _violation_record(rep, args.visibility))
    return 0


def cmd_scan(args) -> int:
    model = CorrelationModel(args.visibility)
    res = scan_symmetric_II(model, _angle(args, args.lo), _angle(args, args.hi), _angle(args, args.step))
    rows = [{"delta_deg": _deg(r.delta), "lhs": r.lhs, "bound": r.bound, "S": r.S} for r in res.rows]
    if args.format == "csv":
        _emit("csv", rows=rows)
        return 0
    window = None if res.violation_window is None else [_deg(x) for x in res.violation_window]
    summary = {
        "visibility": args.visibility,
        "violation_window_deg": window,
        "argmax_delta_deg": _deg(res.argmax_delta),
        "max_S": res.max_S,
    }
    _emit(args.format, summary, rows=rows)
    return 0


def cmd_optimize(args) -> int:
    opt = optimize_category_I(CorrelationModel(args.visibility), seed=args.seed)
    if args.emit_settings:
        dump_settings(opt.settings, args.emit_settings)
    record = {
        "category": "I",
        "visibility": args.visibility,
        "beta_deg": _deg(opt.beta),
        "tan_half_beta": math.tan(opt.beta / 2.0),
        "L": opt.report.bound_report.L,
        "bound": opt.report.bound,
        "lhs": opt.report.lhs,
        "S": opt.report.S,
        "threshold_visibility": threshold_visibility(opt.settings),
        "max_perturbation_gain": opt.max_perturbation_gain,
        "locally_optimal": opt.locally_optimal,
    }
    _emit(args.format, record)
    return 0


def cmd_oracle(args) -> int:
    if args.e is not None:
        triples = [tuple(UnitVec3.of(v) for v in _parse_triple(args.e, "--e"))]
    else:
        triples = random_independent_triples(np.random.default_rng(args.seed), args.random)
    step = _angle(args, args.step) if args.step is not None else DEFAULT_COARSE_STEP
    rows = []
    for e in triples:
        check = vertex_minimum_check(*e, coarse_step=step)
        closed = min_abs_projection_closed_form(*e)
        angles = (angle_between(e[0], e[1]), angle_between(e[1], e[2]), angle_between(e[2], e[0]))
        rows.append({
            "closed_form": closed,
            "angle_form": min_abs_projection_angle_form(*angles),
            "vertex_min": check.vertex_min,
            "brute_force": check.global_min,
            "abs_error": abs(check.global_min - closed),
            "agrees": check.agrees,
        })
    all_agree = all(r["agrees"] for r in rows)
    if args.format == "csv":
        _emit("csv", rows=rows)
    else:
        summary = {"n_triples": len(rows), "max_abs_error": max(r["abs_error"] for r in rows),
                   "all_agree": all_agree}
        _emit(args.format, summary, rows=rows)
    return 0 if all_agree else 1


def cmd_hvcheck(args) -> int:
    if args.table is not None:
        tables = [OutcomeTable.from_csv(args.table)]
    else:
        rng = np.random.default_rng(args.seed)
        tables = [random_table(rng) for _ in range(args.random)]
    identity = all(check_pointwise_identity(a, b) for a, b in itertools.product((-1, 1), repeat=2))
    sub_fail = tri_fail = 0
    rows = []
    for t in tables:
        sub, tri = check_subensemble_inequality(t), check_triangle_step(t)
        sub_fail += not sub.holds
        tri_fail += not tri.holds
        if args.table is not None:
            rows.append({"check": "subensemble", "lhs_plus": sub.lhs_plus, "rhs_plus": sub.rhs_plus,
                         "lhs_minus": sub.lhs_minus, "rhs_minus": sub.rhs_minus, "holds": sub.holds})
            rows.append({"check": "triangle", "lhs_plus": tri.lhs_plus, "rhs_plus": tri.rhs_plus,
                         "lhs_minus": tri.lhs_minus, "rhs_minus": tri.rhs_minus, "holds": tri.holds})
    ok = identity and sub_fail == 0 and tri_fail == 0
    summary = {"pointwise_identity": identity, "n_tables": len(tables),
               "subensemble_failures": sub_fail, "triangle_failures": tri_fail, "all_hold": ok}
    if args.format == "csv" and rows:
        _emit("csv", rows=rows)
    else:
        _emit(args.format, summary, rows=rows or None)
    return 0 if ok else 1


def cmd_robustness(args) -> int:
    s = _settings(args)
    rep = robustness_sweep(s, CorrelationModel(args.visibility), _angle(args, args.epsilon),
                           n_samples=args.samples, seed=args.seed)
    record = {
        "category": s.category,
        "visibility": args.visibility,
        "epsilon_deg": _deg(rep.epsilon),
        "n_samples": rep.n_samples,
        "seed": rep.seed,
        "nominal_S": rep.nominal_S,
        "nominal_bound": rep.nominal_bound,
        "nominal_lhs": rep.nominal_lhs,
        "sup_bound": rep.sup_bound,
        "inf_lhs": rep.inf_lhs,
        "conclusive_margin": rep.conclusive_margin,
        "conclusive": rep.conclusive_margin > 0,
    }
    _emit(args.format, record)
    return 0


def cmd_reproduce(args) -> int:
    rows = reproduce_headline(args.visibility, seed=args.seed, oracle_triples=args.oracle_triples)
    all_pass = all(r.passed for r in rows)
    if args.format == "json":
        _emit("json", {"visibility": args.visibility, "seed": args.seed, "all_pass": all_pass},
              rows=rows_as_dicts(rows))
    elif args.format == "csv":
        _emit("csv", rows=rows_as_dicts(rows))
    else:
        out = sys.stdout
        for r in rows:
            status = "PASS" if r.passed else "FAIL"
            out.write(f"{status}  {r.name}: computed={_human(r.computed)} expected={_human(r.expected)}"
                      f" tol={r.tolerance:g}{(' ' + r.unit) if r.unit else ''}"
                      f"{('  (' + r.note + ')') if r.note else ''}\n")
        out.write(f"{'ALL PASS' if all_pass else 'SOME ROWS FAILED'}\n")
    return 0 if all_pass else 1


# --------------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=os.environ.get(FORMAT_ENV, "human"),
                        help=f"output format (default: ${FORMAT_ENV} or human)")
    common.add_argument("--radians", action="store_true", help="read angle arguments as radians")
    common.add_argument("--visibility", type=float, default=1.0, help="singlet visibility V in [0, 1]")
    common.add_argument("--seed", type=int, default=0)

    settings = argparse.ArgumentParser(add_help=False)
    g = settings.add_argument_group("settings")
    g.add_argument("--settings-file", help="JSON settings file")
    g.add_argument("--category", choices=("I", "II"), help="assert the settings category")
    g.add_argument("--structured", type=float, metavar="BETA",
                   help="category I: orthonormal difference directions, common pair angle BETA")
    g.add_argument("--symmetric", type=float, metavar="DELTA",
                   help="category II: cone of Bob settings with pairwise angle DELTA")
    g.add_argument("--a", help="Alice settings 'x,y,z;x,y,z;x,y,z'")
    g.add_argument("--b", help="Bob settings b")
    g.add_argument("--b2", help="Bob settings b2 (category I)")
    g.add_argument("--emit-settings", metavar="PATH", help="write the resolved settings as JSON")

    p = argparse.ArgumentParser(prog="lnrbounds", description=__doc__.split("\n\n")[0],
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("bound", parents=[common, settings], help="LNR bound for given settings")
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("violation", parents=[common, settings],
                        help="QM left-hand side, bound, S = lhs - bound and ratio = bound/lhs")
    sp.set_defaults(func=cmd_violation)

    sp = sub.add_parser("scan", parents=[common], help="scan the symmetric category II family")
    sp.add_argument("--from", dest="lo", type=float, default=90.0)
    sp.add_argument("--to", dest="hi", type=float, default=120.0)
    sp.add_argument("--step", type=float, default=math.degrees(DEFAULT_SCAN_STEP))
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("optimize", parents=[common], help="maximal category I violation")
    sp.add_argument("--emit-settings", metavar="PATH")
    sp.set_defaults(func=cmd_optimize)

    sp = sub.add_parser("oracle", parents=[common], help="brute-force check of the minimum formula")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--e", help="three vectors 'x,y,z;x,y,z;x,y,z'")
    src.add_argument("--random", type=int, metavar="N", help="N random independent triples")
    sp.add_argument("--step", type=float, help="coarse grid step (default 0.02 rad)")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("hvcheck", parents=[common], help="outcome-table checks of the derivation steps")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--table", help="CSV with header weight,A,B,B2")
    src.add_argument("--random", type=int, metavar="N", help="N random tables")
    sp.set_defaults(func=cmd_hvcheck)

    sp = sub.add_parser("robustness", parents=[common, settings],
                        help="sup of bounds / inf of lhs under setting imprecision")
    sp.add_argument("--epsilon", type=float, required=True, help="max misalignment per vector")
    sp.add_argument("--samples", type=int, default=10_000)
    sp.set_defaults(func=cmd_robustness)

    sp = sub.add_parser("reproduce", parents=[common], help="recompute every headline number")
    sp.add_argument("--oracle-triples", type=int, default=100)
    sp.set_defaults(func=cmd_reproduce)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (UsageError, SettingsFormatError) as exc:
        print(f"lnrbounds {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (LNRError, ValueError, OSError) as exc:
        print(f"lnrbounds {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
