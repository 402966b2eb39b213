"""Command-line interface.

Subcommands: compute (manifest + request -> exact report), check (property
suites), walls (bounded wall enumeration), fixture (synthetic manifests).
Reports are byte-deterministic JSON: rerunning a command on the same
inputs yields identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import checks, fixtures
from . import invariants as inv
from . import walls as walls_mod
from .cli_util import frac_str, load_manifest, load_request, parse_rational
from .errors import HypothesisError, LedgerError
from .invariants import CaseLabel, SpinUData
from .lattice import CohClass


def _maybe_frac(x):
    return None if x is None else frac_str(x)


def _request_echo(req):
    return {
        "w": list(req.w.coords),
        "lambda": list(req.lam.coords),
        "p1": req.p1,
        "z": {
            "delta0": req.z.delta0,
            "delta1": req.z.delta1,
            "delta2": req.z.delta2,
            "theta_tag": req.z.theta_tag,
            "contains_h3": req.z.contains_h3,
        },
        "h_pd": [frac_str(v) for v in req.h_pd],
        "period_point": None
        if req.period_point is None
        else [frac_str(v) for v in req.period_point],
        "truncation": req.truncation,
        "method": req.method,
    }


def _witten_block(X, t, truncation):
    applicable = (
        X.b1 == 0
        and X.b2_plus >= 3
        and X.b2_plus % 2 == 1
        and X.effective
        and inv.simple_type_check(X)
        and all(
            inv.lat.pairing(X.lattice, t.lam, e.c1) == 0 for e in X.basic_classes
        )
        and inv.lat.square(X.lattice, t.lam) == 2 - (X.chi + X.sigma)
        and inv.c_of(X).denominator == 1
        and truncation >= int(inv.c_of(X))
    )
    if not applicable:
        return {"applicable": False}
    rep = inv.witten_compare(X, t, truncation)
    return {
        "applicable": True,
        "c_x": rep.c_x,
        "sw_vanish_order": rep.sw_vanish_order,
        "d_vanish_ok": rep.d_vanish_ok,
        "sw_vanish_ok": rep.sw_vanish_ok,
        "congruence_ok": rep.congruence_ok,
        "residuals_ok": rep.residuals_ok,
        "corollary_residuals": [
            {"d": d, "zero": ok, "residual": res}
            for d, ok, res in rep.corollary_residuals
        ],
        "donaldson_series": rep.donaldson_series.serialize(),
        "sw_series": rep.sw_series.serialize(),
    }


def run_compute(bundle, req):
    """Dispatch a request against a manifold; returns (report, exit_code)."""
    X = bundle.manifold
    deg = req.z.degree
    report = {
        "tool": "monopole-ledger",
        "command": "compute",
        "manifest_name": bundle.name,
        "sw_data_note": (
            "Seiberg-Witten inputs are taken from the manifest as supplied; "
            "manifests named 'fixture:*' carry synthetic values."
        ),
        "request": _request_echo(req),
    }
    gate = inv.mod8_gate(X, req.w, deg)
    if req.p1 is None and not gate:
        report["derived"] = {
            "chi": X.chi,
            "sigma": X.sigma,
            "c_x": frac_str(inv.c_of(X)),
            "kappa": frac_str(inv.kappa_of(X, deg)),
            "p1": None,
        }
        report["case"] = CaseLabel.MOD8_FAIL.value
        report["value"] = frac_str(0)
        report["relation_residual"] = None
        report["per_class"] = []
        report["chamber"] = None
        report["oracle_agreement"] = {
            "link_routes": None,
            "simple_type_route": None,
            "h_normalization_divergent": False,
        }
        report["witten"] = {"applicable": False}
        return report, 0

    p1 = req.p1 if req.p1 is not None else inv.derive_p1(X, deg)
    t = SpinUData(lam=req.lam, p1=p1, w=req.w)
    result = inv.donaldson_invariant(
        X, t, req.z, req.h_pd, period_point=req.period_point, method=req.method
    )
    dims = inv.dimension_report(X, t)
    rv = inv.r_values(X, t)
    report["derived"] = {
        "chi": X.chi,
        "sigma": X.sigma,
        "c_x": frac_str(dims.c_x),
        "kappa": frac_str(inv.kappa_of(X, deg)),
        "p1": p1,
        "d_a": dims.d_a,
        "n_a": dims.n_a,
        "i_lambda": frac_str(dims.i_lambda),
        "r_table": [
            {
                "c1": list(entry.c1.coords),
                "r": r,
                "level": inv.level(t, entry.c1, X.lattice),
                "orientation": inv.orientation_sign(t, entry.c1, X.lattice),
            }
            for entry, r in rv.table
        ],
        "r_min": rv.r_min,
    }
    report["case"] = result.case.value
    report["value"] = _maybe_frac(result.value)
    report["relation_residual"] = _maybe_frac(result.relation_residual)
    report["per_class"] = [
        {
            "c1": row["c1"],
            "r": row["r"],
            "level": row["level"],
            "orientation": row["orientation"],
            "d": row["d"],
            "H": _maybe_frac(row["H"]),
            "sw": _maybe_frac(row["sw"]),
            "term": _maybe_frac(row["term"]),
        }
        for row in result.rows
    ]
    report["chamber"] = result.chamber

    st_value = None
    st_agrees = None
    st_applicable = (
        X.b1 == 0
        and X.b2_plus >= 3
        and X.b2_plus % 2 == 1
        and X.effective
        and inv.simple_type_check(X)
        and req.z.delta1 == 0
        and not req.z.contains_h3
        and deg % 2 == 0
        and all(
            inv.lat.pairing(X.lattice, t.lam, e.c1) == 0 for e in X.basic_classes
        )
    )
    if st_applicable:
        st_case, st_val, _ = inv.donaldson_simple_type(
            X, t, deg // 2, req.z.delta0, req.h_pd
        )
        st_value = st_val
        if st_val is not None and result.value is not None:
            st_agrees = st_val == result.value
    report["oracle_agreement"] = {
        "link_routes": True if req.method == "both" else None,
        "simple_type_route": st_agrees,
        "h_normalization_divergent": result.h_normalization_divergent,
    }
    report["simple_type_value"] = _maybe_frac(st_value)
    report["witten"] = _witten_block(X, t, req.truncation)

    exit_code = 2 if result.case is CaseLabel.OUT_OF_THEOREM else 0
    return report, exit_code


def run_walls(bundle, w_coords, p1, level_max, bound, omega):
    X = bundle.manifold
    L = X.lattice
    if X.b2_plus != 1:
        raise HypothesisError("wall enumeration requires a b2+ = 1 manifold")
    w = CohClass(tuple(w_coords))
    found = walls_mod.enumerate_walls(L, w, p1, level_max, bound)
    rows = []
    for wall in found:
        row = {
            "alpha": list(wall.alpha.coords),
            "square": inv.lat.square(L, wall.alpha),
            "level": wall.level,
        }
        if omega is not None:
            row["chamber_sign"] = walls_mod.chamber_sign(L, omega, wall.alpha)
        rows.append(row)
    return {
        "tool": "monopole-ledger",
        "command": "walls",
        "manifest_name": bundle.name,
        "w": list(w.coords),
        "p1": p1,
        "level_max": level_max,
        "coeff_bound": bound,
        "omega": None if omega is None else [frac_str(v) for v in omega],
        "walls": rows,
    }


def run_check(suite, grid_bound):
    results = checks.run_suite(suite, grid_bound=grid_bound)
    report = {
        "tool": "monopole-ledger",
        "command": "check",
        "suite": suite,
        "grid_bound": grid_bound,
        "properties": [
            {
                "name": r.name,
                "passed": r.passed,
                "checked": r.checked,
                "counterexample": r.counterexample or None,
            }
            for r in results
        ],
        "all_passed": all(r.passed for r in results),
    }
    return report, 0 if report["all_passed"] else 3


def emit_report(report, out_path=None, fmt="json"):
    if fmt == "json":
        text = json.dumps(report, indent=2) + "\n"
    else:
        text = _as_table(report)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _flatten(prefix, value, rows):
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    elif isinstance(value, list):
        if all(not isinstance(v, (dict, list)) for v in value):
            rows.append((prefix, json.dumps(value)))
        else:
            for i, v in enumerate(value):
                _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, json.dumps(value)))


def _as_table(report):
    rows = []
    _flatten("", report, rows)
    width = max((len(k) for k, _ in rows), default=0)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in rows)


def _csv_ints(text):
    return [int(v) for v in text.split(",")] if text else []


def _csv_rationals(text):
    return [parse_rational(v) for v in text.split(",")] if text else []


def build_parser():
    parser = argparse.ArgumentParser(
        prog="monopole-ledger",
        description=(
            "Exact calculator for low-degree Donaldson invariants from "
            "Seiberg-Witten basic-class data"
        ),
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_compute = sub.add_parser("compute", help="evaluate a request")
    p_compute.add_argument("-m", "--manifest", required=True)
    p_compute.add_argument("-r", "--request", required=True)
    p_compute.add_argument("--method", choices=("closed", "direct", "both"))
    p_compute.add_argument("--out")
    p_compute.add_argument("--format", choices=("json", "table"), default="json")

    p_check = sub.add_parser("check", help="run a property suite")
    p_check.add_argument("--suite", required=True, choices=sorted(checks.SUITES))
    p_check.add_argument("--grid-bound", type=int, default=6)
    p_check.add_argument("--out")
    p_check.add_argument("--format", choices=("json", "table"), default="json")

    p_walls = sub.add_parser("walls", help="enumerate bounded wall classes")
    p_walls.add_argument("-m", "--manifest", required=True)
    p_walls.add_argument("--w", required=True, help="comma-separated integers")
    p_walls.add_argument("--p1", required=True, type=int)
    p_walls.add_argument("--level-max", required=True, type=int)
    p_walls.add_argument("--bound", required=True, type=int)
    p_walls.add_argument("--omega", help="comma-separated rationals")
    p_walls.add_argument("--out")
    p_walls.add_argument("--format", choices=("json", "table"), default="json")

    p_fix = sub.add_parser("fixture", help="emit a synthetic manifest")
    p_fix.add_argument(
        "--kind", required=True, choices=("empty", "k3_like", "en_like", "asymmetric")
    )
    p_fix.add_argument("--n", type=int)
    p_fix.add_argument("--out", required=True)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.cmd == "compute":
            bundle = load_manifest(args.manifest)
            req = load_request(args.request, bundle.manifold.lattice.rank)
            if args.method:
                req = type(req)(
                    w=req.w,
                    lam=req.lam,
                    p1=req.p1,
                    z=req.z,
                    h_pd=req.h_pd,
                    period_point=req.period_point,
                    truncation=req.truncation,
                    method=args.method,
                    raw=req.raw,
                )
            report, code = run_compute(bundle, req)
            emit_report(report, args.out, args.format)
            return code
        if args.cmd == "check":
            report, code = run_check(args.suite, args.grid_bound)
            emit_report(report, args.out, args.format)
            return code
        if args.cmd == "walls":
            bundle = load_manifest(args.manifest)
            omega = _csv_rationals(args.omega) if args.omega else None
            report = run_walls(
                bundle, _csv_ints(args.w), args.p1, args.level_max, args.bound, omega
            )
            emit_report(report, args.out, args.format)
            return 0
        if args.cmd == "fixture":
            manifest = fixtures.gen_fixture(args.kind, args.n)
            text = json.dumps(manifest, indent=2) + "\n"
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
            sys.stdout.write(f"wrote {args.out}\n")
            return 0
        parser.error(f"unknown command {args.cmd}")
    except LedgerError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.exit_code
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
