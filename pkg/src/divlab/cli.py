"""Command-line front end and experiment orchestration.

Exit codes: 0 all assertions passed, 1 assertion failure, 2 usage error,
3 resource-cap refusal.  Reports are written as JSON (--json) and result
tables as CSV (--csv).  Identical argv, including the seed, reproduces
byte-identical result tables.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from fractions import Fraction
from typing import Optional

from . import booleanlab as bl
from . import bounds, extremal, runstat, shiftlex, verify
from .bitfam import (
    are_cross_intersecting,
    family_from_text,
    family_to_text,
    is_t_intersecting,
    load_family,
    make_family,
    save_family,
    stats,
)
from .constructions import (
    build_dictator_defining,
    build_hub_block_family,
    build_majority_defining,
    build_run_dominance_defining,
    build_window_majority,
    fano_plane,
    full_uniform_family,
    lift_junta,
    star,
)
from .errors import ResourceCapError
from .report import Report

LIFT_CAP = 1 << 26


def parse_bias(text: str):
    """'1/2' -> Fraction (exact mode); '0.45' -> float (approximate mode)."""
    if "/" in text:
        return Fraction(text)
    return float(text)


def parse_r_range(text: str) -> list[int]:
    """'2..10' -> [2,...,10]; '5' -> [5]; '2,5,7' -> [2,5,7]."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    if "," in text:
        return [int(x) for x in text.split(",") if x]
    return [int(text)]


def word_from_string(text: str) -> tuple[int, int]:
    """Binary word literal, most significant character = position 1."""
    if not text or any(c not in "01" for c in text):
        raise ValueError(f"word literal must be nonempty over 0/1, got {text!r}")
    mask = 0
    for pos, c in enumerate(text, start=1):
        if c == "1":
            mask |= 1 << (pos - 1)
    return mask, len(text)


def _cap_check(n: int, k: int) -> None:
    if math.comb(n, k) > LIFT_CAP:
        raise ResourceCapError(f"C({n},{k}) exceeds the enumeration cap 2^26")


def _resolve_threads(value: Optional[int]) -> int:
    if value is not None:
        return value
    env = os.environ.get("DIVLAB_THREADS")
    return int(env) if env else 0


def _junta_for(args) -> object:
    kind = args.family
    if kind == "run-dominance":
        return build_run_dominance_defining(args.r)
    if kind == "window-majority":
        return build_majority_defining(args.r)
    if kind == "dictator":
        return build_dictator_defining(2 * args.r + 1)
    raise ValueError(f"unknown junta family {kind!r}")


def _dry_report(args, parameters: dict) -> Report:
    report = Report(command=f"{args.command}-dry-run", parameters=parameters)
    report.note("dry-run: parameters validated, nothing computed")
    return report.finish()


# ---------------------------------------------------------------------------
# command handlers (each returns a Report or a list of Reports)
# ---------------------------------------------------------------------------


def cmd_family(args) -> Report:
    if args.action == "build":
        n, k = args.n, args.k
        _cap_check(n, k)
        params = {"kind": args.kind, "n": n, "k": k, "u": args.u, "r": args.r}
        if args.dry_run:
            return _dry_report(args, params)
        if args.kind == "hub-block":
            fam = build_hub_block_family(n, k, args.u)
        elif args.kind == "window-majority":
            fam = build_window_majority(n, k, args.r)
        elif args.kind == "star":
            fam = star(n, k)
        elif args.kind == "full":
            fam = full_uniform_family(n, k)
        elif args.kind == "fano":
            fam = fano_plane()
        elif args.kind == "run-dominance-lift":
            fam = lift_junta(build_run_dominance_defining(args.r), n, k)
        else:
            raise ValueError(f"unknown family kind {args.kind!r}")
        report = Report(command="family-build", parameters=params)
        st = stats(fam)
        report.add_table(
            "rows",
            [
                {
                    "size": st.size,
                    "max_degree": st.max_degree,
                    "max_degree_element": st.max_degree_element,
                    "diversity": st.diversity,
                    "intersecting": is_t_intersecting(fam, 1),
                }
            ],
        )
        if args.out:
            save_family(fam, args.out)
            report.note(f"family written to {args.out}")
        return report.finish()
    if args.action == "stats":
        params = {"in": args.infile}
        if args.dry_run:
            return _dry_report(args, params)
        fam = load_family(args.infile)
        st = stats(fam)
        report = Report(command="family-stats", parameters=params)
        report.add_table(
            "rows",
            [
                {
                    "n": fam.n,
                    "k": fam.k,
                    "size": st.size,
                    "max_degree": st.max_degree,
                    "max_degree_element": st.max_degree_element,
                    "diversity": st.diversity,
                }
            ],
        )
        report.add_table(
            "degrees", [{"element": i + 1, "degree": d} for i, d in enumerate(st.degrees)]
        )
        return report.finish()
    if args.action == "check":
        params = {"in": args.infile, "t": args.t, "cross": args.cross}
        if args.dry_run:
            return _dry_report(args, params)
        fam = load_family(args.infile)
        report = Report(command="family-check", parameters=params)
        if args.cross:
            other = load_family(args.cross)
            report.check("cross_intersecting", True, are_cross_intersecting(fam, other))
        else:
            report.check(f"{args.t}_intersecting", True, is_t_intersecting(fam, args.t))
        return report.finish()
    raise ValueError(f"unknown family action {args.action!r}")


def cmd_decompose(args) -> Report:
    params = {"in": args.infile}
    if args.dry_run:
        return _dry_report(args, params)
    fam = load_family(args.infile)
    return bounds.verify_triangle_chain(fam)


def cmd_lemma_sweep(args) -> Report:
    single = args.m is not None
    params = {
        "m": args.m,
        "a": args.a,
        "b": args.b,
        "cprime": args.cprime,
        "m_max": args.m_max,
    }
    if args.dry_run:
        return _dry_report(args, params)
    report = Report(command="lemma-sweep", parameters=params)
    if single:
        rep = bounds.verify_cross_weighted_bound(
            args.m, args.a, args.b, args.cprime, keep_rows=True
        )
        report.add_table("rows", rep.rows)
        report.check("violations", 0, len(rep.violations))
        report.check("worst_slack_nonnegative", True, rep.worst_slack >= 0)
    else:
        tuples = bounds.admissible_cross_bound_tuples(
            args.m_max, args.a_max, args.b_max, tuple(args.cprime_list)
        )
        rows = []
        violations = 0
        for m, a, b, w in tuples:
            rep = bounds.verify_cross_weighted_bound(m, a, b, w)
            violations += len(rep.violations)
            rows.append(
                {
                    "m": m,
                    "a": a,
                    "b": b,
                    "cprime": w,
                    "b_cap": rep.b_cap,
                    "worst_slack": rep.worst_slack,
                    "violations": len(rep.violations),
                }
            )
        report.add_table("rows", rows)
        report.check("violations", 0, violations)
    return report.finish()


def cmd_lex(args) -> Report:
    params = {"op": args.op}
    if args.op == "segment":
        params.update({"m": args.m, "k": args.k, "n": args.n})
        if args.dry_run:
            return _dry_report(args, params)
        seg = shiftlex.lex_segment(args.m, args.k, args.n)
        report = Report(command="lex-segment", parameters=params)
        report.add_table(
            "rows", [{"set": ",".join(map(str, s))} for s in seg.realized.member_sets()]
        )
        return report.finish()
    if args.op == "partner-max":
        params.update({"b_size": args.b_size, "a": args.a, "b": args.b, "m": args.m})
        if args.dry_run:
            return _dry_report(args, params)
        value = shiftlex.lex_partner_max(args.b_size, args.a, args.b, args.m)
        report = Report(command="lex-partner-max", parameters=params)
        report.add_table("rows", [{"a_max": value}])
        return report.finish()
    raise ValueError(f"unknown lex op {args.op!r}")


def cmd_shift(args) -> Report:
    params = {"in": args.infile, "op": args.op, "i": args.i, "j": args.j}
    if args.dry_run:
        return _dry_report(args, params)
    fam = load_family(args.infile)
    report = Report(command=f"shift-{args.op}", parameters=params)
    if args.op == "closure":
        out = shiftlex.shift_closure(fam)
        report.check("closure_is_shifted", True, shiftlex.is_shifted(out))
        report.check("size_preserved", len(fam), len(out))
    elif args.op == "apply":
        if args.i is None or args.j is None:
            raise ValueError("shift apply needs --i and --j")
        out = shiftlex.shift_family(fam, args.i, args.j)
        report.check("size_preserved", len(fam), len(out))
    elif args.op == "is-shifted":
        report.add_table("rows", [{"is_shifted": shiftlex.is_shifted(fam)}])
        out = None
    else:
        raise ValueError(f"unknown shift op {args.op!r}")
    if args.out and out is not None:
        save_family(out, args.out)
        report.note(f"family written to {args.out}")
    return report.finish()


def cmd_boolean(args) -> Report:
    if args.action == "counterexample-table":
        r_values = parse_r_range(args.r)
        if args.dry_run:
            return _dry_report(args, {"r_values": r_values})
        return bl.counterexample_table(r_values)
    spec_params = {"family": args.family, "r": args.r}
    if args.dry_run:
        return _dry_report(args, spec_params)
    r_values = parse_r_range(args.r)
    if len(r_values) != 1:
        raise ValueError(f"{args.action} takes a single r, got {args.r!r}")
    args.r = r_values[0]
    spec = _junta_for(args)
    if args.action == "mu":
        p = parse_bias(args.p)
        m = bl.biased_measure(spec, p)
        report = Report(command="boolean-mu", parameters={**spec_params, "p": p})
        report.add_table("rows", [{"mu_exact": m.exact, "mu": m.approx}])
        return report.finish()
    if args.action == "influence":
        p = parse_bias(args.p)
        report = Report(
            command="boolean-influence",
            parameters={**spec_params, "p": p, "mode": args.mode},
        )
        if args.i is not None:
            m = bl.coordinate_influence(spec, args.i, p, args.mode)
            report.add_table("rows", [{"i": args.i, "influence_exact": m.exact, "influence": m.approx}])
        else:
            prof = bl.total_influence(spec, p)
            rows = [
                {"i": i + 1, "influence_exact": m.exact, "influence": m.approx}
                for i, m in enumerate(prof.per_coordinate)
            ]
            rows.append({"i": "total", "influence_exact": prof.total.exact, "influence": prof.total.approx})
            report.add_table("rows", rows)
        return report.finish()
    if args.action == "gammap":
        p = parse_bias(args.p)
        m = bl.biased_diversity(spec, p)
        report = Report(command="boolean-gammap", parameters={**spec_params, "p": p})
        report.add_table("rows", [{"gamma_p_exact": m.exact, "gamma_p": m.approx}])
        return report.finish()
    if args.action == "russo":
        return bl.russo_check(spec, args.p0, args.h)
    raise ValueError(f"unknown boolean action {args.action!r}")


def cmd_rho(args) -> Report:
    if args.action == "dist":
        params = {"L": args.L, "mode": args.mode, "samples": args.samples}
        if args.dry_run:
            if args.mode == "exact" and args.L > runstat.EXACT_CAP_L:
                raise ResourceCapError(f"exact enumeration capped at length {runstat.EXACT_CAP_L}")
            return _dry_report(args, params)
        return runstat.rho_distribution(args.L, args.mode, args.samples, args.seed)
    if args.action == "profile":
        mask, length = word_from_string(args.word)
        params = {"word": args.word, "t": args.t}
        if args.dry_run:
            return _dry_report(args, params)
        profile = runstat.run_profile(mask, length)
        comparison = runstat.compare_run_profiles(mask, length)
        report = Report(command="rho-profile", parameters=params)
        row = {
            "ones_runs": ",".join(map(str, profile.ones)),
            "zeros_runs": ",".join(map(str, profile.zeros)),
            "weight": profile.weight,
            "tie_len": comparison.tie_len,
            "ones_dominant": comparison.ones_dominant,
        }
        if args.t is not None:
            row[f"runs_ge_{args.t}"] = runstat.count_long_runs(mask, length, args.t)
        report.add_table("rows", [row])
        return report.finish()
    raise ValueError(f"unknown rho action {args.action!r}")


def cmd_extremal(args) -> Report:
    params = {"n": args.n, "k": args.k, "budget": args.budget, "enumerate": args.enumerate}
    _cap_check(args.n, args.k)
    if args.dry_run:
        return _dry_report(args, params)
    report = Report(command="extremal", parameters=params)
    if args.enumerate:
        enum = extremal.enumerate_maximal_intersecting(args.n, args.k, cap=args.cap)
        best = max((stats(f).diversity for f in enum.families), default=0)
        report.add_table(
            "rows",
            [
                {
                    "maximal_families": len(enum.families),
                    "max_diversity": best,
                    "complete": enum.complete,
                }
            ],
        )
        if not enum.complete:
            report.note("enumeration stopped at the cap; results are partial")
        return report.finish()
    res = extremal.max_diversity_search(args.n, args.k, budget_seconds=args.budget)
    report.add_table(
        "rows",
        [
            {
                "best_diversity": res.best_diversity,
                "complete": res.complete,
                "node_count": res.node_count,
                "witness_size": len(res.witness),
            }
        ],
    )
    report.check("witness_diversity_consistent", res.best_diversity, stats(res.witness).diversity)
    if args.emit_witness:
        save_family(res.witness, args.emit_witness)
        report.note(f"witness written to {args.emit_witness}")
    return report.finish()


def cmd_verify_all(args) -> list[Report]:
    if args.dry_run:
        return [_dry_report(args, {"quick": args.quick})]
    return verify.run_all(quick=args.quick)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="divlab",
        description="Exact verification workbench for diversity of intersecting families",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None, help="0 = auto (default from DIVLAB_THREADS)")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--json", dest="json_path", default=None, help="write the report as JSON")
    common.add_argument("--csv", dest="csv_path", default=None, help="write result tables as CSV")
    common.add_argument("--budget", type=float, default=60.0, help="time budget in seconds")
    common.add_argument("--quick", action="store_true")
    common.add_argument("--dry-run", action="store_true", help="validate parameters without computing")

    sub = parser.add_subparsers(dest="command", required=True)

    p_family = sub.add_parser("family", parents=[common], help="build, inspect or check families")
    p_family.add_argument("action", choices=["build", "stats", "check"])
    p_family.add_argument("--kind", default="hub-block",
                          choices=["hub-block", "window-majority", "star", "full", "fano", "run-dominance-lift"])
    p_family.add_argument("--n", type=int, default=7)
    p_family.add_argument("--k", type=int, default=3)
    p_family.add_argument("--u", type=int, default=2)
    p_family.add_argument("--r", type=int, default=1)
    p_family.add_argument("--t", type=int, default=1)
    p_family.add_argument("--in", dest="infile", default=None)
    p_family.add_argument("--cross", default=None, help="second family file for a cross check")
    p_family.add_argument("--out", default=None)

    p_dec = sub.add_parser("decompose", parents=[common], help="triangle-center decomposition report")
    p_dec.add_argument("--in", dest="infile", required=False, default=None)

    p_lemma = sub.add_parser("lemma-sweep", parents=[common], help="cross-intersecting weighted size bound sweep")
    p_lemma.add_argument("--m", type=int, default=None)
    p_lemma.add_argument("--a", type=int, default=None)
    p_lemma.add_argument("--b", type=int, default=None)
    p_lemma.add_argument("--cprime", type=int, default=2)
    p_lemma.add_argument("--m-max", type=int, default=14)
    p_lemma.add_argument("--a-max", type=int, default=4)
    p_lemma.add_argument("--b-max", type=int, default=4)
    p_lemma.add_argument("--cprime-list", type=int, nargs="+", default=[2, 3])

    p_lex = sub.add_parser("lex", parents=[common], help="lexicographic segments and partner scans")
    p_lex.add_argument("--op", choices=["segment", "partner-max"], required=True)
    p_lex.add_argument("--m", type=int, default=0)
    p_lex.add_argument("--k", type=int, default=2)
    p_lex.add_argument("--n", type=int, default=5)
    p_lex.add_argument("--a", type=int, default=2)
    p_lex.add_argument("--b", type=int, default=2)
    p_lex.add_argument("--b-size", type=int, default=0)

    p_shift = sub.add_parser("shift", parents=[common], help="(i,j)-shifts and shift closure")
    p_shift.add_argument("--in", dest="infile", required=False, default=None)
    p_shift.add_argument("--op", choices=["closure", "apply", "is-shifted"], default="closure")
    p_shift.add_argument("--i", type=int, default=None)
    p_shift.add_argument("--j", type=int, default=None)
    p_shift.add_argument("--out", default=None)

    p_bool = sub.add_parser("boolean", parents=[common], help="biased measures and influences on junta centers")
    p_bool.add_argument("action", choices=["mu", "influence", "gammap", "russo", "counterexample-table"])
    p_bool.add_argument("--family", default="run-dominance",
                        choices=["run-dominance", "window-majority", "dictator"])
    p_bool.add_argument("--r", default="2", help="window parameter, or a range like 2..10 for the table")
    p_bool.add_argument("--p", default="1/2", help="bias: a fraction '2/5' (exact) or a float '0.4'")
    p_bool.add_argument("--i", type=int, default=None, help="coordinate for influence")
    p_bool.add_argument("--mode", choices=["general", "monotone"], default="general")
    p_bool.add_argument("--p0", type=float, default=0.45)
    p_bool.add_argument("--h", type=float, default=1e-4)

    p_rho = sub.add_parser("rho", parents=[common], help="run-profile tie statistics")
    p_rho.add_argument("action", choices=["dist", "profile"])
    p_rho.add_argument("--L", type=int, default=11)
    p_rho.add_argument("--mode", choices=["exact", "mc"], default="exact")
    p_rho.add_argument("--samples", type=int, default=None)
    p_rho.add_argument("--word", default=None, help="binary literal, leftmost char = position 1")
    p_rho.add_argument("--t", type=int, default=None)

    p_ext = sub.add_parser("extremal", parents=[common], help="maximum-diversity search")
    p_ext.add_argument("--n", type=int, required=True)
    p_ext.add_argument("--k", type=int, required=True)
    p_ext.add_argument("--enumerate", action="store_true", help="enumerate maximal families instead of searching")
    p_ext.add_argument("--cap", type=int, default=None)
    p_ext.add_argument("--emit-witness", default=None)

    sub.add_parser("verify-all", parents=[common], help="run the acceptance criteria")

    return parser


_HANDLERS = {
    "family": cmd_family,
    "decompose": cmd_decompose,
    "lemma-sweep": cmd_lemma_sweep,
    "lex": cmd_lex,
    "shift": cmd_shift,
    "boolean": cmd_boolean,
    "rho": cmd_rho,
    "extremal": cmd_extremal,
    "verify-all": cmd_verify_all,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    threads = _resolve_threads(args.threads)
    try:
        result = _HANDLERS[args.command](args)
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 3
    except (ValueError, FileNotFoundError, TypeError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2

    reports = result if isinstance(result, list) else [result]
    for rep in reports:
        rep.parameters.setdefault("threads", threads)
        if args.seed is not None:
            rep.seed = rep.seed if rep.seed is not None else args.seed
        for line in rep.summary_lines():
            print(line)
    if args.command == "verify-all" and not args.dry_run:
        combined = Report(command="verify-all", parameters={"quick": args.quick, "threads": threads})
        for rep in reports:
            combined.check(rep.command, True, rep.ok)
        combined.add_table(
            "criteria",
            [
                {"criterion": rep.command, "ok": rep.ok, "duration_s": rep.duration_s}
                for rep in reports
            ],
        )
        combined.finish()
        reports = reports + [combined]
        print(f"verify-all: {'PASS' if combined.ok else 'FAIL'}")
    if args.json_path:
        payload = reports[0] if len(reports) == 1 else None
        if payload is not None:
            payload.write_json(args.json_path)
        else:
            import json as _json

            with open(args.json_path, "w", encoding="utf-8") as fh:
                _json.dump(
                    {"schema": 1, "reports": [r.to_json_dict() for r in reports]}, fh, indent=2
                )
                fh.write("\n")
    if args.csv_path:
        target = reports[-1] if args.command == "verify-all" else reports[0]
        target.write_csv(args.csv_path)
    return 0 if all(r.ok for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
