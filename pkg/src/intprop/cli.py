"""Command-line front end: run benchmarks or problem files, report statistics.

Examples::

    intprop --problem sumprod --n 13 --variant pu --stats json
    intprop --problem cubes --variant fe --max-nodes 1000
    intprop --problem file:puzzle.csp --compare --stats csv
    intprop --problem opt --variant du --print-solutions

Exit status: 0 on success, 1 when a required solution does not exist,
2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .bench import BENCHMARKS, build_benchmark
from .decompose import VARIANTS
from .model import CSP, ParseError, parse
from .search import Infeasible, SearchStats, maximize, solve_all

_OPS = ("root", "exp", "div", "multI", "multF", "sum", "q_div", "q_sum")


def _report(stats: SearchStats, extra: dict) -> dict:
    rep = {
        "variant": stats.variant,
        "division": stats.division,
        "schedule": "generated" if stats.mode == "scheduled" else "cycle",
        "nvar": stats.nvar,
        "n_drf": stats.n_rules,
        "nodes": stats.nodes,
        "drf_applications": stats.drf_applications,
        "percent_effective": round(stats.percent_effective, 2),
        "solutions": stats.solutions,
        "complete": stats.complete,
        "elapsed": round(stats.elapsed, 3),
        "ops": stats.counters.as_dict(),
    }
    rep.update(extra)
    return rep


_COLUMNS = ("variant nvar nDRF nodes applied %eff sol time(s) "
            "root exp div multI multF sum q_div q_sum total").split()


def _table(reports: List[dict]) -> str:
    rows = []
    for r in reports:
        ops = r["ops"]
        rows.append([
            r["variant"], r["nvar"], r["n_drf"], r["nodes"],
            r["drf_applications"], "%.2f" % r["percent_effective"],
            r["solutions"], "%.2f" % r["elapsed"],
            ops["root"], ops["exp"], ops["div"], ops["multI"],
            ops["multF"], ops["sum"], ops["q_div"], ops["q_sum"],
            ops["total"],
        ])
    widths = [max(len(h), max(len(str(row[i])) for row in rows))
              for i, h in enumerate(_COLUMNS)]
    out = ["  ".join(h.rjust(w) for h, w in zip(_COLUMNS, widths))]
    for row in rows:
        out.append("  ".join(str(c).rjust(w) for c, w in zip(row, widths)))
    return "\n".join(out)


def _csv(reports: List[dict]) -> str:
    head = ["variant", "division", "schedule", "nvar", "n_drf", "nodes",
            "drf_applications", "percent_effective", "solutions",
            "complete", "elapsed"] + list(_OPS) + ["total"]
    lines = [",".join(head)]
    for r in reports:
        row = [str(r[k]) for k in head[:11]]
        row += [str(r["ops"][k]) for k in _OPS]
        row.append(str(r["ops"]["total"]))
        lines.append(",".join(row))
    return "\n".join(lines)


def _load_problem(spec: str, n: Optional[int]) -> CSP:
    if spec.startswith("file:"):
        path = spec[5:]
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise SystemExit("intprop: cannot read %s: %s" % (path, e.strerror))
        return parse(text)
    return build_benchmark(spec, n)


def main(argv: Optional[List[str]] = None) -> int:
    ap = argparse.ArgumentParser(
        prog="intprop",
        description="Constraint propagation solver for polynomial "
                    "constraints over integer intervals.")
    ap.add_argument("--problem", required=True,
                    help="one of %s, or file:PATH" % "|".join(sorted(BENCHMARKS)))
    ap.add_argument("--n", type=int, default=None,
                    help="size parameter (sumprod length, cubes/opt/kyoto limit)")
    ap.add_argument("--variant", choices=VARIANTS, default="fe")
    ap.add_argument("--division", choices=("weak", "strong"), default="weak")
    ap.add_argument("--schedule", choices=("generated", "cycle"),
                    default="generated")
    ap.add_argument("--goal", choices=("all", "maximize"), default=None,
                    help="defaults to the problem's own goal")
    ap.add_argument("--stats", choices=("table", "json", "csv"),
                    default="table")
    ap.add_argument("--print-solutions", action="store_true")
    ap.add_argument("--max-nodes", type=int, default=None)
    ap.add_argument("--compare", action="store_true",
                    help="run every variant and report one row each")
    args = ap.parse_args(argv)

    try:
        csp = _load_problem(args.problem, args.n)
    except (ParseError, KeyError) as e:
        print("intprop: %s" % e, file=sys.stderr)
        return 2

    goal = args.goal or csp.goal
    if goal == "maximize" and csp.objective is None:
        print("intprop: the problem has no objective to maximize",
              file=sys.stderr)
        return 2
    mode = "scheduled" if args.schedule == "generated" else "cycle"
    variants = list(VARIANTS) if args.compare else [args.variant]

    reports = []
    status = 0
    for variant in variants:
        if goal == "maximize":
            try:
                best, value, stats = maximize(
                    csp, variant=variant, division=args.division, mode=mode,
                    max_nodes=args.max_nodes)
            except Infeasible:
                print("infeasible: no solution exists", file=sys.stderr)
                return 1
            extra = {"objective": value, "incumbents": stats.incumbents}
            if args.print_solutions:
                print(_format_solution(csp, best) + "   objective=%d" % value)
        else:
            want_print = args.print_solutions

            def emit(sol):
                if want_print:
                    print(_format_solution(csp, sol))

            sols, stats = solve_all(
                csp, variant=variant, division=args.division, mode=mode,
                max_nodes=args.max_nodes, collect=False, on_solution=emit)
            extra = {}
        if not stats.complete:
            print("warning: search truncated at %d nodes (incomplete)"
                  % stats.nodes, file=sys.stderr)
        reports.append(_report(stats, extra))

    if args.stats == "json":
        out = reports[0] if len(reports) == 1 else reports
        print(json.dumps(out, indent=2, sort_keys=True))
    elif args.stats == "csv":
        print(_csv(reports))
    else:
        print(_table(reports))
    return status


def _format_solution(csp: CSP, sol) -> str:
    return " ".join("%s=%d" % (n, v) for n, v in zip(csp.names, sol))


if __name__ == "__main__":
    sys.exit(main())
