"""Command-line interface.

Exit codes: 0 on success or a verified audit; 1 when a theorem-level
invariant is violated (a JSON witness goes to stdout); 2 for usage and
validation errors.  All output is deterministic for a fixed seed and does
not depend on the parallelism degree.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import jsonio
from .capacity import Axiom, GeneratorKind, check_axiom, contract, generate_capacity, regularize
from .convergence import (
    Verdict,
    converse_dct_audit,
    countable_sublinearity_audit,
    dct_harness,
    fatou_harness,
    find_countable_sublinearity_violation,
    qu_audit,
)
from .domain import GroundSet, SubsetMask
from .duality import DualMethod, dual_value
from .errors import (
    BudgetError,
    ChoquetError,
    HypothesisError,
    InvariantViolation,
    LoaderError,
    PremiseError,
)
from .hausdorff import DyadicCellSet, DyadicDomain, content, cover_certificate_check, export_capacity
from .integral import choquet
from .nesting import capacity_sum_audit, lemma_step, nest
from .report import SuiteConfig, env_budget, render_figures, render_json, render_table, run_suite, write_csv
from .values import INF, decimal_string, format_value, json_value, parse_value


def _print_warnings(warnings):
    for message in warnings:
        print(f"warning: {message}", file=sys.stderr)


def _load_capacity(path):
    H, warnings = jsonio.load_capacity(jsonio.load_file(path))
    _print_warnings(warnings)
    return H


def _emit(payload, args):
    print(jsonio.dumps(payload))


def _axiom_report_json(report):
    out = {"axiom": report.axiom.value, "holds": report.holds}
    if report.note:
        out["note"] = report.note
    if report.witness is not None:
        witness = {
            "sets": [jsonio.dump_subset(s) for s in report.witness.sets],
            "values": [json_value(v) for v in report.witness.values],
        }
        if report.witness.target is not None:
            witness["target"] = json_value(report.witness.target)
        if report.witness.description:
            witness["description"] = report.witness.description
        out["witness"] = witness
    return out


def _audit_json(audit):
    out = {
        "verdict": audit.qu_verdict.value,
        "minimal_bad_set": jsonio.dump_subset(audit.minimal_bad_set),
        "checks": [
            {
                "name": entry.name,
                "lhs": json_value(entry.lhs),
                "rhs": json_value(entry.rhs),
                "holds": entry.holds,
            }
            for entry in audit.inequality_results
        ],
    }
    if audit.refutation is not None:
        out["refutation"] = {
            "point": audit.refutation.point,
            "eta": json_value(audit.refutation.eta),
            "indices": list(audit.refutation.indices),
        }
    if audit.notes:
        out["notes"] = list(audit.notes)
    return out


def _duality_report_json(report):
    out = {
        "method": report.method.value,
        "choquet_value": json_value(report.choquet_value),
        "dual_value": json_value(report.dual_value),
        "gap": json_value(report.gap),
    }
    if report.optimal_measure is not None:
        out["optimal_measure"] = jsonio.dump_measure(report.optimal_measure)
    if report.dominated is not None:
        out["dominated"] = report.dominated
    if report.notes:
        out["notes"] = list(report.notes)
    if report.ladder:
        out["ladder"] = [
            {
                "target": json_value(r.target),
                "witness_set": jsonio.dump_subset(r.witness_set),
                "witness_capacity": json_value(r.witness_capacity),
                "dual_value": json_value(r.dual_value),
                "lower_bound": json_value(r.lower_bound),
                "bound_holds": r.bound_holds,
            }
            for r in report.ladder
        ]
    return out


def cmd_integrate(args) -> int:
    H = _load_capacity(args.capacity)
    f = jsonio.load_function(jsonio.load_file(args.function), H.universe)
    result = choquet(f, H)
    if args.format == "json" or args.breakdown:
        payload = {
            "value": json_value(result.value),
            "decimal": decimal_string(result.value),
        }
        if args.breakdown:
            payload["breakdown"] = [
                {
                    "level": json_value(term.level),
                    "gap": json_value(term.gap),
                    "capacity": json_value(term.capacity),
                }
                for term in result.breakdown
            ]
        _emit(payload, args)
    else:
        print(format_value(result.value))
    return 0


def cmd_capacity(args) -> int:
    if args.capacity_command == "check":
        H = _load_capacity(args.capacity)
        axioms = [Axiom.from_cli(args.axiom)] if args.axiom else list(Axiom)
        reports = [_axiom_report_json(check_axiom(H, axiom)) for axiom in axioms]
        if args.format == "table":
            for report in reports:
                line = f"{report['axiom']:<24}{'holds' if report['holds'] else 'FAILS'}"
                print(line)
                if not report["holds"]:
                    print(f"    witness: {report['witness']}")
        else:
            _emit(reports if len(reports) > 1 else reports[0], args)
        return 0
    if args.capacity_command == "generate":
        kind = GeneratorKind.from_cli(args.kind)
        H = generate_capacity(
            kind,
            GroundSet(args.n),
            seed=args.seed,
            infinity_rate=Fraction(parse_value(args.infinity_rate)),
            threshold=args.threshold,
            top=parse_value(args.top),
            low=parse_value(args.low),
        )
        _emit(jsonio.dump_capacity(H), args)
        return 0
    if args.capacity_command == "contract":
        H = _load_capacity(args.capacity)
        carrier = jsonio.load_subset(jsonio.loads(args.set), H.universe)
        _emit(jsonio.dump_capacity(contract(H, carrier)), args)
        return 0
    if args.capacity_command == "regularize":
        H = _load_capacity(args.capacity)
        _emit(jsonio.dump_capacity(regularize(H)), args)
        return 0
    raise LoaderError(f"unknown capacity subcommand {args.capacity_command!r}")


def cmd_nest(args) -> int:
    universe = None
    H = None
    if args.capacity:
        H = _load_capacity(args.capacity)
        universe = H.universe
    universe, sets = jsonio.load_set_family(jsonio.load_file(args.sets), universe)
    merged = lemma_step(sets)
    nested = nest(sets)
    payload = {
        "input": jsonio.dump_set_family(universe, sets),
        "merged_chain": [jsonio.dump_subset(s) for s in merged],
        "nested_chain": [jsonio.dump_subset(s) for s in nested],
    }
    if H is not None:
        audit = capacity_sum_audit(sets, H)
        payload["capacity_sums"] = {
            "original": json_value(audit.sum_original),
            "merged": json_value(audit.sum_merged),
            "nested": json_value(audit.sum_nested),
        }
    _emit(payload, args)
    return 0


def cmd_dual(args) -> int:
    H = _load_capacity(args.capacity)
    f = jsonio.load_function(jsonio.load_file(args.function), H.universe)
    methods = {
        "greedy": (DualMethod.GREEDY,),
        "lp": (DualMethod.EXACT_LP,),
        "both": (DualMethod.GREEDY, DualMethod.EXACT_LP),
    }[args.method]
    reports = [_duality_report_json(dual_value(f, H, method=m)) for m in methods]
    _emit(reports if len(reports) > 1 else reports[0], args)
    return 0


def cmd_hausdorff(args) -> int:
    domain = DyadicDomain(args.dim, args.depth)
    beta = Fraction(parse_value(args.beta))
    if args.cells is None and args.export is None:
        raise LoaderError("either --cells or --export is required")
    if args.cells is not None:
        cells = jsonio.load_cells(jsonio.load_file(args.cells), domain)
        if args.check_cover:
            solution = jsonio.load_cover(jsonio.load_file(args.check_cover))
            ok = cover_certificate_check(cells, beta, solution)
            _emit({"cover_valid": ok}, args)
        else:
            _emit(jsonio.dump_cover(content(cells, beta)), args)
    if args.export:
        H = export_capacity(domain, beta)
        with open(args.export, "w", encoding="utf-8") as handle:
            handle.write(jsonio.dumps(jsonio.dump_capacity(H)))
        print(f"wrote capacity over {domain.cell_count} cells to {args.export}",
              file=sys.stderr)
    return 0


def cmd_converge(args) -> int:
    H = _load_capacity(args.capacity)
    seq = jsonio.load_sequence(jsonio.load_file(args.sequence))
    eta = Fraction(parse_value(args.eta))
    window = Fraction(parse_value(args.window))
    if args.mode == "qu":
        audit = qu_audit(seq, H, eta=eta, tail_start=args.tail_start)
        _emit(_audit_json(audit), args)
        return 0
    if args.mode == "fatou":
        audit = fatou_harness(
            seq, H, eta=eta, window=window, tail_start=args.tail_start,
            search_counterexample=args.search,
        )
        _emit(_audit_json(audit), args)
        return 1 if audit.qu_verdict is Verdict.REFUTED and not args.search else 0
    if args.mode == "dct":
        if not args.dominator:
            raise LoaderError("--dominator is required for the dct mode")
        dominator = jsonio.load_function(
            jsonio.load_file(args.dominator), H.universe
        )
        audit = dct_harness(
            seq, dominator, H, eta=eta, window=window, tail_start=args.tail_start
        )
        _emit(_audit_json(audit), args)
        return 1 if audit.qu_verdict is Verdict.REFUTED else 0
    if args.mode == "converse":
        audit = converse_dct_audit(seq, H)
        _emit(_audit_json(audit), args)
        return 1 if audit.qu_verdict is Verdict.REFUTED else 0
    if args.mode == "countable":
        try:
            holds = countable_sublinearity_audit(seq, H)
        except HypothesisError as exc:
            found = find_countable_sublinearity_violation(H)
            payload = {"refused": str(exc)}
            if found is not None:
                payload["counterexample"] = {
                    "terms": [jsonio.dump_function(t) for t in found["terms"]],
                    "lhs": json_value(found["lhs"]),
                    "rhs": json_value(found["rhs"]),
                }
            _emit(payload, args)
            return 2
        _emit({"holds": holds}, args)
        return 0
    raise LoaderError(f"unknown mode {args.mode!r}")


def cmd_suite(args) -> int:
    config = SuiteConfig(
        seed=str(args.seed),
        n_max=args.n,
        jobs=args.jobs,
        pair_budget=env_budget(),
    )
    names = args.only.split(",") if args.only else None
    results = run_suite(config, names)
    if args.format == "json":
        _emit(render_json(results), args)
    else:
        print(render_table(results))
    if args.report_dir:
        import os

        os.makedirs(args.report_dir, exist_ok=True)
        csv_path = os.path.join(args.report_dir, "report.csv")
        write_csv(results, csv_path)
        figures = render_figures(results, args.report_dir, config)
        print(f"wrote {csv_path}", file=sys.stderr)
        for path in figures:
            print(f"wrote {path}", file=sys.stderr)
    if all(r.passed for r in results):
        return 0
    witness = {
        "failed_checks": [
            {"name": r.name, "failures": list(r.failures)}
            for r in results
            if not r.passed
        ]
    }
    print(jsonio.dumps(witness))
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="choquet",
        description="Exact Choquet integration and verification toolkit",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("json", "table"), default="table",
        help="output rendering (default: table)",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def add_parser(name, **kwargs):
        return commands.add_parser(name, parents=[common], **kwargs)

    integrate = add_parser("integrate", help="layer-cake integral of a function")
    integrate.add_argument("--capacity", required=True)
    integrate.add_argument("--function", required=True)
    integrate.add_argument("--breakdown", action="store_true")
    integrate.set_defaults(handler=cmd_integrate)

    capacity = add_parser("capacity", help="axiom checks and derived capacities")
    capacity_commands = capacity.add_subparsers(dest="capacity_command", required=True)
    check = capacity_commands.add_parser("check", parents=[common])
    check.add_argument("--capacity", required=True)
    check.add_argument("--axiom", help="one axiom (default: all)")
    generate = capacity_commands.add_parser("generate", parents=[common])
    generate.add_argument("--kind", required=True)
    generate.add_argument("--n", type=int, required=True)
    generate.add_argument("--seed", default="0")
    generate.add_argument("--infinity-rate", dest="infinity_rate", default="0")
    generate.add_argument("--threshold", type=int, default=0)
    generate.add_argument("--top", default="1")
    generate.add_argument("--low", default="0")
    contract_cmd = capacity_commands.add_parser("contract", parents=[common])
    contract_cmd.add_argument("--capacity", required=True)
    contract_cmd.add_argument("--set", required=True, help="JSON array of indices")
    regularize_cmd = capacity_commands.add_parser("regularize", parents=[common])
    regularize_cmd.add_argument("--capacity", required=True)
    capacity.set_defaults(handler=cmd_capacity)

    nest_cmd = add_parser("nest", help="merge a family into a nested chain")
    nest_cmd.add_argument("--sets", required=True)
    nest_cmd.add_argument("--capacity")
    nest_cmd.set_defaults(handler=cmd_nest)

    dual = add_parser("dual", help="best dominated additive integral")
    dual.add_argument("--capacity", required=True)
    dual.add_argument("--function", required=True)
    dual.add_argument("--method", choices=("greedy", "lp", "both"), default="lp")
    dual.set_defaults(handler=cmd_dual)

    hausdorff = add_parser("hausdorff", help="dyadic content of a cell set")
    hausdorff.add_argument("--dim", type=int, required=True)
    hausdorff.add_argument("--depth", type=int, required=True)
    hausdorff.add_argument("--beta", required=True)
    hausdorff.add_argument("--cells")
    hausdorff.add_argument("--export", help="write the full capacity table to this path")
    hausdorff.add_argument("--check-cover", dest="check_cover")
    hausdorff.set_defaults(handler=cmd_hausdorff)

    converge = add_parser("converge", help="prefix convergence audits")
    converge.add_argument("--capacity", required=True)
    converge.add_argument("--sequence", required=True)
    converge.add_argument(
        "--mode", choices=("qu", "fatou", "dct", "converse", "countable"), required=True
    )
    converge.add_argument("--eta", default="1/8")
    converge.add_argument("--window", default="8")
    converge.add_argument("--tail-start", dest="tail_start", type=int, default=0)
    converge.add_argument("--dominator")
    converge.add_argument("--search", action="store_true",
                          help="on hypothesis refusal, search for counterexamples")
    converge.set_defaults(handler=cmd_converge)

    suite = add_parser("suite", help="run every documented property check")
    suite.add_argument("--seed", default="7")
    suite.add_argument("--n", type=int, default=3)
    suite.add_argument("--jobs", type=int, default=1)
    suite.add_argument("--only", help="comma-separated check names")
    suite.add_argument("--report-dir", dest="report_dir",
                       help="write report.csv and figures here")
    suite.set_defaults(handler=cmd_suite)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except InvariantViolation as exc:
        payload = {"invariant_violation": str(exc)}
        if exc.payload:
            payload["witness"] = {k: str(v) for k, v in exc.payload.items()}
        print(jsonio.dumps(payload))
        return 1
    except (LoaderError, BudgetError, HypothesisError, PremiseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ChoquetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
