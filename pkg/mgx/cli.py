"""
Command line front end: mgx <command> [options]

Exit codes: 0 success, 1 check or constraint failure, 2 bad input, 3 node budget exceeded.
"""
import argparse
import json
import sys
from typing import List, Optional

from . import __version__
from .lib.admissibility.admissibility import is_admissible
from .lib.blowup.blowup import optimize_blowup, turan_closed_forms
from .lib.bounds.bounds import fk_m, flat_interval, known_extremal_value, large_a_gate
from .lib.catalog.catalog import TuranSpec, load_pattern, named_pattern
from .lib.core.multigraph import write_multigraph
from .lib.density.density import pattern_report, pi_density, sigma_density, turan_asymptotics
from .lib.logging import get_logger, set_package_level, verbosity_to_loglevel
from .lib.oracle.oracle import brute_force_extremal
from .lib.report.report_generator import ReportGenerator
from .lib.search.search import SURVEY_LABEL, survey
from .lib.utilities.config import DEFAULT_PARAMS, get_n_jobs
from .lib.utilities.exceptions import BudgetExceededError, CertificationError, InputError, MgxError
from .lib.utilities.utils import to_jsonable
from .lib.verify.verify import PASS, SUITES, list_checks, run_verify

logger = get_logger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _budget(text: str) -> int:
    try:
        value = int(float(text))
    except (OverflowError, ValueError):
        raise argparse.ArgumentTypeError(f"expected a node count, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"node budget must be positive, got {text!r}")
    return value


def _add_global_args(parser: argparse.ArgumentParser, top_level: bool):
    """
    Output, parallelism, budget and logging flags; subcommands repeat them with suppressed defaults so a flag
    given before the subcommand is not overwritten
    """
    def default(value):
        return value if top_level else argparse.SUPPRESS

    parser.add_argument("--json", action="store_true", default=default(False), help="machine-readable output")
    parser.add_argument("--threads", type=int, default=default(None),
                        help="worker processes (default: MGX_THREADS or all)")
    parser.add_argument("--budget", type=_budget, default=default(DEFAULT_PARAMS["budget"]),
                        help="node budget of exact searches, e.g. 1e9")
    parser.add_argument("-v", "--verbose", action="count", default=default(0), help="more logging, repeatable")
    parser.add_argument("--log-file", default=default(None), help="debug log file")


def _emit(args, payload: dict, lines: Optional[List[str]] = None):
    if args.json:
        print(json.dumps(to_jsonable(payload)))
        return
    for line in lines if lines is not None else [f"{k}: {v}" for k, v in payload.items()]:
        print(line)


def _pattern(args):
    if args.pattern:
        return load_pattern(args.pattern)
    if args.name:
        return named_pattern(args.name, args.a)
    raise InputError("Give --pattern FILE or --name NAME --a A")


def _add_pattern_args(parser: argparse.ArgumentParser):
    parser.add_argument("--pattern", help="pattern JSON file")
    parser.add_argument("--name", help="catalogue pattern, e.g. C_5, Petersen, Pplus2")
    parser.add_argument("--a", type=int, default=1, help="ambient multiplicity of a catalogue pattern")


def cmd_sigma(args) -> int:
    P = _pattern(args)
    if args.both:
        return _report_both(args, P)
    result = sigma_density(P, n_jobs=args.threads)
    _emit(args, {"sigma": result.value, "weighting": result.weighting, "support": result.support,
                 "ties": result.ties},
          [f"sigma = {result.value}", f"weighting = {[str(x) for x in result.weighting]}"])
    return EXIT_OK


def cmd_pi(args) -> int:
    P = _pattern(args)
    if args.both:
        return _report_both(args, P)
    result = pi_density(P, tol=args.tol, n_jobs=args.threads, strict=args.strict)
    _emit(args, {"pi": result.value, "kkt_residual": result.kkt_residual, "weighting": result.weighting,
                 "support": result.support, "ties": result.ties, "certified": result.certified},
          [f"pi = {result.value!r}", f"kkt_residual = {result.kkt_residual:.3e}",
           f"certified = {result.certified}"])
    return EXIT_OK if result.certified else EXIT_FAILED


def _report_both(args, P) -> int:
    report = pattern_report(P, tol=getattr(args, "tol", None))
    sigma, pi = report["sigma"], report["pi"]
    _emit(args, {"sigma": sigma.value, "sigma_weighting": sigma.weighting, "pi": pi.value,
                 "pi_weighting": pi.weighting, "cross_law": report["cross_law"]},
          [f"sigma = {sigma.value}", f"pi = {pi.value!r}", f"pi <= ln sigma: {report['cross_law']}"])
    return EXIT_OK if report["cross_law"] and pi.certified else EXIT_FAILED


def cmd_blowup_max(args) -> int:
    P = _pattern(args)
    best = optimize_blowup(P, args.n, args.objective, args.mode, budget=args.budget, n_jobs=args.threads)
    value = best.value if args.objective == "sum" else best.value.to_dict()
    _emit(args, {"objective": best.objective, "value": value, "witness": best.witness.sizes,
                 "certified": best.certified, "nodes": best.nodes},
          [f"{args.objective} maximum = {value}", f"part sizes = {list(best.witness.sizes)}",
           f"certified = {best.certified}"])
    return EXIT_OK


def cmd_turan(args) -> int:
    spec = TuranSpec(args.r, args.a)
    rows = [turan_closed_forms(spec, n)._asdict() for n in range(args.n_from or args.n, args.n + 1)]
    payload = {"spec": spec.to_dict(), "rows": rows}
    lines = [f"n = {row['n']}: Sigma = {row['sigma_n']}, delta = {row['delta_n']}, |U| in {row['u_size_range']}"
             for row in rows]
    if spec.is_two_block and spec.a > spec.d:
        asymptotics = turan_asymptotics(spec.r0, spec.rd, spec.d, spec.a)
        payload["asymptotics"] = asymptotics._asdict()
        lines.append(f"x_star = {asymptotics.x_star!r}, pi = {asymptotics.pi!r}")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_bounds(args) -> int:
    if args.bound == "fk-m":
        m = fk_m(args.s, args.q)
        _emit(args, {"s": args.s, "q": args.q, "m": m}, [f"m({args.s}, {args.q}) = {m}"])
    elif args.bound == "flat":
        interval = flat_interval(args.r, args.a, args.s)
        _emit(args, interval._asdict(),
              [f"q in [{interval.q_low}, {interval.q_high}]: ex_Pi = {interval.value!r}"])
    elif args.bound == "gate":
        gate = large_a_gate(args.r0, args.rd, args.d, args.a)
        _emit(args, gate._asdict())
    else:
        found = known_extremal_value(args.s, args.q)
        if found is None:
            _emit(args, {"s": args.s, "q": args.q, "known": None}, ["no settled regime"])
            return EXIT_FAILED
        _emit(args, {"s": args.s, "q": args.q, "known": [k._asdict() for k in found]},
              [f"{k.regime} ({k.objective}): {k.value} via {k.pattern}" for k in found])
    return EXIT_OK


def cmd_admissible(args) -> int:
    P = _pattern(args)
    ok = is_admissible(P, args.s, args.q, budget=args.budget, n_jobs=args.threads)
    _emit(args, {"admissible": ok}, [f"admissible = {ok}"])
    return EXIT_OK if ok else EXIT_FAILED


def cmd_oracle(args) -> int:
    result = brute_force_extremal(args.n, args.s, args.q, max_mult=args.max_mult, objective=args.objective,
                                  budget=args.budget, n_jobs=args.threads)
    if args.witness and result.witness is not None:
        write_multigraph(result.witness, args.witness)
    value = result.value if args.objective == "sum" else result.value.value()
    _emit(args, {"objective": result.objective, "value": value, "nodes": result.nodes_explored,
                 "exact": result.exact, "witness": result.witness},
          [f"ex_{args.objective}({args.n}, {args.s}, {args.q}) = {value}", f"nodes = {result.nodes_explored}"])
    return EXIT_OK


def cmd_survey(args) -> int:
    q_to = args.q_to if args.q_to is not None else args.q_from
    table = survey(args.s, args.a, range(args.q_from, q_to + 1), args.max_vertices, args.max_degree,
                   args.min_girth, objective=args.objective, extra_patterns=args.extra, n_jobs=args.threads)
    if args.csv:
        table.to_csv(args.csv, index=False)
        logger.info(f"Survey written to {args.csv}")
    if args.json:
        _emit(args, {"label": SURVEY_LABEL, "rows": table.to_dict(orient="records")})
    else:
        print(SURVEY_LABEL)
        print(table.to_string(index=False))
    return EXIT_OK


def cmd_verify(args) -> int:
    only = [name for item in args.only or [] for name in item.split(",") if name]
    table = run_verify(args.suite, only=only or None, budget=args.budget, n_jobs=args.threads)
    if args.report:
        ReportGenerator().generate_report(table, args.report, version=__version__)
    if args.json:
        _emit(args, {"suite": args.suite, "checks": table.to_dict(orient="records")})
    else:
        print(table.to_string(index=False))
        skipped = table.attrs["skipped"]
        if skipped:
            print(f"{skipped} check(s) skipped after exceeding the node budget")
    return EXIT_OK if (table["status"] == PASS).all() else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mgx", description="Extremal (s, q)-multigraph toolkit")
    parser.add_argument("--version", action="version", version=f"mgx {__version__}")
    _add_global_args(parser, top_level=True)
    common = argparse.ArgumentParser(add_help=False)
    _add_global_args(common, top_level=False)
    sub = parser.add_subparsers(dest="command")
    sub.required = True

    p = sub.add_parser("sigma", parents=[common], help="exact arithmetic density of a pattern")
    _add_pattern_args(p)
    p.add_argument("--both", action="store_true", help="also compute pi and the AM-GM cross-law")
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("pi", parents=[common], help="geometric density of a pattern")
    _add_pattern_args(p)
    p.add_argument("--tol", type=float, default=DEFAULT_PARAMS["pi_tol"])
    p.add_argument("--strict", action="store_true", help="fail on certification problems")
    p.add_argument("--both", action="store_true", help="also compute sigma and the AM-GM cross-law")
    p.set_defaults(func=cmd_pi)

    p = sub.add_parser("blowup-max", parents=[common], help="best blow-up of a pattern on n vertices")
    _add_pattern_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--objective", choices=["sum", "product"], default="sum")
    p.add_argument("--mode", choices=["exact", "local"], default="exact")
    p.set_defaults(func=cmd_blowup_max)

    p = sub.add_parser("turan", parents=[common], help="closed forms of generalized Turan patterns")
    p.add_argument("--r", type=_int_list, required=True, help="block sizes, e.g. 1,0,1")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--n-from", type=int, default=None, help="print every n from here to --n")
    p.set_defaults(func=cmd_turan)

    p = sub.add_parser("bounds", parents=[common], help="bound machinery")
    p.add_argument("bound", choices=["fk-m", "flat", "gate", "known"])
    p.add_argument("--s", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--r0", type=int)
    p.add_argument("--rd", type=int)
    p.add_argument("--d", type=int)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("admissible", parents=[common], help="is every blow-up of the pattern an (s, q)-graph")
    _add_pattern_args(p)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_admissible)

    p = sub.add_parser("oracle", parents=[common], help="exhaustive extremal value on n vertices")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--objective", choices=["sum", "product"], default="sum")
    p.add_argument("--max-mult", type=int, default=None)
    p.add_argument("--witness", default=None, help="write the witness multigraph here")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("survey", parents=[common], help="best admissible lifted graph pattern per q")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--objective", choices=["sum", "product"], default="sum")
    p.add_argument("--max-vertices", type=int, required=True)
    p.add_argument("--max-degree", type=int, required=True)
    p.add_argument("--min-girth", type=int, default=3)
    p.add_argument("--q-from", type=int, required=True)
    p.add_argument("--q-to", type=int, default=None)
    p.add_argument("--extra", action="append", default=None, help="named experiment pattern, repeatable")
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("verify", parents=[common], help="run the verification suite")
    p.add_argument("--suite", default="paper", help=f"one of {', '.join(SUITES)}")
    p.add_argument("--only", action="append", default=None, help=f"checks to run: {', '.join(list_checks())}")
    p.add_argument("--report", default=None, help="write an HTML report here")
    p.set_defaults(func=cmd_verify)
    return parser


def _check_bound_args(args):
    needed = {"fk-m": ("s", "q"), "flat": ("r", "a", "s"), "gate": ("r0", "rd", "d", "a"), "known": ("s", "q")}
    missing = [name for name in needed[args.bound] if getattr(args, name) is None]
    if missing:
        raise InputError(f"bounds {args.bound} needs --{' --'.join(missing)}")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    set_package_level(verbosity_to_loglevel(args.verbose + 1), args.log_file)

    try:
        args.threads = get_n_jobs(args.threads, default=None)
        if args.command == "bounds":
            _check_bound_args(args)
        return args.func(args)
    except BudgetExceededError as exc:
        logger.error(str(exc))
        if exc.best is not None:
            _emit(args, {"error": "budget", "message": str(exc), "best_lower_bound": exc.best},
                  [f"best so far (lower bound only): {exc.best}"])
        return EXIT_BUDGET
    except CertificationError as exc:
        logger.error(str(exc))
        return EXIT_FAILED
    except (InputError, ValueError) as exc:
        logger.error(str(exc))
        return EXIT_INPUT
    except MgxError as exc:
        logger.error(str(exc))
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
