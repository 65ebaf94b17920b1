"""Command line interface for nonstat."""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Any, Callable, Dict, List, Sequence

from .compare import compare
from .dataset import Dataset, column_stats, read_csv
from .distributions import list_distributions
from .errors import InvalidSpec, NonstatError
from .expr import dump, parse, pretty_print, variables
from .formatting import OutputFormat, render_csv, render_json, render_table
from .montecarlo import MCReport, MCSpec, monte_carlo_compare, read_spec_file
from .substitution import StatKind
from .utils import SEED_ENV, clean_path, load_environment, resolve_seed

logger = logging.getLogger(__name__)

EXIT_UNDEFINED = 4

GRAMMAR_HELP = (
    "Operators from loosest to tightest: + - ; * / ; unary - ; ^ (right-associative) ; "
    "function calls and parentheses. -x^2 means -(x^2) and 2^3^2 means 2^(3^2). "
    "Functions: sin cos exp log sqrt abs. Implicit multiplication is not allowed."
)


def _integer(text: str) -> int:
    return int(text, 0)


def _add_format(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format",
        default=OutputFormat.TABLE.value,
        choices=[fmt.value for fmt in OutputFormat],
        help="Output format (default: table).",
    )


def _add_csv_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", required=True, help="Path to a CSV file of aligned samples.")
    parser.add_argument("--delimiter", default=",", help="Cell delimiter (default: ',').")
    parser.add_argument(
        "--no-header",
        action="store_true",
        help="Treat the first row as data; columns are then named c1..ck.",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nonstat",
        description="Compare classical and substitution statistics of nonlinear expressions.",
        epilog=GRAMMAR_HELP,
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="Log progress to stderr (-v for info, -vv for debug).",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    parse_cmd = commands.add_parser("parse", help="Parse and pretty-print an expression.", epilog=GRAMMAR_HELP)
    parse_cmd.add_argument("expr", help="Expression, e.g. 'x*y' or 'sin(x)'.")
    _add_format(parse_cmd)

    stats_cmd = commands.add_parser("stats", help="Classical and/or substitution statistics of an expression.")
    _add_csv_options(stats_cmd)
    stats_cmd.add_argument("--expr", required=True, help="Expression over the CSV columns.")
    stats_cmd.add_argument("--mode", default="both", choices=["classical", "chen", "both"])
    stats_cmd.add_argument("--stat", default="all", choices=[kind.value for kind in StatKind] + ["all"])
    _add_format(stats_cmd)

    describe_cmd = commands.add_parser("describe", help="Marginal statistics of each CSV column.")
    _add_csv_options(describe_cmd)
    describe_cmd.add_argument("--columns", nargs="+", help="Restrict the summary to these columns.")
    _add_format(describe_cmd)

    mc_cmd = commands.add_parser("mc", help="Seeded Monte Carlo comparison of the two mean/variance definitions.")
    mc_cmd.add_argument("--spec", help="Spec file (key = value lines, JSON or YAML).")
    mc_cmd.add_argument("--seed", type=_integer, help=f"64-bit seed; overrides {SEED_ENV} and the spec file.")
    mc_cmd.add_argument("--n", type=int, help="Samples per replication.")
    mc_cmd.add_argument("--r", type=int, help="Number of replications.")
    mc_cmd.add_argument(
        "--dist",
        action="append",
        default=[],
        metavar="VAR=DIST",
        help=f"Distribution of a variable, e.g. x=uniform(0,1). Available: {', '.join(list_distributions())}.",
    )
    mc_cmd.add_argument("--expr", help="Expression over the sampled variables.")
    mc_cmd.add_argument(
        "--max-workers",
        type=int,
        default=4,
        help="Number of worker threads running replications.",
    )
    _add_format(mc_cmd)
    return parser


def _emit(payload: Any, output: str, table: Callable[[], str]) -> None:
    if output == OutputFormat.JSON.value:
        print(render_json(payload))
    elif output == OutputFormat.CSV.value:
        print(render_csv(payload))
    else:
        print(table())


def _load(args: argparse.Namespace) -> Dataset:
    return read_csv(clean_path(args.input), delimiter=args.delimiter, header=not args.no_header)


def cmd_parse(args: argparse.Namespace) -> int:
    tree = parse(args.expr)
    names = variables(tree)
    payload = {"expression": pretty_print(tree), "variables": names, "ast": dump(tree)}
    _emit(payload, args.format, lambda: f"{payload['expression']}\nvariables: {', '.join(names)}")
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    tree = parse(args.expr)
    data = _load(args)
    report = compare(tree, data)
    kinds = list(StatKind) if args.stat == "all" else [StatKind(args.stat)]
    fields = {
        "classical": ["classical"],
        "chen": ["chen"],
        "both": ["classical", "chen", "abs_gap", "rel_gap"],
    }[args.mode]

    full = report.to_dict()
    statistics = {
        kind.value: {name: full["statistics"][kind.value][name] for name in fields} for kind in kinds
    }
    payload: Dict[str, Any] = {
        "expression": full["expression"],
        "n_rows": full["n_rows"],
        "statistics": statistics,
        "warnings": full["warnings"],
    }
    if args.mode == "both":
        payload["product_decomposition"] = full["product_decomposition"]

    def table() -> str:
        rows = [[kind] + [values[name] for name in fields] for kind, values in statistics.items()]
        text = render_table(["statistic"] + fields, rows)
        decomposition = payload.get("product_decomposition")
        if decomposition:
            text += (
                f"\ncovariance term: {decomposition['covariance_term']:.6g}"
                f"  identity residual: {decomposition['identity_residual']:.3g}"
            )
        return f"expression: {payload['expression']}  (n = {payload['n_rows']})\n{text}"

    _emit(payload, args.format, table)
    for warning in report.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    if args.format == OutputFormat.JSON.value:
        return 0
    undefined = [
        f"{name} {kind}"
        for kind, values in statistics.items()
        for name in fields[:2]
        if values[name] is None
    ]
    if undefined:
        print(f"error: undefined statistic(s): {', '.join(undefined)}", file=sys.stderr)
        return EXIT_UNDEFINED
    return 0


def cmd_describe(args: argparse.Namespace) -> int:
    data = _load(args)
    names = args.columns or data.names
    summaries = {name: column_stats(data, name).to_dict() for name in names}
    payload = {"n_rows": data.n_rows, "columns": summaries}
    headers = ["column", "n", "mean", "variance", "median", "mode", "min", "max"]
    rows = [[name] + [summary[key] for key in headers[1:]] for name, summary in summaries.items()]
    _emit(payload, args.format, lambda: render_table(headers, rows))
    return 0


def _mc_spec(args: argparse.Namespace) -> MCSpec:
    raw: Dict[str, Any] = dict(read_spec_file(clean_path(args.spec))) if args.spec else {}
    problems: List[str] = []
    for assignment in args.dist:
        name, separator, text = assignment.partition("=")
        if not separator or not name.strip():
            problems.append(f"--dist {assignment!r}: expected VAR=DIST")
            continue
        raw[f"dist.{name.strip()}"] = text.strip()
    if problems:
        raise InvalidSpec(problems)
    for key, value in (("n", args.n), ("r", args.r), ("expr", args.expr)):
        if value is not None:
            raw[key] = value
    raw["seed"] = resolve_seed(args.seed, raw.get("seed"))
    return MCSpec.from_mapping(raw)


def _mc_table(report: MCReport) -> str:
    spec = report.spec
    header = (
        f"expression: {spec.expression}  seed: {spec.seed}  n: {spec.n_samples}  r: {spec.n_replications}\n"
        + "\n".join(f"  {name} ~ {dist.describe()}" for name, dist in spec.distributions.items())
    )
    replications = render_table(
        ["rep", "classical mean", "chen mean", "mean gap", "classical var", "chen var", "var gap"],
        [
            [str(r.index), r.classical_mean, r.chen_mean, r.mean_gap, r.classical_variance, r.chen_variance, r.variance_gap]
            for r in report.replications
        ],
    )
    aggregate = render_table(
        ["gap", "mean", "std", "min", "max"],
        [
            ["mean", report.mean_gap.mean, report.mean_gap.std, report.mean_gap.minimum, report.mean_gap.maximum],
            [
                "variance",
                report.variance_gap.mean,
                report.variance_gap.std,
                report.variance_gap.minimum,
                report.variance_gap.maximum,
            ],
        ],
    )
    return f"{header}\n\n{replications}\n\n{aggregate}"


def cmd_mc(args: argparse.Namespace) -> int:
    spec = _mc_spec(args)
    report = monte_carlo_compare(spec, max_workers=args.max_workers)
    _emit(report.to_dict(), args.format, lambda: _mc_table(report))
    return 0


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "parse": cmd_parse,
    "stats": cmd_stats,
    "describe": cmd_describe,
    "mc": cmd_mc,
}


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    logging.getLogger("nonstat").setLevel(level)


def run_cli(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    load_environment()

    try:
        return COMMANDS[args.command](args)
    except NonstatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli())
