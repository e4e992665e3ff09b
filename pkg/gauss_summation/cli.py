"""Command-line interface for Gaussian summation."""

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, NamedTuple, Optional

from pydantic import ValidationError

from gauss_summation import __version__
from gauss_summation.benchmarks import (
    HL_PUBLISHED_X,
    TABLE_FLOOR,
    coth_error_curve,
    gautschi_comparison,
    geometric_grid,
    hl_asymptotic_column,
    hl_error_table,
    richardson_curves,
)
from gauss_summation.config import Config
from gauss_summation.exceptions import (
    ArgumentError,
    CorruptCacheError,
    DomainError,
    EvaluationError,
    ExprSyntaxError,
    NumericalFailure,
    PoleError,
    RangeError,
    RuleNotFoundError,
)
from gauss_summation.expr import compile_summand
from gauss_summation.models import (
    Command,
    OutputFormat,
    RunConfig,
    Side,
    SummationRule,
)
from gauss_summation.reference import coth_closed_form
from gauss_summation.rule_cache import RuleCache
from gauss_summation.rule_core import build_rule
from gauss_summation.summator import adaptive_sum
from gauss_summation.zeros import (
    TAIL_LAW_MIN_N,
    asymptotic_sigma,
    bulk_zero_count,
    density_data,
    regime_split_deviation,
    tail_law_check,
    zero_set,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2

USAGE_ERRORS = (
    ArgumentError,
    DomainError,
    ExprSyntaxError,
    RuleNotFoundError,
    CorruptCacheError,
    ValidationError,
    OSError,
)
NUMERICAL_ERRORS = (NumericalFailure, PoleError, RangeError, EvaluationError)

SIDE_CHOICES = {"positive": Side.POSITIVE_HALF, "two-sided": Side.TWO_SIDED}

RuleProvider = Callable[[int], SummationRule]


class Column(NamedTuple):
    """One output column: CSV header name, JSON key and cell values."""

    name: str
    key: str
    values: List[Any]


class Report(NamedTuple):
    """Command output: summary fields followed by a table."""

    meta: Dict[str, Any]
    columns: List[Column]


def setup_logging(verbose: bool = False, level: str = "WARNING") -> None:
    """Set up logging on stderr; stdout carries only command output."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else getattr(logging, level.upper(), 30),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )


def _format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.16e}"
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    return value


def render_report(report: Report, output_format: OutputFormat) -> str:
    """Render as CSV (summary as '# key: value' lines) or as a JSON object."""
    if output_format == OutputFormat.JSON:
        payload = {key: _json_value(value) for key, value in report.meta.items()}
        for column in report.columns:
            payload[column.key] = _json_value(column.values)
        return json.dumps(payload, indent=2) + "\n"

    buffer = io.StringIO()
    for key, value in report.meta.items():
        if isinstance(value, (list, tuple)):
            text = ",".join(_format_cell(v) for v in value)
        else:
            text = _format_cell(value)
        buffer.write(f"# {key}: {text}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([column.name for column in report.columns])
    rows = len(report.columns[0].values) if report.columns else 0
    for i in range(rows):
        writer.writerow([_format_cell(column.values[i]) for column in report.columns])
    return buffer.getvalue()


def write_report(report: Report, config: RunConfig) -> None:
    """Write to config.out with LF line endings, or to stdout."""
    text = render_report(report, config.output_format)
    if config.out is None:
        sys.stdout.write(text)
        return
    with open(config.out, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    logger.info(f"Wrote {config.command.value} output to {config.out}")


def rule_provider_for(config: RunConfig) -> RuleProvider:
    """Rules from the disk cache when enabled, otherwise built in memory."""
    if config.use_cache and config.cache_dir is not None:
        return RuleCache(config.cache_dir).get_or_build
    return build_rule


def rule_report(config: RunConfig, provider: RuleProvider) -> Report:
    rule = provider(config.n)
    return Report(
        meta={"n": rule.n},
        columns=[
            Column("j", "index", list(range(1, rule.n + 1))),
            Column("node", "nodes", list(rule.nodes)),
            Column("weight", "weights", list(rule.weights)),
            Column("pseudo_index", "pseudo_indices", list(rule.pseudo_indices)),
        ],
    )


def sum_report(config: RunConfig, provider: RuleProvider) -> Report:
    if not config.expr:
        raise ArgumentError("sum needs an expression")
    summand = compile_summand(config.expr, config.side)
    report = adaptive_sum(summand, config.tolerance, config.n_max, provider)
    n_values = list(range(report.n_start, report.n_start + len(report.values)))
    deltas: List[Optional[float]] = list(report.deltas) + [None]
    return Report(
        meta={
            "expr": config.expr,
            "side": config.side.value,
            "value": report.value,
            "n_used": report.n_used,
            "status": report.status.value,
        },
        columns=[
            Column("n", "n", n_values),
            Column("value", "values", list(report.values)),
            Column("delta", "deltas", deltas),
        ],
    )


def bench_hl_report(config: RunConfig, provider: RuleProvider) -> Report:
    x_values = config.x_values or HL_PUBLISHED_X
    n_values = list(range(max(config.n_min, 2), config.n_max + 1))
    table = hl_error_table(x_values, n_values, provider, config.max_workers)
    columns = [Column("n", "n", n_values)]
    for i, x in enumerate(x_values):
        cells: List[Any] = ["-" if row[i] < TABLE_FLOOR else row[i] for row in table]
        columns.append(Column(f"dH({x:g})", f"dH({x:g})", cells))
    for x in x_values:
        name = f"asymptotic({x:g})"
        columns.append(Column(name, name, hl_asymptotic_column(x, n_values)))
    return Report(meta={"x": list(x_values)}, columns=columns)


def bench_coth_report(config: RunConfig, provider: RuleProvider) -> Report:
    a = config.a_values[0] if config.a_values else 1000.0
    n_values = list(range(config.n_min, config.n_max + 1, config.n_step))
    rows = coth_error_curve(a, n_values, provider, config.max_workers)
    return Report(
        meta={"a": a, "exact": coth_closed_form(a)},
        columns=[
            Column("n", "n", [r[0] for r in rows]),
            Column("rel_err", "rel_err", [r[1] for r in rows]),
            Column("apriori", "apriori", [r[2] for r in rows]),
            Column("in_regime", "in_regime", [r[3] for r in rows]),
        ],
    )


def bench_richardson_report(config: RunConfig, provider: RuleProvider) -> Report:
    a = config.a_values[0] if config.a_values else 1000.0
    n_values = geometric_grid(config.n_min, config.sequence_max)
    rows = richardson_curves(a, config.richardson_orders, n_values, provider)
    columns = [
        Column("n", "n", [r[0] for r in rows]),
        Column("partial_sum", "partial_sum", [r[1] for r in rows]),
    ]
    for i, order in enumerate(config.richardson_orders):
        name = f"R{order}"
        columns.append(Column(name, name, [r[2][i] for r in rows]))
    columns.append(Column("gauss", "gauss", [r[3] for r in rows]))
    return Report(meta={"a": a, "exact": coth_closed_form(a)}, columns=columns)


def bench_gautschi_report(config: RunConfig, provider: RuleProvider) -> Report:
    result = gautschi_comparison(config.n_max, provider)
    return Report(
        meta={},
        columns=[Column(key, key, [value]) for key, value in result.items()],
    )


def zeros_report(config: RunConfig, provider: RuleProvider) -> Report:
    zset = zero_set(provider(config.n))
    density: List[Optional[float]] = [None] * zset.n
    if zset.n >= 2:
        for point in density_data(zset):
            density[point.j - 1] = point.density
    meta: Dict[str, Any] = {
        "n": zset.n,
        "nu": zset.nu,
        "bulk_zero_count": bulk_zero_count(zset),
        "nu_over_pi": zset.nu / math.pi,
        "regime_split_deviation": regime_split_deviation(zset),
    }
    if zset.n >= TAIL_LAW_MIN_N:
        meta["tail_law_deviation"] = tail_law_check(zset)
    return Report(
        meta=meta,
        columns=[
            Column("j", "j", list(range(1, zset.n + 1))),
            Column("x", "x", list(zset.x)),
            Column("tau", "tau", list(zset.tau)),
            Column("sigma", "sigma", list(zset.sigma)),
            Column("sigma_full", "sigma_full", [2.0 * s for s in zset.sigma]),
            Column("density", "density", density),
            Column(
                "sigma_asymptotic",
                "sigma_asymptotic",
                [asymptotic_sigma(t) for t in zset.tau],
            ),
        ],
    )


REPORTS: Dict[Command, Callable[[RunConfig, RuleProvider], Report]] = {
    Command.RULE: rule_report,
    Command.SUM: sum_report,
    Command.BENCH_HL: bench_hl_report,
    Command.BENCH_COTH: bench_coth_report,
    Command.BENCH_RICHARDSON: bench_richardson_report,
    Command.BENCH_GAUTSCHI: bench_gautschi_report,
    Command.ZEROS: zeros_report,
}


def _handle_error(action: str, e: Exception) -> int:
    """Log and print e; return the exit status for its error class."""
    code = EXIT_NUMERICAL if isinstance(e, NUMERICAL_ERRORS) else EXIT_USAGE
    logger.error(f"Error {action}: {e}")
    print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
    return code


def run(config: RunConfig, rule_provider: Optional[RuleProvider] = None) -> int:
    """Execute one computing command and write its output.

    Returns:
        0 on success, 1 on usage errors, 2 on numerical failures
    """
    try:
        provider = rule_provider or rule_provider_for(config)
        report = REPORTS[config.command](config, provider)
        write_report(report, config)
        return EXIT_OK
    except USAGE_ERRORS + NUMERICAL_ERRORS as e:
        return _handle_error(f"running {config.command.value}", e)


def build_run_config(
    args: argparse.Namespace, command: Command, config: Config
) -> RunConfig:
    """Merge CLI arguments over the configuration and validate them.

    Raises:
        ValidationError: a value outside its documented range
    """
    config.merge_cli_args(
        {
            "output_format": getattr(args, "format", None),
            "cache_dir": getattr(args, "cache_dir", None),
            "max_workers": getattr(args, "workers", None),
            "tolerance": getattr(args, "tol", None),
        }
    )
    if getattr(args, "no_cache", False):
        config.config["use_cache"] = False

    fields: Dict[str, Any] = {
        "command": command,
        "tolerance": float(config.get("tolerance")),
        "output_format": OutputFormat(config.get_output_format()),
        "cache_dir": config.get_cache_dir(),
        "use_cache": bool(config.get("use_cache")),
        "max_workers": int(config.get("max_workers")),
        "n_max": int(config.get("n_max")),
    }
    n_max = getattr(args, "n_max", None)
    if command == Command.BENCH_RICHARDSON:
        if n_max is not None:
            fields["sequence_max"] = n_max
    elif n_max is not None:
        fields["n_max"] = n_max
    if getattr(args, "n", None) is not None:
        fields["n"] = args.n
    for attr in ("n_min", "n_step", "expr"):
        if getattr(args, attr, None) is not None:
            fields[attr] = getattr(args, attr)
    if getattr(args, "a", None) is not None:
        fields["a_values"] = (args.a,)
    if getattr(args, "x", None) is not None:
        fields["x_values"] = tuple(args.x)
    if getattr(args, "orders", None) is not None:
        fields["richardson_orders"] = tuple(args.orders)
    if getattr(args, "side", None) is not None:
        fields["side"] = SIDE_CHOICES[args.side]
    if getattr(args, "out", None):
        fields["out"] = Path(args.out)
    return RunConfig(**fields)


def compute_command(args: argparse.Namespace, config: Config) -> int:
    """Handle rule, sum, bench and zeros."""
    command = Command(
        f"bench_{args.bench}" if args.command == "bench" else args.command
    )
    try:
        run_config = build_run_config(args, command, config)
    except (ValidationError, ArgumentError) as e:
        return _handle_error("validating arguments", e)
    return run(run_config)


def config_show_command(args: argparse.Namespace, config: Config) -> int:
    """Handle the config show command."""
    print(f"Configuration file: {config.config_path}")
    for key, value in config.config.items():
        print(f"{key}: {value}")
    return EXIT_OK


def config_set_command(args: argparse.Namespace, config: Config) -> int:
    """Handle the config set command."""
    try:
        config.set(args.key, args.value)
    except ArgumentError as e:
        return _handle_error("setting config", e)
    config.save()
    print(f"Set {args.key} = {config.get(args.key)}")
    return EXIT_OK


def config_reset_command(args: argparse.Namespace, config: Config) -> int:
    """Handle the config reset command."""
    config.reset()
    config.save()
    print("Configuration reset to defaults")
    return EXIT_OK


def cache_status_command(args: argparse.Namespace, config: Config) -> int:
    """Handle the cache status command."""
    cache_dir = Path(args.cache_dir).expanduser() if args.cache_dir else None
    status = RuleCache(cache_dir or config.get_cache_dir()).get_cache_status()
    print(f"Cache directory: {status['cache_dir']}")
    print(f"Cached rules: {status['total_rules']}")
    print(f"Rule sizes: {', '.join(str(n) for n in status['sizes']) or '-'}")
    print(f"Total bytes: {status['total_bytes']}")
    return EXIT_OK


def cache_clear_command(args: argparse.Namespace, config: Config) -> int:
    """Handle the cache clear command."""
    cache_dir = Path(args.cache_dir).expanduser() if args.cache_dir else None
    try:
        removed = RuleCache(cache_dir or config.get_cache_dir()).clear()
    except OSError as e:
        return _handle_error("clearing cache", e)
    print(f"Removed {removed} cached rules")
    return EXIT_OK


class CliArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of numbers: {text!r}") from None


def _int_list(text: str) -> List[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of integers: {text!r}") from None


def create_parent_parser() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument(
        "--version", action="version", version=f"gauss-sum {__version__}"
    )
    parent.add_argument(
        "--verbose", action="store_true", help="Enable verbose debug output"
    )
    parent.add_argument(
        "--config", type=str, default=None, help="Path to alternate config file"
    )
    return parent


def create_output_parser() -> argparse.ArgumentParser:
    """Options shared by every command that computes and writes a table."""
    output = argparse.ArgumentParser(add_help=False)
    output.add_argument(
        "--format", choices=[f.value for f in OutputFormat], help="Output format"
    )
    output.add_argument("--out", type=str, help="Write output to this file")
    output.add_argument("--cache-dir", type=str, help="Rule cache directory")
    output.add_argument(
        "--no-cache", action="store_true", help="Build rules without the disk cache"
    )
    output.add_argument(
        "--workers", type=int, help="Threads for benchmark parameter points"
    )
    return output


def create_parser() -> argparse.ArgumentParser:
    parent = create_parent_parser()
    output = create_output_parser()
    parser = CliArgumentParser(
        prog="gauss-sum",
        description=(
            "Gaussian summation of series with 1/k^2 tails. Expressions use k, "
            "pi, + - * / ^ (right associative, binds tighter than unary minus) "
            "and sin cos tan exp log sqrt sinh cosh abs."
        ),
        parents=[parent],
    )
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    # Rule
    rule_parser = subparsers.add_parser(
        "rule", parents=[output], help="Emit nodes and weights of the n-point rule"
    )
    rule_parser.add_argument("--n", type=int, required=True, help="Number of nodes")

    # Sum
    sum_parser = subparsers.add_parser(
        "sum", parents=[output], help="Adaptive Gaussian summation of an expression"
    )
    sum_parser.add_argument("--expr", required=True, help="Summand in k")
    sum_parser.add_argument(
        "--side",
        choices=sorted(SIDE_CHOICES),
        default="two-sided",
        help="Sum over k >= 1 (positive) or over all k != 0 (two-sided)",
    )
    sum_parser.add_argument("--tol", type=float, help="Relative tolerance")
    sum_parser.add_argument("--n-max", type=int, help="Largest rule size")

    # Bench
    bench_parser = subparsers.add_parser("bench", help="Benchmark data")
    bench_subparsers = bench_parser.add_subparsers(
        dest="bench", help="Benchmarks"
    )
    hl_parser = bench_subparsers.add_parser(
        "hl", parents=[output], help="Hardy-Littlewood relative error table"
    )
    hl_parser.add_argument("--x", type=_float_list, help="Comma separated x values")
    hl_parser.add_argument("--n-min", type=int, help="First rule size (at least 2)")
    hl_parser.add_argument("--n-max", type=int, help="Last rule size")

    coth_parser = bench_subparsers.add_parser(
        "coth", parents=[output], help="Error of the coth sum against its closed form"
    )
    coth_parser.add_argument("--a", type=float, default=1000.0, help="Parameter a")
    coth_parser.add_argument("--n-min", type=int, help="First rule size")
    coth_parser.add_argument("--n-max", type=int, help="Last rule size")
    coth_parser.add_argument("--n-step", type=int, help="Rule size increment")

    richardson_parser = bench_subparsers.add_parser(
        "richardson", parents=[output], help="Richardson extrapolation error curves"
    )
    richardson_parser.add_argument(
        "--a", type=float, default=1000.0, help="Parameter a"
    )
    richardson_parser.add_argument(
        "--N", dest="orders", type=_int_list, help="Comma separated orders"
    )
    richardson_parser.add_argument(
        "--n-min", type=int, default=250, help="First start index"
    )
    richardson_parser.add_argument(
        "--n-max", type=int, default=16000, help="Largest start index"
    )

    gautschi_parser = bench_subparsers.add_parser(
        "gautschi", parents=[output], help="Points needed for H(40) to 2.22e-7"
    )
    gautschi_parser.add_argument("--n-max", type=int, help="Largest rule size")

    # Zeros
    zeros_parser = subparsers.add_parser(
        "zeros", parents=[output], help="Zero distribution of the rule denominators"
    )
    zeros_parser.add_argument("--n", type=int, required=True, help="Rule size")

    # Config
    config_parser = subparsers.add_parser("config", help="Configuration management")
    config_subparsers = config_parser.add_subparsers(
        dest="config_command", help="Config commands"
    )
    config_subparsers.add_parser("show", help="Show current configuration")
    config_set_parser = config_subparsers.add_parser(
        "set", help="Set a configuration value"
    )
    config_set_parser.add_argument("key", help="Configuration key")
    config_set_parser.add_argument("value", help="Configuration value")
    config_subparsers.add_parser("reset", help="Reset configuration to defaults")

    # Cache
    cache_parser = subparsers.add_parser("cache", help="Rule cache management")
    cache_subparsers = cache_parser.add_subparsers(
        dest="cache_command", help="Cache commands"
    )
    for name, text in (("status", "Show cached rules"), ("clear", "Delete rules")):
        cache_sub = cache_subparsers.add_parser(name, help=text)
        cache_sub.add_argument("--cache-dir", type=str, help="Rule cache directory")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the CLI."""
    parser = create_parser()
    args = parser.parse_args(argv)

    config = Config(config_path=args.config)
    setup_logging(verbose=args.verbose, level=str(config.get("log_level", "WARNING")))

    if not args.command:
        parser.print_help(sys.stderr)
        return EXIT_USAGE

    # Route to appropriate command handler
    if args.command in ("rule", "sum", "zeros"):
        return compute_command(args, config)
    elif args.command == "bench":
        if not args.bench:
            print(
                "Unknown bench command. Use hl, coth, richardson or gautschi",
                file=sys.stderr,
            )
            return EXIT_USAGE
        return compute_command(args, config)
    elif args.command == "config":
        if args.config_command == "show":
            return config_show_command(args, config)
        elif args.config_command == "set":
            return config_set_command(args, config)
        elif args.config_command == "reset":
            return config_reset_command(args, config)
        else:
            print(
                "Unknown config command. Use 'config show', 'config set', "
                "or 'config reset'"
            )
            return EXIT_USAGE
    elif args.command == "cache":
        if args.cache_command == "status":
            return cache_status_command(args, config)
        elif args.cache_command == "clear":
            return cache_clear_command(args, config)
        else:
            print(
                "Unknown cache command. Use 'cache status' or 'cache clear'",
                file=sys.stderr,
            )
            return EXIT_USAGE
    else:
        print(f"Unknown command: {args.command}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
