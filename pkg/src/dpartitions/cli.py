"""Command-line entry point: `dpartitions <command> ...`.

Every command emits an OutputEnvelope (JSON by default, or CSV / markdown
tables). Exit codes: 0 all checks passed, 1 a check failed or a computation
error occurred, 2 invalid arguments, 3 capacity exceeded.
"""
# stdlib
import json
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, List, NamedTuple, Optional, Tuple

# third party
import click
import pandas as pd
from pydantic import ValidationError

# dpartitions absolute
import dpartitions.logger as log
from dpartitions.core.arcs import ARC_VALIDATORS, arc_check
from dpartitions.core.asymptotics import main_term, q_table, q_table_wide
from dpartitions.core.effective import check_effective
from dpartitions.core.inequality import (
    scan_counterexamples,
    table2 as compute_table2,
    verify_corollary,
)
from dpartitions.core.schema import OutputEnvelope, format_real
from dpartitions.core.series import (
    brute_force_d,
    d_single,
    d_table,
    distinct_series,
)
from dpartitions.core.specfun import bernoulli_number, bernoulli_poly
from dpartitions.utils.constants import (
    DEFAULT_JOBS,
    DEFAULT_PRECISION,
    SCAN_LIMIT,
    STABILITY_WINDOW,
)
from dpartitions.utils.errors import CapacityError, DPartitionsError
from dpartitions.utils.serialization import DTableCache
from dpartitions.version import __version__

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID = 2
EXIT_CAPACITY = 3

# exact scans beyond this are hours-scale and need --i-understand-long-run
LONG_RUN_THRESHOLD = 20_000
# the corollary's counterexamples all have n <= 8
COROLLARY_MAX_N = 8

FORMATS = ["json", "csv", "md"]


class Settings(NamedTuple):
    precision: int
    fmt: Optional[str]
    jobs: int
    workspace: Optional[Path]


class Outcome(NamedTuple):
    results: Any
    table: pd.DataFrame
    passed: bool = True


def _settings(ctx: click.Context, **overrides: Any) -> Settings:
    base: Settings = ctx.obj
    values = base._asdict()
    for key, value in overrides.items():
        if value is not None:
            values[key] = value
    return Settings(**values)


def render(envelope: OutputEnvelope, table: pd.DataFrame, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(
            _envelope_dict(envelope), indent=2, sort_keys=True, default=_json_default
        )
    if fmt == "csv":
        return table.to_csv(index=False).rstrip("\n")
    header = f"**{envelope.command}** ({envelope.precision_bits} bits, dpartitions {envelope.version})"
    body = table.to_markdown(index=False) if len(table) else "_no rows_"
    lines = [header, "", body]
    for warning in envelope.warnings:
        lines.append(f"\n> warning: {warning}")
    return "\n".join(lines)


def _json_default(value: Any) -> Any:
    # numpy scalars from pandas records
    if hasattr(value, "item"):
        return value.item()
    return str(value)


def _envelope_dict(envelope: OutputEnvelope) -> Dict[str, Any]:
    return {
        "command": envelope.command,
        "parameters": envelope.parameters,
        "precision_bits": envelope.precision_bits,
        "results": envelope.results,
        "warnings": envelope.warnings,
        "version": envelope.version,
    }


@contextmanager
def exit_on_error(ctx: click.Context) -> Iterator[None]:
    """Map package exceptions to the exit-code contract."""
    try:
        yield
    except CapacityError as e:
        click.echo(f"capacity exceeded: {e}", err=True)
        ctx.exit(EXIT_CAPACITY)
    except (ValueError, ValidationError) as e:
        click.echo(f"invalid argument: {e}", err=True)
        ctx.exit(EXIT_INVALID)
    except DPartitionsError as e:
        click.echo(f"{type(e).__name__}: {e}", err=True)
        ctx.exit(EXIT_CHECK_FAILED)


def run(
    ctx: click.Context,
    command: str,
    parameters: Dict[str, Any],
    settings: Settings,
    compute: Callable[[], Outcome],
    default_format: str = "json",
) -> None:
    """Execute `compute`, print the envelope and exit with the mapped code."""
    with exit_on_error(ctx), log.collect_warnings() as warnings:
        outcome = compute()

    envelope = OutputEnvelope(
        command=command,
        parameters=parameters,
        precision_bits=settings.precision,
        results=outcome.results,
        warnings=list(warnings),
        version=__version__,
    )
    click.echo(render(envelope, outcome.table, settings.fmt or default_format))
    ctx.exit(EXIT_OK if outcome.passed else EXIT_CHECK_FAILED)


def output_options(func: Callable) -> Callable:
    """Per-command copies of the global output options; given values win."""
    func = click.option("--workspace", type=click.Path(file_okay=False, path_type=Path), default=None,
                        help="Directory for cached D tables.")(func)
    func = click.option("--jobs", type=int, default=None, help="Worker count for scans.")(func)
    func = click.option("--format", "fmt", type=click.Choice(FORMATS), default=None)(func)
    func = click.option("--precision", type=click.IntRange(min=64), default=None,
                        help="Working precision in bits.")(func)
    return func


@click.group()
@click.option("--precision", type=click.IntRange(min=64), default=DEFAULT_PRECISION, show_default=True,
              envvar="DPARTITIONS_PRECISION", help="Working precision in bits (env DPARTITIONS_PRECISION).")
@click.option("--format", "fmt", type=click.Choice(FORMATS), default=None, help="Output format.")
@click.option("--jobs", type=int, default=DEFAULT_JOBS, show_default=True, help="Worker count for scans.")
@click.option("--workspace", type=click.Path(file_okay=False, path_type=Path), default=None,
              help="Directory for cached D tables.")
@click.option("-v", "--verbose", count=True, help="-v for INFO, -vv for DEBUG logs on stderr.")
@click.version_option(__version__, prog_name="dpartitions")
@click.pass_context
def cli(
    ctx: click.Context,
    precision: int,
    fmt: Optional[str],
    jobs: int,
    workspace: Optional[Path],
    verbose: int,
) -> None:
    """Distinct-parts partitions: parts in a residue class r mod t."""
    log.set_verbosity(verbose)
    ctx.obj = Settings(precision=precision, fmt=fmt, jobs=jobs, workspace=workspace)


@cli.command()
@click.option("--r", "r", type=int, required=True)
@click.option("--t", "t", type=int, required=True)
@click.option("--n", "n", type=int, required=True)
@click.option("--method", type=click.Choice(["table", "single", "brute"]), default="table", show_default=True)
@output_options
@click.pass_context
def dvalue(ctx: click.Context, r: int, t: int, n: int, method: str, **options: Any) -> None:
    """Exact D_{r,t}(n). Prints the bare integer unless --format is given."""
    settings = _settings(ctx, **options)

    def compute() -> Outcome:
        if n < 0:
            raise ValueError(f"n must be non-negative, got {n}")
        cache = DTableCache(settings.workspace) if settings.workspace is not None else None
        if method == "brute":
            value = brute_force_d((r, t), n)
        elif method == "single":
            distinct = cache.distinct(n) if cache is not None else distinct_series(n)
            value = d_single((r, t), n, distinct)
        elif cache is not None:
            value = cache.d_table(r, t, n)[n]
        else:
            value = d_table((r, t), n)[n]
        row = {"r": r, "t": t, "n": n, "method": method, "value": str(value)}
        return Outcome(results=[row], table=pd.DataFrame([row]))

    if settings.fmt is None:
        with exit_on_error(ctx):
            outcome = compute()
        click.echo(outcome.results[0]["value"])
        ctx.exit(EXIT_OK)

    run(ctx, "dvalue", {"r": r, "t": t, "n": n, "method": method}, settings, compute)


@cli.command()
@click.option("--n", "n", type=int, required=True)
@click.option("--x", "x", type=str, default=None, help="Rational point P/Q for B_n(x).")
@output_options
@click.pass_context
def bernoulli(ctx: click.Context, n: int, x: Optional[str], **options: Any) -> None:
    """Exact Bernoulli number B_n, or Bernoulli polynomial B_n(x) at rational x."""
    settings = _settings(ctx, **options)

    def compute() -> Outcome:
        if x is None:
            value = bernoulli_number(n)
        else:
            value = bernoulli_poly(n, Fraction(x))
        row = {"n": n, "x": x, "value": str(value)}
        return Outcome(results=[row], table=pd.DataFrame([row]))

    run(ctx, "bernoulli", {"n": n, "x": x}, settings, compute)


@cli.command()
@click.option("--nmax", type=int, default=10000, show_default=True)
@click.option("--t", "t", type=int, default=3, show_default=True)
@output_options
@click.pass_context
def table1(ctx: click.Context, nmax: int, t: int, **options: Any) -> None:
    """Q_r(n) = D_{r,t}(n) / main term for n = 10, 100, ... <= nmax."""
    settings = _settings(ctx, **options)

    def compute() -> Outcome:
        ns = [10**k for k in range(1, 12) if 10**k <= nmax]
        if not ns:
            raise ValueError(f"nmax must be at least 10, got {nmax}")
        distinct = None
        if settings.workspace is not None:
            distinct = DTableCache(settings.workspace).distinct(ns[-1])
        table = q_table(t, ns, settings.precision, distinct=distinct)
        results = [
            {
                "n": int(row.n),
                "r": int(row.r),
                "t": int(row.t),
                "d_exact": str(row.d_exact),
                "main_term": format_real(row.main_term, 15),
                "q": f"{float(row.q):.6f}",
            }
            for row in table.itertuples()
        ]
        return Outcome(results=results, table=q_table_wide(table))

    run(ctx, "table1", {"nmax": nmax, "t": t}, settings, compute)


@cli.command()
@click.option("--tmin", type=int, default=2, show_default=True)
@click.option("--tmax", type=int, default=10, show_default=True)
@click.option("--window", "stability_window", type=int, default=STABILITY_WINDOW, show_default=True)
@click.option("--scan-limit", type=int, default=SCAN_LIMIT, show_default=True)
@output_options
@click.pass_context
def table2(
    ctx: click.Context,
    tmin: int,
    tmax: int,
    stability_window: int,
    scan_limit: int,
    **options: Any,
) -> None:
    """Thresholds N_t of the reduced inequality for t = tmin..tmax."""
    settings = _settings(ctx, **options)

    def compute() -> Outcome:
        table = compute_table2(
            tmin=tmin,
            tmax=tmax,
            precision=settings.precision,
            stability_window=stability_window,
            scan_limit=scan_limit,
            n_jobs=settings.jobs,
        )
        return Outcome(results=table.to_dict(orient="records"), table=table)

    parameters = {"tmin": tmin, "tmax": tmax, "window": stability_window, "scan_limit": scan_limit}
    run(ctx, "table2", parameters, settings, compute)


@cli.command("check-effective")
@click.option("--r", "r", type=int, required=True)
@click.option("--t", "t", type=int, required=True)
@click.option("--n", "n", type=int, required=True)
@output_options
@click.pass_context
def check_effective_command(ctx: click.Context, r: int, t: int, n: int, **options: Any) -> None:
    """Verify |D_{r,t}(n) - M_{r,t}(n)| <= Err_t(n) at one n."""
    settings = _settings(ctx, **options)

    def compute() -> Outcome:
        distinct = None
        if settings.workspace is not None:
            distinct = DTableCache(settings.workspace).distinct(n)
        report = check_effective((r, t), n, settings.precision, distinct=distinct)
        row = report.to_dict()
        return Outcome(results=[row], table=pd.DataFrame([row]), passed=report.passed)

    run(ctx, "check-effective", {"r": r, "t": t, "n": n}, settings, compute)


def _counterexample_outcome(triples: List[Tuple[int, int, int]]) -> Outcome:
    rows = [{"r": r, "s": s, "n": n} for r, s, n in triples]
    late = [triple for triple in triples if triple[2] > COROLLARY_MAX_N]
    if late:
        log.error(f"Counterexamples beyond n = {COROLLARY_MAX_N}: {late}")
    return Outcome(
        results=rows,
        table=pd.DataFrame(rows, columns=["r", "s", "n"]),
        passed=not late,
    )


@cli.command("scan-counterexamples")
@click.option("--t", "t", type=int, required=True)
@click.option("--nmax", type=int, required=True)
@click.option("--adjacent-only", is_flag=True, default=False, help="Only pairs s = r + 1.")
@click.option("--i-understand-long-run", "long_run", is_flag=True, default=False)
@output_options
@click.pass_context
def scan_counterexamples_command(
    ctx: click.Context, t: int, nmax: int, adjacent_only: bool, long_run: bool, **options: Any
) -> None:
    """All (r, s, n) with r < s and D_{r,t}(n) < D_{s,t}(n), n <= nmax."""
    settings = _settings(ctx, **options)

    def compute() -> Outcome:
        _require_long_run(nmax, long_run)
        triples = scan_counterexamples(
            t,
            nmax,
            n_jobs=settings.jobs,
            adjacent_only=adjacent_only,
            workspace=settings.workspace,
        )
        return _counterexample_outcome(triples)

    parameters = {"t": t, "nmax": nmax, "adjacent_only": adjacent_only}
    run(ctx, "scan-counterexamples", parameters, settings, compute)


def _require_long_run(exhaustive_to: int, long_run: bool) -> None:
    if exhaustive_to > LONG_RUN_THRESHOLD and not long_run:
        raise ValueError(
            f"Exact tables beyond n = {LONG_RUN_THRESHOLD} take hours; "
            "pass --i-understand-long-run to proceed"
        )


@cli.command("verify-corollary")
@click.option("--t", "t", type=int, required=True)
@click.option("--exhaustive-to", type=int, default=2000, show_default=True)
@click.option("--full", is_flag=True, default=False, help="Scan exactly up to N_t.")
@click.option("--i-understand-long-run", "long_run", is_flag=True, default=False)
@click.option("--window", "stability_window", type=int, default=STABILITY_WINDOW, show_default=True)
@click.option("--scan-limit", type=int, default=SCAN_LIMIT, show_default=True)
@output_options
@click.pass_context
def verify_corollary_command(
    ctx: click.Context,
    t: int,
    exhaustive_to: int,
    full: bool,
    long_run: bool,
    stability_window: int,
    scan_limit: int,
    **options: Any,
) -> None:
    """N_t plus the exact counterexample scan; --full scans all the way to N_t."""
    settings = _settings(ctx, **options)

    def compute() -> Outcome:
        if full and not long_run:
            raise ValueError("--full needs --i-understand-long-run")
        _require_long_run(exhaustive_to, long_run)
        report = verify_corollary(
            t,
            exhaustive_to,
            precision=settings.precision,
            scan_limit=scan_limit,
            stability_window=stability_window,
            n_jobs=settings.jobs,
            workspace=settings.workspace,
            full=full,
        )
        outcome = _counterexample_outcome(report.counterexamples)
        summary = report.to_dict()
        return Outcome(
            results=summary,
            table=pd.DataFrame([{k: v for k, v in summary.items() if k != "counterexamples"}]),
            passed=outcome.passed,
        )

    parameters = {
        "t": t,
        "exhaustive_to": exhaustive_to,
        "full": full,
        "window": stability_window,
        "scan_limit": scan_limit,
    }
    run(ctx, "verify-corollary", parameters, settings, compute)


@cli.command("arc-check")
@click.option("--lemma", type=click.Choice(sorted(ARC_VALIDATORS)), required=True)
@click.option("--samples", type=int, default=50, show_default=True)
@click.option("--t", "t", type=int, default=2, show_default=True)
@click.option("--r", "r", type=int, default=1, show_default=True)
@output_options
@click.pass_context
def arc_check_command(
    ctx: click.Context, lemma: str, samples: int, t: int, r: int, **options: Any
) -> None:
    """Evaluate one arc bound on its deterministic in-region grid."""
    settings = _settings(ctx, **options)

    def compute() -> Outcome:
        checks = arc_check(lemma, samples=samples, t=t, r=r, precision=settings.precision)
        rows = [check.to_dict() for check in checks]
        table = pd.DataFrame(rows).drop(columns=["flags"]) if rows else pd.DataFrame()
        return Outcome(results=rows, table=table, passed=all(c.holds for c in checks))

    parameters = {"lemma": lemma, "samples": samples, "t": t, "r": r}
    run(ctx, "arc-check", parameters, settings, compute)


@cli.command("main-term")
@click.option("--r", "r", type=int, required=True)
@click.option("--t", "t", type=int, required=True)
@click.option("--n", "n", type=int, required=True)
@click.option("--terms", type=click.IntRange(1, 2), default=2, show_default=True)
@output_options
@click.pass_context
def main_term_command(ctx: click.Context, r: int, t: int, n: int, terms: int, **options: Any) -> None:
    """The asymptotic main term of D_{r,t}(n)."""
    settings = _settings(ctx, **options)

    def compute() -> Outcome:
        value = main_term((r, t), n, settings.precision, terms=terms)
        row = {"r": r, "t": t, "n": n, "terms": terms, "value": format_real(value.value, 20)}
        return Outcome(results=[row], table=pd.DataFrame([row]))

    run(ctx, "main-term", {"r": r, "t": t, "n": n, "terms": terms}, settings, compute)


def main() -> None:
    cli(obj=None)
