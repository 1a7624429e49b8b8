import functools
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Optional, Sequence, TextIO

import click
import numpy as np
from tqdm import tqdm

from .errors import IdtError, InvalidArgumentError, UnknownFamilyError
from .families import FamilySpec, catalog, lookup
from .idt import IdtModel, ell, psi_H
from .infdiv import (
    DualitySeriesSampler,
    SeriesSampler,
    SeriesSamplerFactory,
    cp_from_stieltjes,
)
from .logger import ColoredLogger, LogLevel, set_verbosity
from .maxstable import sample_copula_batch
from .rng import RngStream
from .samplers import PathSamplerFactory
from .type_definitions import (
    InfDivLaw,
    PathSamplerArgs,
    RunConfig,
    SamplerKind,
    SeriesSamplerArgs,
    SuiteKind,
    VerifyConfig,
)
from .verify import run_suite, write_checks_csv, write_curve_csv, write_json

logger = ColoredLogger(name="main")

SEED_ENVVAR: str = "IDT_SEED"
DEFAULT_CHUNK_SIZE: int = 1000


def load_config(path: str) -> dict[str, str]:
    """
    Read a flat `key=value` file; `#` starts a comment, `-` and `_` in keys
    are interchangeable.

    Raises:
        click.BadParameter: On a line without `=`.
    """
    values: dict[str, str] = {}
    for number, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise click.BadParameter(
                f"{path}:{number}: expected key=value, got '{raw.strip()}'.",
                param_hint="--config",
            )
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def _default_map(command: click.Command, flat: dict[str, str]) -> dict[str, Any]:
    """The flat config repeated for every subcommand, as click nests default maps."""
    if isinstance(command, click.Group):
        return {name: _default_map(sub, flat) for name, sub in command.commands.items()}
    return dict(flat)


def parse_params(values: Sequence[str], theta: Optional[float]) -> dict[str, float]:
    """
    Turn repeated `key=value` strings (and --theta) into family parameters.

    Raises:
        click.BadParameter: If an entry is malformed or not a number.
    """
    params: dict[str, float] = {}
    for entry in values:
        key, separator, value = entry.partition("=")
        if not separator or not key.strip():
            raise click.BadParameter(f"expected key=value, got '{entry}'.", param_hint="--param")
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise click.BadParameter(
                f"'{value}' is not a number.", param_hint="--param"
            ) from None
    if theta is not None:
        params["theta"] = theta
    return params


def parse_vector(value: str, option: str) -> np.ndarray:
    try:
        return np.array([float(part) for part in value.split(",")], dtype=float)
    except ValueError:
        raise click.BadParameter(
            f"expected comma-separated numbers, got '{value}'.", param_hint=option
        ) from None


def translate_errors(command: Callable[..., Any]) -> Callable[..., Any]:
    """Report library errors as click usage errors (exit code 2)."""

    @functools.wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return command(*args, **kwargs)
        except UnknownFamilyError as error:
            raise click.BadParameter(str(error), param_hint="--family") from error
        except InvalidArgumentError as error:
            raise click.BadParameter(str(error)) from error
        except IdtError as error:
            raise click.UsageError(f"{type(error).__name__}: {error}") from error

    return wrapper


def family_options(command: Callable[..., Any]) -> Callable[..., Any]:
    command = click.option(
        "--param",
        "params",
        multiple=True,
        metavar="KEY=VALUE",
        help="Family parameter, repeatable.",
    )(command)
    command = click.option("--theta", type=float, default=None, help="Shortcut for --param theta=VALUE.")(
        command
    )
    return click.option("-f", "--family", required=True, help="Catalog identifier.")(command)


def seed_option(command: Callable[..., Any]) -> Callable[..., Any]:
    return click.option(
        "--seed",
        type=int,
        envvar=SEED_ENVVAR,
        default=0,
        show_default=True,
        help=f"Master seed (env {SEED_ENVVAR}).",
    )(command)


def run_options(command: Callable[..., Any]) -> Callable[..., Any]:
    command = click.option(
        "-o",
        "--output",
        type=click.File("w"),
        default="-",
        help="Output file, standard output by default.",
    )(command)
    command = click.option(
        "--chunk-size",
        type=click.IntRange(min=1),
        default=DEFAULT_CHUNK_SIZE,
        show_default=True,
        help="Replicates per substream.",
    )(command)
    command = click.option(
        "--workers", type=click.IntRange(min=1), default=1, show_default=True
    )(command)
    command = click.option(
        "-n", "--n", "n", type=click.IntRange(min=1), default=1, show_default=True
    )(command)
    return seed_option(command)


def build_spec(family: str, theta: Optional[float], params: Sequence[str]) -> FamilySpec:
    return lookup(family, **parse_params(params, theta))


def build_model(spec: FamilySpec, unnormalized: bool = False) -> IdtModel:
    model: IdtModel = spec.model(normalized=not unnormalized)
    logger.log(
        LogLevel.INFO,
        f"{spec.id}: certificate {model.pair.certificate}, c = {model.scale_c!r}.",
    )
    return model


def run_chunks(
    config: RunConfig, work: Callable[[int, int, RngStream], list[list[Any]]]
) -> list[list[Any]]:
    """
    Split n replicates into chunks; chunk i covers replicates
    [i chunk_size, (i+1) chunk_size) and draws from substream (i,). Rows come
    back in chunk order whatever the scheduling.
    """
    starts = list(range(0, config.n, config.chunk_size))
    root = RngStream(config.seed)

    def task(index: int) -> list[list[Any]]:
        start = starts[index]
        size = min(config.chunk_size, config.n - start)
        return work(start, size, root.substream(index))

    rows: list[list[Any]] = []
    with tqdm(
        total=config.n,
        desc=config.family_id,
        unit=" draw",
        file=sys.stderr,
        disable=len(starts) < 2,
    ) as progress_bar:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            for index, chunk in enumerate(pool.map(task, range(len(starts)))):
                rows.extend(chunk)
                progress_bar.update(min(config.chunk_size, config.n - starts[index]))
    return rows


def format_value(value: float) -> str:
    return "inf" if math.isinf(value) else repr(float(value))


def write_rows(stream: TextIO, header: Sequence[str], rows: list[list[Any]]) -> None:
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(
            ",".join(format_value(v) if isinstance(v, float) else str(v) for v in row) + "\n"
        )


@click.group()
@click.option(
    "-v", "--verbose", type=bool, is_flag=True, default=False, help="Verbose output."
)
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="Flat key=value file with option defaults; flags and env win over it.",
)
@click.pass_context
def cli(ctx: click.Context, verbose: bool, config_path: Optional[str]) -> None:
    """
    Strong-IDT subordinators: evaluation, exact simulation and verification.

    A model is a catalog family (see `families list`) with F rescaled so that
    Ψ_H(1) = 1 unless --unnormalized is given.
    """
    set_verbosity(verbose)
    if config_path is not None:
        ctx.default_map = _default_map(ctx.command, load_config(config_path))


@cli.group()
def families() -> None:
    """Inspect the family catalog."""


@families.command("list")
def families_list() -> None:
    """Print every catalog family with its parameters and closed forms."""
    click.echo("id\tparams\tclosed_forms\tprovenance")
    for spec in catalog():
        params = ",".join(f"{key}={value:g}" for key, value in spec.params.items()) or "-"
        closed = ",".join(sorted(spec.closed_forms)) or "-"
        click.echo(f"{spec.id}\t{params}\t{closed}\t{spec.provenance}")


@cli.group()
def sample() -> None:
    """Draw seeded samples as CSV."""


@sample.command("copula")
@family_options
@click.option("-d", "--dim", type=click.IntRange(min=2), default=2, show_default=True)
@run_options
@translate_errors
def sample_copula(
    family: str,
    theta: Optional[float],
    params: tuple[str, ...],
    dim: int,
    seed: int,
    n: int,
    workers: int,
    chunk_size: int,
    output: TextIO,
) -> None:
    """Exact draws from the extreme-value copula C_d, one row per draw."""
    spec = build_spec(family, theta, params)
    model = build_model(spec)
    config = RunConfig(
        family_id=spec.id,
        params=dict(spec.params),
        dim=dim,
        n=n,
        seed=seed,
        chunk_size=chunk_size,
        workers=workers,
    )

    def work(start: int, size: int, rng: RngStream) -> list[list[Any]]:
        draws = sample_copula_batch(model, dim, size, rng)
        return [
            [seed, rng.stream_index, start + row, *map(float, values)]
            for row, values in enumerate(draws)
        ]

    header = ["seed", "stream", "draw", *(f"u{k}" for k in range(1, dim + 1))]
    write_rows(output, header, run_chunks(config, work))


@sample.command("path")
@family_options
@click.option("--horizon", type=click.FloatRange(min=0.0), default=1.0, show_default=True)
@click.option(
    "--sampler",
    "sampler_kind",
    type=click.Choice([kind.value for kind in SamplerKind]),
    default=SamplerKind.LEPAGE.value,
    show_default=True,
    help="'direct' needs a compound Poisson L; 'lepage' needs a Z-sampler.",
)
@click.option("--tol", type=click.FloatRange(min=0.0, min_open=True), default=None)
@click.option("--grid", type=click.IntRange(min=0), default=0, help="Extra equispaced times.")
@click.option("--unnormalized", is_flag=True, default=False)
@run_options
@translate_errors
def sample_path(
    family: str,
    theta: Optional[float],
    params: tuple[str, ...],
    horizon: float,
    sampler_kind: str,
    tol: Optional[float],
    grid: int,
    unnormalized: bool,
    seed: int,
    n: int,
    workers: int,
    chunk_size: int,
    output: TextIO,
) -> None:
    """Paths of H on [0, horizon] as (t, value) rows at the jump epochs."""
    spec = build_spec(family, theta, params)
    model = build_model(spec, unnormalized)
    sampler = PathSamplerFactory.create_sampler(
        SamplerKind(sampler_kind),
        PathSamplerArgs(model=model, horizon=horizon, tol=tol, logger=logger),
    )
    config = RunConfig(
        family_id=spec.id,
        params=dict(spec.params),
        n=n,
        seed=seed,
        horizon=horizon,
        tol=tol,
        chunk_size=chunk_size,
        workers=workers,
    )

    def work(start: int, size: int, rng: RngStream) -> list[list[Any]]:
        rows: list[list[Any]] = []
        for offset in range(size):
            path = sampler.sample(rng)
            times = path.epochs(grid)
            for t, value in zip(times, path(times)):
                rows.append([seed, rng.stream_index, start + offset, float(t), float(value)])
        return rows

    write_rows(output, ["seed", "stream", "draw", "t", "value"], run_chunks(config, work))


@sample.command("infdiv")
@family_options
@click.option(
    "--law",
    type=click.Choice([InfDivLaw.DUALITY.value, InfDivLaw.BONDESSON.value, InfDivLaw.CP.value]),
    default=InfDivLaw.BONDESSON.value,
    show_default=True,
)
@click.option("--tol", type=click.FloatRange(min=0.0, min_open=True), default=None)
@run_options
@translate_errors
def sample_infdiv(
    family: str,
    theta: Optional[float],
    params: tuple[str, ...],
    law: str,
    tol: Optional[float],
    seed: int,
    n: int,
    workers: int,
    chunk_size: int,
    output: TextIO,
) -> None:
    """
    Draws of H₁ of the family's pair as it stands (Ψ_H before rescaling) by a
    series representation. For the Bondesson families this is the law with
    Stieltjes measure ρ.
    """
    spec = build_spec(family, theta, params)
    chosen = InfDivLaw(law)
    series: SeriesSampler
    if chosen == InfDivLaw.DUALITY:
        # ν_H of a family never has a closed survival inverse.
        series = DualitySeriesSampler(
            levy=spec.model(normalized=False).levy,
            tol=tol,
            logger=logger,
            allow_numeric_inverse=True,
        )
    else:
        if spec.stieltjes is None:
            raise click.BadParameter(
                f"{spec.id} has no Stieltjes measure; the {law} law needs one.",
                param_hint="--law",
            )
        if chosen == InfDivLaw.CP:
            beta, G_inverse = cp_from_stieltjes(
                spec.stieltjes.total_mass, spec.stieltjes.g_rho_inverse
            )
            args = SeriesSamplerArgs(beta=beta, G_inverse=G_inverse, logger=logger)
        else:
            args = SeriesSamplerArgs(stieltjes=spec.stieltjes, tol=tol, logger=logger)
        series = SeriesSamplerFactory.create_sampler(chosen, args)
    config = RunConfig(
        family_id=spec.id,
        params=dict(spec.params),
        n=n,
        seed=seed,
        tol=tol,
        chunk_size=chunk_size,
        workers=workers,
    )

    def work(start: int, size: int, rng: RngStream) -> list[list[Any]]:
        values = series.sample_batch(size, rng)
        return [
            [seed, rng.stream_index, start + row, float(value)]
            for row, value in enumerate(values)
        ]

    write_rows(output, ["seed", "stream", "draw", "value"], run_chunks(config, work))


@cli.group("eval")
def evaluate() -> None:
    """Evaluate ℓ and Ψ_H."""


@evaluate.command("ell")
@family_options
@click.option("--t", "t_values", required=True, help="Comma-separated arguments t₁,…,t_d.")
@click.option("--unnormalized", is_flag=True, default=False)
@click.option("--numeric", is_flag=True, default=False, help="Ignore closed forms.")
@translate_errors
def evaluate_ell(
    family: str,
    theta: Optional[float],
    params: tuple[str, ...],
    t_values: str,
    unnormalized: bool,
    numeric: bool,
) -> None:
    """Print ℓ(t₁, …, t_d) with six decimals."""
    t = parse_vector(t_values, "--t")
    model = build_model(build_spec(family, theta, params), unnormalized)
    click.echo(f"{ell(model, t, use_closed=not numeric):.6f}")


@evaluate.command("psi")
@family_options
@click.option("--x", "x_values", required=True, help="Comma-separated abscissae.")
@click.option("--unnormalized", is_flag=True, default=False)
@click.option("--numeric", is_flag=True, default=False, help="Ignore closed forms.")
@translate_errors
def evaluate_psi(
    family: str,
    theta: Optional[float],
    params: tuple[str, ...],
    x_values: str,
    unnormalized: bool,
    numeric: bool,
) -> None:
    """Print x,Ψ_H(x) rows."""
    x = parse_vector(x_values, "--x")
    model = build_model(build_spec(family, theta, params), unnormalized)
    click.echo("x,psi_H")
    for point, value in zip(x, psi_H(model, x, use_closed=not numeric)):
        click.echo(f"{point:g},{value:.10g}")


@cli.command()
@family_options
@click.option(
    "--suite",
    type=click.Choice([kind.value for kind in SuiteKind]),
    default=SuiteKind.QUICK.value,
    show_default=True,
)
@click.option("-n", "--n", "n", type=click.IntRange(min=2), default=10_000, show_default=True)
@click.option("-d", "--dim", type=click.IntRange(min=2), default=2, show_default=True)
@click.option("--unnormalized", is_flag=True, default=False)
@click.option(
    "--format",
    "report_format",
    type=click.Choice(["json", "csv"]),
    default="json",
    show_default=True,
)
@click.option("-o", "--output", type=click.File("w"), default="-")
@click.option(
    "--curve",
    type=click.File("w"),
    default=None,
    help="Also write the (x, theoretical, empirical, se) Bernstein curve as CSV.",
)
@seed_option
@translate_errors
@click.pass_context
def verify(
    ctx: click.Context,
    family: str,
    theta: Optional[float],
    params: tuple[str, ...],
    suite: str,
    n: int,
    dim: int,
    unnormalized: bool,
    report_format: str,
    output: TextIO,
    curve: Optional[TextIO],
    seed: int,
) -> None:
    """Run the verification suite; exit code 1 when it fails."""
    spec = build_spec(family, theta, params)
    model = build_model(spec, unnormalized)
    report = run_suite(
        model,
        VerifyConfig(suite=SuiteKind(suite), n=n, seed=seed, dim=dim),
        stieltjes=spec.stieltjes,
        params=spec.params,
        logger=logger,
    )
    if report_format == "json":
        write_json(report, output)
    else:
        write_checks_csv(report, output)
    if curve is not None:
        write_curve_csv(report.curve, curve)
    if not report.overall_pass:
        logger.log(LogLevel.FAIL, f"{spec.id}: {len(report.failed())} checks failed.")
        ctx.exit(1)
    logger.log(LogLevel.PASS, f"{spec.id}: all checks within tolerance.")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Console entry point.

    Returns:
        int: 0 on success, 1 on a failed verification, 2 on a usage error.
    """
    try:
        result = cli.main(args=argv, prog_name="idt", standalone_mode=False)
    except click.ClickException as error:
        error.show()
        return error.exit_code
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return 1
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    sys.exit(main())
