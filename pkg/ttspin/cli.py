import logging
from functools import wraps
from pathlib import Path
from typing import Callable, Literal, Optional

import click
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from ttspin.services.base import SpinReportBase
from ttspin.services.collider import Beam, ColliderConfig, Interpolation, parse_q_scale
from ttspin.services.reports.critical import SpinCriticalScan
from ttspin.services.reports.luminosity import SpinLuminosity
from ttspin.services.reports.observables import HIGH_PT, THRESHOLD, SpinObservables
from ttspin.services.reports.scan_map import SCAN_KINDS, SpinScanMap
from ttspin.services.reports.tomography import SpinTomography
from ttspin.services.tomography.decay import DecayConfig
from ttspin.settings import settings
from ttspin.utils.errors import TTSpinError
from ttspin.utils.utils import atomic_write, configure_logging, parse_grid, parse_window

logger = logging.getLogger(__name__)

COLLIDER_OPTIONS = ("beam", "sqrt_s", "mtop", "alpha_s", "pdf", "q_scale", "interpolation")


class RunSpec(BaseModel):
    """Validated description of one command run."""

    model_config = ConfigDict(frozen=True)

    command: str
    collider: ColliderConfig
    fmt: Literal["csv", "json"] = "csv"
    out: Optional[Path] = None
    seed: int = Field(default=0, ge=0)

    @field_validator("out")
    @classmethod
    def check_out(cls, out: Optional[Path]) -> Optional[Path]:
        """Reject an output path that names a directory."""
        if out is not None and out.is_dir():
            raise ValueError(f"output path {out} is a directory")
        return out


class TTSpinGroup(click.Group):
    """Command group mapping library errors to exit codes 3 (data) and 4 (numeric)."""

    def invoke(self, ctx: click.Context):
        """Run the subcommand and translate its errors."""
        try:
            return super().invoke(ctx)
        except TTSpinError as exc:
            click.echo(f"Error: {exc.detail}", err=True)
            ctx.exit(exc.exit_code)
        except ValidationError as exc:
            raise click.UsageError(str(exc), ctx)


def _option_callback(parser: Callable[[str], object]) -> Callable:
    """Wrap a text parser as a click callback raising BadParameter."""

    def callback(ctx: click.Context, param: click.Parameter, value: Optional[str]):
        """Parse the value unless it is absent."""
        if value is None:
            return None
        try:
            return parser(value)
        except ValueError as exc:
            raise click.BadParameter(str(exc), ctx=ctx, param=param)

    return callback


def _energies(text: str) -> list:
    """Comma-separated energies in GeV."""
    return [float(part) for part in text.split(",") if part.strip()]


def _beams(text: str) -> list:
    """Comma-separated beam names."""
    return [Beam(part.strip()) for part in text.split(",") if part.strip()]


def collider_options(func: Callable) -> Callable:
    """Attach the collider and output options shared by every command."""
    options = [
        click.option("--beam", type=click.Choice([b.value for b in Beam]), default=Beam.PP.value, show_default=True),
        click.option("--sqrt-s", type=float, default=13000.0, show_default=True, help="Collider energy in GeV."),
        click.option("--mtop", type=float, default=None, help="Top mass in GeV [default: settings.M_TOP]."),
        click.option("--alpha-s", type=float, default=None, help="Strong coupling [default: settings.ALPHA_S]."),
        click.option(
            "--pdf",
            default="toy-v1",
            show_default=True,
            help="toy-v1, toy-gluon-only, toy-quark-only or the path of an lhagrid1 member file.",
        ),
        click.option(
            "--q-scale",
            default="mtt",
            show_default=True,
            callback=_option_callback(parse_q_scale),
            help="mtt, mtt/2 or fixed:GEV.",
        ),
        click.option(
            "--interpolation",
            type=click.Choice([i.value for i in Interpolation]),
            default=Interpolation.BILINEAR.value,
            show_default=True,
        ),
        click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True),
        click.option(
            "--out",
            type=click.Path(dir_okay=False, path_type=Path),
            default=None,
            help="Output file; standard output when omitted.",
        ),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _run_spec(command: str, options: dict) -> RunSpec:
    """Assemble the run description from the shared options."""
    q_scale_rule, q_fixed = options["q_scale"]
    collider = {
        "beam": options["beam"],
        "sqrt_s": options["sqrt_s"],
        "pdf": options["pdf"],
        "q_scale_rule": q_scale_rule,
        "q_fixed": q_fixed,
        "interpolation": options["interpolation"],
    }
    if options["mtop"] is not None:
        collider["m_top"] = options["mtop"]
    if options["alpha_s"] is not None:
        collider["alpha_s"] = options["alpha_s"]
    return RunSpec(
        command=command,
        collider=ColliderConfig(**collider),
        fmt=options["fmt"],
        out=options["out"],
        seed=options.get("seed", 0),
    )


def _emit(report: SpinReportBase, spec: RunSpec) -> None:
    """Write the report to its output file or to standard output."""
    text = report.render(spec.fmt)
    if spec.out is None:
        click.echo(text, nl=False)
        return
    atomic_write(spec.out, text)
    logger.info("%s written to %s", spec.command, spec.out)


def report_command(func: Callable) -> Callable:
    """Build the RunSpec from the shared options before calling the command."""

    @wraps(func)
    def wrapper(**options):
        """Split the shared options from the command-specific ones."""
        spec = _run_spec(func.__name__.replace("_", "-"), options)
        specific = {k: v for k, v in options.items() if k not in COLLIDER_OPTIONS + ("fmt", "out")}
        _emit(func(spec, **specific), spec)

    return wrapper


@click.group(cls=TTSpinGroup)
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default=None,
    help="Logging level [default: settings.LOG_LEVEL].",
)
@click.version_option(package_name="ttbar-spin-entanglement")
def cli(log_level: Optional[str]) -> None:
    """Spin entanglement of top-quark pairs produced at hadron colliders."""
    configure_logging(log_level.upper() if log_level else settings.LOG_LEVEL)


@cli.command("scan-map")
@collider_options
@click.option(
    "--channel",
    type=click.Choice(SCAN_KINDS),
    default="gg",
    show_default=True,
    help="Initial state, constant-weight mixture or hadronic state of the collider.",
)
@click.option(
    "--grid",
    default="50x50",
    show_default=True,
    callback=_option_callback(parse_grid),
    help="Resolutions NxM in beta and theta.",
)
@click.option("--w-gg", type=float, default=None, help="Gluon-fusion weight of the mixture.")
@report_command
def scan_map(spec: RunSpec, channel: str, grid: tuple, w_gg: Optional[float]) -> SpinReportBase:
    """Concurrence, delta and CHSH value on a (beta, theta) grid."""
    report = SpinScanMap(cfg=spec.collider, kind=channel, n_beta=grid[0], n_theta=grid[1], w_gg=w_gg)
    report.get_scan_map()
    return report


@cli.command()
@collider_options
@click.option(
    "--mode",
    type=click.Choice([THRESHOLD, HIGH_PT]),
    default=None,
    help="Threshold windows [default for pp] or high-pt windows [default for ppbar].",
)
@click.option(
    "--mass-range",
    default="350:1000",
    show_default=True,
    callback=_option_callback(parse_window),
    help="First and last mass cut LO:HI in GeV.",
)
@click.option("--points", type=click.IntRange(min=1), default=14, show_default=True, help="Number of cuts.")
@report_command
def observables(spec: RunSpec, mode: Optional[str], mass_range: tuple, points: int) -> SpinReportBase:
    """Integrated correlations and markers against an invariant-mass cut."""
    lo, hi = mass_range
    m_cuts = [lo] if points == 1 else [lo + (hi - lo) * i / (points - 1) for i in range(points)]
    report = SpinObservables(cfg=spec.collider, m_cuts=m_cuts, mode=mode)
    report.get_observables()
    return report


@cli.command()
@collider_options
@click.option(
    "--energies",
    default="2000,5000,8000,13000",
    show_default=True,
    callback=_option_callback(_energies),
    help="Comma-separated collider energies in GeV.",
)
@click.option(
    "--beams",
    default="pp,ppbar",
    show_default=True,
    callback=_option_callback(_beams),
    help="Comma-separated beams to scan.",
)
@report_command
def critical(spec: RunSpec, energies: list, beams: list) -> SpinReportBase:
    """Gluon fractions and threshold critical velocities against the collider energy."""
    report = SpinCriticalScan(cfg=spec.collider, energies=energies, beams=beams)
    report.get_critical()
    return report


@cli.command()
@collider_options
@click.option(
    "--window",
    default="346:400",
    show_default=True,
    callback=_option_callback(parse_window),
    help="Invariant-mass window LO:HI in GeV.",
)
@click.option("--n", "n", type=int, default=100_000, show_default=True, help="Number of events.")
@click.option("--seed", type=int, default=0, show_default=True, help="Event generator seed.")
@click.option("--streams", type=click.IntRange(min=1), default=1, show_default=True, help="Generator streams.")
@click.option("--kappa-plus", type=float, default=1.0, show_default=True, help="Antilepton analyzing power.")
@click.option("--kappa-minus", type=float, default=-1.0, show_default=True, help="Lepton analyzing power.")
@click.option(
    "--events",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Also write the generated events as CSV.",
)
@report_command
def tomography(
    spec: RunSpec,
    window: tuple,
    n: int,
    seed: int,
    streams: int,
    kappa_plus: float,
    kappa_minus: float,
    events: Optional[Path],
) -> SpinReportBase:
    """Simulated dilepton tomography of the pairs in a mass window."""
    report = SpinTomography(
        cfg=spec.collider,
        lo=window[0],
        hi=window[1],
        n=n,
        seed=seed,
        decay=DecayConfig(kappa_plus=kappa_plus, kappa_minus=kappa_minus),
        streams=streams,
        events_path=events,
    )
    report.get_tomography()
    return report


@cli.command()
@collider_options
@click.option(
    "--mass-range",
    default=None,
    callback=_option_callback(parse_window),
    help="Mass range LO:HI in GeV [default: threshold to sqrt_s].",
)
@click.option("--points", type=int, default=20, show_default=True, help="Number of masses.")
@report_command
def luminosity(spec: RunSpec, mass_range: Optional[tuple], points: int) -> SpinReportBase:
    """Parton luminosities and channel weights against the invariant mass."""
    lo, hi = mass_range or (None, None)
    report = SpinLuminosity(cfg=spec.collider, m_lo=lo, m_hi=hi, points=points)
    report.get_luminosity()
    return report


if __name__ == "__main__":
    cli()
