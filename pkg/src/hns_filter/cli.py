"""Command-line front end.

Data (CSV, reports) goes to stdout or ``--out``; diagnostics go to stderr. The
exit status is 0 on success, 2 for parse/usage errors, 3 when a conversion or
search is infeasible and 4 for numerical failures.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable, Iterator, Sequence
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

from . import __version__
from .config import (
    EXIT_OK,
    EXIT_PARSE,
    GRID_POINTS,
    NARROW_RESOLUTION,
    WIDE_A3,
    WIDE_B2,
    WIDE_RESOLUTION,
)
from .errors import FilterParseError, HnsFilterError
from .filterio import parse_decimal, read_filter, write_csv
from .optimizer import SearchBox, SurfaceSample, grid_search, staged_optimize
from .report import (
    algebra_report,
    conversion_report,
    expansion_report,
    monomial_section,
    optimization_report,
    profile_report,
)
from .sensitivity import FrequencyGrid, ZConvention, magnitude, profile, ratio_profile, s_rcs
from .synth import Branch, RealTransfer3, convert

logger = logging.getLogger(__name__)

COMMANDS = ("info", "convert", "expand", "respond", "sens", "ratio", "optimize", "surface")
_LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: Path | None = None
    out: Path | None = None
    a3: float = 0.0
    b2: float = 0.0
    branch: Branch = Branch.NEGATIVE
    grid: int = GRID_POINTS
    z_convention: ZConvention = ZConvention.ROTATED
    box: tuple[float, float, float, float] = (*WIDE_A3, *WIDE_B2)
    resolution: int = WIDE_RESOLUTION
    narrow_resolution: int = NARROW_RESOLUTION
    realization: str = "hyper"
    verbosity: int = 0

    def frequency_grid(self) -> FrequencyGrid:
        try:
            return FrequencyGrid.uniform(self.grid, self.z_convention)
        except ValueError as exc:
            raise FilterParseError(f"--grid: {exc}") from exc

    def search_box(self) -> SearchBox:
        a3_lo, a3_hi, b2_lo, b2_hi = self.box
        try:
            return SearchBox((a3_lo, a3_hi), (b2_lo, b2_hi), self.resolution)
        except ValueError as exc:
            raise FilterParseError(f"--box: {exc}") from exc

    def target(self) -> RealTransfer3:
        if self.input is None:
            raise FilterParseError(f"'{self.command}' needs a filter file")
        return read_filter(self.input)


def _decimal(text: str) -> float:
    try:
        return parse_decimal(text)
    except FilterParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _count(text: str) -> int:
    if not text.isdigit() or int(text) < 2:
        raise argparse.ArgumentTypeError(f"expected an integer >= 2, got {text!r}")
    return int(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")
    common.add_argument("--out", type=Path, help="output file (a directory for 'optimize')")

    needs_filter = argparse.ArgumentParser(add_help=False)
    needs_filter.add_argument("input", type=Path, help="filter definition file")

    free = argparse.ArgumentParser(add_help=False)
    free.add_argument("--a3", type=_decimal, default=0.0)
    free.add_argument("--b2", type=_decimal, default=0.0)

    branch = argparse.ArgumentParser(add_help=False)
    branch.add_argument(
        "--branch", choices=[b.value for b in Branch], default=Branch.NEGATIVE.value
    )

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--grid", type=_count, default=GRID_POINTS, help="frequency points")
    grid.add_argument(
        "--z-convention",
        choices=[c.value for c in ZConvention],
        default=ZConvention.ROTATED.value,
        help="rotated: z = sin ω + i·cos ω; standard: z = e^{iω}",
    )

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument(
        "--box",
        type=_decimal,
        nargs=4,
        metavar=("A3_LO", "A3_HI", "B2_LO", "B2_HI"),
        default=[*WIDE_A3, *WIDE_B2],
    )
    search.add_argument("--resolution", type=_count, default=WIDE_RESOLUTION)

    parser = argparse.ArgumentParser(
        prog="hns-filter",
        description="Third-order IIR filters as first-order hypercomplex filters.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("info", parents=[common], help="built-in algebras and their isomorphism")
    sub.add_parser("convert", parents=[common, needs_filter, free, branch], help="print A, B, C")
    sub.add_parser(
        "expand", parents=[common, needs_filter, free, branch], help="expanded coefficients"
    )
    sub.add_parser(
        "respond", parents=[common, needs_filter, free, branch, grid], help="CSV of |H|"
    )
    sens = sub.add_parser(
        "sens", parents=[common, needs_filter, free, branch, grid], help="CSV of RCS"
    )
    sens.add_argument("--realization", choices=["hyper", "real"], default="hyper")
    sub.add_parser(
        "ratio", parents=[common, needs_filter, free, branch, grid], help="CSV of RCS ratio"
    )
    optimize = sub.add_parser(
        "optimize", parents=[common, needs_filter, branch, grid, search], help="staged search"
    )
    optimize.add_argument("--narrow-resolution", type=_count, default=NARROW_RESOLUTION)
    sub.add_parser(
        "surface", parents=[common, needs_filter, branch, grid, search], help="CSV of S_RCS"
    )
    return parser


def parse_args(argv: Sequence[str] | None = None) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    box = getattr(ns, "box", None)
    if box is not None and (box[0] > box[1] or box[2] > box[3]):
        parser.error(f"--box needs A3_LO <= A3_HI and B2_LO <= B2_HI, got {box}")
    return RunConfig(
        command=ns.command,
        input=getattr(ns, "input", None),
        out=ns.out,
        a3=getattr(ns, "a3", 0.0),
        b2=getattr(ns, "b2", 0.0),
        branch=Branch(getattr(ns, "branch", Branch.NEGATIVE)),
        grid=getattr(ns, "grid", GRID_POINTS),
        z_convention=ZConvention(getattr(ns, "z_convention", ZConvention.ROTATED)),
        box=tuple(getattr(ns, "box", (*WIDE_A3, *WIDE_B2))),  # type: ignore[arg-type]
        resolution=getattr(ns, "resolution", WIDE_RESOLUTION),
        narrow_resolution=getattr(ns, "narrow_resolution", NARROW_RESOLUTION),
        realization=getattr(ns, "realization", "hyper"),
        verbosity=ns.verbose,
    )


@contextmanager
def _output(path: Path | None) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
        return
    with path.open("w", encoding="utf-8", newline="") as stream:
        yield stream


# --- commands ---------------------------------------------------------------
def _info(config: RunConfig) -> None:
    with _output(config.out) as out:
        out.write(algebra_report() + "\n")


def _convert(config: RunConfig) -> None:
    target = config.target()
    f = convert(target, config.a3, config.b2, config.branch)
    with _output(config.out) as out:
        out.write(conversion_report(target, f) + "\n")


def _expand(config: RunConfig) -> None:
    f = convert(config.target(), config.a3, config.b2, config.branch)
    with _output(config.out) as out:
        out.write(expansion_report(f) + "\n\n" + monomial_section() + "\n")


def _respond(config: RunConfig) -> None:
    target = config.target()
    f = convert(target, config.a3, config.b2, config.branch)
    grid = config.frequency_grid()
    rows = [
        (w, magnitude(target, w, grid.convention), magnitude(f, w, grid.convention))
        for w in grid.points
    ]
    with _output(config.out) as out:
        write_csv(out, ("omega", "magnitude_real", "magnitude_hyper"), rows)


def _sens(config: RunConfig) -> None:
    target = config.target()
    grid = config.frequency_grid()
    if config.realization == "real":
        result = profile(target, grid)
    else:
        result = s_rcs(target, config.a3, config.b2, grid, branch=config.branch)
    if result.flagged:
        logger.warning("sensitivity undefined (pole or zero of H) at ω = %s", result.flagged)
    logger.info(profile_report(f"{config.realization} realization", result))
    with _output(config.out) as out:
        write_csv(out, ("omega", "rcs"), result.per_point)


def _ratio(config: RunConfig) -> None:
    rows = ratio_profile(
        config.target(), config.a3, config.b2, config.frequency_grid(), branch=config.branch
    )
    with _output(config.out) as out:
        write_csv(out, ("omega", "ratio"), rows)


def _surface(config: RunConfig) -> None:
    result = grid_search(
        config.target(), config.search_box(), config.frequency_grid(), branch=config.branch
    )
    with _output(config.out) as out:
        write_csv(out, ("a3", "b2", "s_rcs"), _surface_rows(result.surfaces["grid"]))


def _surface_rows(samples: Sequence[SurfaceSample]) -> list[tuple[float, float, float]]:
    return [(s.a3, s.b2, s.value) for s in samples]


def _optimize(config: RunConfig) -> None:
    result = staged_optimize(
        config.target(),
        config.frequency_grid(),
        branch=config.branch,
        wide=config.search_box(),
        narrow_resolution=config.narrow_resolution,
    )
    sys.stdout.write(optimization_report(result) + "\n")
    if config.out is not None:
        config.out.mkdir(parents=True, exist_ok=True)
        for stage, samples in result.surfaces.items():
            path = config.out / f"surface_{stage}.csv"
            with _output(path) as out:
                write_csv(out, ("a3", "b2", "s_rcs"), _surface_rows(samples))
            logger.info("wrote %s", path)


_HANDLERS: dict[str, Callable[[RunConfig], None]] = {
    "info": _info,
    "convert": _convert,
    "expand": _expand,
    "respond": _respond,
    "sens": _sens,
    "ratio": _ratio,
    "optimize": _optimize,
    "surface": _surface,
}


def run(config: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    try:
        _HANDLERS[config.command](config)
    except HnsFilterError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return exc.exit_code
    except OSError as exc:
        logger.error("cannot write output: %s", exc)
        return EXIT_PARSE
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    config = parse_args(argv)
    # stdout carries data, so logs MUST go to stderr.
    logging.basicConfig(
        level=_LOG_LEVELS[min(config.verbosity, len(_LOG_LEVELS) - 1)],
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    return run(config)
