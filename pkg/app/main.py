import argparse
import sys
from typing import Sequence

from dishka import Container, make_container
from pydantic import ValidationError

import directions.errors  # noqa: F401
import energy.errors  # noqa: F401
import gaps.errors  # noqa: F401
import measures.errors  # noqa: F401
from cli import commands
from cli.models import RunConfig
from core.errors import ApplicationError
from core.exit_codes import resolve_exit_status
from core.log import configure_logging
from core.providers import DataclassSerializerProvider, SettingsProvider
from core.serializer import dumps_json
from core.settings import Settings
from directions.providers import DirectionsProvider
from energy.providers import EnergyProvider
from gaps.providers import GapsProvider
from generators.models import GeneratorKind
from generators.providers import GeneratorsProvider
from lattice.providers import LatticeProvider
from measures.providers import MeasuresProvider
from verification.providers import VerificationProvider

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def make_favlab_container(settings: Settings) -> Container:
    """
    PURPOSE: Assemble the dependency injection container of one run
    ARGUMENTS:
        settings: Settings - Settings (or RunConfig) every service reads
    RETURNS: Container - Synchronous dishka container; services live in its request scope
    """
    return make_container(
        SettingsProvider(),
        DataclassSerializerProvider(),
        GeneratorsProvider(),
        MeasuresProvider(),
        DirectionsProvider(),
        LatticeProvider(),
        EnergyProvider(),
        GapsProvider(),
        VerificationProvider(),
        context={Settings: settings},
    )


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(item) for item in text.split(",") if item.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="favlab", description="Favard length and conical energy laboratory")
    parser.add_argument("--threads", type=int, help="worker threads (FAVLAB_THREADS when omitted)")
    parser.add_argument("--log-level", choices=LOG_LEVELS, type=str.upper)
    parser.add_argument("--svg-timestamp", action="store_true", help="keep the creation date in SVG files")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str, config: bool = True) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, help=help_text)
        if config:
            sub.add_argument("--config", help="key=value run file")
        sub.add_argument("--out", required=True, help="output directory")
        return sub

    generate = command("generate", "generate a planar set and its sample", config=False)
    generate.add_argument("kind", choices=[kind.value for kind in GeneratorKind])
    generate.add_argument("--n", type=int)
    generate.add_argument("--k", type=int, help="segment count; must match --lengths")
    generate.add_argument("--direction", type=float)
    generate.add_argument("--offsets", type=_floats)
    generate.add_argument("--lengths", type=_floats)
    generate.add_argument("--starts", type=_floats)
    generate.add_argument("--lip", type=float)
    generate.add_argument("--n-nodes", type=int)
    generate.add_argument("--seed", type=int)
    generate.add_argument("--path")

    favard = command("favard", "Favard length of a set file", config=False)
    favard.add_argument("set_file")
    favard.add_argument("--n-angles", type=int)

    project = command("project", "projection length and density in one direction", config=False)
    project.add_argument("set_file")
    project.add_argument("--theta", type=float, required=True)
    project.add_argument("--bin-width", type=float)
    project.add_argument("--spacing", type=float)

    command("energies", "per-cube conical energies")
    command("corona", "corona decomposition and tree bounds")
    verify = command("verify", "run every checker and write the report bundle")
    verify.add_argument("--mutations", action="store_true", help="run the scripted corruptions instead")
    command("iterate-directions", "iterated enlargement of the good directions")
    return parser


def overrides(args: argparse.Namespace) -> dict:
    """Settings given on the command line; None marks a flag that was not passed."""
    values = {"THREADS": args.threads, "LOG_LEVEL": args.log_level, "OUT_DIR": args.out}
    if args.command == "generate":
        if args.k is not None and args.lengths is not None and args.k != len(args.lengths):
            raise argparse.ArgumentTypeError(f"--k {args.k} does not match {len(args.lengths)} lengths")
        values.update(GENERATOR=args.kind, GENERATOR_N=args.n, SEGMENT_DIRECTION=args.direction,
                      SEGMENT_OFFSETS=args.offsets, SEGMENT_LENGTHS=args.lengths, SEGMENT_STARTS=args.starts,
                      LIP=args.lip, N_NODES=args.n_nodes, SEED=args.seed, SET_PATH=args.path)
    elif args.command == "favard":
        values.update(N_ANGLES=args.n_angles)
    elif args.command == "project":
        values.update(BIN_WIDTH=args.bin_width, SAMPLE_SPACING=args.spacing)
    return values


def dispatch(args: argparse.Namespace, config: RunConfig, container: Container) -> int:
    match args.command:
        case "generate":
            return commands.cmd_generate(config, container)
        case "favard":
            return commands.cmd_favard(config, container, args.set_file, args.svg_timestamp)
        case "project":
            return commands.cmd_project(config, container, args.set_file, args.theta)
        case "energies":
            return commands.cmd_energies(config, container)
        case "corona":
            return commands.cmd_corona(config, container)
        case "verify":
            return commands.cmd_verify(config, container, args.mutations, args.svg_timestamp)
        case "iterate-directions":
            return commands.cmd_iterate_directions(config, container)
    raise AssertionError(args.command)


def main(argv: Sequence[str] | None = None) -> int:
    """
    PURPOSE: favlab command-line entry point
    DESCRIPTION: Parses the subcommand, builds the run configuration from the run file and the
    flags, and runs the command inside one request scope of a fresh container.
    RETURNS: int - 0 on success, 1 on a failed check, 2 on usage or validation errors; errors are
    reported on stderr as a JSON line with the error code
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig.load(getattr(args, "config", None), **overrides(args))
    except argparse.ArgumentTypeError as exc:
        parser.error(str(exc))
    except (ApplicationError, ValidationError) as exc:
        return report(exc)
    configure_logging(config.LOG_LEVEL)
    container = make_favlab_container(config)
    try:
        with container() as request_container:
            return dispatch(args, config, request_container)
    except (ApplicationError, ValidationError) as exc:
        return report(exc)
    finally:
        container.close()


def report(exc: Exception) -> int:
    status = resolve_exit_status(exc)
    print(dumps_json(status.json(str(exc))), file=sys.stderr)
    return status.exit_code


if __name__ == "__main__":
    sys.exit(main())
