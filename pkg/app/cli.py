"""
Command-line front end

    python -m app <subcommand> [INSTANCE] [--bound N] [--probes q:r,...] [--format text|records]

INSTANCE is a JSON instance record (see app/models/instances.py); "-" or no
path reads standard input. Exit codes: 0 positive verdict, 1 negative,
2 unknown, 3 parse or input error, 4 step budget exhausted.
"""

import argparse
import sys
from typing import Callable, Dict, List, NamedTuple, Optional, Type

from loguru import logger
from pydantic import BaseModel, field_validator

from .config import settings
from .models.common import OutputFormat
from .models.instances import (
    CosetInstance,
    GadgetCheckInstance,
    GadgetCompileInstance,
    GroebnerInstance,
    LatticeInstance,
    MembershipInstance,
    MonomialInstance,
    ReductionInstance,
    SubgroupInstance,
    SyzygyInstance,
    WordInstance,
)
from .models.results import ResultRecord
from .services.toolkit_service import InputSource, ToolkitService
from .utils.errors import EXIT_PARSE_ERROR, ParseError, ToolkitException, ValidationError, exit_code_for
from .utils.logging import setup_structured_logging
from .utils.validators import parse_probe_list, validate_positive_bound


class Subcommand(NamedTuple):
    model: Type[BaseModel]
    run: Callable[..., ResultRecord]
    solver_flags: bool = False
    help: str = ""


SUBCOMMANDS: Dict[str, Subcommand] = {
    "gb": Subcommand(GroebnerInstance, ToolkitService.groebner, help="strong Groebner basis"),
    "member": Subcommand(MembershipInstance, ToolkitService.member, help="submodule membership"),
    "syzygy": Subcommand(SyzygyInstance, ToolkitService.syzygy, help="syzygies in a presented module"),
    "zlattice": Subcommand(LatticeInstance, ToolkitService.zlattice, help="integer points of a submodule"),
    "solve-monomial": Subcommand(
        MonomialInstance, ToolkitService.solve_monomial, True, "X^(zd) f1 = f0"
    ),
    "coset-intersect": Subcommand(
        CosetInstance, ToolkitService.coset, True, "emptiness of <G> cap h<H>"
    ),
    "subgroup": Subcommand(SubgroupInstance, ToolkitService.subgroup, help="subgroup structure and membership"),
    "gadget-compile": Subcommand(GadgetCompileInstance, ToolkitService.gadget_compile, help="compile P(z) = a"),
    "gadget-check": Subcommand(GadgetCheckInstance, ToolkitService.gadget_check, help="evaluate gadgets"),
    "instance": Subcommand(ReductionInstance, ToolkitService.instance, help="build a reduction"),
    "eval-word": Subcommand(WordInstance, ToolkitService.eval_word, help="evaluate a word"),
}


class RunConfig(BaseModel):
    """Parsed command line"""
    subcommand: str
    path: Optional[str] = None
    search_bound: Optional[int] = None
    probes: Optional[str] = None
    output_format: OutputFormat = OutputFormat.TEXT
    gadget: Optional[str] = None
    z: Optional[List[int]] = None
    verbose: bool = False

    @field_validator("search_bound")
    @classmethod
    def check_bound(cls, v):
        return v if v is None else validate_positive_bound(cls, v)


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.replace("(", "").replace(")", "").split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


class ToolkitArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors raise ValidationError (exit code 3)"""

    def error(self, message: str):
        raise ValidationError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = ToolkitArgumentParser(
        prog="abc-toolkit",
        description="Exact decision procedures for abelian-by-cyclic groups."
    )
    parser.add_argument("--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, spec in SUBCOMMANDS.items():
        p = sub.add_parser(name, help=spec.help)
        p.add_argument("path", nargs="?", default=None, help="JSON instance record; '-' for stdin")
        p.add_argument(
            "--format", dest="output_format", choices=[f.value for f in OutputFormat],
            default=OutputFormat.TEXT.value, help="text lines or JSON records"
        )
        if spec.solver_flags:
            p.add_argument("--bound", dest="search_bound", type=int, help="bounded search range B")
            p.add_argument("--probes", help="probe rings q:r,q:r,...")
        if name == "gadget-check":
            p.add_argument("--gadget", choices=["square", "sum", "product"], help="check a single gadget")
            p.add_argument("--z", type=_int_list, help="assignment, e.g. 2,4,-2")
    return parser


def parse_run_config(argv: Optional[List[str]] = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    return RunConfig(**{k: v for k, v in vars(args).items() if v is not None})


def _read_source(path: Optional[str]) -> InputSource:
    if path is None or path == "-":
        return InputSource(sys.stdin.read(), "<stdin>")
    try:
        with open(path, encoding="utf-8") as fh:
            return InputSource(fh.read(), path)
    except OSError as e:
        raise ParseError(f"cannot read instance file: {e.strerror}", source=path)


def run(argv: Optional[List[str]] = None, service: Optional[ToolkitService] = None) -> int:
    """Parse argv, dispatch, print the canonical output; returns the exit code"""
    try:
        config = parse_run_config(argv)
    except ToolkitException as e:
        print(f"error: {e.message}", file=sys.stderr)
        return exit_code_for(e)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE_ERROR

    setup_structured_logging("DEBUG" if config.verbose else "WARNING")
    service = service or ToolkitService(settings)
    spec = SUBCOMMANDS[config.subcommand]

    try:
        if config.probes is not None:
            parse_probe_list(config.probes)
        if config.subcommand == "gadget-check" and config.gadget is not None:
            src = InputSource()
            record = GadgetCheckInstance(gadget=config.gadget, z=config.z or [])
        else:
            src = _read_source(config.path)
            record = service.load(spec.model, src.text, src.name)
        kwargs = {"bound": config.search_bound, "probes": config.probes} if spec.solver_flags else {}
        result = spec.run(service, record, src, **kwargs)
    except ToolkitException as e:
        print(f"error: {e.message}", file=sys.stderr)
        logger.debug(f"{config.subcommand} failed: {e.to_dict()}")
        return exit_code_for(e)

    if config.output_format == OutputFormat.RECORDS:
        print(result.model_dump_json())
    else:
        print(result.to_text())
    return result.exit_code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
