"""
Tropical Corals - Command line

    python -m corals <command> --input FILE [options]

Commands: validate, enumerate, count, lift-tmt, project-tmt, extend,
area-series, plot. Results go to --output or stdout; errors are written to
stderr as one JSON object and the process exits with the error's code.
"""

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

from corals import __version__
from corals.core.config import settings
from corals.core.errors import CoralError, InvalidCoral, InvalidGraph, InvalidTMT, OutputUnwritable, ParseError
from corals.core.logging import configure_logging
from corals.plot.svg import parse_viewport, plot
from corals.schemas import (
    AreaSeriesModel,
    CoralGraphModel,
    CoralModel,
    CoralTypeModel,
    CountJobModel,
    CountResultModel,
    DegreeModel,
    MorseTreeModel,
    TropicalCurveModel,
    TypeCatalogModel,
    ValidationReportModel,
    dump_model,
    load_model,
)
from corals.tropical.constraints import Constraint, sample_general_good
from corals.tropical.coral import Degree, validate_coral
from corals.tropical.coralgraph import validate_graph
from corals.tropical.counting import count, extend_coral
from corals.tropical.moduli import enumerate_types
from corals.tropical.morse import coral_to_tmt, lift_tmt, validate_tmt
from corals.tropical.quotient import count_series, normalize_mod_Z, translate_constraint

logger = logging.getLogger(__name__)

COMMANDS = ("validate", "enumerate", "count", "lift-tmt", "project-tmt", "extend", "area-series", "plot")


# ============================================================================
# Input and output
# ============================================================================

def read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", details={"path": path}) from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc.msg}", details={"line": exc.lineno}) from exc


def emit(text: str, output: Optional[str]) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    try:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputUnwritable(f"cannot write {output}: {exc.strerror}", details={"path": output}) from exc


def parse_heights(text: Optional[str]) -> List[Fraction]:
    if not text:
        return []
    try:
        return [Fraction(part.strip()) for part in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"heights {text!r} are not comma-separated rationals") from exc


def _constraint_for(job: CountJobModel, d: Degree, seed: Optional[int]) -> Constraint:
    if job.constraint is not None:
        return job.constraint.to_constraint()
    if seed is None:
        seed = job.seed if job.seed is not None else settings.default_seed
    logger.info("sampling a constraint with seed %d", seed)
    return sample_general_good(d, seed)


# ============================================================================
# Commands
# ============================================================================

def cmd_validate(args: argparse.Namespace) -> str:
    """Validate a graph, coral or Morse tree file; the file's keys decide which."""
    data = read_json(args.input)
    if "decoration" in data:
        report, _ = validate_tmt(load_model(MorseTreeModel, data).to_tree())
        error = InvalidTMT
    elif "positions" in data:
        report = validate_coral(load_model(CoralModel, data).to_coral())
        error = InvalidCoral
    else:
        report = validate_graph(load_model(CoralGraphModel, data).to_graph())
        error = InvalidGraph
    report.require(error)
    return dump_model(ValidationReportModel.from_report(report))


def cmd_enumerate(args: argparse.Namespace) -> str:
    d = load_model(DegreeModel, read_json(args.input)).to_degree()
    catalog = enumerate_types(d)
    return dump_model(TypeCatalogModel(degree=DegreeModel.from_degree(d),
                                       types=[CoralTypeModel.from_type(t) for t in catalog.types]))


def cmd_count(args: argparse.Namespace) -> str:
    job = load_model(CountJobModel, read_json(args.input))
    d = job.degree.to_degree()
    result = count(d, _constraint_for(job, d, args.seed), auto_stabilize=job.auto_stabilize)
    if args.output is not None:
        emit(dump_model(CountResultModel.from_result(result)), args.output)
    return f"{result.total}\n"


def cmd_lift_tmt(args: argparse.Namespace) -> str:
    m = load_model(MorseTreeModel, read_json(args.input)).to_tree()
    return dump_model(CoralModel.from_coral(lift_tmt(m, parse_heights(args.heights))))


def cmd_project_tmt(args: argparse.Namespace) -> str:
    c = load_model(CoralModel, read_json(args.input)).to_coral()
    return dump_model(MorseTreeModel.from_tree(coral_to_tmt(c, root=args.root)))


def cmd_extend(args: argparse.Namespace) -> str:
    c = load_model(CoralModel, read_json(args.input)).to_coral()
    return dump_model(TropicalCurveModel.from_curve(extend_coral(c)))


def cmd_area_series(args: argparse.Namespace) -> str:
    job = load_model(CountJobModel, read_json(args.input))
    b = args.b if args.b is not None else job.b
    a_max = args.a_max if args.a_max is not None else job.a_max
    if b is None or b < 1:
        raise ParseError("area-series needs a positive periodicity --b")
    if a_max is None or a_max < 0:
        raise ParseError("area-series needs a nonnegative --a-max")
    qd = normalize_mod_Z(job.degree.to_degree(), b)
    if job.constraint is not None:
        lam = translate_constraint(job.constraint.to_constraint(), qd.offset, b)
    else:
        lam = _constraint_for(job, qd.representative, args.seed)
    return dump_model(AreaSeriesModel.from_series(count_series(qd, lam, a_max)))


def cmd_plot(args: argparse.Namespace) -> str:
    if args.output is None:
        raise ParseError("plot needs --output")
    data = read_json(args.input)
    if "decoration" in data:
        obj = load_model(MorseTreeModel, data).to_tree()
    elif "rays" in data:
        obj = load_model(TropicalCurveModel, data).to_curve()
    else:
        obj = load_model(CoralModel, data).to_coral()
    plot(obj, args.output, parse_viewport(args.viewport or settings.plot_viewport))
    return ""


HANDLERS: Dict[str, Callable[[argparse.Namespace], str]] = {
    "validate": cmd_validate,
    "enumerate": cmd_enumerate,
    "count": cmd_count,
    "lift-tmt": cmd_lift_tmt,
    "project-tmt": cmd_project_tmt,
    "extend": cmd_extend,
    "area-series": cmd_area_series,
    "plot": cmd_plot,
}


# ============================================================================
# Entry point
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="corals", description="Enumerate, validate and count tropical corals.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", required=True, help="JSON input file")
    ap.add_argument("--output", default=None, help="result file; stdout when omitted (required for plot)")
    ap.add_argument("--seed", type=int, default=None, help="seed for constraint sampling")
    ap.add_argument("--b", type=int, default=None, help="periodicity of the quotient")
    ap.add_argument("--a-max", dest="a_max", type=int, default=None, help="largest tropical area kept")
    ap.add_argument("--heights", default=None, help='comma-separated rationals, e.g. "2,7/2"')
    ap.add_argument("--root", type=int, default=None, help="negative vertex used as the Morse root")
    ap.add_argument("--viewport", default=None, help='"xmin,hmin,xmax,hmax" for plots')
    return ap


def _attach_values(argv: Sequence[str]) -> List[str]:
    """Glue "--viewport VALUE" into one token so a leading minus is not read as an option."""
    out: List[str] = []
    tokens = iter(argv)
    for token in tokens:
        if token == "--viewport":
            value = next(tokens, None)
            out.append(token if value is None else f"--viewport={value}")
        else:
            out.append(token)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(_attach_values(sys.argv[1:] if argv is None else argv))
    configure_logging(settings)
    try:
        text = HANDLERS[args.command](args)
        if args.command in ("count", "plot"):
            sys.stdout.write(text)
        else:
            emit(text, args.output)
    except CoralError as exc:
        sys.stderr.write(json.dumps(exc.to_report(), sort_keys=True, default=str) + "\n")
        logger.debug("%s failed with exit code %d", args.command, exc.exit_code)
        return exc.exit_code
    return 0
