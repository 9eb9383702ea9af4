"""Command-line front end for distcomp.

Exit codes: 0 success, 2 flag/parameter errors, 3 infeasible chords,
4 domain errors (non-positive values, spherical size guards, grids),
5 threshold bracket failures.
"""

import argparse
import contextlib
import logging
import math
import re
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Callable, Dict, Iterator, List, Optional, Sequence, TextIO, Tuple

import numpy as np
from rich.console import Console

from .comparison_engine import ThresholdSide, equivalence_audit, estimate_threshold, perturb, synth
from .config import Settings, load_settings, setup_logging
from .distance_like import SampledFunction, is_distance_like, pairwise_oracle, thin_for_oracle
from .errors import DistCompError, ParameterError
from .figure import render_svg, scale_curves, write_curves_csv
from .fitting import ChordSpec, fit, fit_curvature_scale
from .formats import dump_json, read_sample_csv, write_csv, write_sample_csv
from .inequality_checker import check
from .model_spaces import ComparisonParams, eval_g, eval_g_prime, eval_g_second
from .utils import format_error

logger = logging.getLogger(__name__)

NEGATIVE_VALUE = re.compile(r"^-\.?\d")


def finite_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return value


def float_list(text: str) -> Tuple[float, ...]:
    """Comma-separated finite floats, e.g. '6,0,-1'."""
    items = [item for item in text.split(",") if item.strip()]
    if not items:
        raise argparse.ArgumentTypeError("expected a comma-separated list of numbers")
    return tuple(finite_float(item.strip()) for item in items)


@dataclass(frozen=True)
class JobConfig:
    """A parsed command with its flags; settings supply unset defaults."""

    command: str
    settings: Settings
    k: Optional[float] = None
    u: Optional[float] = None
    v: Optional[float] = None
    t1: Optional[float] = None
    t2: Optional[float] = None
    g1: Optional[float] = None
    g2: Optional[float] = None
    t_values: Optional[Tuple[float, ...]] = None
    a: Optional[float] = None
    b: Optional[float] = None
    n: Optional[int] = None
    input: Optional[Path] = None
    output: Optional[Path] = None
    csv_output: Optional[Path] = None
    tol: Optional[float] = None
    witness_tol: Optional[float] = None
    residual_tol: Optional[float] = None
    seed: Optional[int] = None
    pairs: Optional[int] = None
    ks: Optional[Tuple[float, ...]] = None
    side: Optional[str] = None
    k_min: Optional[float] = None
    k_max: Optional[float] = None
    k_tol: Optional[float] = None
    resample: Optional[int] = None
    amplitude: Optional[float] = None
    center: Optional[float] = None
    width: Optional[float] = None
    oracle: bool = False
    derivatives: bool = False

    @classmethod
    def from_namespace(cls, namespace: argparse.Namespace, settings: Settings) -> "JobConfig":
        values = {
            f.name: getattr(namespace, f.name)
            for f in fields(cls)
            if f.name not in ("command", "settings") and getattr(namespace, f.name, None) is not None
        }
        config = cls(command=namespace.command, settings=settings, **values)
        config.validate()
        return config

    def validate(self) -> None:
        """Reject inconsistent flags before any computation."""
        if self.n is not None and self.n < 2:
            raise ParameterError(f"--n must be at least 2, got {self.n}")
        if self.pairs is not None and self.pairs < 1:
            raise ParameterError(f"--pairs must be at least 1, got {self.pairs}")
        if self.resample is not None and self.resample < 3:
            raise ParameterError(f"--resample must be at least 3, got {self.resample}")
        for name in ("tol", "witness_tol", "residual_tol", "k_tol"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ParameterError(f"--{name.replace('_', '-')} must be non-negative, got {value}")
        if self.command in ("eval", "synth") and self.t_values is None:
            if self.a is None or self.b is None:
                raise ParameterError(f"{self.command} needs --from and --to")
            if not self.a < self.b:
                raise ParameterError(f"--from must be below --to, got [{self.a}, {self.b}]")
        if self.amplitude is not None and self.width is None:
            raise ParameterError("--amplitude needs --width")
        if self.command == "estimate" and not self.k_min < self.k_max:
            raise ParameterError(f"--kmin must be below --kmax, got [{self.k_min}, {self.k_max}]")

    @property
    def params(self) -> ComparisonParams:
        return ComparisonParams(self.k, self.u, self.v)


@contextlib.contextmanager
def _output(path: Optional[Path]) -> Iterator[TextIO]:
    if path is None or str(path) == "-":
        yield sys.stdout
    else:
        try:
            stream = open(path, "w", newline="\n")
        except OSError as e:
            raise ParameterError(f"cannot write {path}: {e}")
        with stream:
            yield stream


def _load_sample(config: JobConfig) -> SampledFunction:
    f = read_sample_csv(config.input)
    if config.resample is not None:
        f = f.resampled(config.resample)
    return f


def cmd_fit(config: JobConfig) -> None:
    spec = ChordSpec(config.t1, config.t2, config.g1, config.g2, config.k)
    result = fit(spec)
    report = {
        "k": spec.k.k,
        "u": result.params.u,
        "v": result.params.v,
        "residuals": [result.residual_t1, result.residual_t2],
    }
    with _output(config.output) as stream:
        dump_json(report, stream)


def cmd_eval(config: JobConfig) -> None:
    params = config.params
    if config.t_values is not None:
        ts = np.asarray(config.t_values, dtype=float)
    else:
        ts = np.linspace(config.a, config.b, config.n or config.settings.samples)
    columns: Dict[str, np.ndarray] = {"t": ts, "g": np.atleast_1d(eval_g(params, ts))}
    if config.derivatives:
        columns["g_prime"] = np.atleast_1d(eval_g_prime(params, ts))
        columns["g_second"] = np.atleast_1d(eval_g_second(params, ts))
    with _output(config.output) as stream:
        write_csv(columns, stream)


def cmd_synth(config: JobConfig) -> None:
    f = synth(config.params, config.a, config.b, config.n or config.settings.samples)
    if config.amplitude is not None:
        center = config.center if config.center is not None else 0.5 * (f.a + f.b)
        f = perturb(f, config.amplitude, center, config.width)
    with _output(config.output) as stream:
        write_sample_csv(f, stream)


def cmd_validate(config: JobConfig) -> None:
    f = read_sample_csv(config.input)
    tol = config.tol if config.tol is not None else config.settings.slope_tol
    report = is_distance_like(f, tol)
    payload = {
        "distance_like": report.distance_like,
        "nonexpanding": report.nonexpanding,
        "endpoint_ok": report.endpoint_ok,
        "pairwise_ok": report.pairwise_ok,
        "first_violation": report.first_violation,
        "worst_slack": report.worst_slack,
        "nodes": len(f),
    }
    if config.oracle:
        thinned = thin_for_oracle(f, config.settings.oracle_max_pairs)
        pairwise_ok, violation = pairwise_oracle(thinned, tol)
        payload["pairwise_ok"] = pairwise_ok
        payload["oracle_nodes"] = len(thinned)
        if violation is not None:
            payload["oracle_violation"] = [float(thinned.ts[violation[0]]), float(thinned.ts[violation[1]])]
    with _output(config.output) as stream:
        dump_json(payload, stream)


def cmd_check(config: JobConfig) -> None:
    f = _load_sample(config)
    report = check(f, config.k, config.tol, config.witness_tol, config.settings.grid_rtol)
    payload = {
        "k": report.k,
        "kind": report.verdict.kind,
        "min_residual": report.verdict.min_residual,
        "max_residual": report.verdict.max_residual,
        "tol": report.verdict.tol,
        "witness_kind": report.witness_kind,
        "witness_monotone": report.witness_monotone,
        "witness_tol": report.witness_tol,
        "nodes": report.nodes,
        "step": report.step,
    }
    with _output(config.output) as stream:
        dump_json(payload, stream)


def cmd_audit(config: JobConfig) -> None:
    f = _load_sample(config)
    settings = config.settings
    report = equivalence_audit(
        f,
        config.k,
        pair_count=config.pairs if config.pairs is not None else settings.pairs,
        seed=config.seed if config.seed is not None else settings.seed,
        tol=config.tol if config.tol is not None else settings.gap_tol,
        residual_tol=config.residual_tol,
        grid_rtol=settings.grid_rtol,
    )
    with _output(config.output) as stream:
        dump_json(report, stream)


def cmd_estimate(config: JobConfig) -> None:
    f = _load_sample(config)
    result = estimate_threshold(
        f,
        ThresholdSide(config.side),
        config.k_min,
        config.k_max,
        config.k_tol if config.k_tol is not None else config.settings.k_tol,
        tol=config.tol,
        grid_rtol=config.settings.grid_rtol,
    )
    payload = {
        "k_lo": result.k_lo,
        "k_hi": result.k_hi,
        "estimate": result.estimate,
        "iterations": result.iterations,
        "side": result.side,
    }
    with _output(config.output) as stream:
        dump_json(payload, stream)


def cmd_figure(config: JobConfig) -> None:
    settings = config.settings
    ks = config.ks if config.ks is not None else settings.figure_ks
    scale = fit_curvature_scale(config.t1, config.t2, config.g1, config.g2, ks)
    ts, curves = scale_curves(scale, config.t1, config.t2, config.n or settings.figure_n)
    render_svg(ts, curves, config.output)
    csv_path = config.csv_output if config.csv_output is not None else config.output.with_suffix(".csv")
    write_curves_csv(ts, curves, csv_path)


COMMANDS: Dict[str, Callable[[JobConfig], None]] = {
    "fit": cmd_fit,
    "eval": cmd_eval,
    "synth": cmd_synth,
    "validate": cmd_validate,
    "check": cmd_check,
    "audit": cmd_audit,
    "estimate": cmd_estimate,
    "figure": cmd_figure,
}


def _add_params(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--k", type=finite_float, required=True, help="curvature")
    parser.add_argument("--u", type=finite_float, required=True)
    parser.add_argument("--v", type=finite_float, required=True)


def _add_grid(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--from", dest="a", type=finite_float, help="first grid node")
    parser.add_argument("--to", dest="b", type=finite_float, help="last grid node")
    parser.add_argument("--n", type=int, help="number of grid nodes")


def _add_input(parser: argparse.ArgumentParser, resample: bool = True) -> None:
    parser.add_argument("--input", type=Path, help="t,g CSV (default: standard input)")
    if resample:
        parser.add_argument("--resample", type=int, help="resample linearly onto N uniform nodes first")


def _add_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", dest="output", type=Path, help="output file (default: standard output)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="distcomp",
        description="Comparison functions of constant-curvature model planes and their differential inequalities.",
    )
    parser.add_argument("--config", type=Path, help="TOML file with a [distcomp] settings table")
    parser.add_argument("--verbose", action="store_true", help="log progress to standard error")
    parser.add_argument("--log-file", type=Path, help="write a DEBUG log to this file")
    commands = parser.add_subparsers(dest="command", required=True)

    fit_parser = commands.add_parser("fit", help="fit g_k to two boundary values")
    fit_parser.add_argument("--k", type=finite_float, required=True)
    for name in ("t1", "t2", "g1", "g2"):
        fit_parser.add_argument(f"--{name}", type=finite_float, required=True)
    _add_output(fit_parser)

    eval_parser = commands.add_parser("eval", help="evaluate g_k as CSV")
    _add_params(eval_parser)
    _add_grid(eval_parser)
    eval_parser.add_argument("--t", dest="t_values", type=float_list, help="comma list of parameters")
    eval_parser.add_argument("--derivatives", action="store_true", help="add g_prime and g_second columns")
    _add_output(eval_parser)

    synth_parser = commands.add_parser("synth", help="sample g_k on a uniform grid")
    _add_params(synth_parser)
    _add_grid(synth_parser)
    synth_parser.add_argument("--amplitude", type=finite_float, help="add a bump of this height")
    synth_parser.add_argument("--center", type=finite_float, help="bump center (default: midpoint)")
    synth_parser.add_argument("--width", type=finite_float, help="bump half-width")
    _add_output(synth_parser)

    validate_parser = commands.add_parser("validate", help="check the distance-like property")
    _add_input(validate_parser, resample=False)
    validate_parser.add_argument("--tol", type=finite_float, help="relative slope tolerance")
    validate_parser.add_argument("--oracle", action="store_true", help="also run the pairwise oracle")
    _add_output(validate_parser)

    check_parser = commands.add_parser("check", help="classify the differential inequality at k")
    _add_input(check_parser)
    check_parser.add_argument("--k", type=finite_float, required=True)
    check_parser.add_argument("--tol", type=finite_float, help="residual tolerance")
    check_parser.add_argument("--witness-tol", type=finite_float)
    _add_output(check_parser)

    audit_parser = commands.add_parser("audit", help="audit the inequality against random chords")
    _add_input(audit_parser)
    audit_parser.add_argument("--k", type=finite_float, required=True)
    audit_parser.add_argument("--pairs", type=int)
    audit_parser.add_argument("--seed", type=int)
    audit_parser.add_argument("--tol", type=finite_float, help="chord gap tolerance")
    audit_parser.add_argument("--residual-tol", type=finite_float)
    _add_output(audit_parser)

    estimate_parser = commands.add_parser("estimate", help="bisect for the critical curvature")
    _add_input(estimate_parser)
    estimate_parser.add_argument("--side", choices=[side.value for side in ThresholdSide], required=True)
    estimate_parser.add_argument("--kmin", dest="k_min", type=finite_float, required=True)
    estimate_parser.add_argument("--kmax", dest="k_max", type=finite_float, required=True)
    estimate_parser.add_argument("--ktol", dest="k_tol", type=finite_float)
    estimate_parser.add_argument("--tol", type=finite_float, help="residual tolerance")
    _add_output(estimate_parser)

    figure_parser = commands.add_parser("figure", help="draw the curvature scale as SVG")
    figure_parser.add_argument("--out", dest="output", type=Path, required=True, help="SVG path")
    figure_parser.add_argument("--csv", dest="csv_output", type=Path, help="companion CSV path")
    figure_parser.add_argument("--ks", type=float_list, help="comma list of curvatures")
    figure_parser.add_argument("--t1", type=finite_float, default=0.0)
    figure_parser.add_argument("--t2", type=finite_float, default=1.0)
    figure_parser.add_argument("--g1", type=finite_float, default=0.6)
    figure_parser.add_argument("--g2", type=finite_float, default=0.8)
    figure_parser.add_argument("--n", type=int)
    return parser


def attach_negative_values(argv: Sequence[str]) -> List[str]:
    """Join '--flag -1e6' into '--flag=-1e6'.

    argparse only recognises plain negative numbers like -1 or -0.5 as values;
    exponent forms and lists such as '-1e3,-2' would be read as options.
    """
    joined: List[str] = []
    for token in argv:
        previous = joined[-1] if joined else ""
        if NEGATIVE_VALUE.match(token) and previous.startswith("--") and "=" not in previous:
            joined[-1] = f"{previous}={token}"
        else:
            joined.append(token)
    return joined


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse, dispatch and map errors to exit codes."""
    if argv is None:
        argv = sys.argv[1:]
    args = build_parser().parse_args(attach_negative_values(argv))
    setup_logging(args.verbose, args.log_file)
    console = Console(stderr=True)
    try:
        settings = load_settings(args.config)
        config = JobConfig.from_namespace(args, settings)
        logger.info(f"Running {config.command}")
        COMMANDS[config.command](config)
    except DistCompError as e:
        logger.debug(f"Command {args.command} failed", exc_info=True)
        console.print(format_error(e))
        return e.exit_code
    return 0


def main(argv: Optional[List[str]] = None) -> None:
    """Entry point for the application."""
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
