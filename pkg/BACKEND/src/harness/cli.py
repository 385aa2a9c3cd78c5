"""Command-line surface: data generation, single pipelines, experiments and graph validation."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from pydantic import ValidationError

from ..cmds.embedding import cmds_embed_with_spectrum
from ..cmds.spectral import spectral_diagnostics
from ..core.defaults import HARNESS_CONFIG, NOISE_CONFIG
from ..core.errors import GeometryError
from ..core.geometry import PointCloud, SquaredDistanceMatrix, gram_from_sdm, squared_distance_matrix, structural_loss
from ..core.io import load_cloud, load_sdm, save_cloud
from ..graph.anchor_graph import (
    LocalStrategy,
    anchor_graph_from_json,
    anchor_graph_to_json,
    build_anchor_graph,
    cost_report,
)
from ..monitoring.checks import InvariantSuite
from ..noise.gaussian import NoiseSpec, bias_matrix, debias, load_noise_spec, perturb_with_report
from ..reconstruct.pipeline import quick_mds, reconstruct
from .config import ExperimentConfig, Generator
from .experiments import EXPERIMENTS
from .generators import generate
from .reporting import dumps, write_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_BAD_INPUT = 2


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'") from e


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=int(NOISE_CONFIG.get('default_seed', 0)), help="Base seed")
    common.add_argument("--out", default=None, help="Output file, or directory for experiments")
    common.add_argument("--format", choices=["json", "csv"], default=None, help="Output format")
    return common


def _add_input_args(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--points", help="Point cloud file (CSV or JSON)")
    source.add_argument("--sdm", help="Squared distance matrix file (CSV or JSON edge list)")
    _add_noise_args(parser)


def _add_noise_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--sigma", type=float, default=0.0, help="Uniform distance noise level")
    parser.add_argument("--noise", default=None, help="Noise spec JSON (overrides --sigma)")
    parser.add_argument("--no-debias", action="store_true", help="Skip subtracting the bias matrix")


def _add_experiment_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--generator", choices=[g.value for g in Generator],
                        default=HARNESS_CONFIG.get('default_generator', 'uniform-disk'))
    parser.add_argument("--n", type=_int_list, default=[100, 200, 400], help="Comma-separated sizes")
    parser.add_argument("--k", type=int, default=2)
    parser.add_argument("--sigma", type=float, default=0.0)
    parser.add_argument("--trials", type=int, default=int(HARNESS_CONFIG.get('default_trials', 5)))
    parser.add_argument("--zeta", type=float, default=float(HARNESS_CONFIG.get('default_zeta', 0.4)))
    parser.add_argument("--strategy", choices=[s.value for s in LocalStrategy], default="nearest")
    parser.add_argument("--rho", type=int, default=None)
    parser.add_argument("--no-debias", action="store_true")
    parser.add_argument("--workers", type=int, default=int(HARNESS_CONFIG.get('workers', 0)))


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="nsmds", description="Noise-stable multidimensional scaling")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    gen = sub.add_parser("gen", parents=[common], help="Generate a synthetic point cloud")
    gen.add_argument("--generator", choices=[g.value for g in Generator], required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--k", type=int, default=2)
    gen.add_argument("--trial", type=int, default=0)

    cmds = sub.add_parser("cmds", parents=[common], help="Classical MDS on a full matrix")
    _add_input_args(cmds)
    cmds.add_argument("--k", type=int, default=2)

    graph = sub.add_parser("build-graph", parents=[common], help="Build an anchor graph")
    _add_input_args(graph)
    graph.add_argument("--k", type=int, default=2)
    graph.add_argument("--rho", type=int, default=None)
    graph.add_argument("--strategy", choices=[s.value for s in LocalStrategy], default="nearest")
    graph.add_argument("--delta", type=float, default=None)
    graph.add_argument("--field-mode", action="store_true", help="Select anchors on observed distances")

    recon = sub.add_parser("reconstruct", parents=[common], help="Reconstruct from an anchor graph")
    recon.add_argument("--graph", required=True)
    recon.add_argument("--points", default=None, help="Ground truth for the loss")
    _add_noise_args(recon)

    quick = sub.add_parser("quick-mds", parents=[common], help="Randomized anchor reconstruction")
    _add_input_args(quick)
    quick.add_argument("--k", type=int, default=2)
    quick.add_argument("--rho", type=int, default=None)
    quick.add_argument("--local", choices=["random", "nearest"], default="random")

    for name in EXPERIMENTS:
        experiment = sub.add_parser(name, parents=[common], help=f"Run the {name} experiment")
        _add_experiment_args(experiment)

    validate = sub.add_parser("validate", parents=[common], help="Run invariant checks on a graph file")
    validate.add_argument("--graph", required=True)
    validate.add_argument("--points", default=None)
    return parser


def _emit(payload: Dict, out: Optional[str] = None) -> None:
    text = dumps(payload)
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _write_cloud(cloud: PointCloud, args: argparse.Namespace) -> None:
    if not args.out:
        sys.stdout.write(dumps({"dim": cloud.dim, "points": cloud.points.tolist()}))
        return
    fmt = args.format or ("json" if args.out.lower().endswith(".json") else "csv")
    save_cloud(cloud, args.out, fmt)


def _load_input(args: argparse.Namespace):
    if args.points:
        truth = load_cloud(args.points)
        return truth, squared_distance_matrix(truth)
    return None, load_sdm(args.sdm)


def _noise_spec(args: argparse.Namespace, n: int) -> Optional[NoiseSpec]:
    if args.noise:
        return load_noise_spec(args.noise, n)
    if args.sigma > 0:
        return NoiseSpec.uniform(n, args.sigma, args.seed)
    return None


def _observe(D: SquaredDistanceMatrix, spec: Optional[NoiseSpec]) -> SquaredDistanceMatrix:
    return D if spec is None else perturb_with_report(D, spec).matrix


def cmd_gen(args: argparse.Namespace) -> int:
    config = ExperimentConfig(generator=args.generator, n_list=[args.n], k=args.k, seed=args.seed)
    _write_cloud(generate(config, args.n, args.trial), args)
    return EXIT_OK


def cmd_cmds(args: argparse.Namespace) -> int:
    truth, D = _load_input(args)
    spec = _noise_spec(args, D.size)
    Dt = _observe(D, spec)
    if spec is not None and not args.no_debias:
        Dt = debias(Dt, bias_matrix(spec))
    embedding = cmds_embed_with_spectrum(Dt, args.k)
    report = spectral_diagnostics(gram_from_sdm(Dt), args.k).to_dict()
    report["clamped_count"] = embedding.clamped_count
    if truth is not None:
        report["loss"] = structural_loss(embedding.cloud, truth)
    if args.out:
        _write_cloud(embedding.cloud, args)
    else:
        report["points"] = embedding.cloud.points.tolist()
    _emit(report)
    return EXIT_OK


def cmd_build_graph(args: argparse.Namespace) -> int:
    truth, D = _load_input(args)
    spec = _noise_spec(args, D.size)
    graph = build_anchor_graph(
        D, _observe(D, spec), args.k, args.rho, args.strategy,
        field_mode=args.field_mode, seed=args.seed, delta=args.delta,
        points=None if truth is None else truth.points,
    )
    if not args.out:
        _emit(graph.to_dict())
        return EXIT_OK
    anchor_graph_to_json(graph, args.out)
    _emit({"cost": cost_report(graph, D).to_dict(), "meta": graph.meta})
    return EXIT_OK


def cmd_reconstruct(args: argparse.Namespace) -> int:
    graph = anchor_graph_from_json(args.graph)
    truth = load_cloud(args.points) if args.points else None
    spec = _noise_spec(args, graph.n)
    bias = bias_matrix(spec) if spec is not None and not args.no_debias else None
    report = reconstruct(graph, bias=bias, truth=truth)
    _write_cloud(report.cloud, args)
    if args.out:
        _emit(report.to_dict())
    return EXIT_OK


def cmd_quick_mds(args: argparse.Namespace) -> int:
    truth, D = _load_input(args)
    spec = _noise_spec(args, D.size)
    bias = bias_matrix(spec) if spec is not None and not args.no_debias else None
    report = quick_mds(_observe(D, spec), args.k, args.seed, local=args.local, bias=bias, rho=args.rho, truth=truth)
    _write_cloud(report.cloud, args)
    if args.out:
        _emit(report.to_dict())
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    graph = anchor_graph_from_json(args.graph)
    points = load_cloud(args.points) if args.points else None
    suite = InvariantSuite(graph, points)
    suite.run()
    _emit(suite.to_dict(), args.out)
    return EXIT_OK if suite.passed else EXIT_VALIDATION_FAILED


def _experiment_runner(name: str) -> Callable[[argparse.Namespace], int]:
    def run(args: argparse.Namespace) -> int:
        out_dir = args.out or HARNESS_CONFIG.get('output_dir', 'results')
        config = ExperimentConfig(
            generator=args.generator,
            n_list=args.n,
            k=args.k,
            sigma=args.sigma,
            trials=args.trials,
            seed=args.seed,
            strategy=args.strategy,
            zeta=args.zeta,
            rho=args.rho,
            debias=not args.no_debias,
            workers=args.workers,
            output_path=str(out_dir),
        )
        result = EXPERIMENTS[name](config)
        paths = write_report(result, out_dir)
        _emit({"experiment": result.name, "report": str(paths["report"]), "summary": result.summary})
        return EXIT_OK
    return run


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "gen": cmd_gen,
    "cmds": cmd_cmds,
    "build-graph": cmd_build_graph,
    "reconstruct": cmd_reconstruct,
    "quick-mds": cmd_quick_mds,
    "validate": cmd_validate,
    **{name: _experiment_runner(name) for name in EXPERIMENTS},
}


def cli(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, run the subcommand and map failures to exit codes 1 and 2."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_BAD_INPUT

    logger.info(f"Running '{args.command}'")
    try:
        return COMMANDS[args.command](args)
    except (GeometryError, ValidationError, OSError, ValueError, KeyError, json.JSONDecodeError) as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_BAD_INPUT
