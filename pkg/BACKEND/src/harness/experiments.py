"""
Scaling Experiments
Noise scaling, debiasing, edge cost, degenerate gaps, noise-norm growth and
anchor-versus-full reconstruction, each over a grid of sizes and seeded trials
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from ..cmds.embedding import cmds_embed_with_spectrum, noise_norm, theory_error_envelope
from ..core.errors import GeometryError
from ..core.geometry import PointCloud, SquaredDistanceMatrix, scale_params, squared_distance_matrix, structural_loss
from ..graph.anchor_graph import LocalStrategy, build_anchor_graph, cost_report
from ..monitoring.performance_monitor import PerformanceMonitor, default_worker_count
from ..noise.gaussian import BiasMatrix, NoiseSpec, bias_matrix, debias, perturb_with_report
from ..reconstruct.pipeline import quick_mds, reconstruct
from .config import ExperimentConfig, Generator
from .fitting import MIN_FIT_SIZES, ScalingFit, fit_scaling
from .generators import generate, generator_params, trial_seed

logger = logging.getLogger(__name__)

MAX_SIGMA = 0.5
RECONSTRUCTION_ENVELOPE = 10.0

Row = Dict[str, Any]
Timing = Dict[str, float]


class ExperimentResult(NamedTuple):
    """Deterministic summary and per-trial rows, with wall-clock timings kept apart."""
    name: str
    config: ExperimentConfig
    summary: Dict[str, Any]
    rows: List[Row]
    timings: List[Row]


class NoisyInstance(NamedTuple):
    cloud: PointCloud
    D: SquaredDistanceMatrix
    Dt: SquaredDistanceMatrix
    bias: Optional[BiasMatrix]
    negative_draws: int


def _instance(config: ExperimentConfig, n: int, trial: int) -> NoisyInstance:
    sigma = config.sigma
    cloud = generate(config, n, trial)
    D = squared_distance_matrix(cloud)
    if sigma == 0:
        return NoisyInstance(cloud, D, D, None, 0)
    spec = NoiseSpec.uniform(n, sigma, trial_seed(config.seed, trial, n))
    perturbation = perturb_with_report(D, spec)
    return NoisyInstance(cloud, D, perturbation.matrix, bias_matrix(spec), perturbation.negative_draws)


def _cmds_input(instance: NoisyInstance, use_debias: bool) -> SquaredDistanceMatrix:
    if use_debias and instance.bias is not None:
        return debias(instance.Dt, instance.bias)
    return instance.Dt


def _run_cells(
    config: ExperimentConfig, cell: Callable[[int, int], Tuple[Row, Timing]]
) -> Tuple[List[Row], List[Row]]:
    """Run every (n, trial) cell, concurrently when workers allow; results keep cell order."""
    cells = [(n, t) for n in config.n_list for t in range(config.trials)]
    workers = config.workers or default_worker_count()

    def run(pair: Tuple[int, int]) -> Tuple[Row, Timing]:
        n, t = pair
        row, timing = cell(n, t)
        return {"n": n, "trial": t, **row}, {"n": n, "trial": t, **timing}

    if workers == 1 or len(cells) == 1:
        results = [run(pair) for pair in cells]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, cells))
    return [r for r, _ in results], [t for _, t in results]


def _median_by_n(rows: List[Row], key: str, n_list: List[int]) -> List[float]:
    medians = []
    for n in n_list:
        values = [row[key] for row in rows if row["n"] == n and row[key] is not None]
        medians.append(float(np.median(values)) if values else float("nan"))
    return medians


def _try_fit(n_list: List[int], medians: List[float]) -> Tuple[Optional[ScalingFit], Optional[str]]:
    if len(n_list) < MIN_FIT_SIZES:
        return None, f"fewer than {MIN_FIT_SIZES} sizes"
    try:
        return fit_scaling(n_list, medians), None
    except GeometryError as e:
        return None, str(e)


def run_noise_scaling(config: ExperimentConfig) -> ExperimentResult:
    """Median structural loss of (debiased) cMDS versus n, with its log-log slope."""
    if config.sigma > MAX_SIGMA:
        raise GeometryError(f"sigma={config.sigma} exceeds r/2 = {MAX_SIGMA}")

    def cell(n: int, trial: int) -> Tuple[Row, Timing]:
        monitor = PerformanceMonitor()
        instance = _instance(config, n, trial)
        with monitor.stage("cmds"):
            embedding = cmds_embed_with_spectrum(_cmds_input(instance, config.debias), config.k)
        loss = structural_loss(embedding.cloud, instance.cloud)
        envelope = None
        params = scale_params(instance.cloud)
        if config.sigma > 0 and not params.degenerate and params.g_val > 0:
            envelope = theory_error_envelope(
                params, config.sigma, instance.cloud.radius(), config.k, n, config.zeta
            )
        row = {
            "loss": loss,
            "envelope": envelope,
            "negative_draws": instance.negative_draws,
            "clamped": embedding.clamped_count,
        }
        return row, monitor.get_timings()

    rows, timings = _run_cells(config, cell)
    medians = _median_by_n(rows, "loss", config.n_list)
    summary: Dict[str, Any] = {
        "per_n": [
            {"n": n, "median_loss": m, "median_envelope": e}
            for n, m, e in zip(config.n_list, medians, _median_by_n(rows, "envelope", config.n_list))
        ],
        "max_loss": float(max(row["loss"] for row in rows)),
    }
    if config.sigma == 0:
        summary["fit"] = None
        summary["fit_skipped"] = "zero noise"
    else:
        fit, reason = _try_fit(config.n_list, medians)
        summary["fit"] = fit.to_dict() if fit else None
        if reason:
            summary["fit_skipped"] = reason
        if fit:
            summary["slope"] = fit.slope
    return ExperimentResult("noise_scaling", config, summary, rows, timings)


def run_debias_comparison(config: ExperimentConfig) -> ExperimentResult:
    """Loss of cMDS on raw versus Sigma-debiased noisy matrices, paired per trial."""
    if config.sigma <= 0:
        raise GeometryError("debias comparison needs sigma > 0")

    def cell(n: int, trial: int) -> Tuple[Row, Timing]:
        instance = _instance(config, n, trial)
        raw = structural_loss(cmds_embed_with_spectrum(instance.Dt, config.k).cloud, instance.cloud)
        corrected = structural_loss(
            cmds_embed_with_spectrum(_cmds_input(instance, True), config.k).cloud, instance.cloud
        )
        return {"raw_loss": raw, "debiased_loss": corrected}, {}

    rows, timings = _run_cells(config, cell)
    raw = _median_by_n(rows, "raw_loss", config.n_list)
    corrected = _median_by_n(rows, "debiased_loss", config.n_list)
    summary = {
        "per_n": [
            {"n": n, "median_raw_loss": r, "median_debiased_loss": c, "debias_better": c < r}
            for n, r, c in zip(config.n_list, raw, corrected)
        ],
        "debias_better": all(c < r for r, c in zip(raw, corrected)),
    }
    return ExperimentResult("debias_comparison", config, summary, rows, timings)


def run_cost_scaling(config: ExperimentConfig) -> ExperimentResult:
    """Total true edge length of anchor graphs versus n, with its log-log slope."""
    if len(config.n_list) < MIN_FIT_SIZES:
        raise GeometryError(f"need ≥ {MIN_FIT_SIZES} sizes to fit")
    k = config.k

    def cell(n: int, trial: int) -> Tuple[Row, Timing]:
        monitor = PerformanceMonitor()
        cloud = generate(config, n, trial)
        D = squared_distance_matrix(cloud)
        points = cloud.points if config.strategy is LocalStrategy.STABLE2D else None
        with monitor.stage("graph"):
            graph = build_anchor_graph(
                D, D, k, config.rho, config.strategy,
                seed=trial_seed(config.seed, trial, n), points=points,
            )
        cost = cost_report(graph, D)
        rho = len(graph.anchors)
        expected = rho * (rho - 1) // 2 + (k + 1) * (n - rho)
        row = {
            "rho": rho,
            "radius": graph.radius,
            "edge_count": cost.edge_count,
            "expected_edges": expected,
            **{key: value for key, value in cost.to_dict().items() if key != "edge_count"},
            "max_local_over_radius": cost.max_local_edge_length / graph.radius,
            "fallbacks": int(graph.meta.get("fallbacks", 0)),
        }
        return row, monitor.get_timings()

    rows, timings = _run_cells(config, cell)
    medians = _median_by_n(rows, "total_length", config.n_list)
    fit = fit_scaling(config.n_list, medians)
    summary = {
        "per_n": [{"n": n, "median_total_length": m} for n, m in zip(config.n_list, medians)],
        "fit": fit.to_dict(),
        "slope": fit.slope,
        "target_exponent": 2.0 * k / (2.0 * k + 1.0),
        "edge_identity_holds": all(row["edge_count"] == row["expected_edges"] for row in rows),
        "max_edges_per_vertex": float(max(row["edge_count"] / row["n"] for row in rows)),
    }
    return ExperimentResult("cost_scaling", config, summary, rows, timings)


def _rotation_angle(rotation: np.ndarray) -> Tuple[float, bool]:
    reflected = bool(np.linalg.det(rotation) < 0)
    return float(np.degrees(np.arctan2(rotation[1, 0], rotation[0, 0]))), reflected


def run_degenerate_gap(config: ExperimentConfig) -> ExperimentResult:
    """Noisy cMDS on an equal-eigenvalue curve; losses and alignment orientation are reported only."""
    if config.generator is not Generator.CURVE_CARDIOID:
        raise GeometryError("degenerate-gap runs on the curve-cardioid generator")

    def cell(n: int, trial: int) -> Tuple[Row, Timing]:
        instance = _instance(config, n, trial)
        params = scale_params(instance.cloud)
        embedding = cmds_embed_with_spectrum(_cmds_input(instance, config.debias), config.k)
        loss, alignment = structural_loss(embedding.cloud, instance.cloud, return_alignment=True)
        angle, reflected = _rotation_angle(alignment.rotation)
        logger.info(f"n={n} trial={trial}: loss={loss:.3e}, orientation={angle:.1f} deg, reflected={reflected}")
        row = {
            "loss": loss,
            "gap_ratio": abs(params.pi[0] - params.pi[1]) / params.pi[0],
            "orientation_deg": angle,
            "reflected": reflected,
        }
        return row, {}

    rows, timings = _run_cells(config, cell)
    orientations = [row["orientation_deg"] for row in rows]
    summary = {
        "per_n": [
            {"n": n, "median_loss": m, "median_gap_ratio": g}
            for n, m, g in zip(
                config.n_list,
                _median_by_n(rows, "loss", config.n_list),
                _median_by_n(rows, "gap_ratio", config.n_list),
            )
        ],
        "orientation_spread_deg": float(max(orientations) - min(orientations)),
        "generator_params": generator_params(config),
        "bound_asserted": False,
    }
    return ExperimentResult("degenerate_gap", config, summary, rows, timings)


def run_noise_norm_growth(config: ExperimentConfig) -> ExperimentResult:
    """Spectral norm of the centered noise Dt - D - Sigma versus n."""
    if config.sigma <= 0:
        raise GeometryError("noise-norm growth needs sigma > 0")

    def cell(n: int, trial: int) -> Tuple[Row, Timing]:
        instance = _instance(config, n, trial)
        return {"noise_norm": noise_norm(instance.D, instance.Dt, instance.bias)}, {}

    rows, timings = _run_cells(config, cell)
    medians = _median_by_n(rows, "noise_norm", config.n_list)
    fit, reason = _try_fit(config.n_list, medians)
    summary: Dict[str, Any] = {
        "per_n": [{"n": n, "median_noise_norm": m} for n, m in zip(config.n_list, medians)],
        "fit": fit.to_dict() if fit else None,
    }
    if reason:
        summary["fit_skipped"] = reason
    return ExperimentResult("noise_norm_growth", config, summary, rows, timings)


def run_reconstruction_comparison(config: ExperimentConfig) -> ExperimentResult:
    """Anchor reconstruction and quick MDS against full cMDS on the same noisy data."""
    k = config.k

    def cell(n: int, trial: int) -> Tuple[Row, Timing]:
        monitor = PerformanceMonitor()
        instance = _instance(config, n, trial)
        bias = instance.bias if config.debias else None
        noise_seed = trial_seed(config.seed, trial, n)
        points = instance.cloud.points if config.strategy is LocalStrategy.STABLE2D else None

        with monitor.stage("anchor"):
            graph = build_anchor_graph(
                instance.D, instance.Dt, k, config.rho, config.strategy,
                seed=noise_seed, points=points,
            )
            anchor = reconstruct(graph, bias=bias, k=k, truth=instance.cloud)
        with monitor.stage("full"):
            full_cloud = cmds_embed_with_spectrum(_cmds_input(instance, config.debias), k).cloud
        with monitor.stage("quick"):
            quick = quick_mds(instance.Dt, k, noise_seed, bias=bias, truth=instance.cloud)

        full_loss = structural_loss(full_cloud, instance.cloud)
        row = {
            "anchor_loss": anchor.loss,
            "anchor_only_loss": anchor.anchor_loss,
            "full_loss": full_loss,
            "quick_loss": quick.loss,
            "circle_misses": anchor.circle_miss_count,
            "fallbacks": anchor.fallback_count,
            "degenerate": anchor.degenerate_count,
        }
        return row, monitor.get_timings()

    rows, timings = _run_cells(config, cell)
    anchor = _median_by_n(rows, "anchor_loss", config.n_list)
    full = _median_by_n(rows, "full_loss", config.n_list)
    quick = _median_by_n(rows, "quick_loss", config.n_list)
    per_n = []
    for n, a, f, q in zip(config.n_list, anchor, full, quick):
        ratio = a / f if f > 0 else None
        per_n.append({
            "n": n,
            "median_anchor_loss": a,
            "median_full_loss": f,
            "median_quick_loss": q,
            "ratio": ratio,
            "within_envelope": ratio is None or ratio <= RECONSTRUCTION_ENVELOPE,
        })
    summary = {"per_n": per_n, "envelope": RECONSTRUCTION_ENVELOPE}
    return ExperimentResult("reconstruction_comparison", config, summary, rows, timings)


EXPERIMENTS: Dict[str, Callable[[ExperimentConfig], ExperimentResult]] = {
    "noise-scaling": run_noise_scaling,
    "debias-comparison": run_debias_comparison,
    "cost-scaling": run_cost_scaling,
    "degenerate-gap": run_degenerate_gap,
    "noise-norm-growth": run_noise_norm_growth,
    "recon-compare": run_reconstruction_comparison,
}


def speedups(result: ExperimentResult) -> Dict[str, Any]:
    """Median full-cMDS / quick-MDS wall-clock ratio per n, from the timing rows."""
    out = {}
    for n in result.config.n_list:
        ratios = [
            t["full"] / t["quick"] for t in result.timings
            if t["n"] == n and t.get("quick", 0) > 0 and "full" in t
        ]
        if ratios:
            out[str(n)] = float(np.median(ratios))
    return out
