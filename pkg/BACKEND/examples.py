"""Example Usage - Demonstrating noise-stable MDS."""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from src.cmds import cmds_embed, eigen_perturbation_report, noise_norm
from src.core import gram_from_sdm, scale_params, squared_distance_matrix, structural_loss
from src.graph import build_anchor_graph, cost_report, laman_check_2d, vertex_connectivity_at_least
from src.harness import ExperimentConfig, generate, run_noise_scaling
from src.monitoring import PerformanceMonitor
from src.noise import NoiseSpec, bias_matrix, debias, perturb_distances
from src.reconstruct import quick_mds, reconstruct, sensitivity_probe


def _banner(title: str) -> None:
    print("\n" + "="*80)
    print(title)
    print("="*80)


def example_noisy_cmds():
    """Example: cMDS on a noisy matrix, with and without debiasing."""
    _banner("EXAMPLE 1: Classical MDS under Distance Noise")

    cloud = generate(ExperimentConfig(n_list=[400], seed=1))
    D = squared_distance_matrix(cloud)
    spec = NoiseSpec.uniform(cloud.n, 0.1, seed=7)
    Dt = perturb_distances(D, spec)
    bias = bias_matrix(spec)

    raw = structural_loss(cmds_embed(Dt, 2), cloud)
    corrected = structural_loss(cmds_embed(debias(Dt, bias), 2), cloud)

    params = scale_params(cloud)
    print(f"\nCloud: n={cloud.n}, radius={cloud.radius():.3f}")
    print(f"  Scale parameters: pi={tuple(round(p, 4) for p in params.pi)}, g={params.g_val:.4f}")
    print(f"  Noise norm (debiased): {noise_norm(D, Dt, bias):.3f}")
    print(f"\nStructural loss:")
    print(f"  Raw input:      {raw:.5f}")
    print(f"  Debiased input: {corrected:.5f}")


def example_perturbation_bounds():
    """Example: Weyl and eigenvector bounds on a perturbed Gram matrix."""
    _banner("EXAMPLE 2: Spectral Perturbation Bounds")

    cloud = generate(ExperimentConfig(n_list=[200], seed=2))
    D = squared_distance_matrix(cloud)
    Dt = perturb_distances(D, NoiseSpec.uniform(cloud.n, 0.01, seed=3))
    report = eigen_perturbation_report(gram_from_sdm(D), gram_from_sdm(Dt), 2)

    for key, value in report.to_dict().items():
        print(f"  {key}: {value}")


def example_anchor_reconstruction():
    """Example: Anchor graph construction and two-stage reconstruction."""
    _banner("EXAMPLE 3: Anchor Graph Reconstruction")

    cloud = generate(ExperimentConfig(n_list=[1000], seed=4))
    D = squared_distance_matrix(cloud)
    spec = NoiseSpec.uniform(cloud.n, 0.01, seed=5)
    Dt = perturb_distances(D, spec)
    monitor = PerformanceMonitor()

    for strategy in ("nearest", "random", "stable2d"):
        with monitor.stage(f"graph-{strategy}"):
            graph = build_anchor_graph(D, Dt, 2, strategy=strategy, seed=6, points=cloud.points)
        report = reconstruct(graph, bias=bias_matrix(spec), truth=cloud, monitor=monitor)
        cost = cost_report(graph, D)

        print(f"\n{strategy.upper()} Strategy:")
        print(f"  Anchors: {len(graph.anchors)}, edges: {cost.edge_count}, total length: {cost.total_length:.2f}")
        print(f"  Rigid: {laman_check_2d(graph)}, 3-connected: {vertex_connectivity_at_least(graph, 3)}")
        print(f"  Loss: {report.loss:.5f} (circle misses: {report.circle_miss_count})")

    quick = quick_mds(Dt, 2, seed=8, bias=bias_matrix(spec), truth=cloud)
    print(f"\nQuick MDS loss: {quick.loss:.5f}")
    print(f"Stage timings: {monitor.get_timings()}")


def example_trilateration_sensitivity():
    """Example: How the intersection angle drives trilateration error."""
    _banner("EXAMPLE 4: Trilateration Sensitivity")

    for degrees in (30, 60, 90, 120, 150):
        alpha = np.radians(degrees)
        r_i = np.array([1.0, 0.0])
        r_j = np.array([np.cos(alpha), np.sin(alpha)])
        report = sensitivity_probe(r_i, 1.0, r_j, 1.0, -(r_i + r_j))
        print(f"  alpha={degrees:3d} deg: |dp/dd_i|={report.d_i:.4f}  1/sin(alpha)={report.reference:.4f}")


def example_noise_scaling():
    """Example: A small noise-scaling experiment."""
    _banner("EXAMPLE 5: Noise Scaling")

    config = ExperimentConfig(n_list=[100, 200, 400, 800], trials=5, sigma=0.01, seed=9)
    result = run_noise_scaling(config)

    for row in result.summary["per_n"]:
        print(f"  n={row['n']:5d}: median loss {row['median_loss']:.5f}")
    if result.summary["fit"]:
        print(f"\nFitted slope: {result.summary['slope']:.3f} (r^2 = {result.summary['fit']['r_squared']:.3f})")


def main():
    """Run all examples."""
    _banner("Noise-Stable MDS - Usage Examples")

    try:
        example_noisy_cmds()
        example_perturbation_bounds()
        example_anchor_reconstruction()
        example_trilateration_sensitivity()
        example_noise_scaling()

        _banner("Examples completed successfully!")

    except KeyboardInterrupt:
        print("\n\nExamples interrupted.")
    except Exception as e:
        print(f"\nError running examples: {e}")
        import traceback
        traceback.print_exc()


if __name__ == "__main__":
    main()
