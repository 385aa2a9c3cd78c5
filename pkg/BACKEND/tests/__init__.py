"""Project Initialization File."""

__version__ = "0.1.0"
__title__ = "Noise-Stable MDS"
__description__ = "Classical MDS and anchor-graph reconstruction from noisy distance matrices"
