"""Farthest-Point Sampling Package."""

from .farthest import SampleResult, anchors_within, eps_net_radius_bound, farthest_sampling
from .nets import interiority_2d, is_eps_cover, is_eps_sparse

__all__ = [
    "SampleResult",
    "anchors_within",
    "eps_net_radius_bound",
    "farthest_sampling",
    "interiority_2d",
    "is_eps_cover",
    "is_eps_sparse",
]
