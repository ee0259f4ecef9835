"""Exact engine for unipotent Fourier-coefficient derivations on GL_n."""

from .fc import FC, build_orbit_fc, classify, classify_ordered, convolution_build
from .orbits import dominance_cmp, gk_dim, orbit_dim, transpose

__all__ = [
    "FC",
    "build_orbit_fc",
    "classify",
    "classify_ordered",
    "convolution_build",
    "dominance_cmp",
    "gk_dim",
    "orbit_dim",
    "transpose",
]
__version__ = "0.1.0"
