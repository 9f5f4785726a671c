"""Python bindings for the beamkit C++ library."""

from ._core import (
    Direction,
    RigidSphere,
    TriMesh,
    __version__,
    array_gain,
    coherence,
    diffuse_sinc_coherence,
    macc,
    make_icosphere,
    plane_wave_steering,
    rigid_sphere_steering,
    rigid_sphere_surface_pressure,
    robust_mvdr,
    solve_scattering,
    white_noise_gain,
)

__all__ = [
    "Direction",
    "RigidSphere",
    "TriMesh",
    "__version__",
    "array_gain",
    "coherence",
    "diffuse_sinc_coherence",
    "macc",
    "make_icosphere",
    "plane_wave_steering",
    "rigid_sphere_steering",
    "rigid_sphere_surface_pressure",
    "robust_mvdr",
    "solve_scattering",
    "white_noise_gain",
]
