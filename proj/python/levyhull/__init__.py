"""Convex hulls of Levy processes: sampling, hull functionals and closed-form checks."""

from ._levyhull import (  # noqa: F401
    ConfigError,
    DimensionError,
    DomainError,
    IoError,
    ParameterError,
    Polytope,
    ResourceError,
    StableSpec,
    closed_form,
    convex_hull,
    exit_times,
    gram_det,
    hausdorff,
    hill_tail_index,
    intrinsic_volumes,
    ks_two_sample,
    run_all,
    run_config,
    sample_cpp_path,
    sample_stable_1d,
    sample_walk_path,
    vp_ball_mixed,
    zonotope_intrinsic_volume,
)

__version__ = "0.1.0"
