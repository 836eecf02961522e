"""Assouad dimensions of projections of planar self-similar sets."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    AssouadProjError,
    ConfigError,
    DegenerateSet,
    DomainError,
    EmptySet,
    ExactArithmeticRequired,
    GraphError,
    InvalidInput,
    InvalidWord,
    ResolutionError,
    ResourceLimit,
    Unsupported,
)
from .ifs import IFS1D, IFS2D, Angle, Similarity1D, Similarity2D, load_ifs, similarity_dimension  # noqa: E402
from .coverage import DyadicCover, attractor_cover, project_cover  # noqa: E402
from .dimension import assouad_estimate, box_estimate  # noqa: E402
from .graph_directed import (  # noqa: E402
    GraphDirectedSystem,
    build_projection_system,
    classify_ifs1d,
    classify_projection,
    gd_dimension,
)
from .separation import bandt_graf_ifs, exact_overlap_directions, gdwsp_scan, wsp_scan  # noqa: E402
from .delta_s import DeltaSSet, check_delta_s, extract_delta_s_subset, marstrand_experiment  # noqa: E402
from .constructions import (  # noqa: E402
    eroglu_words,
    falconer_counterexample_report,
    osc_direction_interval,
    reduction_subsystem,
    sierpinski_variant,
    spaced_points,
    trivial_rotation_subsystem,
    weak_tangent_sequence,
    xi,
)

__all__ = [
    "AssouadProjError",
    "ConfigError",
    "DegenerateSet",
    "DomainError",
    "EmptySet",
    "ExactArithmeticRequired",
    "GraphError",
    "InvalidInput",
    "InvalidWord",
    "ResolutionError",
    "ResourceLimit",
    "Unsupported",
    "IFS1D",
    "IFS2D",
    "Angle",
    "Similarity1D",
    "Similarity2D",
    "load_ifs",
    "similarity_dimension",
    "DyadicCover",
    "attractor_cover",
    "project_cover",
    "assouad_estimate",
    "box_estimate",
    "GraphDirectedSystem",
    "build_projection_system",
    "classify_ifs1d",
    "classify_projection",
    "gd_dimension",
    "bandt_graf_ifs",
    "exact_overlap_directions",
    "gdwsp_scan",
    "wsp_scan",
    "DeltaSSet",
    "check_delta_s",
    "extract_delta_s_subset",
    "marstrand_experiment",
    "eroglu_words",
    "falconer_counterexample_report",
    "osc_direction_interval",
    "reduction_subsystem",
    "sierpinski_variant",
    "spaced_points",
    "trivial_rotation_subsystem",
    "weak_tangent_sequence",
    "xi",
]
