"""Exact geometry of horospheric products of pointed trees.

Pointed locally finite leafless trees with canonical vertex addresses,
their ends and horocycle levels, the horospheric product graph with its
closed-form metric, the five boundary-function families of its height
compactification, exact limit classification of structured vertex
sequences, and a reproducible biased-random-walk drift simulator.
"""

from .tree import (
    AddressError,
    CustomRule,
    ExplicitCore,
    Line,
    ORIGIN,
    RayPeriodic,
    Regular,
    SpecError,
    TreeSpec,
    VertexAddress,
    Violation,
    gamma_ward,
    height,
    meet_depth,
    origin_dist,
    tree_dist,
    vertex_busemann,
)
from .rays import (
    BranchingRay,
    FSet,
    GAMMA,
    GammaEnd,
    LevelSetReport,
    Ray,
    UndecidableFamilyError,
    canonical_at_height,
    f_set,
    level_busemann,
    level_count,
    level_sequence,
    level_set_report,
    parse_ray,
    ray_busemann,
    ray_confluent,
    ray_meet_depth,
    ray_split_depth,
    ray_vertex,
    validate_ray,
)
from .product import (
    BASE,
    HeightMismatch,
    HoroProduct,
    ProductVertex,
    product_busemann,
    product_dist,
    product_height,
)
from .boundary import (
    BoundaryPoint,
    HoroFunction,
    PointKind,
    StabilizationReport,
    boundary_limit_check,
    evaluate,
    hm_coordinates,
    level_point,
    parse_point,
    point_from_hm,
    ray_point1,
    ray_point2,
    standard_catalog,
    theta,
    vertex_point1,
    vertex_point2,
)
from .limits import (
    Alternating,
    Custom,
    EmpiricalReport,
    EventuallyConstant,
    FamilyExhausted,
    FixedFirst,
    FixedSecond,
    Horocyclic,
    IsomorphismSummary,
    LimitReport,
    RadialRay,
    busemann_limit,
    classify,
    empirical_pointwise_check,
    family_from_json,
    family_to_json,
    isomorphism_check,
    random_families,
    realizability,
    stabilization_bound,
    term_stream,
    terms,
)
from .walk import (
    SpeedEstimate,
    TrajectoryStats,
    WalkConfig,
    WalkResult,
    drift_report,
    estimate_speed,
    simulate,
    step,
    write_trace_csv,
)

__version__ = "0.1.0"
