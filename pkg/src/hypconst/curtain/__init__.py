"""Curtains over CAT(0) backends and the curtain metric built from them."""
from .backends import DomainError, EuclideanBackend, GeodesicSegment, TreeBackend, TreePoint, backend_from_dict
from .curtains import (
    EPS,
    Chain,
    ChainSearch,
    Curtain,
    CurtainFamily,
    Side,
    contains,
    curtain_dual,
    disjoint,
    is_chain,
    is_L_separated,
    longest_L_chain_separating,
    longest_path,
    max_chain_meeting_both,
    meets,
    projection,
    separates,
    separates_points,
    side_of,
    subset_of_side,
)
from .model import (
    CurtainModelConfig,
    DensityError,
    DistanceBounds,
    DLBounds,
    RoughGeodesic,
    bound_matrices,
    curtain_distance_bounds,
    curtain_oracle,
    d_L_bounds,
    default_lambda,
    default_tail,
    empirical_four_point_delta,
    exact_oracle,
    four_point_defect_lower,
    geodesic_family,
    midpoint_family,
    pole_grid,
    random_family,
    reparametrize_samples,
    reparametrize_to_rough_geodesic,
    sample_points,
)
