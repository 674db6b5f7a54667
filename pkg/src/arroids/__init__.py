"""Arroids, their tropical fans, tropical homology and arrangements of lines and conics."""

from .arrangement import (
    CurveArrangement,
    IntersectionRecord,
    PlaneCurve,
    arroid_of,
    checks,
    cluster_analysis,
    inf_family,
    inf_family_explicit,
    intersect,
    maximality_report,
    picard_fan,
    picard_rays,
    real_b0,
    sufficient_unique_balance,
    unimodular_witness,
)
from .arroid import Arroid, Point, from_incidence, from_rank3_matroid
from .errors import ArroidsError
from .fan import (
    QuotientLattice,
    WeightedFan,
    build_arroid_fan,
    check_balanced,
    isomorphic,
    reduced_star,
    support_equal,
    unique_balance_at_ray,
    verify_modification,
)
from .tropohom import (
    bm_homology,
    check_thm,
    check_tpd,
    cohomology_dims,
    fundamental_class,
    multi_tangent,
    ses_dim_check,
)

__all__ = [name for name in dir() if not name.startswith("_")]
