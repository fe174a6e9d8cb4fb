"""Quantitative-qualitative proximity measures for cross-source object identification.

Quantitative feature values carry Gaussian measurement errors and are compared
by the joint probability of a shared true value; qualitative values are
fuzzified and compared by possibility; per-feature results aggregate through
additive or multiplicative convolutions into one pair-level measure used to
flag identification candidates.
"""

__version__ = "0.1.0"

from .aggregate import (
    AggregationMethod,
    AggregationSpec,
    additive_distance,
    count_normalized_distance,
    multiplicative_distance,
    multiplicative_proximity,
    two_class_weighted_distance,
    weighted_additive_distance,
    zhuravlev_distance,
)
from .engine import MatchRun, MatchRunError, candidates, evaluate_pair, pairwise_breakdowns
from .fuzzy import (
    FuzzyMembership,
    IdentificationPowerWarning,
    apply_certainty,
    gaussian_membership,
    nominal_plateau,
    nominal_proximity,
    possibility,
    qualitative_distance,
    triangular_from_halfwidth,
    triangular_from_relative_error,
)
from .model import (
    Certainty,
    FeatureKind,
    FeatureSchema,
    FeatureScore,
    FeatureValue,
    InformationObject,
    MembershipShape,
    OrdinalAccuracy,
    OrdinalParams,
    ProximityBreakdown,
    QuantAccuracy,
    Schema,
    SchemaError,
    SourceProfile,
    validate_profile,
    validate_schema,
)
from .quant import (
    NormalErrorModel,
    OverlapInterval,
    confidence_coefficient,
    interval_probability,
    joint_overlap_probability,
    laplace_function,
    overlap_interval,
    quantitative_distance,
    quantitative_proximity,
    sigma_from_max_error,
    standard_normal_cdf,
)
from .simulate import (
    ExperimentReport,
    Scene,
    SceneSpec,
    generate_scene,
    observe,
    run_experiment,
)

__all__ = [
    "AggregationMethod",
    "AggregationSpec",
    "Certainty",
    "ExperimentReport",
    "FeatureKind",
    "FeatureSchema",
    "FeatureScore",
    "FeatureValue",
    "FuzzyMembership",
    "IdentificationPowerWarning",
    "InformationObject",
    "MatchRun",
    "MatchRunError",
    "MembershipShape",
    "NormalErrorModel",
    "OrdinalAccuracy",
    "OrdinalParams",
    "OverlapInterval",
    "ProximityBreakdown",
    "QuantAccuracy",
    "Scene",
    "SceneSpec",
    "Schema",
    "SchemaError",
    "SourceProfile",
    "additive_distance",
    "apply_certainty",
    "candidates",
    "confidence_coefficient",
    "count_normalized_distance",
    "evaluate_pair",
    "gaussian_membership",
    "generate_scene",
    "interval_probability",
    "joint_overlap_probability",
    "laplace_function",
    "multiplicative_distance",
    "multiplicative_proximity",
    "nominal_plateau",
    "nominal_proximity",
    "observe",
    "overlap_interval",
    "pairwise_breakdowns",
    "possibility",
    "qualitative_distance",
    "quantitative_distance",
    "quantitative_proximity",
    "run_experiment",
    "sigma_from_max_error",
    "standard_normal_cdf",
    "triangular_from_halfwidth",
    "triangular_from_relative_error",
    "two_class_weighted_distance",
    "validate_profile",
    "validate_schema",
    "weighted_additive_distance",
    "zhuravlev_distance",
]
