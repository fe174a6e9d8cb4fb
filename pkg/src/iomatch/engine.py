"""Pairwise proximity evaluation over two cross-source datasets.

Every pair evaluation is a pure function of the run configuration, so the
breakdown collection is independent of evaluation order and safe to compute
concurrently; this implementation evaluates sequentially.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from . import aggregate as agg
from . import fuzzy, quant
from .model import (
    FeatureKind,
    FeatureSchema,
    FeatureScore,
    FeatureValue,
    InformationObject,
    MembershipShape,
    OrdinalAccuracy,
    ProximityBreakdown,
    Schema,
    SourceProfile,
    object_violations,
    profile_violations,
    schema_violations,
)

THREE_SIGMA = 3.0


class MatchRunError(ValueError):
    """Raised when a run's configuration or data violates the schema."""

    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class MatchRun:
    """One matching task: schema, source accuracies, two datasets, aggregation."""

    schema: Schema
    profiles: Mapping[str, SourceProfile]
    dataset_a: tuple[InformationObject, ...]
    dataset_b: tuple[InformationObject, ...]
    aggregation: agg.AggregationSpec = agg.AggregationSpec()
    candidate_threshold: float = 0.01


def run_violations(run: MatchRun) -> list[str]:
    """Collect every configuration and per-object violation of a run."""
    errors = list(schema_violations(run.schema.features))
    for profile in run.profiles.values():
        errors.extend(profile_violations(profile, run.schema))
    if not 0.0 <= run.candidate_threshold <= 1.0:
        errors.append(f"candidate threshold {run.candidate_threshold} outside [0, 1]")
    for label, dataset in (("A", run.dataset_a), ("B", run.dataset_b)):
        sources = {obj.source_id for obj in dataset}
        if len(sources) > 1:
            errors.append(f"dataset {label} mixes source ids {sorted(sources)}")
        for sid in sources:
            if sid not in run.profiles:
                errors.append(f"dataset {label}: no profile for source {sid!r}")
        for obj in dataset:
            errors.extend(object_violations(obj, run.schema))
    a_sources = {obj.source_id for obj in run.dataset_a}
    b_sources = {obj.source_id for obj in run.dataset_b}
    if a_sources and a_sources == b_sources:
        errors.append("both datasets reference the same source id")
    if run.aggregation.method is agg.AggregationMethod.TWO_CLASS_WEIGHTED:
        w = run.aggregation.class_weight
        if w is None or not 0.0 <= w <= 1.0:
            errors.append("two-class aggregation requires a class weight in [0, 1]")
    return errors


def _fleet_xi(feature: FeatureSchema, profiles: Iterable[SourceProfile]) -> float:
    """Per-feature confidence half-window: explicit xi, or three times the
    smallest sigma among the configured sources."""
    if feature.quantitative_xi is not None:
        return feature.quantitative_xi
    sigmas = [p.quantitative_sigma(feature.name) for p in profiles]
    return THREE_SIGMA * min(sigmas)


def _axis_values(feature: FeatureSchema, fv: FeatureValue) -> tuple[float, ...]:
    if feature.axes:
        return tuple(float(c) for c in fv.value)
    return (float(fv.value),)


def _quantitative_proximity(
    feature: FeatureSchema,
    profile_a: SourceProfile,
    profile_b: SourceProfile,
    va: FeatureValue,
    vb: FeatureValue,
    xi: float,
) -> float:
    # Composite features multiply the per-axis corrected proximities; both
    # axes share the source's sigma for the feature.
    sigma_a = profile_a.quantitative_sigma(feature.name)
    sigma_b = profile_b.quantitative_sigma(feature.name)
    result = 1.0
    for a_val, b_val in zip(_axis_values(feature, va), _axis_values(feature, vb)):
        result *= quant.quantitative_proximity(
            quant.NormalErrorModel(a_val, sigma_a),
            quant.NormalErrorModel(b_val, sigma_b),
            xi,
        )
    return result


def _ordinal_membership(
    feature: FeatureSchema, profile: SourceProfile, fv: FeatureValue
) -> fuzzy.FuzzyMembership:
    params = feature.ordinal_params
    acc = profile.accuracy.get(feature.name)
    k = acc.relative_k if isinstance(acc, OrdinalAccuracy) else None
    width = acc.width if isinstance(acc, OrdinalAccuracy) and acc.width is not None else params.width
    rank = float(fv.value)
    if params.shape is MembershipShape.GAUSSIAN:
        m = fuzzy.gaussian_membership(rank, width)
    elif k is not None:
        m = fuzzy.triangular_from_relative_error(rank, k)
    else:
        m = fuzzy.triangular_from_halfwidth(rank, width)
    return fuzzy.apply_certainty(m, fv.certainty)


def _feature_proximity(
    feature: FeatureSchema,
    profile_a: SourceProfile,
    profile_b: SourceProfile,
    va: FeatureValue,
    vb: FeatureValue,
    xi: float | None,
) -> float:
    if feature.kind is FeatureKind.QUANTITATIVE:
        return _quantitative_proximity(feature, profile_a, profile_b, va, vb, xi)
    if feature.kind is FeatureKind.ORDINAL_FUZZY:
        return fuzzy.possibility(
            _ordinal_membership(feature, profile_a, va),
            _ordinal_membership(feature, profile_b, vb),
        )
    return fuzzy.nominal_proximity(va.value, vb.value, feature.nominal_delta)


def _renormalized_weights(weights: Sequence[float]) -> list[float]:
    total = sum(weights)
    if total <= 0.0:
        # All-absent-weight pairs degenerate to an unweighted mean.
        return [1.0 / len(weights)] * len(weights)
    return [w / total for w in weights]


def _aggregate_scores(
    schema: Schema, spec: agg.AggregationSpec, proximities: Mapping[str, float]
) -> tuple[float, float]:
    """Fold per-feature proximities into (aggregate proximity, distance).

    Methods whose raw range exceeds [0, 1] (plain and per-class sums) are
    rescaled by their attainable maximum so the breakdown invariant
    distance == 1 - proximity holds for every method.
    """
    names = [f.name for f in schema.features if f.name in proximities]
    if not names:
        return 1.0, 0.0
    distances = {n: 1.0 - proximities[n] for n in names}
    quant_names = [n for n in names if schema.feature(n).kind is FeatureKind.QUANTITATIVE]
    qual_names = [n for n in names if schema.feature(n).kind is not FeatureKind.QUANTITATIVE]
    method = spec.method

    if method is agg.AggregationMethod.MULTIPLICATIVE:
        weights = _resolve_weights(schema, spec, names)
        p = agg.multiplicative_proximity([proximities[n] for n in names], weights)
        return p, 1.0 - p

    if method is agg.AggregationMethod.WEIGHTED_ADDITIVE:
        weights = _resolve_weights(schema, spec, names)
        d = agg.weighted_additive_distance([distances[n] for n in names], weights)
        return 1.0 - d, d

    quant_d = [distances[n] for n in quant_names]
    qual_d = [distances[n] for n in qual_names]
    if method is agg.AggregationMethod.ADDITIVE:
        d = agg.additive_distance(quant_d, qual_d) / len(names)
    elif method is agg.AggregationMethod.COUNT_NORMALIZED:
        classes = (1 if quant_d else 0) + (1 if qual_d else 0)
        d = agg.count_normalized_distance(quant_d, qual_d) / classes
    else:
        w = spec.class_weight
        d_raw = agg.two_class_weighted_distance(w, quant_d, qual_d, spec.normalized)
        if spec.normalized:
            d = d_raw
        else:
            max_raw = w * len(quant_d) + (1.0 - w) * len(qual_d)
            d = d_raw / max_raw if max_raw > 0.0 else 0.0
    return 1.0 - d, d


def _resolve_weights(
    schema: Schema, spec: agg.AggregationSpec, names: Sequence[str]
) -> list[float]:
    source = spec.feature_weights if spec.feature_weights is not None else {
        f.name: f.weight for f in schema.features
    }
    return _renormalized_weights([source[n] for n in names])


def evaluate_pair(
    schema: Schema,
    profiles: Mapping[str, SourceProfile],
    spec: agg.AggregationSpec,
    a: InformationObject,
    b: InformationObject,
    xi_by_feature: Mapping[str, float] | None = None,
) -> ProximityBreakdown:
    """Full proximity breakdown for one cross-source pair.

    Only features present in both objects contribute; aggregation weights are
    renormalized over that subset.
    """
    profile_a = profiles[a.source_id]
    profile_b = profiles[b.source_id]
    proximities: dict[str, float] = {}
    for feature in schema.features:
        va = a.values.get(feature.name)
        vb = b.values.get(feature.name)
        if va is None or vb is None:
            continue
        xi = None
        if feature.kind is FeatureKind.QUANTITATIVE:
            if xi_by_feature is not None:
                xi = xi_by_feature[feature.name]
            else:
                xi = _fleet_xi(feature, (profile_a, profile_b))
        proximities[feature.name] = _feature_proximity(
            feature, profile_a, profile_b, va, vb, xi
        )
    aggregate_p, aggregate_d = _aggregate_scores(schema, spec, proximities)
    return ProximityBreakdown(
        pair=(a.object_id, b.object_id),
        per_feature={n: FeatureScore.from_proximity(p) for n, p in proximities.items()},
        aggregate_proximity=aggregate_p,
        aggregate_distance=aggregate_d,
    )


def pairwise_breakdowns(run: MatchRun) -> list[ProximityBreakdown]:
    """One breakdown per cross-source pair (dataset A outer, B inner).

    Validates the whole run first and aborts with every violation when any
    object fails the schema.
    """
    errors = run_violations(run)
    if errors:
        raise MatchRunError(errors)
    xi_by_feature = {
        f.name: _fleet_xi(f, run.profiles.values())
        for f in run.schema.features
        if f.kind is FeatureKind.QUANTITATIVE
    }
    return [
        evaluate_pair(run.schema, run.profiles, run.aggregation, a, b, xi_by_feature)
        for a in run.dataset_a
        for b in run.dataset_b
    ]


def candidates(
    breakdowns: Iterable[ProximityBreakdown], threshold: float
) -> list[ProximityBreakdown]:
    """Pairs whose aggregate proximity exceeds the threshold, most similar first.

    Ties are broken by the pair's identifier tuple.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold {threshold} outside [0, 1]")
    keep = [b for b in breakdowns if b.aggregate_proximity > threshold]
    return sorted(keep, key=lambda b: (-b.aggregate_proximity, b.pair))
