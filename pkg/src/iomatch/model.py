"""Core data model: feature schema, source accuracy profiles, object records, results.

Everything here is an immutable value object; instances can be shared freely
across concurrent evaluators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence, Union

from .quant import sigma_from_max_error

WEIGHT_SUM_TOLERANCE = 1e-9
COMPLEMENT_TOLERANCE = 1e-12

# A nominal determination error of 0.5 makes a match and a mismatch
# indistinguishable; anything above that is rejected outright.
MAX_NOMINAL_DELTA = 0.5


class FeatureKind(Enum):
    """How a feature's values are obtained, which fixes its proximity rule."""

    QUANTITATIVE = "quantitative"
    ORDINAL_FUZZY = "ordinal"
    NOMINAL = "nominal"


class MembershipShape(Enum):
    TRIANGULAR = "triangular"
    GAUSSIAN = "gaussian"
    NOMINAL_PLATEAU = "nominal-plateau"


class Certainty(Enum):
    """Linguistic confidence attached to a reported value, on its numeric scale."""

    CERTAIN = 1.0
    PROBABLE = 0.7
    POSSIBLE = 0.5
    DOUBTFUL = 0.25

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def from_label(cls, label: str) -> "Certainty":
        try:
            return cls[label.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown certainty label: {label!r}") from None


@dataclass(frozen=True)
class OrdinalParams:
    """Schema-level fuzzification defaults for an ordinal feature.

    ``width`` is the triangular half-width or the Gaussian spread, in rank
    units; a source profile may override it per source.
    """

    shape: MembershipShape
    width: float | None = None


@dataclass(frozen=True)
class FeatureSchema:
    """Declaration of one feature: kind, aggregation weight, error-model knobs.

    ``axes`` names the components of a composite quantitative feature (for
    example planar coordinates); scalar features leave it unset.
    ``quantitative_xi`` is the fixed half-window used by the confidence
    coefficient; when unset the engine derives it from the most precise
    configured source.
    """

    name: str
    kind: FeatureKind
    weight: float
    quantitative_xi: float | None = None
    nominal_delta: float | None = None
    ordinal_params: OrdinalParams | None = None
    axes: tuple[str, ...] | None = None

    @property
    def arity(self) -> int:
        return len(self.axes) if self.axes else 1


class SchemaError(ValueError):
    """Raised when a schema or profile fails validation; carries every violation."""

    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class Schema:
    """A validated, ordered collection of feature declarations."""

    features: tuple[FeatureSchema, ...]

    def __iter__(self):
        return iter(self.features)

    def __len__(self) -> int:
        return len(self.features)

    def feature(self, name: str) -> FeatureSchema:
        for f in self.features:
            if f.name == name:
                return f
        raise KeyError(name)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.features)

    @property
    def quantitative_names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.features if f.kind is FeatureKind.QUANTITATIVE)

    @property
    def qualitative_names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.features if f.kind is not FeatureKind.QUANTITATIVE)


def schema_violations(features: Sequence[FeatureSchema]) -> list[str]:
    """Collect every invariant violation in a feature list (empty list = valid)."""
    errors: list[str] = []
    seen: set[str] = set()
    for f in features:
        if f.name in seen:
            errors.append(f"{f.name}: duplicate feature name")
        seen.add(f.name)
        if not 0.0 <= f.weight <= 1.0:
            errors.append(f"{f.name}: weight {f.weight} outside [0, 1]")
        if f.kind is FeatureKind.NOMINAL:
            if f.nominal_delta is None:
                errors.append(f"{f.name}: nominal feature missing determination error delta")
            elif not 0.0 < f.nominal_delta <= MAX_NOMINAL_DELTA:
                errors.append(
                    f"{f.name}: delta {f.nominal_delta} outside (0, {MAX_NOMINAL_DELTA}]"
                    " (0.5 already loses identification power; larger is meaningless)"
                )
        elif f.nominal_delta is not None:
            errors.append(f"{f.name}: delta only applies to nominal features")
        if f.kind is FeatureKind.QUANTITATIVE:
            if f.quantitative_xi is not None and not f.quantitative_xi > 0.0:
                errors.append(f"{f.name}: xi must be positive")
        elif f.quantitative_xi is not None:
            errors.append(f"{f.name}: xi only applies to quantitative features")
        if f.kind is FeatureKind.ORDINAL_FUZZY:
            if f.ordinal_params is None:
                errors.append(f"{f.name}: ordinal feature missing membership shape")
            else:
                if f.ordinal_params.shape is MembershipShape.NOMINAL_PLATEAU:
                    errors.append(f"{f.name}: ordinal shape must be triangular or gaussian")
                if f.ordinal_params.width is not None and not f.ordinal_params.width > 0.0:
                    errors.append(f"{f.name}: membership width must be positive")
        elif f.ordinal_params is not None:
            errors.append(f"{f.name}: membership shape only applies to ordinal features")
        if f.axes is not None:
            if f.kind is not FeatureKind.QUANTITATIVE:
                errors.append(f"{f.name}: axes only apply to quantitative features")
            elif len(f.axes) == 0 or len(set(f.axes)) != len(f.axes):
                errors.append(f"{f.name}: axes must be non-empty and unique")
    total = sum(f.weight for f in features)
    if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
        errors.append(f"feature weights sum to {total!r}, expected 1")
    return errors


def validate_schema(features: Union[Schema, Sequence[FeatureSchema]]) -> Schema:
    """Return a validated :class:`Schema`, or raise :class:`SchemaError` listing
    every violation.  Validating an already-validated schema returns it unchanged.
    """
    if isinstance(features, Schema):
        errors = schema_violations(features.features)
        if errors:
            raise SchemaError(errors)
        return features
    errors = schema_violations(tuple(features))
    if errors:
        raise SchemaError(errors)
    return Schema(tuple(features))


@dataclass(frozen=True)
class QuantAccuracy:
    """Per-source accuracy of a quantitative feature: sigma directly, or the
    maximum absolute error from which sigma follows by the three-sigma rule."""

    sigma: float | None = None
    delta_max: float | None = None

    def resolved_sigma(self) -> float:
        if self.sigma is not None:
            return self.sigma
        if self.delta_max is not None:
            return sigma_from_max_error(self.delta_max)
        raise ValueError("no sigma or delta_max configured")


@dataclass(frozen=True)
class OrdinalAccuracy:
    """Per-source accuracy of an ordinal feature: a relative-error coefficient
    (triangular bounds scale with the reported value) or an absolute width in
    rank units (half-width for triangular shapes, spread for Gaussian)."""

    relative_k: float | None = None
    width: float | None = None


@dataclass(frozen=True)
class SourceProfile:
    """Per-source, per-feature accuracy declarations."""

    source_id: str
    accuracy: Mapping[str, Union[QuantAccuracy, OrdinalAccuracy]] = field(default_factory=dict)

    def quantitative_sigma(self, feature_name: str) -> float:
        acc = self.accuracy.get(feature_name)
        if not isinstance(acc, QuantAccuracy):
            raise KeyError(f"{self.source_id}: no quantitative accuracy for {feature_name!r}")
        return acc.resolved_sigma()


def profile_violations(profile: SourceProfile, schema: Schema) -> list[str]:
    """Check a source profile against a schema; returns every violation."""
    errors: list[str] = []
    sid = profile.source_id
    names = set(schema.names)
    for name, acc in profile.accuracy.items():
        if name not in names:
            errors.append(f"{sid}: accuracy given for unknown feature {name!r}")
            continue
        feature = schema.feature(name)
        if feature.kind is FeatureKind.QUANTITATIVE:
            if not isinstance(acc, QuantAccuracy):
                errors.append(f"{sid}/{name}: expected quantitative accuracy")
                continue
            given = [v for v in (acc.sigma, acc.delta_max) if v is not None]
            if len(given) != 1:
                errors.append(f"{sid}/{name}: give exactly one of sigma or delta_max")
            elif not given[0] > 0.0:
                errors.append(f"{sid}/{name}: accuracy must be positive")
        elif feature.kind is FeatureKind.ORDINAL_FUZZY:
            if not isinstance(acc, OrdinalAccuracy):
                errors.append(f"{sid}/{name}: expected ordinal accuracy")
                continue
            given = [v for v in (acc.relative_k, acc.width) if v is not None]
            if len(given) > 1:
                errors.append(f"{sid}/{name}: give at most one of relative_k or width")
            if acc.relative_k is not None:
                if not 0.0 < acc.relative_k < 1.0:
                    errors.append(f"{sid}/{name}: relative_k must lie in (0, 1)")
                if feature.ordinal_params and feature.ordinal_params.shape is MembershipShape.GAUSSIAN:
                    errors.append(f"{sid}/{name}: relative_k requires a triangular shape")
            if acc.width is not None and not acc.width > 0.0:
                errors.append(f"{sid}/{name}: width must be positive")
        else:
            errors.append(f"{sid}/{name}: nominal error lives in the schema, not the profile")
    for name in schema.quantitative_names:
        acc = profile.accuracy.get(name)
        if not isinstance(acc, QuantAccuracy):
            errors.append(f"{sid}: missing accuracy parameter for quantitative feature {name!r}")
            continue
        try:
            if not acc.resolved_sigma() > 0.0:
                errors.append(f"{sid}/{name}: sigma must be strictly positive")
        except ValueError:
            errors.append(f"{sid}: missing accuracy parameter for quantitative feature {name!r}")
    for f in schema.features:
        if f.kind is not FeatureKind.ORDINAL_FUZZY:
            continue
        acc = profile.accuracy.get(f.name)
        has_source = isinstance(acc, OrdinalAccuracy) and (
            acc.relative_k is not None or acc.width is not None
        )
        has_default = f.ordinal_params is not None and f.ordinal_params.width is not None
        if not has_source and not has_default:
            errors.append(f"{sid}: missing accuracy parameter for ordinal feature {f.name!r}")
    return errors


def validate_profile(profile: SourceProfile, schema: Schema) -> SourceProfile:
    errors = profile_violations(profile, schema)
    if errors:
        raise SchemaError(errors)
    return profile


Payload = Union[float, int, str, tuple]


@dataclass(frozen=True)
class FeatureValue:
    """One reported value: payload plus the reporter's certainty level."""

    value: Payload
    certainty: Certainty = Certainty.CERTAIN


@dataclass(frozen=True)
class InformationObject:
    """One source's report about a physical object.

    Features missing from ``values`` are treated as absent and are excluded
    from pair aggregation.
    """

    object_id: str
    source_id: str
    values: Mapping[str, FeatureValue] = field(default_factory=dict)


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def object_violations(obj: InformationObject, schema: Schema) -> list[str]:
    """Check one object's payloads against the schema; returns every violation."""
    errors: list[str] = []
    oid = obj.object_id
    names = set(schema.names)
    for name, fv in obj.values.items():
        if name not in names:
            errors.append(f"{oid}: value for unknown feature {name!r}")
            continue
        feature = schema.feature(name)
        if not isinstance(fv, FeatureValue):
            errors.append(f"{oid}/{name}: expected a FeatureValue")
            continue
        v = fv.value
        if feature.kind is FeatureKind.QUANTITATIVE:
            if feature.axes:
                ok = (
                    isinstance(v, tuple)
                    and len(v) == len(feature.axes)
                    and all(_is_number(c) for c in v)
                )
                if not ok:
                    errors.append(
                        f"{oid}/{name}: expected {len(feature.axes)} numeric components"
                    )
            elif not _is_number(v):
                errors.append(f"{oid}/{name}: expected a numeric value")
        elif feature.kind is FeatureKind.ORDINAL_FUZZY:
            if not _is_number(v):
                errors.append(f"{oid}/{name}: expected a numeric rank")
        else:
            if not isinstance(v, str):
                errors.append(f"{oid}/{name}: expected a label")
    return errors


@dataclass(frozen=True)
class FeatureScore:
    """Proximity and its complement distance for one feature of one pair."""

    proximity: float
    distance: float

    def __post_init__(self):
        if not 0.0 <= self.proximity <= 1.0 or not 0.0 <= self.distance <= 1.0:
            raise ValueError(f"scores outside [0, 1]: {self}")
        if abs(self.distance - (1.0 - self.proximity)) > COMPLEMENT_TOLERANCE:
            raise ValueError(f"distance is not the complement of proximity: {self}")

    @classmethod
    def from_proximity(cls, proximity: float) -> "FeatureScore":
        return cls(proximity, 1.0 - proximity)


@dataclass(frozen=True)
class ProximityBreakdown:
    """Per-feature and aggregate proximity/distance for one cross-source pair."""

    pair: tuple[str, str]
    per_feature: Mapping[str, FeatureScore]
    aggregate_proximity: float
    aggregate_distance: float

    def __post_init__(self):
        if not 0.0 <= self.aggregate_proximity <= 1.0:
            raise ValueError(f"aggregate proximity outside [0, 1]: {self.aggregate_proximity}")
        if abs(self.aggregate_distance - (1.0 - self.aggregate_proximity)) > COMPLEMENT_TOLERANCE:
            raise ValueError("aggregate distance is not the complement of aggregate proximity")
