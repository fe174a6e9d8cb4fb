"""Configuration document parsing.

One JSON document declares the feature schema, per-source accuracies, the
aggregation method, the candidate threshold, and (optionally) a simulation
scene.  See README for the full layout.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence

from .aggregate import AggregationMethod, AggregationSpec
from .model import (
    FeatureKind,
    FeatureSchema,
    MembershipShape,
    OrdinalAccuracy,
    OrdinalParams,
    QuantAccuracy,
    Schema,
    SourceProfile,
    profile_violations,
    schema_violations,
)
from .simulate import SceneSpec

DEFAULT_THRESHOLD = 0.01

_KINDS = {
    "quantitative": FeatureKind.QUANTITATIVE,
    "ordinal": FeatureKind.ORDINAL_FUZZY,
    "nominal": FeatureKind.NOMINAL,
}
_SHAPES = {
    "triangular": MembershipShape.TRIANGULAR,
    "gaussian": MembershipShape.GAUSSIAN,
}


class ConfigError(ValueError):
    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class RunConfig:
    """Parsed configuration document."""

    schema: Schema | None
    profiles: dict[str, SourceProfile]
    aggregation: AggregationSpec
    threshold: float
    simulation: SceneSpec | None


def _parse_feature(raw: Mapping[str, Any], errors: list[str]) -> FeatureSchema | None:
    name = raw.get("name")
    if not isinstance(name, str) or not name:
        errors.append(f"feature without a name: {raw!r}")
        return None
    kind = _KINDS.get(raw.get("kind"))
    if kind is None:
        errors.append(f"{name}: unknown kind {raw.get('kind')!r}")
        return None
    ordinal_params = None
    if "shape" in raw or kind is FeatureKind.ORDINAL_FUZZY:
        shape = _SHAPES.get(raw.get("shape"))
        if shape is None:
            errors.append(f"{name}: unknown membership shape {raw.get('shape')!r}")
            return None
        ordinal_params = OrdinalParams(shape=shape, width=raw.get("width"))
    axes = raw.get("axes")
    return FeatureSchema(
        name=name,
        kind=kind,
        weight=raw.get("weight", 0.0),
        quantitative_xi=raw.get("xi"),
        nominal_delta=raw.get("delta"),
        ordinal_params=ordinal_params,
        axes=tuple(axes) if axes else None,
    )


def _parse_sources(raw: Mapping[str, Any], schema: Schema, errors: list[str]) -> dict[str, SourceProfile]:
    profiles: dict[str, SourceProfile] = {}
    for source_id, entries in raw.items():
        accuracy: dict[str, Any] = {}
        for feature_name, params in entries.items():
            try:
                feature = schema.feature(feature_name)
            except KeyError:
                errors.append(f"{source_id}: accuracy for unknown feature {feature_name!r}")
                continue
            if feature.kind is FeatureKind.QUANTITATIVE:
                accuracy[feature_name] = QuantAccuracy(
                    sigma=params.get("sigma"), delta_max=params.get("delta_max")
                )
            else:
                accuracy[feature_name] = OrdinalAccuracy(
                    relative_k=params.get("k"), width=params.get("width")
                )
        profiles[source_id] = SourceProfile(source_id=source_id, accuracy=accuracy)
    return profiles


def _parse_aggregation(raw: Mapping[str, Any], errors: list[str]) -> AggregationSpec:
    method_name = raw.get("method", "multiplicative")
    try:
        method = AggregationMethod(method_name)
    except ValueError:
        errors.append(f"unknown aggregation method {method_name!r}")
        return AggregationSpec()
    weights = raw.get("feature_weights")
    return AggregationSpec(
        method=method,
        class_weight=raw.get("class_weight"),
        feature_weights=dict(weights) if weights else None,
        normalized=bool(raw.get("normalized", False)),
    )


def _parse_simulation(raw: Mapping[str, Any], errors: list[str]) -> SceneSpec | None:
    try:
        area = raw.get("area", (1000.0, 1000.0))
        return SceneSpec(
            object_count=raw.get("object_count", 20),
            area=(float(area[0]), float(area[1])),
            type_alphabet=tuple(raw.get("types", ("tank", "truck"))),
            rmse=tuple(float(r) for r in raw.get("rmse", (20.0, 30.0))),
            type_error=float(raw.get("type_error", 0.1)),
            fleet_sigma_min=float(raw.get("fleet_sigma_min", 10.0)),
            rng_seed=int(raw.get("seed", 1)),
        )
    except (ValueError, TypeError, IndexError) as exc:
        errors.append(f"invalid simulation section: {exc}")
        return None


def parse_config(document: Mapping[str, Any]) -> RunConfig:
    """Parse and validate an already-loaded configuration mapping."""
    errors: list[str] = []
    schema = None
    profiles: dict[str, SourceProfile] = {}
    if "schema" in document:
        features = []
        for raw in document["schema"].get("features", []):
            feature = _parse_feature(raw, errors)
            if feature is not None:
                features.append(feature)
        errors.extend(schema_violations(features))
        if not errors:
            schema = Schema(tuple(features))
        if schema is not None:
            profiles = _parse_sources(document.get("sources", {}), schema, errors)
            for profile in profiles.values():
                errors.extend(profile_violations(profile, schema))
    aggregation = _parse_aggregation(document.get("aggregation", {}), errors)
    threshold = document.get("threshold", DEFAULT_THRESHOLD)
    if not isinstance(threshold, (int, float)) or not 0.0 <= threshold <= 1.0:
        errors.append(f"threshold {threshold!r} outside [0, 1]")
        threshold = DEFAULT_THRESHOLD
    simulation = None
    if "simulation" in document:
        simulation = _parse_simulation(document["simulation"], errors)
        if simulation is not None:
            sim_errors = simulation.violations()
            errors.extend(sim_errors)
            if sim_errors:
                simulation = None
    if errors:
        raise ConfigError(errors)
    return RunConfig(
        schema=schema,
        profiles=profiles,
        aggregation=aggregation,
        threshold=float(threshold),
        simulation=simulation,
    )


def load_config(path: str | Path) -> RunConfig:
    """Load and validate a JSON configuration document from disk."""
    try:
        document = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError([f"cannot read config {path}: {exc}"]) from exc
    if not isinstance(document, dict):
        raise ConfigError([f"config root must be an object, got {type(document).__name__}"])
    return parse_config(document)


def require_match_config(config: RunConfig) -> None:
    """Ensure the parts needed by measure/match are present."""
    errors = []
    if config.schema is None:
        errors.append("config declares no schema")
    elif not config.profiles:
        errors.append("config declares no sources")
    if errors:
        raise ConfigError(errors)
