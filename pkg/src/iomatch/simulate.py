"""Two-source scene simulation: synthesize ground truth, observe it with noisy
sources, run the matcher, and emit CSV/JSON/SVG artifacts.

Randomness comes from numpy's PCG64 generator seeded through SeedSequence, so
a fixed scene spec reproduces byte-identical outputs.  The noise stream layout
is fixed per object (two normals, one uniform, one replacement draw) so runs
that differ only in source precision share their underlying noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import __version__
from .aggregate import AggregationMethod, AggregationSpec
from .dataio import write_breakdowns_csv, write_json, write_objects_csv
from .engine import MatchRun, candidates, pairwise_breakdowns
from .model import (
    FeatureKind,
    FeatureSchema,
    FeatureValue,
    InformationObject,
    ProximityBreakdown,
    QuantAccuracy,
    Schema,
    SourceProfile,
)
from .svgplot import SVG_GENERATOR, render_match_svg

RNG_NAME = "numpy.random.PCG64"

POSITION_FEATURE = "position"
TYPE_FEATURE = "type"

# Ground-truth separation beyond which two distinct objects count as
# "well separated" in the report summary.
FAR_SEPARATION_M = 100.0

DEFAULT_SOURCE_IDS = ("s1", "s2")


class SceneSpecError(ValueError):
    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class SceneSpec:
    """Parameters of a synthetic two-source observation scene."""

    object_count: int = 20
    area: tuple[float, float] = (1000.0, 1000.0)
    type_alphabet: tuple[str, ...] = ("tank", "truck")
    rmse: tuple[float, float] = (20.0, 30.0)
    type_error: float = 0.1
    fleet_sigma_min: float = 10.0
    rng_seed: int = 1

    def violations(self) -> list[str]:
        errors = []
        if self.object_count <= 0:
            errors.append(f"object_count must be positive, got {self.object_count}")
        if len(self.area) != 2 or any(not a > 0.0 for a in self.area):
            errors.append(f"area sides must be positive, got {self.area}")
        if len(self.type_alphabet) < 2:
            errors.append("type alphabet needs at least two labels")
        if len(self.rmse) != 2 or any(not r > 0.0 for r in self.rmse):
            errors.append(f"need two positive RMSE values, got {self.rmse}")
        if not 0.0 < self.type_error <= 0.5:
            errors.append(f"type_error {self.type_error} outside (0, 0.5]")
        if not self.fleet_sigma_min > 0.0:
            errors.append(f"fleet_sigma_min must be positive, got {self.fleet_sigma_min}")
        return errors

    @property
    def xi(self) -> float:
        """Confidence half-window: three sigma of the best conceivable source."""
        return 3.0 * self.fleet_sigma_min


@dataclass(frozen=True)
class PhysicalObject:
    po_id: str
    x: float
    y: float
    type_label: str


@dataclass(frozen=True)
class Scene:
    spec: SceneSpec
    objects: tuple[PhysicalObject, ...]


def scene_schema(spec: SceneSpec) -> Schema:
    return Schema(
        (
            FeatureSchema(
                name=POSITION_FEATURE,
                kind=FeatureKind.QUANTITATIVE,
                weight=0.5,
                quantitative_xi=spec.xi,
                axes=("x", "y"),
            ),
            FeatureSchema(
                name=TYPE_FEATURE,
                kind=FeatureKind.NOMINAL,
                weight=0.5,
                nominal_delta=spec.type_error,
            ),
        )
    )


def generate_scene(spec: SceneSpec) -> Scene:
    """Uniform-random objects over the area with uniform-random types."""
    errors = spec.violations()
    if errors:
        raise SceneSpecError(errors)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(spec.rng_seed)))
    xs = rng.uniform(0.0, spec.area[0], spec.object_count)
    ys = rng.uniform(0.0, spec.area[1], spec.object_count)
    kinds = rng.integers(0, len(spec.type_alphabet), spec.object_count)
    objects = tuple(
        PhysicalObject(
            po_id=f"po-{i:03d}",
            x=float(xs[i]),
            y=float(ys[i]),
            type_label=spec.type_alphabet[int(kinds[i])],
        )
        for i in range(spec.object_count)
    )
    return Scene(spec=spec, objects=objects)


def observe(scene: Scene, profile: SourceProfile, seed) -> list[InformationObject]:
    """One source's noisy report of the scene.

    Coordinates are perturbed per axis by zero-mean Gaussian noise with the
    source's position sigma; the type flips with probability type_error to a
    uniformly drawn different label.  Unit noise is drawn before scaling, so
    two sources differing only in sigma see proportional perturbations for
    the same seed.
    """
    spec = scene.spec
    sigma = profile.quantitative_sigma(POSITION_FEATURE)
    rng = np.random.Generator(np.random.PCG64(seed))
    n = len(scene.objects)
    unit_noise = rng.standard_normal((n, 2))
    flip_draws = rng.random(n)
    replacement_draws = rng.integers(0, len(spec.type_alphabet) - 1, n)
    objects = []
    for i, po in enumerate(scene.objects):
        x = po.x + sigma * float(unit_noise[i, 0])
        y = po.y + sigma * float(unit_noise[i, 1])
        label = po.type_label
        if float(flip_draws[i]) < spec.type_error:
            others = [t for t in spec.type_alphabet if t != po.type_label]
            label = others[int(replacement_draws[i])]
        objects.append(
            InformationObject(
                object_id=f"{profile.source_id}-{i:03d}",
                source_id=profile.source_id,
                values={
                    POSITION_FEATURE: FeatureValue((x, y)),
                    TYPE_FEATURE: FeatureValue(label),
                },
            )
        )
    return objects


@dataclass(frozen=True)
class PairRecord:
    """One cross-source pair with its ground-truth flags."""

    a: str
    b: str
    proximity: float
    distance: float
    true_pair: bool
    type_mismatch: bool
    separation_true: float
    separation_observed: float


@dataclass(frozen=True)
class ExperimentReport:
    spec: SceneSpec
    threshold: float
    scene: Scene
    datasets: Mapping[str, tuple[InformationObject, ...]]
    breakdowns: tuple[ProximityBreakdown, ...]
    candidates: tuple[ProximityBreakdown, ...]
    pair_records: tuple[PairRecord, ...]
    summary: dict = field(default_factory=dict)

    def to_payload(self) -> dict:
        """JSON-ready representation of the whole experiment."""
        return {
            "metadata": {
                "generator": f"iomatch {__version__}",
                "rng": RNG_NAME,
                "svg_generator": SVG_GENERATOR,
                "seed": self.spec.rng_seed,
                "threshold": self.threshold,
                "rmse": list(self.spec.rmse),
                "type_error": self.spec.type_error,
                "fleet_sigma_min": self.spec.fleet_sigma_min,
                "object_count": self.spec.object_count,
                "area": list(self.spec.area),
                "types": list(self.spec.type_alphabet),
            },
            "scene": [
                {"id": po.po_id, "x": po.x, "y": po.y, "type": po.type_label}
                for po in self.scene.objects
            ],
            "datasets": {
                source_id: [
                    {
                        "id": obj.object_id,
                        "x": obj.values[POSITION_FEATURE].value[0],
                        "y": obj.values[POSITION_FEATURE].value[1],
                        "type": obj.values[TYPE_FEATURE].value,
                    }
                    for obj in objects
                ]
                for source_id, objects in self.datasets.items()
            },
            "pairs": [
                {
                    "a": r.a,
                    "b": r.b,
                    "proximity": r.proximity,
                    "distance": r.distance,
                    "true_pair": r.true_pair,
                    "type_mismatch": r.type_mismatch,
                    "separation_true": r.separation_true,
                    "separation_observed": r.separation_observed,
                }
                for r in self.pair_records
            ],
            "candidates": [
                {
                    "a": b.pair[0],
                    "b": b.pair[1],
                    "proximity": b.aggregate_proximity,
                    "true_pair": self._record(b.pair).true_pair,
                    "type_mismatch": self._record(b.pair).type_mismatch,
                }
                for b in self.candidates
            ],
            "summary": self.summary,
        }

    def _record(self, pair: tuple[str, str]) -> PairRecord:
        for r in self.pair_records:
            if (r.a, r.b) == pair:
                return r
        raise KeyError(pair)


def _mean(values: Sequence[float]) -> float | None:
    return sum(values) / len(values) if values else None


def run_experiment(
    spec: SceneSpec, out_dir: str | Path | None = None, threshold: float = 0.01
) -> ExperimentReport:
    """Generate, observe, and match a scene; optionally emit artifact files.

    Matching uses the multiplicative convolution with equal position/type
    weights.  Written files: ``objects_<source>.csv``, ``pairs.csv``,
    ``report.json``, ``scene.svg``.
    """
    scene = generate_scene(spec)
    schema = scene_schema(spec)
    root = np.random.SeedSequence(spec.rng_seed)
    observation_seeds = root.spawn(len(DEFAULT_SOURCE_IDS) + 1)[1:]
    profiles = {
        sid: SourceProfile(
            source_id=sid, accuracy={POSITION_FEATURE: QuantAccuracy(sigma=spec.rmse[i])}
        )
        for i, sid in enumerate(DEFAULT_SOURCE_IDS)
    }
    datasets = {
        sid: tuple(observe(scene, profiles[sid], observation_seeds[i]))
        for i, sid in enumerate(DEFAULT_SOURCE_IDS)
    }
    run = MatchRun(
        schema=schema,
        profiles=profiles,
        dataset_a=datasets[DEFAULT_SOURCE_IDS[0]],
        dataset_b=datasets[DEFAULT_SOURCE_IDS[1]],
        aggregation=AggregationSpec(method=AggregationMethod.MULTIPLICATIVE),
        candidate_threshold=threshold,
    )
    breakdowns = pairwise_breakdowns(run)
    found = candidates(breakdowns, threshold)

    by_id = {obj.object_id: obj for objects in datasets.values() for obj in objects}
    po_index = {f"{sid}-{i:03d}": i for sid in DEFAULT_SOURCE_IDS for i in range(spec.object_count)}
    records = []
    for b in breakdowns:
        a_id, b_id = b.pair
        po_a = scene.objects[po_index[a_id]]
        po_b = scene.objects[po_index[b_id]]
        oa, ob = by_id[a_id], by_id[b_id]
        ax, ay = oa.values[POSITION_FEATURE].value
        bx, by_ = ob.values[POSITION_FEATURE].value
        records.append(
            PairRecord(
                a=a_id,
                b=b_id,
                proximity=b.aggregate_proximity,
                distance=b.aggregate_distance,
                true_pair=po_a.po_id == po_b.po_id,
                type_mismatch=oa.values[TYPE_FEATURE].value != ob.values[TYPE_FEATURE].value,
                separation_true=math.hypot(po_a.x - po_b.x, po_a.y - po_b.y),
                separation_observed=math.hypot(ax - bx, ay - by_),
            )
        )
    records = tuple(records)

    candidate_pairs = {b.pair for b in found}
    mismatch_candidates = [r for r in records if (r.a, r.b) in candidate_pairs and r.type_mismatch]
    summary = {
        "pair_count": len(records),
        "true_pair_count": sum(r.true_pair for r in records),
        "candidate_count": len(found),
        "true_candidate_count": sum(
            1 for r in records if (r.a, r.b) in candidate_pairs and r.true_pair
        ),
        "type_mismatch_candidate_count": len(mismatch_candidates),
        "mean_proximity_true_pairs": _mean([r.proximity for r in records if r.true_pair]),
        "mean_proximity_distinct_far_pairs": _mean(
            [
                r.proximity
                for r in records
                if not r.true_pair and r.separation_true > FAR_SEPARATION_M
            ]
        ),
        "max_type_mismatch_candidate_proximity": max(
            (r.proximity for r in mismatch_candidates), default=None
        ),
        "nominal_mismatch_cap": spec.type_error ** 0.5,
    }
    report = ExperimentReport(
        spec=spec,
        threshold=threshold,
        scene=scene,
        datasets=datasets,
        breakdowns=tuple(breakdowns),
        candidates=tuple(found),
        pair_records=records,
        summary=summary,
    )
    if out_dir is not None:
        emit_report_files(report, Path(out_dir))
    return report


def emit_report_files(report: ExperimentReport, out_dir: Path, formats: Sequence[str] = ("csv", "json", "svg")) -> list[Path]:
    """Write the experiment artifacts; returns the files written."""
    out_dir.mkdir(parents=True, exist_ok=True)
    schema = scene_schema(report.spec)
    written = []
    if "csv" in formats:
        for source_id, objects in report.datasets.items():
            p = out_dir / f"objects_{source_id}.csv"
            write_objects_csv(p, objects, schema)
            written.append(p)
        p = out_dir / "pairs.csv"
        write_breakdowns_csv(p, report.breakdowns, schema)
        written.append(p)
    if "json" in formats:
        p = out_dir / "report.json"
        write_json(p, report.to_payload())
        written.append(p)
    if "svg" in formats:
        p = out_dir / "scene.svg"
        p.write_text(render_scene_svg(report))
        written.append(p)
    return written


def render_scene_svg(report: ExperimentReport) -> str:
    record_by_pair = {(r.a, r.b): r for r in report.pair_records}
    links = []
    for b in report.candidates:
        r = record_by_pair[b.pair]
        oa = next(o for o in report.datasets[DEFAULT_SOURCE_IDS[0]] if o.object_id == r.a)
        ob = next(o for o in report.datasets[DEFAULT_SOURCE_IDS[1]] if o.object_id == r.b)
        ax, ay = oa.values[POSITION_FEATURE].value
        bx, by_ = ob.values[POSITION_FEATURE].value
        links.append((ax, ay, bx, by_, r.type_mismatch))
    datasets = [
        (sid, [(o.object_id, o.values[POSITION_FEATURE].value[0], o.values[POSITION_FEATURE].value[1]) for o in objs])
        for sid, objs in report.datasets.items()
    ]
    rmse = report.spec.rmse
    title = f"candidates above {report.threshold:g} (RMSE {rmse[0]:g} m / {rmse[1]:g} m)"
    return render_match_svg(report.spec.area, datasets, links, title=title)
