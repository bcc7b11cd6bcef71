"""Instance and result files.

Instances are JSON ({"dimension", "metric", "points"}) or CSV (one point
per row, Euclidean).  Result JSON is canonicalized: sorted keys, compact
separators, shortest round-trip floats; identical runs produce identical
bytes.
"""

import csv
import json
from pathlib import Path

import numpy as np

from .errors import InvalidInputError
from .geometry import Instance, Metric


def metric_to_json(metric: Metric) -> dict:
    if metric.kind == "euclidean":
        return {"type": "euclidean"}
    return {"type": "even_polygon", "m": metric.m, "theta0": metric.theta0}


def metric_from_json(data) -> Metric:
    if data is None:
        return Metric.euclidean()
    kind = data.get("type")
    if kind == "euclidean":
        return Metric.euclidean()
    if kind == "even_polygon":
        return Metric.even_polygon(int(data["m"]), float(data.get("theta0", 0.0)))
    raise InvalidInputError(f"unknown metric type {kind!r}")


def instance_to_json(instance: Instance) -> dict:
    return {
        "dimension": instance.dimension,
        "metric": metric_to_json(instance.metric),
        "points": [[float(c) for c in p] for p in instance.points],
    }


def instance_from_json(data, merge_duplicates: bool = False) -> Instance:
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    points = np.asarray(data["points"], dtype=float)
    if "dimension" in data and points.shape[1] != int(data["dimension"]):
        raise InvalidInputError(
            f"declared dimension {data['dimension']} does not match points of width {points.shape[1]}"
        )
    return Instance(points, metric_from_json(data.get("metric")), merge_duplicates=merge_duplicates)


def load_instance(path, merge_duplicates: bool = False) -> Instance:
    """Load .json (full schema) or .csv (Euclidean points only)."""
    p = Path(path)
    if not p.exists():
        raise InvalidInputError(f"no such instance file: {path}")
    if p.suffix.lower() == ".csv":
        rows = []
        with open(p, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                rows.append([float(c) for c in row])
        if not rows:
            raise InvalidInputError(f"empty CSV instance: {path}")
        return Instance(rows, Metric.euclidean(), merge_duplicates=merge_duplicates)
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"malformed instance JSON: {exc}") from exc
    return instance_from_json(data, merge_duplicates=merge_duplicates)


def save_instance(instance: Instance, path) -> None:
    Path(path).write_text(canonical_json(instance_to_json(instance)))


def canonical_json(obj) -> str:
    """Deterministic serialization: sorted keys, no whitespace churn."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False) + "\n"


def write_result(path, payload: dict) -> None:
    Path(path).write_text(canonical_json(payload))
