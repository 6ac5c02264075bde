"""JSON loaders for bodies, gauges, point sets, lights and certificates."""
from __future__ import annotations

import json
import os

import numpy as np

from .errors import InvariantError
from .geometry import EuclideanGauge, PolyhedralGauge, SymmetricPolytope, standard_body

BODY_NAMES = ("cube", "square", "crosspolytope", "cross", "hexagon")


def read_json(path):
    try:
        if path == "-":
            import sys
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InvariantError(f"cannot read {path}: {exc.strerror}", "file") from None
    except json.JSONDecodeError as exc:
        raise InvariantError(f"malformed JSON in {path}: {exc.msg} at line {exc.lineno}",
                             "json") from None


def load_body(spec, dim=2) -> SymmetricPolytope:
    """A named standard body or a polytope JSON file."""
    if spec.lower().replace("-", "") in BODY_NAMES:
        return standard_body(spec, dim)
    if not os.path.exists(spec):
        raise InvariantError(f"{spec!r} is neither a body name nor a file", "name")
    data = read_json(spec)
    if isinstance(data, dict) and isinstance(data.get("body"), dict):
        data = data["body"]
    return SymmetricPolytope.from_json(data)


def load_gauge(spec, dim=2):
    if spec.lower() == "euclidean":
        return EuclideanGauge(dim)
    return PolyhedralGauge(load_body(spec, dim))


def parse_points(data, key="points"):
    if not isinstance(data, dict) or key not in data:
        raise InvariantError(f"JSON needs a {key!r} list", "schema")
    try:
        P = np.array(data[key], dtype=float)
    except (TypeError, ValueError):
        raise InvariantError(f"{key!r} must be numeric", "schema") from None
    if P.size == 0:
        dim = int(data.get("dim", 0))
        return P.reshape(0, dim)
    if P.ndim != 2:
        raise InvariantError(f"{key!r} must be a list of equal-length lists", "schema")
    if "dim" in data and int(data["dim"]) != P.shape[1]:
        raise InvariantError(f"dim {data['dim']} does not match points", "dimension")
    if not np.all(np.isfinite(P)):
        raise InvariantError("non-finite coordinate", "finite")
    return P


def load_points(path):
    return parse_points(read_json(path), "points")


def load_lights(path):
    """Lights from ``{"lights": ...}`` or a solve report's ``witness``."""
    data = read_json(path)
    if isinstance(data, dict) and "lights" not in data and isinstance(data.get("witness"), dict):
        data = data["witness"]
    return parse_points(data, "lights")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, allow_nan=False)
