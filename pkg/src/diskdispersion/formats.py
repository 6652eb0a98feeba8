"""Instance and solution files.

Both formats are JSON documents. Floats are serialized with 17 significant
digits so that every double round-trips losslessly; infinite minimum
distances (single-ball instances) use the bare ``Infinity`` token, which
Python's json parser accepts natively.

Instance: {"dimension": d, "disks": [{"center": [...], "radius": r}, ...]}
Solution: {"algorithm": str, "points": [[...], ...], "min_distance": num,
           "certificate": {"opt_upper": num, "ratio_lower_bound": num,
                           "opt_lower": num | null}}
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .geometry import BallInstance, Solution
from .oracle import Certificate


class SchemaError(ValueError):
    """The document parsed as JSON but does not match the schema."""


def _format_float(v: float) -> str:
    if math.isnan(v):
        raise ValueError("NaN is not representable in these files")
    if math.isinf(v):
        return "Infinity" if v > 0 else "-Infinity"
    return format(v, ".17g")


def dumps(obj) -> str:
    """JSON text with deterministic 17-significant-digit floats."""
    if isinstance(obj, dict):
        items = (f"{json.dumps(k)}: {dumps(v)}" for k, v in obj.items())
        return "{" + ", ".join(items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def instance_to_obj(inst: BallInstance) -> dict:
    return {
        "dimension": inst.dimension,
        "disks": [
            {"center": [float(c) for c in inst.centers[i]], "radius": float(inst.radii[i])}
            for i in range(inst.n)
        ],
    }


def instance_from_obj(obj) -> BallInstance:
    if not isinstance(obj, dict):
        raise SchemaError("instance file must be a JSON object")
    try:
        d = int(obj["dimension"])
        disks = obj["disks"]
        centers = [list(map(float, disk["center"])) for disk in disks]
        radii = [float(disk["radius"]) for disk in disks]
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed instance document: {exc}") from exc
    if not centers:
        raise SchemaError("instance has no disks")
    for i, c in enumerate(centers):
        if len(c) != d:
            raise SchemaError(f"disk {i} has a {len(c)}-dimensional center, expected {d}")
    try:
        return BallInstance(centers, radii)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def save_instance(inst: BallInstance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(instance_to_obj(inst)))
        fh.write("\n")


def load_instance(path) -> BallInstance:
    with open(path, "r", encoding="utf-8") as fh:
        return instance_from_obj(json.load(fh))


@dataclass(frozen=True)
class SolutionRecord:
    """A solution file in memory."""

    algorithm: str
    points: np.ndarray
    min_distance: float
    opt_upper: float
    ratio_lower_bound: float
    opt_lower: Optional[float]


def solution_to_obj(sol: Solution, cert: Certificate) -> dict:
    return {
        "algorithm": sol.algorithm,
        "points": [[float(c) for c in p] for p in sol.points],
        "min_distance": float(sol.min_distance),
        "certificate": {
            "opt_upper": float(cert.opt_upper),
            "ratio_lower_bound": float(cert.ratio_lower_bound),
            "opt_lower": None if cert.opt_lower is None else float(cert.opt_lower),
        },
    }


def save_solution(sol: Solution, cert: Certificate, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(solution_to_obj(sol, cert)))
        fh.write("\n")


def load_solution(path) -> SolutionRecord:
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    if not isinstance(obj, dict):
        raise SchemaError("solution file must be a JSON object")
    try:
        cert = obj["certificate"]
        return SolutionRecord(
            algorithm=str(obj["algorithm"]),
            points=np.asarray(obj["points"], dtype=float),
            min_distance=float(obj["min_distance"]),
            opt_upper=float(cert["opt_upper"]),
            ratio_lower_bound=float(cert["ratio_lower_bound"]),
            opt_lower=None if cert["opt_lower"] is None else float(cert["opt_lower"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed solution document: {exc}") from exc
