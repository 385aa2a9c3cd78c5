"""CSV/JSON serialization for point clouds and squared distance matrices."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pandas as pd

from .errors import GeometryError
from .geometry import PointCloud, SquaredDistanceMatrix

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _read_numeric_csv(path: PathLike) -> pd.DataFrame:
    """Read a numeric CSV, treating the first row as a header when it is not numeric."""
    frame = pd.read_csv(path, header=None)
    try:
        frame.iloc[0].astype(float)
    except (ValueError, TypeError):
        frame = pd.read_csv(path, header=0)
    return frame.astype(float)


def cloud_to_dict(cloud: PointCloud) -> Dict[str, Any]:
    payload: Dict[str, Any] = {"dim": cloud.dim, "points": cloud.points.tolist()}
    if cloud.labels is not None:
        payload["labels"] = list(cloud.labels)
    return payload


def cloud_from_dict(payload: Dict[str, Any]) -> PointCloud:
    if "points" not in payload:
        raise GeometryError("point cloud document has no 'points' field")
    cloud = PointCloud(payload["points"], payload.get("labels"))
    if "dim" in payload and int(payload["dim"]) != cloud.dim:
        raise GeometryError(f"declared dim {payload['dim']} does not match points of dim {cloud.dim}")
    return cloud


def save_cloud(cloud: PointCloud, path: PathLike, fmt: str = "csv") -> Path:
    """Write a cloud as CSV (one row per point) or JSON."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        path.write_text(json.dumps(cloud_to_dict(cloud), indent=2))
    else:
        columns = [f"x{axis}" for axis in range(cloud.dim)]
        pd.DataFrame(cloud.points, columns=columns).to_csv(path, index=False, float_format="%.17g")
    logger.info(f"Wrote {cloud.n} points to {path}")
    return path


def load_cloud(path: PathLike) -> PointCloud:
    """Read a cloud from CSV (optional header) or JSON, chosen by suffix."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        return cloud_from_dict(json.loads(path.read_text()))
    return PointCloud(_read_numeric_csv(path).to_numpy())


def sdm_to_edge_list(D: SquaredDistanceMatrix) -> List[Dict[str, Any]]:
    rows, cols = D.observed_pairs()
    return [
        {"i": int(i), "j": int(j), "d2": float(D.entries[i, j])}
        for i, j in zip(rows, cols)
    ]


def sdm_from_edge_list(edges: List[Dict[str, Any]], n: Optional[int] = None) -> SquaredDistanceMatrix:
    if n is None:
        n = 1 + max((max(int(e["i"]), int(e["j"])) for e in edges), default=0)
    entries = np.zeros((n, n))
    mask = np.eye(n, dtype=bool)
    for edge in edges:
        i, j, d2 = int(edge["i"]), int(edge["j"]), float(edge["d2"])
        entries[i, j] = entries[j, i] = d2
        mask[i, j] = mask[j, i] = True
    return SquaredDistanceMatrix(entries, mask, allow_negative=True)


def save_sdm(D: SquaredDistanceMatrix, path: PathLike, fmt: str = "csv") -> Path:
    """Write an SDM as an n x n CSV, or as a JSON edge list (always used when masked)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json" or not D.is_full:
        if path.suffix.lower() != ".json":
            logger.warning(f"Masked SDM written as JSON edge list to {path}")
        path.write_text(json.dumps(sdm_to_edge_list(D)))
    else:
        pd.DataFrame(D.entries).to_csv(path, index=False, header=False, float_format="%.17g")
    return path


def load_sdm(path: PathLike) -> SquaredDistanceMatrix:
    path = Path(path)
    if path.suffix.lower() == ".json":
        payload = json.loads(path.read_text())
        if isinstance(payload, dict):
            return sdm_from_edge_list(payload.get("edges", []), payload.get("n"))
        return sdm_from_edge_list(payload)
    return SquaredDistanceMatrix(_read_numeric_csv(path).to_numpy(), allow_negative=True)
