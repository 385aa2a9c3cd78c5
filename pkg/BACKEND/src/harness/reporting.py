"""Report files: deterministic JSON, a timings sidecar and a raw per-trial CSV."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np
import pandas as pd

from ..monitoring.performance_monitor import resource_snapshot
from .experiments import ExperimentResult, speedups

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


def _plain(value: Any) -> Any:
    """Convert numpy scalars and arrays so json can encode them."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def dumps(payload: Dict[str, Any]) -> str:
    """Stable JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(_plain(payload), sort_keys=True, indent=2) + "\n"


def report_payload(result: ExperimentResult) -> Dict[str, Any]:
    return {
        "schema": SCHEMA_VERSION,
        "experiment": result.name,
        "config": result.config.report_fields(),
        "summary": result.summary,
        "trials": result.rows,
    }


def timings_payload(result: ExperimentResult) -> Dict[str, Any]:
    payload: Dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "experiment": result.name,
        "trials": result.timings,
        "machine": resource_snapshot(),
    }
    ratios = speedups(result)
    if ratios:
        payload["quick_speedup"] = ratios
    return payload


def write_report(result: ExperimentResult, out_dir: Union[str, Path]) -> Dict[str, Path]:
    """Write ``<name>.json``, ``<name>.timings.json`` and ``<name>.losses.csv`` under out_dir."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "report": out_dir / f"{result.name}.json",
        "timings": out_dir / f"{result.name}.timings.json",
        "table": out_dir / f"{result.name}.losses.csv",
    }
    paths["report"].write_text(dumps(report_payload(result)))
    paths["timings"].write_text(dumps(timings_payload(result)))
    pd.DataFrame(_plain(result.rows)).to_csv(paths["table"], index=False, float_format="%.17g")
    logger.info(f"Wrote {result.name} report to {paths['report']}")
    return paths
