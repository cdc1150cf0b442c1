"""
CSV and JSON writers for experiment outputs.

Floats are written with 17 significant digits and complex numbers as
{"re": ..., "im": ...}, so files round-trip bit-exactly and are identical
across runs with the same config.
"""

import csv
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

import numpy as np

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def format_float(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def complex_to_json(z: complex) -> Dict[str, float]:
    z = complex(z)
    return {'re': z.real, 'im': z.imag}


def to_jsonable(value: Any) -> Any:
    """Replace complex numbers, numpy scalars/arrays and tuples with JSON types."""
    if isinstance(value, (complex, np.complexfloating)):
        return complex_to_json(value)
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if hasattr(value, 'value') and isinstance(getattr(value, 'value'), str):
        return value.value
    return value


def _cell(value: Any) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return format_float(float(value))
    if isinstance(value, (complex, np.complexfloating)):
        return f"{format_float(value.real)}{'+' if value.imag >= 0 else '-'}{format_float(abs(value.imag))}j"
    return value


def write_csv(path: PathLike, rows: Iterable[Dict[str, Any]],
              fieldnames: Optional[Sequence[str]] = None) -> Path:
    """Write dict rows with csv.DictWriter."""
    path = Path(path)
    rows = list(rows)
    if fieldnames is None:
        fieldnames = list(rows[0].keys()) if rows else []
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', newline='') as f:
        writer = csv.DictWriter(f, fieldnames=list(fieldnames), lineterminator='\n')
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _cell(v) for k, v in row.items()})
    logger.info(f"Wrote {len(rows)} rows to {path}")
    return path


def _floats_17(value: Any) -> Any:
    if isinstance(value, float) and math.isfinite(value):
        return float(format_float(value))
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, dict):
        return {k: _floats_17(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_floats_17(v) for v in value]
    return value


def write_json(path: PathLike, data: Any) -> Path:
    """Write a report as indented JSON; non-finite floats become strings."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = _floats_17(to_jsonable(data))
    with open(path, 'w') as f:
        json.dump(payload, f, indent=2, sort_keys=False)
        f.write('\n')
    logger.info(f"Wrote report to {path}")
    return path


def read_csv(path: PathLike) -> List[Dict[str, str]]:
    with open(path, newline='') as f:
        return list(csv.DictReader(f))
