"""
Instance Files - JSON Schema for Ellipsoid Pairs

Two layouts are accepted:

    {"d": 2, "Q1": [[...]], "z1": [...], "Q2": [[...]], "z2": [...]}

    {"d": 2, "E1": {"A": [[...]], "b": [...], "alpha": -1.0},
             "E2": {"A": [[...]], "b": [...], "alpha": -1.0}}

Matrices are row-major nested lists. Extra keys (for example "metadata")
are ignored on load.
"""

import json
import logging
from pathlib import Path
from typing import Any, Callable, Dict, Mapping, Optional, Tuple, TypeVar, Union

import numpy as np

from ellipsoid_distance.exceptions import EllipsoidDistanceError, InstanceFormatError
from ellipsoid_distance.geometry.ellipsoid import (
    Ellipsoid,
    GeneralQuadric,
    from_general_quadric,
    to_general_quadric,
)
from ellipsoid_distance.linalg.dense import SymPdMatrix

logger = logging.getLogger(__name__)

FORMS = ("ellipsoid", "quadric")

T = TypeVar("T")


def _dotted(prefix: str, key: str) -> str:
    return f"{prefix}.{key}" if prefix else key


def _array(
    data: Mapping[str, Any],
    key: str,
    shape: Tuple[int, ...],
    path: Optional[Path],
    prefix: str = "",
) -> np.ndarray:
    name = _dotted(prefix, key)
    if key not in data:
        raise InstanceFormatError(f"missing key '{name}'", path, key=prefix or None)
    try:
        arr = np.array(data[key], dtype=float)
    except (TypeError, ValueError) as e:
        raise InstanceFormatError(f"'{name}' is not numeric: {e}", path, key=name) from e
    if arr.shape != shape:
        expected = f"{shape[0]}x{shape[1]}" if len(shape) == 2 else f"length {shape[0]}"
        raise InstanceFormatError(
            f"'{name}' must be {expected}, got shape {arr.shape}", path, key=name
        )
    return arr


def _tagged(key: str, path: Optional[Path], build: Callable[[], T]) -> T:
    """Run build, turning package errors into InstanceFormatError at key."""
    try:
        return build()
    except InstanceFormatError:
        raise
    except EllipsoidDistanceError as e:
        raise InstanceFormatError(str(e), path, key=key) from e


def _quadric_side(data: Mapping[str, Any], key: str, d: int, path: Optional[Path]) -> Ellipsoid:
    side = data.get(key)
    if not isinstance(side, Mapping):
        raise InstanceFormatError(
            f"'{key}' must be an object with A, b, alpha", path, key=key if key in data else None
        )
    if "alpha" not in side:
        raise InstanceFormatError(f"missing key '{key}.alpha'", path, key=key)

    a = _array(side, "A", (d, d), path, prefix=key)
    b = _array(side, "b", (d,), path, prefix=key)
    matrix = _tagged(f"{key}.A", path, lambda: SymPdMatrix.from_array(a, name=f"{key}.A"))
    try:
        alpha = float(side["alpha"])
    except (TypeError, ValueError) as e:
        raise InstanceFormatError(
            f"'{key}.alpha' is not numeric", path, key=f"{key}.alpha"
        ) from e
    quadric = GeneralQuadric(a=matrix, b=b, alpha=alpha)
    return _tagged(key, path, lambda: from_general_quadric(quadric))


def _ellipsoid_side(data: Mapping[str, Any], index: int, d: int, path: Optional[Path]) -> Ellipsoid:
    q = _array(data, f"Q{index}", (d, d), path)
    z = _array(data, f"z{index}", (d,), path)
    return _tagged(f"Q{index}", path, lambda: Ellipsoid.from_arrays(q, z))


def parse_instance(data: Any, path: Optional[Path] = None) -> Tuple[Ellipsoid, Ellipsoid]:
    """
    Build an ellipsoid pair from a decoded JSON document.

    Raises:
        InstanceFormatError: On schema violations or invalid matrices; key
            names the offending entry
    """
    if not isinstance(data, Mapping):
        raise InstanceFormatError("instance must be a JSON object", path)
    if "d" not in data:
        raise InstanceFormatError("missing key 'd'", path)
    d = data["d"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise InstanceFormatError(f"'d' must be a positive integer, got {d!r}", path, key="d")

    if "E1" in data or "E2" in data:
        return _quadric_side(data, "E1", d, path), _quadric_side(data, "E2", d, path)
    return _ellipsoid_side(data, 1, d, path), _ellipsoid_side(data, 2, d, path)


def key_line(text: str, key: Optional[str]) -> int:
    """
    Line of a dotted key in a JSON text.

    Each part is searched after the previous one; a part that cannot be
    found leaves the line of the last part found (the enclosing object for a
    missing key). With no key, the line of the opening brace.
    """
    pos = max(text.find("{"), 0)
    for part in (key.split(".") if key else []):
        found = text.find(f'"{part}"', pos)
        if found < 0:
            break
        pos = found
    return text.count("\n", 0, pos) + 1


def load_instance(path: Union[str, Path]) -> Tuple[Ellipsoid, Ellipsoid]:
    """
    Read an instance file.

    Raises:
        InstanceFormatError: With file and line, both for JSON syntax errors
            and for schema errors
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise InstanceFormatError(f"cannot read file: {e}", path) from e

    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceFormatError(e.msg, path, e.lineno) from e

    try:
        e1, e2 = parse_instance(data, path)
    except InstanceFormatError as e:
        raise InstanceFormatError(e.message, path, key_line(text, e.key), key=e.key) from e

    logger.debug(f"Loaded instance of dimension {e1.d} from {path}")
    return e1, e2


def instance_to_dict(
    e1: Ellipsoid,
    e2: Ellipsoid,
    form: str = "ellipsoid",
    metadata: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    """Encode an ellipsoid pair in one of the two schema layouts."""
    if form not in FORMS:
        raise ValueError(f"form must be one of {FORMS}, got {form!r}")

    data: Dict[str, Any] = {"d": e1.d}
    if form == "ellipsoid":
        data.update(
            {
                "Q1": e1.q.entries.tolist(),
                "z1": e1.z.tolist(),
                "Q2": e2.q.entries.tolist(),
                "z2": e2.z.tolist(),
            }
        )
    else:
        for key, e in (("E1", e1), ("E2", e2)):
            g = to_general_quadric(e)
            data[key] = {"A": g.a.entries.tolist(), "b": g.b.tolist(), "alpha": g.alpha}

    if metadata:
        data["metadata"] = metadata
    return data


def save_instance(
    path: Union[str, Path],
    e1: Ellipsoid,
    e2: Ellipsoid,
    form: str = "ellipsoid",
    metadata: Optional[Dict[str, Any]] = None,
) -> Path:
    """Write an instance file and return its path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(instance_to_dict(e1, e2, form, metadata), f, indent=2)

    logger.info(f"Instance saved to {path}")
    return path
