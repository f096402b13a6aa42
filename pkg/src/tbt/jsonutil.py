"""Canonical JSON encoding for model files, snapshots, and session exports.

Same value in, same bytes out: floats are written with 17 significant digits
(lossless float64 round-trip), -0.0 is normalized to 0, there is no
whitespace, and keys keep their insertion order. Parsing is plain json.loads;
canonical(loads(canonical(x))) == canonical(x) holds for everything we emit.
"""

from __future__ import annotations

import json
import math
from typing import Any


def format_float(value: float) -> str:
    """17-significant-digit decimal form of a finite float."""
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"non-finite value not representable: {value!r}")
    if value == 0.0:
        return "0"
    return format(value, ".17g")


def _encode(obj: Any, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _encode(item, out)
        out.append("]")
    elif isinstance(obj, dict):
        out.append("{")
        for i, (key, value) in enumerate(obj.items()):
            if not isinstance(key, str):
                raise TypeError(f"object keys must be str, got {type(key).__name__}")
            if i:
                out.append(",")
            out.append(json.dumps(key))
            out.append(":")
            _encode(value, out)
        out.append("}")
    else:
        raise TypeError(f"not JSON-serializable: {type(obj).__name__}")


def dumps(obj: Any) -> str:
    out: list[str] = []
    _encode(obj, out)
    return "".join(out)


def loads(text: str | bytes) -> Any:
    return json.loads(text)
