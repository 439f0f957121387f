"""Single normalization point: every row value becomes text at ingestion"""
import json
import math
from typing import Any

import numpy as np

from constants.core_constants import ValueKind


def canonical_json(value: Any) -> str:
    """Compact, key-sorted JSON text used for lists and nested values"""
    return json.dumps(value, ensure_ascii=False, separators=(",", ":"), sort_keys=True)


def normalize_value(value: Any) -> str:
    """Normalize a raw row value to text

    Args:
        value: Any JSON-compatible value

    Returns:
        Canonical text: None as "", booleans as true/false, numbers in positional decimal (never
        exponent notation), containers as compact JSON
    """
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            return json.dumps(value)
        return np.format_float_positional(value, trim="-")
    if isinstance(value, str):
        return value
    return canonical_json(value)


def infer_value_kind(value: Any) -> ValueKind:
    if isinstance(value, bool):
        return ValueKind.BOOLEAN
    if isinstance(value, (int, float)):
        return ValueKind.NUMBER
    if isinstance(value, str):
        return ValueKind.TEXT
    if isinstance(value, list):
        return ValueKind.LIST
    if isinstance(value, dict):
        return ValueKind.NESTED
    return ValueKind.OTHER
