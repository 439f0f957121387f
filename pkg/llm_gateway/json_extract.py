"""Pull the final JSON object out of a free-form model response"""
import json
import re
from typing import Any, Optional, Union

from core.errors import MalformedJson, MissingKeys
from llm_gateway.types import NullSample, NullSampleType

_DECODER = json.JSONDecoder()
# null standing alone on the final line, optionally quoted or emphasised
_TRAILING_NULL_RE = re.compile(r"(?:^|\n)[\s`'"*]*null\W*$", re.IGNORECASE)


def find_last_json_object(text: str) -> Optional[dict[str, Any]]:
    """Return the last top-level JSON object in text, or None

    Scans left to right; each successfully decoded object is skipped over whole, so objects
    nested inside a later object are never mistaken for the final one.
    """
    last: Optional[dict[str, Any]] = None
    position = text.find("{")
    while position != -1:
        try:
            value, end = _DECODER.raw_decode(text, position)
        except json.JSONDecodeError:
            position = text.find("{", position + 1)
            continue
        if isinstance(value, dict):
            last = value
        position = text.find("{", end)
    return last


def _is_null_answer(text: str) -> bool:
    stripped = text.strip().strip("`").strip()
    if stripped.lower().startswith("json"):
        stripped = stripped[4:].strip()
    return stripped.lower() == "null" or bool(_TRAILING_NULL_RE.search(stripped))


def extract_json(text: str, required_keys: list[str]) -> Union[dict[str, Any], NullSampleType]:
    """Extract the response's last JSON object and check it has every required key

    Args:
        text: Raw model response (chain-of-thought preambles allowed)
        required_keys: Keys that must be present

    Returns:
        The parsed mapping, or NullSample when the model answered null

    Raises:
        MalformedJson: No object parses
        MissingKeys: The object lacks some required keys
    """
    obj = find_last_json_object(text)
    if obj is None:
        if _is_null_answer(text):
            return NullSample
        raise MalformedJson(text)
    if required_keys and all(obj.get(key) is None for key in required_keys) and \
            all(key in obj for key in required_keys):
        return NullSample
    missing = [key for key in required_keys if key not in obj]
    if missing:
        raise MissingKeys(missing, text)
    return obj
