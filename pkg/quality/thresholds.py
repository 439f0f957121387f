"""Default uniqueness threshold per task category"""
from typing import Iterable, Optional

from constants.quality_constants import ThresholdDefaults


def threshold_for(tags: Iterable[str], override: Optional[float] = None) -> float:
    """Code-like tasks 0.8, long-text tasks 0.9, anything else 0.7; an explicit override wins"""
    if override is not None:
        return override
    found = [ThresholdDefaults.BY_TAG[tag.lower()] for tag in tags if tag.lower() in ThresholdDefaults.BY_TAG]
    return max(found) if found else ThresholdDefaults.DEFAULT
