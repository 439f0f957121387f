"""Greedy near-duplicate filter over example inputs"""
import logging
from typing import Sequence

from constants.quality_constants import QualityMessages
from core.types import TransformedExample
from quality.rouge import lcs_with_masks, token_masks, f_measure, tokenize

logger = logging.getLogger(__name__)


def dedup_filter(examples: Sequence[TransformedExample], threshold: float) -> list[TransformedExample]:
    """Keep an example iff its ROUGE-L input similarity to every already-kept example is below threshold

    Input order is preserved; the first of a group of near-duplicates wins.
    """
    if not 0 < threshold <= 1:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    vocabulary: dict[str, int] = {}
    kept: list[TransformedExample] = []
    kept_ids: list[list[int]] = []
    for example in examples:
        ids = [vocabulary.setdefault(token, len(vocabulary)) for token in tokenize(example.input)]
        masks = token_masks(ids)
        duplicate = False
        for other in kept_ids:
            shortest, longest = sorted((len(ids), len(other)))
            # Length bound: F can reach at most 2*min/(min+max)
            if shortest == 0 or 2 * shortest / (shortest + longest) < threshold:
                continue
            if f_measure(lcs_with_masks(masks, len(ids), other), len(ids), len(other)) >= threshold:
                duplicate = True
                break
        if not duplicate:
            kept.append(example)
            kept_ids.append(ids)
    logger.info(QualityMessages.DEDUP_RESULT.format(kept=len(kept), total=len(examples), threshold=threshold))
    return kept
