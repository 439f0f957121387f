"""Token-level ROUGE-L and per-example uniqueness

Similarity is the LCS F-measure over whitespace tokens, 2*LCS / (len(a) + len(b)), computed
with a bit-parallel LCS. uniqueness_report finds every example's exact maximum similarity using
an upper bound (hashed token overlap, capped by both lengths) to skip pairs that cannot beat the
best similarity found so far.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from constants.quality_constants import QualityDefaults

logger = logging.getLogger(__name__)


class ExampleUniqueness(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int
    max_similarity: float
    is_unique: bool


class UniquenessReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    threshold: float = Field(gt=0, le=1)
    total: int
    unique_count: int
    unique_fraction: float
    per_example: list[ExampleUniqueness]


def tokenize(text: str) -> list[str]:
    """Unicode whitespace split; case and punctuation are kept"""
    return text.split()


def token_masks(ids: Sequence[int]) -> dict[int, int]:
    masks: dict[int, int] = {}
    for position, token in enumerate(ids):
        masks[token] = masks.get(token, 0) | (1 << position)
    return masks


def lcs_with_masks(masks: dict[int, int], length: int, other: Sequence[int]) -> int:
    full = (1 << length) - 1
    v = full
    for token in other:
        u = v & masks.get(token, 0)
        v = ((v + u) | (v - u)) & full
    return length - v.bit_count()


def lcs_length(a: Sequence, b: Sequence) -> int:
    """Length of the longest common subsequence of two token sequences"""
    if not a or not b:
        return 0
    vocabulary: dict = {}
    a_ids = [vocabulary.setdefault(token, len(vocabulary)) for token in a]
    b_ids = [vocabulary.get(token, -1) for token in b]
    return lcs_with_masks(token_masks(a_ids), len(a_ids), b_ids)


def f_measure(lcs: int, len_a: int, len_b: int) -> float:
    if lcs == 0 or len_a == 0 or len_b == 0:
        return 0.0
    return 2 * lcs / (len_a + len_b)


def rouge_l(a: str, b: str) -> float:
    """ROUGE-L F-measure of two texts in [0, 1]; 0 when either is empty"""
    ta, tb = tokenize(a), tokenize(b)
    return f_measure(lcs_length(ta, tb), len(ta), len(tb))


class _Corpus:
    """Token ids, LCS masks and hashed count vectors of a list of texts"""

    def __init__(self, texts: Sequence[str], buckets: int = QualityDefaults.BOUND_BUCKETS):
        vocabulary: dict[str, int] = {}
        self.ids = [[vocabulary.setdefault(t, len(vocabulary)) for t in tokenize(text)] for text in texts]
        self.lengths = np.array([len(ids) for ids in self.ids], dtype=np.int64)
        width = max(1, min(buckets, len(vocabulary)))
        self.counts = np.zeros((len(texts), width), dtype=np.float64)
        for row, ids in enumerate(self.ids):
            np.add.at(self.counts[row], np.asarray(ids, dtype=np.int64) % width, 1.0)
        self.masks = [token_masks(ids) for ids in self.ids]

    def similarity(self, i: int, j: int) -> float:
        la, lb = len(self.ids[i]), len(self.ids[j])
        if la == 0 or lb == 0:
            return 0.0
        return f_measure(lcs_with_masks(self.masks[i], la, self.ids[j]), la, lb)

    def upper_bounds(self, rows: np.ndarray) -> np.ndarray:
        """Similarity upper bound for every (row, column) pair; never below the true value"""
        overlap = self.counts[rows] @ self.counts.T
        la = self.lengths[rows][:, None]
        lb = self.lengths[None, :]
        ub_lcs = np.minimum(np.minimum(overlap, la), lb)
        total = la + lb
        with np.errstate(divide="ignore", invalid="ignore"):
            bound = np.where(total > 0, 2 * ub_lcs / np.maximum(total, 1), 0.0)
        return bound

    def max_similarities(self, rows: Sequence[int]) -> list[float]:
        rows_arr = np.asarray(rows, dtype=np.int64)
        bounds = self.upper_bounds(rows_arr)
        result = []
        for offset, i in enumerate(rows):
            row_bounds = bounds[offset]
            row_bounds[i] = -1.0
            best = 0.0
            for j in np.argsort(-row_bounds, kind="stable"):
                if row_bounds[j] <= best:
                    break
                best = max(best, self.similarity(i, int(j)))
                if best >= 1.0:
                    break
            result.append(best)
        return result


_WORKER_CORPUS: Optional[_Corpus] = None


def _init_worker(texts: Sequence[str]) -> None:
    global _WORKER_CORPUS
    _WORKER_CORPUS = _Corpus(texts)


def _worker_block(rows: list[int]) -> list[float]:
    return _WORKER_CORPUS.max_similarities(rows)


def max_similarities(texts: Sequence[str], workers: int = 1, block: int = QualityDefaults.ROW_BLOCK) -> list[float]:
    """Each text's maximum ROUGE-L against every other text (0 for a lone text)"""
    if len(texts) < 2:
        return [0.0] * len(texts)
    blocks = [list(range(start, min(start + block, len(texts)))) for start in range(0, len(texts), block)]
    if workers <= 1:
        corpus = _Corpus(texts)
        return [value for rows in blocks for value in corpus.max_similarities(rows)]
    with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker, initargs=(list(texts),)) as pool:
        return [value for result in pool.map(_worker_block, blocks) for value in result]


def uniqueness_report(texts: Sequence[str], threshold: float, workers: int = 1) -> UniquenessReport:
    """Per-example maximum similarity; an example is unique iff that maximum is below threshold

    An empty dataset has unique_fraction 1.0.
    """
    maxima = max_similarities(texts, workers)
    per_example = [
        ExampleUniqueness(index=index, max_similarity=value, is_unique=value < threshold)
        for index, value in enumerate(maxima)
    ]
    unique_count = sum(1 for entry in per_example if entry.is_unique)
    total = len(per_example)
    logger.info(f"Uniqueness over {total} examples at {threshold}: {unique_count} unique")
    return UniquenessReport(
        threshold=threshold,
        total=total,
        unique_count=unique_count,
        unique_fraction=unique_count / total if total else 1.0,
        per_example=per_example,
    )
