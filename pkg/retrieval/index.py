"""Stage-1 retrieval: an embedding index over dataset cards and cosine top-k"""
import hashlib
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from constants.retrieval_constants import IndexFields, RetrievalMessages
from core.errors import DuplicateDatasetName, EmptyIndex, IndexBuildError, ZeroVector
from core.io import read_json, write_json
from core.types import DatasetCard, TaskSpec
from retrieval.embedders import Embedder

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class IndexEntry:
    name: str
    description_digest: str
    vector: np.ndarray


@dataclass(frozen=True, eq=False)
class EmbeddingIndex:
    entries: tuple[IndexEntry, ...]
    dimension: int
    embedder_id: str

    def __post_init__(self) -> None:
        names = [entry.name for entry in self.entries]
        if len(set(names)) != len(names):
            duplicate = next(name for name in names if names.count(name) > 1)
            raise DuplicateDatasetName(RetrievalMessages.DUPLICATE_NAME.format(name=duplicate), dataset=duplicate)
        for entry in self.entries:
            if entry.vector.shape != (self.dimension,):
                raise IndexBuildError(RetrievalMessages.DIMENSION_MISMATCH.format(
                    got=entry.vector.shape[0], expected=self.dimension))

    @property
    def names(self) -> list[str]:
        return [entry.name for entry in self.entries]

    @property
    def matrix(self) -> np.ndarray:
        return np.vstack([entry.vector for entry in self.entries])

    def __len__(self) -> int:
        return len(self.entries)


def card_text(card: DatasetCard) -> str:
    """Text embedded for a card: description followed by its tags"""
    return " ".join(part for part in [card.description.strip(), " ".join(card.tags)] if part)


def description_digest(card: DatasetCard) -> str:
    return hashlib.sha256(card_text(card).encode("utf-8")).hexdigest()


def unit(vector: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(vector)
    if norm == 0 or not np.isfinite(norm):
        raise ZeroVector(RetrievalMessages.ZERO_VECTOR)
    return vector / norm


async def build_index(cards: Sequence[DatasetCard], embedder: Embedder) -> EmbeddingIndex:
    """Embed every card (description + tags) into a unit vector

    Raises:
        DuplicateDatasetName: Two cards share a name
        IndexBuildError: No card could be embedded
    """
    seen: set[str] = set()
    for card in cards:
        if card.name in seen:
            raise DuplicateDatasetName(RetrievalMessages.DUPLICATE_NAME.format(name=card.name), dataset=card.name)
        seen.add(card.name)

    entries = []
    for card in cards:
        if card.description_missing:
            logger.warning(RetrievalMessages.DESCRIPTION_MISSING.format(name=card.name))
        try:
            vector = unit(np.asarray(await embedder.embed(card_text(card)), dtype=np.float64))
        except Exception as e:
            logger.warning(RetrievalMessages.EMBED_FAILED.format(name=card.name, error=e))
            continue
        entries.append(IndexEntry(name=card.name, description_digest=description_digest(card), vector=vector))

    if not entries:
        raise IndexBuildError(RetrievalMessages.ALL_SKIPPED)
    logger.info(f"Built index of {len(entries)}/{len(cards)} cards with {embedder.embedder_id}")
    return EmbeddingIndex(entries=tuple(entries), dimension=int(entries[0].vector.shape[0]),
                          embedder_id=embedder.embedder_id)


def rank_by_vector(index: EmbeddingIndex, query: np.ndarray, k: int) -> list[tuple[str, float]]:
    """(name, cosine) pairs, best first; equal scores ordered by name"""
    if len(index) == 0:
        raise EmptyIndex(RetrievalMessages.EMPTY_INDEX)
    scores = index.matrix @ unit(np.asarray(query, dtype=np.float64))
    ranked = sorted(zip(index.names, scores.tolist()), key=lambda pair: (-pair[1], pair[0]))
    return ranked[:k]


async def retrieve_top_k(index: EmbeddingIndex, task: TaskSpec, k: int, embedder: Embedder) -> list[str]:
    """Up to k dataset names by descending cosine similarity to the embedded task instruction"""
    if len(index) == 0:
        raise EmptyIndex(RetrievalMessages.EMPTY_INDEX)
    query = await embedder.embed(task.instruction)
    try:
        ranked = rank_by_vector(index, query, k)
    except ZeroVector as e:
        raise ZeroVector(RetrievalMessages.EMPTY_QUERY.format(task_id=task.task_id), task=task.task_id) from e
    return [name for name, _ in ranked]


def save_index(index: EmbeddingIndex, path: Union[str, Path]) -> None:
    write_json(path, {
        IndexFields.DIMENSION: index.dimension,
        IndexFields.EMBEDDER_ID: index.embedder_id,
        IndexFields.ENTRIES: [
            {
                IndexFields.NAME: entry.name,
                IndexFields.DIGEST: entry.description_digest,
                IndexFields.VECTOR: entry.vector.tolist(),
            }
            for entry in index.entries
        ],
    })


def load_index(path: Union[str, Path]) -> EmbeddingIndex:
    data = read_json(path)
    entries = tuple(
        IndexEntry(
            name=item[IndexFields.NAME],
            description_digest=item[IndexFields.DIGEST],
            vector=np.asarray(item[IndexFields.VECTOR], dtype=np.float64),
        )
        for item in data[IndexFields.ENTRIES]
    )
    if not entries:
        raise EmptyIndex(RetrievalMessages.EMPTY_INDEX)
    return EmbeddingIndex(entries=entries, dimension=data[IndexFields.DIMENSION],
                          embedder_id=data[IndexFields.EMBEDDER_ID])
