"""Mutable run state owned by the orchestrator, and its checkpoint file"""
import logging
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from constants.pipeline_constants import AttemptStatus, OutputFiles
from core.io import read_examples, write_examples, write_text_atomic
from core.report import RunReport
from core.types import DatasetRef, SelectedDataset, TransformedExample

logger = logging.getLogger(__name__)


class DatasetAttempt(BaseModel):
    model_config = ConfigDict(frozen=True)

    dataset: SelectedDataset
    status: AttemptStatus
    probe_attempted: int = Field(0, ge=0)
    probe_succeeded: int = Field(0, ge=0)
    produced: int = Field(0, ge=0)
    reason: Optional[str] = None

    @property
    def contributed(self) -> bool:
        """Finished normally, or emitted examples before an error stopped it"""
        return self.produced > 0 or self.status in (AttemptStatus.ACCEPTED, AttemptStatus.EXHAUSTED)

    @property
    def counts_toward_limit(self) -> bool:
        """Datasets rejected at schema selection were never transformed"""
        return self.status != AttemptStatus.EXCLUDED_UNUSABLE_SCHEMA


class RunState(BaseModel):
    task_id: str
    candidates: list[SelectedDataset]
    winner: Optional[DatasetRef] = None
    max_datasets: int = Field(ge=1)
    expanded_text: Optional[str] = None
    attempts: list[DatasetAttempt] = Field(default_factory=list)
    emitted: int = 0
    report: RunReport = Field(default_factory=RunReport)

    @property
    def attempted_names(self) -> set[str]:
        return {attempt.dataset.card.name for attempt in self.attempts}

    @property
    def transform_attempts(self) -> int:
        return sum(1 for attempt in self.attempts if attempt.counts_toward_limit)


def candidate_order(state: RunState) -> list[SelectedDataset]:
    """The reranked winner first, then the rest by stage-1 rank"""
    ranked = sorted(state.candidates, key=lambda c: c.retrieval_rank)
    if state.winner is None:
        return ranked
    first = [c for c in ranked if c.card.name == state.winner.name]
    return first + [c for c in ranked if c.card.name != state.winner.name]


def next_candidate(state: RunState) -> Optional[SelectedDataset]:
    """Next dataset to try, or None when candidates or the dataset budget are used up"""
    if state.transform_attempts >= state.max_datasets:
        return None
    attempted = state.attempted_names
    for candidate in candidate_order(state):
        if candidate.card.name not in attempted:
            return candidate
    return None


def save_checkpoint(out_dir: Path, state: RunState, examples: list[TransformedExample]) -> None:
    """Persist state plus the examples emitted so far; data.jsonl is written first"""
    write_examples(out_dir / OutputFiles.DATA, examples)
    write_text_atomic(out_dir / OutputFiles.CHECKPOINT, state.model_dump_json(by_alias=True, indent=2))


def load_checkpoint(out_dir: Path) -> Optional[tuple[RunState, list[TransformedExample]]]:
    path = out_dir / OutputFiles.CHECKPOINT
    if not path.is_file():
        return None
    state = RunState.model_validate_json(path.read_text(encoding="utf-8"))
    data_path = out_dir / OutputFiles.DATA
    examples = read_examples(data_path)[:state.emitted] if data_path.is_file() else []
    if len(examples) != state.emitted:
        logger.warning(f"Checkpoint records {state.emitted} examples but {len(examples)} were found; continuing "
                       f"from {len(examples)}")
        state.emitted = len(examples)
    return state, examples
