"""Combined quality report for one example set, its file form and its console table"""
import logging
from pathlib import Path
from typing import Optional, Sequence

from pydantic import BaseModel, ConfigDict

from core.config import PipelineConfig
from core.io import PathLike, write_json, write_text_atomic
from core.types import TransformedExample
from llm_gateway.gateway import LlmGateway
from llm_gateway.templates import PromptTemplate
from quality.difficulty import DifficultyReport, estimate_difficulty
from quality.diversity import DiversityReport, diversity_report
from quality.rouge import UniquenessReport, uniqueness_report
from utils.response_builder import ResponseBuilder

logger = logging.getLogger(__name__)


class QualityReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    uniqueness: UniquenessReport
    diversity: DiversityReport
    difficulty: Optional[DifficultyReport] = None


def example_inputs(examples: Sequence[TransformedExample]) -> list[str]:
    """Quality metrics are measured over the input field"""
    return [example.input for example in examples]


async def analyze_examples(examples: Sequence[TransformedExample], threshold: float, config: PipelineConfig,
                           gateway: Optional[LlmGateway] = None,
                           judge_template: Optional[PromptTemplate] = None) -> QualityReport:
    """Uniqueness and diversity always; difficulty only when a gateway is given"""
    texts = example_inputs(examples)
    difficulty = None
    if gateway is not None:
        difficulty = await estimate_difficulty(texts, gateway, config, template=judge_template)
    return QualityReport(
        uniqueness=uniqueness_report(texts, threshold, workers=config.quality_workers),
        diversity=diversity_report(texts),
        difficulty=difficulty,
    )


def write_quality(path: PathLike, report: QualityReport) -> None:
    write_json(path, report.model_dump(mode="json"))


def export_inputs(path: PathLike, examples: Sequence[TransformedExample]) -> int:
    """One input per line (newlines escaped) for external embedding or projection tools"""
    lines = [text.replace("\\", "\\\\").replace("\n", "\\n") for text in example_inputs(examples)]
    write_text_atomic(Path(path), "".join(line + "\n" for line in lines))
    logger.info(f"Exported {len(lines)} inputs to {path}")
    return len(lines)


def render_quality_table(report: QualityReport) -> str:
    u, d = report.uniqueness, report.diversity
    rows = [
        ("examples", u.total),
        ("rouge-l threshold", u.threshold),
        ("unique examples", u.unique_count),
        ("unique fraction", u.unique_fraction),
        ("unique bigrams / example", d.unique_bigrams_per_example),
        ("tokens / example", d.tokens_per_example),
    ]
    if report.difficulty is not None:
        rows.extend((f"difficulty {score}", count) for score, count in sorted(report.difficulty.scores.items()))
        rows.append(("difficulty unparsed", report.difficulty.unparsed))
        rows.append(("difficulty mean", report.difficulty.mean))
    return ResponseBuilder.table(("metric", "value"), rows)
