"""LLM-judged difficulty on a 1-5 scale"""
import asyncio
import logging
import re
from typing import Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field

from constants.prompt_constants import IncontextFixtures, PromptName
from constants.quality_constants import QualityDefaults, QualityMessages
from core.config import PipelineConfig
from core.errors import TransportError
from llm_gateway.gateway import LlmGateway
from llm_gateway.templates import PromptTemplate, get_template, load_incontext, render_prompt
from llm_gateway.types import LlmRequest

logger = logging.getLogger(__name__)

_INTEGER_RE = re.compile(r"-?\d+")
SCORES = range(QualityDefaults.SCORE_MIN, QualityDefaults.SCORE_MAX + 1)


class DifficultyReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    # Keys are the scores 1..5, always all present
    scores: dict[int, int]
    unparsed: int = Field(0, ge=0)
    mean: Optional[float] = None

    @property
    def judged(self) -> int:
        return sum(self.scores.values()) + self.unparsed


def parse_difficulty(answer: str) -> Optional[int]:
    """The first integer in the answer if it lies in 1..5, else None"""
    match = _INTEGER_RE.search(answer)
    if match is None:
        return None
    value = int(match.group())
    return value if value in SCORES else None


def summarize(parsed: Sequence[Optional[int]]) -> DifficultyReport:
    scores = {score: 0 for score in SCORES}
    for value in parsed:
        if value is not None:
            scores[value] += 1
    counted = sum(scores.values())
    return DifficultyReport(
        scores=scores,
        unparsed=len(parsed) - counted,
        mean=sum(score * n for score, n in scores.items()) / counted if counted else None,
    )


async def _judge(index: int, text: str, template: PromptTemplate, incontext: str,
                 gateway: LlmGateway, config: PipelineConfig) -> Optional[int]:
    request = LlmRequest(
        model=config.judge_model,
        prompt=render_prompt(template, {"incontext_examples": incontext, "input_code": text}),
        temperature=0.0,
        max_output_tokens=config.llm_max_output_tokens,
        stage=PromptName.DIFFICULTY,
    )
    try:
        response = await gateway.complete(request)
    except TransportError as e:
        logger.warning(QualityMessages.JUDGE_TRANSPORT.format(index=index, error=e))
        return None
    value = parse_difficulty(response.text)
    if value is None:
        logger.info(QualityMessages.JUDGE_UNPARSED.format(index=index, answer=response.text[:80]))
    return value


async def estimate_difficulty(texts: Sequence[str], gateway: LlmGateway, config: PipelineConfig,
                              template: Optional[PromptTemplate] = None,
                              incontext: Optional[str] = None) -> DifficultyReport:
    """One judge call per example; the gateway bounds concurrency

    Args:
        texts: Example inputs to rate
        gateway: Completion gateway
        config: Supplies judge_model and the in-context fixture override directory
        template: Judge prompt, defaults to the bundled difficulty template; must bind
            incontext_examples and input_code
        incontext: In-context examples text, defaults to the difficulty fixture
    """
    template = template or get_template(PromptName.DIFFICULTY)
    if incontext is None:
        incontext = load_incontext(IncontextFixtures.DIFFICULTY, config.incontext_dir)
    parsed = await asyncio.gather(
        *(_judge(index, text, template, incontext, gateway, config) for index, text in enumerate(texts))
    )
    report = summarize(parsed)
    logger.info(f"Judged {report.judged} examples, {report.unparsed} unparsed, mean={report.mean}")
    return report
