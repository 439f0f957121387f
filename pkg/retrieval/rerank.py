"""Stage-2 retrieval: LLM reranking of candidate datasets with self-consistency voting"""
import asyncio
import logging
import random
import re
from collections import Counter
from typing import Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field

from constants.prompt_constants import PromptName
from constants.retrieval_constants import RerankLabels, RetrievalMessages
from core.config import PipelineConfig
from core.errors import TransportError
from core.prompting import format_examples, format_rows
from core.types import DatasetRef, SelectedDataset, TaskSpec
from llm_gateway.gateway import LlmGateway
from llm_gateway.templates import get_template, render_prompt
from llm_gateway.types import LlmRequest

logger = logging.getLogger(__name__)

_ANSWER_STRIP = " \t\"'`*.:"


class RerankVote(BaseModel):
    model_config = ConfigDict(frozen=True)

    # None is the NONE vote
    chosen: Optional[DatasetRef] = None
    raw_response: str
    vote_index: int = Field(0, ge=0)


class RerankResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    winner: Optional[DatasetRef] = None
    vote_counts: dict[str, int]
    votes: list[RerankVote]


def _mentions(text: str, name: str) -> bool:
    return re.search(rf"(?<![\w/-]){re.escape(name)}(?![\w/-])", text) is not None


def _with_config(candidate: SelectedDataset, answer: str) -> DatasetRef:
    """The candidate, with the config the answer names if it names one of the card's configs"""
    remainder = answer.replace(candidate.card.name, " ")
    for config in candidate.card.configs:
        if config != candidate.config and _mentions(remainder, config):
            return DatasetRef(name=candidate.card.name, config=config)
    if len(candidate.card.configs) > 1 and not _mentions(remainder, candidate.config):
        logger.info(RetrievalMessages.CONFIG_DEFAULTED.format(name=candidate.card.name, config=candidate.config))
    return candidate.ref


def canonicalize_answer(answer: str, candidates: Sequence[SelectedDataset]) -> Optional[DatasetRef]:
    """Map a free-text reranker answer to a candidate

    Tried in order: exact name (or name:config), case-insensitive name, then a name that is the
    only candidate mentioned in the answer. Anything else, ambiguity included, is NONE.
    """
    lines = [line for line in answer.strip().splitlines() if line.strip()]
    cleaned = lines[0].strip(_ANSWER_STRIP) if lines else ""

    for candidate in candidates:
        if cleaned in (candidate.card.name, candidate.ref.key):
            return _with_config(candidate, cleaned)

    folded = cleaned.lower()
    matches = [c for c in candidates if folded in (c.card.name.lower(), c.ref.key.lower())]
    if len(matches) == 1:
        return _with_config(matches[0], cleaned)

    text = answer.lower()
    found = {c.card.name.lower(): c for c in candidates if _mentions(text, c.card.name.lower())}
    # "squad" inside a also-mentioned "squad_v2" is not a separate mention
    found = {name: c for name, c in found.items() if not any(name != other and name in other for other in found)}
    if len(found) == 1:
        return _with_config(next(iter(found.values())), answer)
    return None


def render_candidate_block(counter: int, dataset: SelectedDataset, include_samples: bool) -> str:
    description = dataset.card.description.strip()
    if include_samples:
        description += RerankLabels.SCHEMA_HEADER + ", ".join(dataset.schema.column_names)
        if dataset.sample_rows:
            description += RerankLabels.SAMPLES_HEADER + format_rows(dataset.sample_rows)
    return render_prompt(get_template(PromptName.RERANK_CANDIDATE), {
        "counter": f"{counter}. ",
        "dataset_name": dataset.card.name,
        "dataset_description": description,
        "tags": ", ".join(dataset.card.tags) or RerankLabels.NO_TAGS,
    })


def render_rerank_prompt(task: TaskSpec, candidates: Sequence[SelectedDataset], config: PipelineConfig) -> str:
    blocks = [
        render_candidate_block(counter, dataset, config.rerank_include_samples)
        for counter, dataset in enumerate(candidates, start=1)
    ]
    return render_prompt(get_template(PromptName.RERANK), {
        "instruction": task.instruction,
        "examples": format_examples(task.examples, config.max_demo_examples),
        "num": str(len(candidates)),
        "datasets": "\n".join(blocks),
    })


async def rerank_once(task: TaskSpec, candidates: Sequence[SelectedDataset], gateway: LlmGateway,
                      config: PipelineConfig, vote_index: int = 0) -> RerankVote:
    """One reranker vote; unparseable or out-of-list answers are NONE

    Raises:
        TransportError: The gateway call failed
    """
    ordered = sorted(candidates, key=lambda c: c.retrieval_rank)
    if config.shuffle_candidates:
        random.Random(vote_index).shuffle(ordered)
    request = LlmRequest(
        model=config.planner_model,
        prompt=render_rerank_prompt(task, ordered, config),
        temperature=config.rerank_temperature,
        max_output_tokens=config.llm_max_output_tokens,
        stage=PromptName.RERANK,
    )
    response = await gateway.complete(request)
    chosen = canonicalize_answer(response.text, ordered)
    if chosen is None:
        logger.info(RetrievalMessages.NO_ANSWER.format(index=vote_index, answer=response.text[:120]))
    return RerankVote(chosen=chosen, raw_response=response.text, vote_index=vote_index)


def tally_votes(votes: Sequence[RerankVote], candidates: Sequence[SelectedDataset]) -> RerankResult:
    """Modal choice wins; ties go to the better retrieval rank; NONE wins only when strictly modal"""
    counts = Counter(vote.chosen.key if vote.chosen is not None else RerankLabels.NONE.value for vote in votes)
    rank_of = {c.card.name: c.retrieval_rank for c in candidates}
    named = {key: count for key, count in counts.items() if key != RerankLabels.NONE}

    winner: Optional[DatasetRef] = None
    if named:
        best = max(named.values())
        leaders = [DatasetRef.from_key(key) for key, count in named.items() if count == best]
        leader = min(leaders, key=lambda ref: (rank_of.get(ref.name, len(rank_of) + 1), ref.key))
        if counts.get(RerankLabels.NONE, 0) <= best:
            winner = leader
    return RerankResult(winner=winner, vote_counts=dict(sorted(counts.items())), votes=list(votes))


async def rerank_with_self_consistency(task: TaskSpec, candidates: Sequence[SelectedDataset], votes_n: int,
                                       gateway: LlmGateway, config: PipelineConfig) -> RerankResult:
    """votes_n independent reranker votes, tallied

    Raises:
        TransportError: Every vote failed at transport level
    """
    results = await asyncio.gather(
        *(rerank_once(task, candidates, gateway, config, vote_index=i) for i in range(votes_n)),
        return_exceptions=True,
    )
    votes: list[RerankVote] = []
    failures = 0
    last_error: Optional[TransportError] = None
    for index, result in enumerate(results):
        if isinstance(result, TransportError):
            logger.warning(RetrievalMessages.VOTE_TRANSPORT.format(index=index, error=result))
            last_error = result
            failures += 1
            votes.append(RerankVote(chosen=None, raw_response="", vote_index=index))
        elif isinstance(result, BaseException):
            raise result
        else:
            votes.append(result)
    if failures and failures == len(votes):
        raise TransportError(RetrievalMessages.ALL_VOTES_FAILED, retries=last_error.retries) from last_error
    result = tally_votes(votes, candidates)
    logger.info(f"Rerank votes {result.vote_counts}; winner {result.winner.key if result.winner else 'NONE'}")
    return result
