"""Plan generation: one transformation plan per task/dataset pair"""
import logging
import re

from constants.prompt_constants import IncontextFixtures, PromptName
from constants.transform_constants import TransformMessages
from core.config import PipelineConfig
from core.errors import EmptyPlan
from core.prompting import format_examples, format_rows
from core.types import SelectedDataset, TransformPlan
from llm_gateway.gateway import LlmGateway
from llm_gateway.templates import get_template, load_incontext, render_prompt
from llm_gateway.types import LlmRequest
from transform.types import ColumnSelection, ExpandedTask

logger = logging.getLogger(__name__)

_STEP_RE = re.compile(r"^\s*(?:\d+\s*[.)]|[-*•])\s+(.*\S)\s*$")


def parse_plan(text: str) -> tuple[list[str], bool]:
    """Split a plan response into steps

    Numbered (`1.`, `1)`) and bulleted (`-`, `*`, `•`) lines start steps; other non-empty lines after
    the first step continue it. With no such lines the whole remaining text is one step.

    Returns:
        (steps, fallback) where fallback is True for the one-step case

    Raises:
        EmptyPlan: Nothing but whitespace or the prompt's closing instruction
    """
    lines = [line for line in text.splitlines() if line.strip() != TransformMessages.PLAN_ECHO]
    steps: list[str] = []
    for line in lines:
        match = _STEP_RE.match(line)
        if match:
            steps.append(match.group(1).strip())
        elif steps and line.strip():
            steps[-1] = f"{steps[-1]} {line.strip()}"
    if steps:
        return steps, False
    remainder = "\n".join(lines).strip()
    if not remainder:
        raise EmptyPlan(TransformMessages.EMPTY_PLAN)
    return [remainder], True


def render_plan_prompt(task: ExpandedTask, dataset: SelectedDataset, selection: ColumnSelection,
                       config: PipelineConfig) -> str:
    return render_prompt(get_template(PromptName.PLAN), {
        "in_context_examples": load_incontext(IncontextFixtures.PLAN, config.incontext_dir),
        "task_description": task.expanded_text,
        "example": format_examples(task.original.examples, config.max_demo_examples),
        "dataset_row": format_rows(dataset.sample_rows[:config.sample_rows], selection.prompt_columns),
    })


async def generate_plan(task: ExpandedTask, dataset: SelectedDataset, selection: ColumnSelection,
                        gateway: LlmGateway, config: PipelineConfig) -> TransformPlan:
    """
    Raises:
        EmptyPlan: The response holds no steps
        TransportError: The gateway call failed
    """
    response = await gateway.complete(LlmRequest(
        model=config.planner_model,
        prompt=render_plan_prompt(task, dataset, selection, config),
        temperature=0.0,
        max_output_tokens=config.llm_max_output_tokens,
        stage=PromptName.PLAN,
    ))
    try:
        steps, fallback = parse_plan(response.text)
    except EmptyPlan as e:
        e.context["dataset"] = dataset.ref.key
        raise
    if fallback:
        logger.warning(TransformMessages.PLAN_FALLBACK.format(dataset=dataset.ref.key))
    logger.info(f"dataset={dataset.ref.key} plan has {len(steps)} steps")
    return TransformPlan(steps=steps, raw_response=response.text, source_dataset=dataset.ref, fallback=fallback)
