"""Task expansion: a clearer restatement of the task, made once per run"""
import logging

from constants.prompt_constants import PromptName
from constants.transform_constants import TransformMessages
from core.config import PipelineConfig
from core.errors import EmptyExpansion
from core.prompting import format_examples
from core.types import TaskSpec
from llm_gateway.gateway import LlmGateway
from llm_gateway.templates import get_template, render_prompt
from llm_gateway.types import LlmRequest
from transform.types import ExpandedTask

logger = logging.getLogger(__name__)


async def expand_task(task: TaskSpec, gateway: LlmGateway, config: PipelineConfig) -> ExpandedTask:
    """
    Raises:
        EmptyExpansion: The model returned nothing usable
        TransportError: The gateway call failed
    """
    prompt = render_prompt(get_template(PromptName.TASK_EXPAND), {
        "task_description": task.instruction,
        "examples": format_examples(task.examples, config.max_demo_examples),
    })
    response = await gateway.complete(LlmRequest(
        model=config.planner_model,
        prompt=prompt,
        temperature=0.0,
        max_output_tokens=config.llm_max_output_tokens,
        stage=PromptName.TASK_EXPAND,
    ))
    text = response.text.strip()
    if not text:
        raise EmptyExpansion(TransformMessages.EMPTY_EXPANSION, task_id=task.task_id)
    if text == task.instruction.strip():
        raise EmptyExpansion(TransformMessages.ECHOED_EXPANSION, task_id=task.task_id)
    logger.info(f"Expanded task {task.task_id} ({len(text)} chars)")
    return ExpandedTask(original=task, expanded_text=text)
