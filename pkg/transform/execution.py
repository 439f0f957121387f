"""Plan execution: one executor call per row, each yielding exactly one outcome"""
import asyncio
import logging
from typing import Optional, Sequence

from constants.prompt_constants import IncontextFixtures, PromptName
from constants.transform_constants import ExampleKeys, MalformedReason, TransformMessages
from core.config import PipelineConfig
from core.errors import MalformedJson, MissingKeys, TransportError
from core.normalize import normalize_value
from core.prompting import format_examples, format_values
from core.types import DataRow, TransformedExample, TransformPlan, provenance_for
from llm_gateway.gateway import LlmGateway
from llm_gateway.json_extract import extract_json
from llm_gateway.templates import get_template, load_incontext, render_prompt
from llm_gateway.types import LlmRequest, NullSampleType
from transform.types import ColumnSelection, ExecutionOutcome, ExpandedTask

logger = logging.getLogger(__name__)


def restrict_row(row: DataRow, selection: ColumnSelection) -> dict[str, str]:
    """Row values for the selected and ambiguous columns only, in selection order"""
    return {column: row.values[column] for column in selection.prompt_columns if column in row.values}


def render_execute_prompt(task: ExpandedTask, plan: TransformPlan, row: DataRow, selection: ColumnSelection,
                          config: PipelineConfig, incontext: Optional[str] = None) -> str:
    return render_prompt(get_template(PromptName.EXECUTE), {
        "incontext_examples": incontext if incontext is not None
        else load_incontext(IncontextFixtures.EXECUTE, config.incontext_dir),
        "task_description": task.expanded_text,
        "sample": format_examples(task.original.examples, config.max_demo_examples),
        "plan": f"{TransformMessages.PLAN_LABEL}\n{plan.render()}",
        "dataset_row": format_values(restrict_row(row, selection)),
    })


async def execute_row(task: ExpandedTask, plan: TransformPlan, row: DataRow, selection: ColumnSelection,
                      gateway: LlmGateway, config: PipelineConfig,
                      incontext: Optional[str] = None) -> ExecutionOutcome:
    """Transform one row; never raises for model or transport failures"""
    request = LlmRequest(
        model=config.executor_model,
        prompt=render_execute_prompt(task, plan, row, selection, config, incontext),
        temperature=0.0,
        max_output_tokens=config.llm_max_output_tokens,
        stage=PromptName.EXECUTE,
    )
    where = f"dataset={plan.source_dataset.key} row={row.source_index}"
    try:
        response = await gateway.complete(request)
    except TransportError as e:
        logger.warning(f"{where} transport failure: {e}")
        return ExecutionOutcome.malformed(row, MalformedReason.TRANSPORT, e.body or "")

    try:
        payload = extract_json(response.text, [ExampleKeys.INPUT, ExampleKeys.OUTPUT])
    except MalformedJson:
        logger.debug(f"{where} no JSON in response")
        return ExecutionOutcome.malformed(row, MalformedReason.NO_JSON, response.text)
    except MissingKeys as e:
        logger.debug(f"{where} {e}")
        return ExecutionOutcome.malformed(row, MalformedReason.MISSING_KEYS.format(keys=", ".join(e.keys)),
                                          response.text)
    if isinstance(payload, NullSampleType):
        return ExecutionOutcome.null(row, response.text)

    input_text = normalize_value(payload[ExampleKeys.INPUT]).strip()
    output_text = normalize_value(payload[ExampleKeys.OUTPUT]).strip()
    if not input_text:
        return ExecutionOutcome.malformed(row, MalformedReason.EMPTY_INPUT, response.text)
    if not output_text:
        return ExecutionOutcome.malformed(row, MalformedReason.EMPTY_OUTPUT, response.text)
    example = TransformedExample(
        input=input_text,
        output=output_text,
        provenance=provenance_for(plan.source_dataset, row.source_index),
    )
    return ExecutionOutcome.success(example, response.text)


async def execute_rows(task: ExpandedTask, plan: TransformPlan, rows: Sequence[DataRow],
                       selection: ColumnSelection, gateway: LlmGateway,
                       config: PipelineConfig) -> list[ExecutionOutcome]:
    """Execute rows concurrently (bounded by the gateway) and return outcomes ordered by source_index"""
    incontext = load_incontext(IncontextFixtures.EXECUTE, config.incontext_dir)
    outcomes = await asyncio.gather(
        *(execute_row(task, plan, row, selection, gateway, config, incontext) for row in rows)
    )
    return sorted(outcomes, key=lambda outcome: outcome.source_index)
