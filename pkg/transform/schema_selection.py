"""Schema selection: classify a dataset's columns as input, output, irrelevant or ambiguous"""
import json
import logging
from typing import Any, Mapping

from constants.prompt_constants import IncontextFixtures, PromptName
from constants.transform_constants import SelectionKeys, TransformMessages
from core.config import PipelineConfig
from core.errors import MalformedJson, MissingKeys, SchemaViolation, UnusableDataset
from core.prompting import format_rows
from core.types import DatasetSchema, SelectedDataset
from llm_gateway.gateway import LlmGateway
from llm_gateway.templates import get_template, load_incontext, render_prompt
from llm_gateway.types import LlmRequest, NullSampleType
from transform.types import ColumnSelection, ExpandedTask

logger = logging.getLogger(__name__)


def _column_list(payload: Mapping[str, Any], key: str) -> list[str]:
    value = payload.get(key)
    if value is None:
        return []
    if isinstance(value, str):
        return [value] if value.strip() else []
    if isinstance(value, list) and all(isinstance(item, str) for item in value):
        return list(value)
    raise SchemaViolation(TransformMessages.BAD_ENTRY.format(field=key), field=key)


def parse_selection(payload: Mapping[str, Any], schema: DatasetSchema, dataset: str) -> ColumnSelection:
    """Validate a model's column classification against the schema

    Raises:
        SchemaViolation: Wrong types, more than one output, unknown or overlapping columns
        UnusableDataset: Neither input nor output columns
    """
    inputs = _column_list(payload, SelectionKeys.INPUT)
    outputs = _column_list(payload, SelectionKeys.OUTPUT)
    irrelevant = _column_list(payload, SelectionKeys.IRRELEVANT)
    ambiguous = _column_list(payload, SelectionKeys.AMBIGUOUS)

    if len(outputs) > 1:
        raise SchemaViolation(TransformMessages.TOO_MANY_OUTPUTS.format(columns=outputs), dataset=dataset)
    unknown = sorted({c for c in [*inputs, *outputs, *irrelevant, *ambiguous] if not schema.has_column(c)})
    if unknown:
        raise SchemaViolation(TransformMessages.UNKNOWN_COLUMNS.format(columns=unknown, dataset=dataset),
                              dataset=dataset)
    if not inputs and not outputs:
        raise UnusableDataset(TransformMessages.UNUSABLE.format(dataset=dataset), dataset=dataset)
    try:
        return ColumnSelection(input_cols=inputs, output_col=outputs[0] if outputs else None,
                               irrelevant=irrelevant, ambiguous=ambiguous)
    except ValueError as e:
        raise SchemaViolation(str(e), dataset=dataset) from e


def render_schema_prompt(task: ExpandedTask, dataset: SelectedDataset, config: PipelineConfig) -> str:
    return render_prompt(get_template(PromptName.SCHEMA_SELECT), {
        "INCONTEXT_EXAMPLES": load_incontext(IncontextFixtures.SCHEMA_SELECT, config.incontext_dir),
        "instruction": task.expanded_text,
        "dataset_name": dataset.card.name,
        "dataset_description": dataset.card.description.strip() or TransformMessages.NO_DESCRIPTION,
        "sample_row": format_rows(dataset.sample_rows[:config.schema_sample_rows]),
        "dataset_columns": json.dumps(dataset.schema.column_names, ensure_ascii=False),
    })


async def select_schema(task: ExpandedTask, dataset: SelectedDataset, gateway: LlmGateway,
                        config: PipelineConfig) -> ColumnSelection:
    """
    Raises:
        SchemaViolation: The answer breaks a selection rule or cannot be parsed
        UnusableDataset: The model found no relevant columns (or answered null)
        TransportError: The gateway call failed
    """
    request = LlmRequest(
        model=config.planner_model,
        prompt=render_schema_prompt(task, dataset, config),
        temperature=0.0,
        max_output_tokens=config.llm_max_output_tokens,
        stage=PromptName.SCHEMA_SELECT,
    )
    try:
        payload = await gateway.complete_json(request, [SelectionKeys.INPUT, SelectionKeys.OUTPUT])
    except (MalformedJson, MissingKeys) as e:
        raise SchemaViolation(
            TransformMessages.UNPARSEABLE_SELECTION.format(dataset=dataset.ref.key, error=e), dataset=dataset.ref.key,
        ) from e
    if isinstance(payload, NullSampleType):
        raise UnusableDataset(TransformMessages.UNUSABLE.format(dataset=dataset.ref.key), dataset=dataset.ref.key)
    selection = parse_selection(payload, dataset.schema, dataset.ref.key)
    logger.info(f"dataset={dataset.ref.key} selection input={selection.input_cols} output={selection.output_col} "
                f"ambiguous={selection.ambiguous}")
    return selection
