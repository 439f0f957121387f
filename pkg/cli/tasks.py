"""Task files: the native JSON format and the BIG-Bench conversion"""
import json
import logging
from pathlib import Path
from typing import Any, Mapping, Optional

from pydantic import ValidationError

from constants.cli_constants import CliMessages
from core.errors import PipelineError
from core.io import write_json
from core.types import DemoExample, TaskSpec

logger = logging.getLogger(__name__)


class TaskFileError(PipelineError):
    """A task file is unreadable or does not describe a task"""


def load_task(path: Path) -> TaskSpec:
    """Read {instruction, examples: [{input, output}], task_id?, tags?}; task_id defaults to the file stem

    Raises:
        TaskFileError: Unreadable file or invalid task
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if isinstance(data, dict):
            data.setdefault("task_id", Path(path).stem)
        return TaskSpec.model_validate(data)
    except (OSError, json.JSONDecodeError, ValidationError) as e:
        raise TaskFileError(CliMessages.BAD_TASK_FILE.format(path=path, error=e), path=str(path)) from e


def _target_text(target: Any) -> Optional[str]:
    if isinstance(target, list):
        target = next((t for t in target if isinstance(t, str) and t.strip()), None)
    if isinstance(target, str) and target.strip():
        return target
    return None


def import_bigbench(data: Mapping[str, Any], task_id: str, max_examples: Optional[int] = None) -> TaskSpec:
    """Map a BIG-Bench task: description (or task_prefix) becomes the instruction, examples[].input and
    examples[].target the demonstrations, keywords the tags

    Examples with an empty input or without a string target are skipped.
    """
    examples = []
    for raw in data.get("examples", []):
        target = _target_text(raw.get("target"))
        source = raw.get("input")
        if target is None or not isinstance(source, str) or not source.strip():
            continue
        examples.append(DemoExample(input=source, output=target))
        if max_examples is not None and len(examples) >= max_examples:
            break
    if not examples:
        raise TaskFileError(CliMessages.BAD_BIGBENCH.format(path=task_id), task_id=task_id)
    instruction = (data.get("description") or data.get("task_prefix") or "").strip()
    try:
        return TaskSpec(instruction=instruction, examples=examples, task_id=task_id,
                        tags=[str(k) for k in data.get("keywords", [])])
    except ValidationError as e:
        raise TaskFileError(str(e), task_id=task_id) from e


def write_task(path: Path, task: TaskSpec) -> None:
    write_json(path, task.model_dump(mode="json"))
    logger.info(CliMessages.TASK_WRITTEN.format(task_id=task.task_id, count=len(task.examples), path=path))
