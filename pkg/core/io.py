"""JSON / JSON Lines file helpers for domain records"""
import json
import logging
import os
from pathlib import Path
from typing import Any, Iterable, Iterator, Union

from pydantic import ValidationError

from core.errors import ExampleFileError
from core.types import TransformedExample

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def read_jsonl(path: PathLike) -> Iterator[dict[str, Any]]:
    """Read JSON objects from a JSONL file, skipping blank lines

    Args:
        path: JSONL file path

    Yields:
        Each line's JSON object
    """
    with Path(path).open("r", encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError as e:
                logger.warning(f"Skipping unparseable line {line_number} of {path}: {e}")


def write_text_atomic(path: PathLike, text: str) -> None:
    """Write a file via a temporary sibling and rename, so readers never see partial content"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def write_json(path: PathLike, payload: Any) -> None:
    write_text_atomic(path, json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n")


def read_json(path: PathLike) -> Any:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def write_examples(path: PathLike, examples: Iterable[TransformedExample]) -> int:
    """Write examples as JSON Lines (keys input, output, provenance)

    Returns:
        Number of examples written
    """
    lines = [example.model_dump_json() for example in examples]
    write_text_atomic(path, "".join(line + "\n" for line in lines))
    return len(lines)


def read_examples(path: PathLike) -> list[TransformedExample]:
    """
    Raises:
        ExampleFileError: A record lacks input, output or provenance
    """
    examples = []
    for number, record in enumerate(read_jsonl(path), start=1):
        try:
            examples.append(TransformedExample.model_validate(record))
        except ValidationError as e:
            raise ExampleFileError(f"record {number} of {path} is not an example: {e.errors()[0]['msg']}",
                                   path=str(path), line=number) from e
    return examples
