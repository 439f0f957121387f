"""Text renderings of domain records as they appear inside prompts"""
import json
from typing import Mapping, Sequence

from core.types import DataRow, DemoExample

NO_EXAMPLES = "(no examples provided)"


def format_examples(examples: Sequence[DemoExample], limit: int) -> str:
    """The first `limit` demonstrations as Input/Output blocks"""
    shown = list(examples)[:limit]
    if not shown:
        return NO_EXAMPLES
    return "\n\n".join(f"Input: {example.input}\nOutput: {example.output}" for example in shown)


def format_values(values: Mapping[str, str]) -> str:
    """Row values as one-line JSON, keeping column order"""
    return json.dumps(dict(values), ensure_ascii=False)


def format_rows(rows: Sequence[DataRow], columns: Sequence[str] = ()) -> str:
    """One JSON line per row, optionally restricted to `columns`"""
    return "\n".join(format_values(row.restricted(list(columns)) if columns else row.values) for row in rows)
