# Task expansion, schema selection, planning and per-row execution
from .execution import execute_row, execute_rows, restrict_row
from .expansion import expand_task
from .planning import generate_plan, parse_plan
from .schema_selection import parse_selection, select_schema
from .types import ColumnSelection, ExecutionOutcome, ExpandedTask

__all__ = [
    'execute_row', 'execute_rows', 'restrict_row', 'expand_task', 'generate_plan', 'parse_plan',
    'parse_selection', 'select_schema', 'ColumnSelection', 'ExecutionOutcome', 'ExpandedTask',
]
