from enum import StrEnum


class ValueKind(StrEnum):
    TEXT = 'text'
    NUMBER = 'number'
    BOOLEAN = 'boolean'
    LIST = 'list'
    NESTED = 'nested'
    OTHER = 'other'


class CoreMessages(StrEnum):
    EMPTY_INSTRUCTION = "instruction must be non-empty"
    EMPTY_DEMO_FIELD = "demonstration example {field} must be non-empty"
    EMPTY_TASK_ID = "task_id must be non-empty"
    DUPLICATE_COLUMN = "duplicate column name: {name}"
    NO_COLUMNS = "schema must have at least one column"
    EMPTY_PLAN_STEP = "plan steps must be non-empty"
    EMPTY_EXAMPLE_FIELD = "transformed example {field} must be non-empty"
    COUNTER_IDENTITY = "dataset {key}: rows_attempted {attempted} != succeeded + null + malformed ({total})"
    CONFLICTING_EXCLUSION = "dataset {key}: conflicting exclusion flags in merged reports"
    DATASET_KEY_SEPARATOR = ':'
    BAD_DATASET_KEY = "dataset key {key!r} is not name:config"
