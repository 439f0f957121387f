from enum import StrEnum

class ResponsePrefix(StrEnum):
    SUCCESS = 'ok:'
    ERROR = 'error:'
    INFO = 'info:'
    WARNING = 'warning:'

class TableChars(StrEnum):
    COLUMN_SEP = ' | '
    RULE = '-'
