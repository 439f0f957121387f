"""Typed errors shared by every pipeline stage"""
from typing import Any, Optional


class PipelineError(Exception):
    """Base class for all pipeline errors.

    Attributes:
        context: Extra key/value detail (dataset, row, field...) for logs and CLI messages
    """

    def __init__(self, message: str, **context: Any):
        self.context = context
        super().__init__(message)


class ConfigValidationError(PipelineError):
    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(message, field=field)


class ReportMergeError(PipelineError):
    pass


# llm_gateway

class TemplateError(PipelineError):
    pass


class MissingBinding(TemplateError):
    def __init__(self, placeholder: str):
        self.placeholder = placeholder
        super().__init__(f"missing binding: {placeholder}", placeholder=placeholder)


class TransportError(PipelineError):
    """Provider call failed after all retries (or with a non-retryable status)"""

    def __init__(self, message: str, status_code: Optional[int] = None, body: Optional[str] = None,
                 retries: int = 0):
        self.status_code = status_code
        self.body = body
        self.retries = retries
        super().__init__(message, status_code=status_code)


class MockTranscriptMiss(TransportError):
    pass


class MalformedJson(PipelineError):
    def __init__(self, raw_text: str):
        self.raw_text = raw_text
        super().__init__("no JSON object could be parsed from the response")


class MissingKeys(PipelineError):
    def __init__(self, keys: list[str], raw_text: str):
        self.keys = keys
        self.raw_text = raw_text
        super().__init__(f"response JSON is missing keys: {', '.join(keys)}", keys=keys)


# hub_client

class HubError(PipelineError):
    pass


class NotFound(HubError):
    pass


class EmptyDataset(HubError):
    pass


class HubAuthError(HubError):
    pass


class HubTransportError(HubError):
    """Raised after page-level retries; cursor is where a resumed stream should restart"""

    def __init__(self, message: str, cursor: Optional[str] = None):
        self.cursor = cursor
        super().__init__(message, cursor=cursor)


# retrieval

class RetrievalError(PipelineError):
    pass


class DuplicateDatasetName(RetrievalError):
    pass


class EmptyIndex(RetrievalError):
    pass


class IndexBuildError(RetrievalError):
    pass


class ZeroVector(RetrievalError):
    """A text embedded to the zero vector, so it has no direction to rank by"""


# transform

class TransformError(PipelineError):
    pass


class EmptyExpansion(TransformError):
    pass


class SchemaViolation(TransformError):
    pass


class UnusableDataset(TransformError):
    pass


class EmptyPlan(TransformError):
    pass


# orchestrator

class NoSuitableDataset(PipelineError):
    pass


# files

class ExampleFileError(PipelineError):
    """A JSONL record is not a valid example"""

    def __init__(self, message: str, path: str, line: int):
        super().__init__(message, path=path, line=line)
