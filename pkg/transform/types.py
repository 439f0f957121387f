"""Records produced inside the transformation stages"""
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from constants.transform_constants import MalformedReason, OutcomeKind, TransformMessages
from core.types import DataRow, TaskSpec, TransformedExample


class ExpandedTask(BaseModel):
    model_config = ConfigDict(frozen=True)

    original: TaskSpec
    expanded_text: str

    @model_validator(mode="after")
    def _meaningful(self) -> "ExpandedTask":
        if not self.expanded_text.strip():
            raise ValueError(TransformMessages.EMPTY_EXPANSION)
        if self.expanded_text.strip() == self.original.instruction.strip():
            raise ValueError(TransformMessages.ECHOED_EXPANSION)
        return self


class ColumnSelection(BaseModel):
    """Disjoint column categories; build through parse_selection to get schema checks"""
    model_config = ConfigDict(frozen=True)

    input_cols: list[str] = Field(default_factory=list)
    output_col: Optional[str] = None
    irrelevant: list[str] = Field(default_factory=list)
    ambiguous: list[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _disjoint(self) -> "ColumnSelection":
        seen: set[str] = set()
        output = [self.output_col] if self.output_col is not None else []
        for column in [*self.input_cols, *output, *self.irrelevant, *self.ambiguous]:
            if column in seen:
                raise ValueError(TransformMessages.OVERLAPPING.format(column=column))
            seen.add(column)
        return self

    @property
    def usable(self) -> bool:
        return bool(self.input_cols) or self.output_col is not None

    @property
    def prompt_columns(self) -> list[str]:
        """Columns shown to the planner and executor: selected ones, then ambiguous ones"""
        output = [self.output_col] if self.output_col is not None else []
        return [*self.input_cols, *output, *self.ambiguous]


class ExecutionOutcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: OutcomeKind
    source_index: int = Field(ge=0)
    example: Optional[TransformedExample] = None
    reason: Optional[str] = None
    raw_response: Optional[str] = None

    @model_validator(mode="after")
    def _shape(self) -> "ExecutionOutcome":
        if (self.kind == OutcomeKind.SUCCESS) != (self.example is not None):
            raise ValueError("only a success carries an example")
        if self.kind == OutcomeKind.MALFORMED and not (self.reason or "").strip():
            raise ValueError("a malformed outcome needs a reason")
        return self

    @property
    def succeeded(self) -> bool:
        return self.kind == OutcomeKind.SUCCESS

    @property
    def is_transport_failure(self) -> bool:
        return self.kind == OutcomeKind.MALFORMED and self.reason == MalformedReason.TRANSPORT

    @classmethod
    def success(cls, example: TransformedExample, raw_response: str) -> "ExecutionOutcome":
        return cls(kind=OutcomeKind.SUCCESS, source_index=example.provenance.source_index,
                   example=example, raw_response=raw_response)

    @classmethod
    def null(cls, row: DataRow, raw_response: str) -> "ExecutionOutcome":
        return cls(kind=OutcomeKind.NULL, source_index=row.source_index, raw_response=raw_response)

    @classmethod
    def malformed(cls, row: DataRow, reason: str, raw_response: str = "") -> "ExecutionOutcome":
        return cls(kind=OutcomeKind.MALFORMED, source_index=row.source_index, reason=reason,
                   raw_response=raw_response)
