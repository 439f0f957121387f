"""Domain value objects shared by all pipeline modules

All models are frozen pydantic models so they can be handed to concurrent workers freely.
Canonical serialization is model_dump_json / model_validate_json.
"""
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from constants.core_constants import CoreMessages, ValueKind


class FrozenModel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class DemoExample(FrozenModel):
    input: str
    output: str

    @model_validator(mode="after")
    def _non_empty(self) -> "DemoExample":
        for field in ("input", "output"):
            if not getattr(self, field).strip():
                raise ValueError(CoreMessages.EMPTY_DEMO_FIELD.format(field=field))
        return self


class TaskSpec(FrozenModel):
    """The user's task: instruction plus optional few-shot demonstrations"""
    instruction: str
    examples: list[DemoExample] = Field(default_factory=list)
    task_id: str
    # Free-form category tags, used for quality threshold lookup ("code", "long_text")
    tags: list[str] = Field(default_factory=list)

    @field_validator("instruction")
    @classmethod
    def _instruction_non_empty(cls, value: str) -> str:
        if not value.strip():
            raise ValueError(CoreMessages.EMPTY_INSTRUCTION)
        return value

    @field_validator("task_id")
    @classmethod
    def _task_id_non_empty(cls, value: str) -> str:
        if not value.strip():
            raise ValueError(CoreMessages.EMPTY_TASK_ID)
        return value


class DatasetRef(FrozenModel):
    """A dataset name plus one of its configs"""
    name: str
    config: str

    @property
    def key(self) -> str:
        return f"{self.name}{CoreMessages.DATASET_KEY_SEPARATOR}{self.config}"

    @staticmethod
    def split_key(key: str) -> tuple[str, Optional[str]]:
        """Split name:config into (name, config); a bare name gives (name, None)"""
        name, separator, config = key.rpartition(CoreMessages.DATASET_KEY_SEPARATOR)
        if not separator:
            return key, None
        return name, config or None

    @classmethod
    def from_key(cls, key: str, default_config: Optional[str] = None) -> "DatasetRef":
        """
        Raises:
            ValueError: The key names no config and no default_config is given
        """
        name, config = cls.split_key(key)
        config = config or default_config
        if not name or config is None:
            raise ValueError(CoreMessages.BAD_DATASET_KEY.format(key=key))
        return cls(name=name, config=config)

    def __str__(self) -> str:
        return self.key


class DatasetCard(FrozenModel):
    name: str
    configs: list[str] = Field(default_factory=list)
    description: str = ""
    tags: list[str] = Field(default_factory=list)

    @property
    def description_missing(self) -> bool:
        return not self.description.strip()

    @property
    def default_config(self) -> str:
        return self.configs[0] if self.configs else "default"


class Column(FrozenModel):
    name: str
    value_kind: ValueKind = ValueKind.TEXT


class DatasetSchema(FrozenModel):
    columns: list[Column]

    @field_validator("columns")
    @classmethod
    def _unique_columns(cls, columns: list[Column]) -> list[Column]:
        if not columns:
            raise ValueError(CoreMessages.NO_COLUMNS)
        seen = set()
        for column in columns:
            if column.name in seen:
                raise ValueError(CoreMessages.DUPLICATE_COLUMN.format(name=column.name))
            seen.add(column.name)
        return columns

    @property
    def column_names(self) -> list[str]:
        return [column.name for column in self.columns]

    def has_column(self, name: str) -> bool:
        return name in self.column_names


class DataRow(FrozenModel):
    values: dict[str, str]
    source_index: int = Field(ge=0)

    def restricted(self, columns: list[str]) -> dict[str, str]:
        """Row values limited to the given columns, in schema order of the row itself"""
        keep = set(columns)
        return {name: value for name, value in self.values.items() if name in keep}


class SelectedDataset(FrozenModel):
    card: DatasetCard
    config: str
    schema_: DatasetSchema = Field(alias="schema")
    sample_rows: list[DataRow] = Field(default_factory=list)
    retrieval_rank: int = Field(ge=1)

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    @property
    def schema(self) -> DatasetSchema:  # type: ignore[override]
        return self.schema_

    @property
    def ref(self) -> DatasetRef:
        return DatasetRef(name=self.card.name, config=self.config)


class TransformPlan(FrozenModel):
    steps: list[str]
    raw_response: str
    source_dataset: DatasetRef
    # True when no numbered steps could be parsed and the whole response became one step
    fallback: bool = False

    @field_validator("steps")
    @classmethod
    def _steps_non_empty(cls, steps: list[str]) -> list[str]:
        if not steps or any(not step.strip() for step in steps):
            raise ValueError(CoreMessages.EMPTY_PLAN_STEP)
        return steps

    def render(self) -> str:
        return "\n".join(f"{number}. {step}" for number, step in enumerate(self.steps, start=1))


class Provenance(FrozenModel):
    dataset: str
    config: str
    source_index: int = Field(ge=0)

    @property
    def ref(self) -> DatasetRef:
        return DatasetRef(name=self.dataset, config=self.config)


class TransformedExample(FrozenModel):
    input: str
    output: str
    provenance: Provenance

    @model_validator(mode="after")
    def _non_empty(self) -> "TransformedExample":
        for field in ("input", "output"):
            if not getattr(self, field).strip():
                raise ValueError(CoreMessages.EMPTY_EXAMPLE_FIELD.format(field=field))
        return self


def provenance_for(dataset: DatasetRef, source_index: int) -> Provenance:
    return Provenance(dataset=dataset.name, config=dataset.config, source_index=source_index)


def resolve_provenance(example: TransformedExample,
                       rows_by_dataset: dict[str, dict[int, DataRow]]) -> Optional[DataRow]:
    """Find the source row an example was derived from, or None"""
    rows = rows_by_dataset.get(example.provenance.ref.key, {})
    return rows.get(example.provenance.source_index)
