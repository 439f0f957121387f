"""Where the dataset corpus lives, and the page record rows are streamed in"""
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, SecretStr, field_validator, model_validator

from constants.hub_constants import HubMessages, SourceKind
from core.types import DataRow


class CorpusSource(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: SourceKind
    location: str
    # Hub token, passed in from Settings; never logged
    auth: Optional[SecretStr] = None

    @field_validator("location")
    @classmethod
    def _location_non_empty(cls, value: str) -> str:
        if not value.strip():
            raise ValueError(HubMessages.BAD_LOCATION)
        return value

    @property
    def token(self) -> Optional[str]:
        return self.auth.get_secret_value() if self.auth is not None else None


class RowPage(BaseModel):
    model_config = ConfigDict(frozen=True)

    rows: list[DataRow]
    next_cursor: Optional[str] = None
    total_estimate: Optional[int] = Field(None, ge=0)

    @model_validator(mode="after")
    def _rows_or_end(self) -> "RowPage":
        if not self.rows and self.next_cursor is not None:
            raise ValueError("an empty page must be the last page")
        return self
