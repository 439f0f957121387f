"""Request / response records for the completion gateway"""
import hashlib
import json
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, computed_field


def prompt_digest(prompt: str) -> str:
    """sha256 of the prompt text, the key used by mock transcripts"""
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


class LlmRequest(BaseModel):
    model_config = ConfigDict(frozen=True)

    model: str
    prompt: str
    temperature: float = Field(0.0, ge=0)
    max_output_tokens: int = Field(1024, ge=1)
    # Accounting label (template name); not part of the cache key
    stage: str = "other"

    @computed_field
    @property
    def cache_key(self) -> str:
        payload = json.dumps([self.model, self.prompt, self.temperature], ensure_ascii=False)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class TokenUsage(BaseModel):
    model_config = ConfigDict(frozen=True)

    prompt_tokens: int = Field(0, ge=0)
    completion_tokens: int = Field(0, ge=0)


class LlmResponse(BaseModel):
    model_config = ConfigDict(frozen=True)

    text: str
    usage: TokenUsage = Field(default_factory=TokenUsage)
    from_cache: bool = False
    retries: int = 0


class ProviderReply(BaseModel):
    """What a provider hands back before caching/accounting"""
    model_config = ConfigDict(frozen=True)

    text: str
    usage: TokenUsage = Field(default_factory=TokenUsage)


class NullSampleType:
    """The model answered `null`: the row is irrelevant to the task. Not an error."""
    _instance: Optional["NullSampleType"] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NullSample"

    def __bool__(self) -> bool:
        return False


NullSample = NullSampleType()
