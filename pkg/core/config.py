"""Pipeline configuration model and validation"""
from pathlib import Path
from typing import Any, Mapping, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from constants.pipeline_constants import EmbedderKind, ModelDefaults, PipelineDefaults
from core.errors import ConfigValidationError

D = PipelineDefaults


class PipelineConfig(BaseModel):
    """Every tunable of a pipeline run. Field order is the order violations are reported in."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    target_example_count: int = Field(D.TARGET_EXAMPLE_COUNT, ge=1)
    retrieval_k: int = Field(D.RETRIEVAL_K, ge=1)
    max_datasets: int = Field(D.MAX_DATASETS, ge=1)
    self_consistency_votes: int = Field(D.SELF_CONSISTENCY_VOTES, ge=1)
    failure_rate_threshold: float = Field(D.FAILURE_RATE_THRESHOLD, gt=0, le=1)
    probe_batch_size: int = Field(D.PROBE_BATCH_SIZE, ge=1)
    rouge_threshold: float = Field(D.ROUGE_THRESHOLD, gt=0, le=1)
    max_concurrent_llm_calls: int = Field(D.MAX_CONCURRENT_LLM_CALLS, ge=1)
    planner_model: str = Field(ModelDefaults.PLANNER.value, min_length=1)
    executor_model: str = Field(ModelDefaults.EXECUTOR.value, min_length=1)
    judge_model: str = Field(ModelDefaults.JUDGE.value, min_length=1)

    rerank_temperature: float = Field(D.RERANK_TEMPERATURE, ge=0)
    shuffle_candidates: bool = False
    fallback_to_retrieval_order: bool = True
    sample_rows: int = Field(D.SAMPLE_ROWS, ge=1)
    schema_sample_rows: int = Field(D.SCHEMA_SAMPLE_ROWS, ge=1)
    max_demo_examples: int = Field(D.MAX_DEMO_EXAMPLES, ge=0)
    rerank_include_samples: bool = True
    row_batch_size: int = Field(D.ROW_BATCH_SIZE, ge=1)
    transport_row_retries: int = Field(D.TRANSPORT_ROW_RETRIES, ge=0)
    llm_max_retries: int = Field(D.LLM_MAX_RETRIES, ge=0)
    llm_retry_base_delay: float = Field(D.LLM_RETRY_BASE_DELAY, ge=0)
    llm_requests_per_second: float = Field(D.LLM_REQUESTS_PER_SECOND, ge=0)
    llm_max_output_tokens: int = Field(D.LLM_MAX_OUTPUT_TOKENS, ge=1)
    hub_split: str = Field("train", min_length=1)
    hub_cache_ttl_seconds: int = Field(D.HUB_CACHE_TTL_SECONDS, ge=0)
    hub_requests_per_second: float = Field(D.HUB_REQUESTS_PER_SECOND, ge=0)
    embedder: EmbedderKind = EmbedderKind.HASHING
    embedding_dimension: int = Field(D.EMBEDDING_DIMENSION, ge=1)
    embedding_model: str = Field(ModelDefaults.EMBEDDING.value, min_length=1)
    incontext_dir: Optional[Path] = None
    cache_dir: Optional[Path] = None
    quality_workers: int = Field(D.QUALITY_WORKERS, ge=1)


_BOUND_PHRASES = {
    "greater_than_equal": ("≥", "ge"),
    "greater_than": (">", "gt"),
    "less_than_equal": ("≤", "le"),
    "less_than": ("<", "lt"),
}


def _describe(error: Mapping[str, Any]) -> tuple[str, str]:
    field = ".".join(str(part) for part in error["loc"]) or "config"
    phrase = _BOUND_PHRASES.get(error["type"])
    if phrase is not None:
        symbol, key = phrase
        return field, f"{field} must be {symbol} {error['ctx'][key]}"
    return field, f"{field}: {error['msg']}"


def validate_config(config: Union[PipelineConfig, Mapping[str, Any]]) -> PipelineConfig:
    """Validate a config, returning it unchanged when every invariant holds

    Args:
        config: A PipelineConfig (possibly built with model_copy, which skips validation) or a raw mapping

    Returns:
        The validated PipelineConfig

    Raises:
        ConfigValidationError: Naming the first violated field
    """
    raw = config.model_dump() if isinstance(config, PipelineConfig) else dict(config)
    try:
        validated = PipelineConfig.model_validate(raw)
    except ValidationError as exc:
        field, message = _describe(exc.errors()[0])
        raise ConfigValidationError(field, message) from exc
    return config if isinstance(config, PipelineConfig) else validated
