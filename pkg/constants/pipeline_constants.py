from enum import StrEnum


class PipelineDefaults:
    """Numeric defaults for PipelineConfig (StrEnum cannot hold numbers)"""
    TARGET_EXAMPLE_COUNT = 3000
    RETRIEVAL_K = 25
    MAX_DATASETS = 4
    SELF_CONSISTENCY_VOTES = 5
    FAILURE_RATE_THRESHOLD = 0.5
    PROBE_BATCH_SIZE = 50
    ROUGE_THRESHOLD = 0.7
    MAX_CONCURRENT_LLM_CALLS = 8
    RERANK_TEMPERATURE = 0.7
    SAMPLE_ROWS = 3
    SCHEMA_SAMPLE_ROWS = 1
    MAX_DEMO_EXAMPLES = 2
    ROW_BATCH_SIZE = 100
    TRANSPORT_ROW_RETRIES = 1
    LLM_MAX_RETRIES = 3
    LLM_RETRY_BASE_DELAY = 1.0
    LLM_REQUESTS_PER_SECOND = 10.0
    LLM_MAX_OUTPUT_TOKENS = 1024
    HUB_CACHE_TTL_SECONDS = 86400
    HUB_REQUESTS_PER_SECOND = 5.0
    HUB_PAGE_SIZE = 100
    EMBEDDING_DIMENSION = 256
    QUALITY_WORKERS = 1


class ModelDefaults(StrEnum):
    PLANNER = 'gpt-4-turbo'
    EXECUTOR = 'gpt-3.5-turbo'
    JUDGE = 'gpt-3.5-turbo'
    EMBEDDING = 'text-embedding-3-small'


class EmbedderKind(StrEnum):
    HASHING = 'hashing'
    REMOTE = 'remote'


class AttemptStatus(StrEnum):
    ACCEPTED = 'accepted'
    EXCLUDED_FAILURE_RATE = 'excluded_failure_rate'
    EXCLUDED_UNUSABLE_SCHEMA = 'excluded_unusable_schema'
    EXCLUDED_ERROR = 'excluded_error'
    EXHAUSTED = 'exhausted'


class OutputFiles(StrEnum):
    DATA = 'data.jsonl'
    REPORT = 'report.json'
    CHECKPOINT = 'checkpoint.json'
    ATTEMPTS_DIR = 'attempts'
    PLAN = 'plan.txt'
    SELECTION = 'selection.json'
    QUALITY = 'quality.json'
    INDEX = 'index.json'
