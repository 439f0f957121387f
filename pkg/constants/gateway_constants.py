from enum import StrEnum


class GatewayMessages(StrEnum):
    PLACEHOLDER_MISMATCH = "template '{name}' declares {declared} but contains {found}"
    UNKNOWN_TEMPLATE = "unknown prompt template: {name}"
    RETRIES_EXHAUSTED = "provider call failed after {retries} retries: {reason}"
    PROVIDER_ERROR = "provider returned HTTP {status}: {body}"
    TRANSCRIPT_MISS = "mock transcript has no entry for prompt digest {digest}"
    NO_CONTENT = "provider response had no message content"
    MISSING_API_KEY = "LLM_API_KEY is not set; pass --mock-transcript or export the key"


class ProviderFields(StrEnum):
    CHOICES = 'choices'
    MESSAGE = 'message'
    CONTENT = 'content'
    USAGE = 'usage'
    PROMPT_TOKENS = 'prompt_tokens'
    COMPLETION_TOKENS = 'completion_tokens'
    RETRY_AFTER = 'Retry-After'
    COMPLETIONS_PATH = '/chat/completions'
    EMBEDDINGS_PATH = '/embeddings'


class TranscriptFields(StrEnum):
    ENTRIES = 'entries'
    DIGEST = 'digest'
    PATTERN = 'pattern'
    RESPONSE = 'response'
    RESPONSES = 'responses'
    DEFAULT = 'default'
    NULL_SAMPLE = 'null'
