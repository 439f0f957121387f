from enum import StrEnum


class RetrievalMessages(StrEnum):
    DUPLICATE_NAME = "duplicate dataset name: {name}"
    EMPTY_INDEX = "embedding index is empty"
    ALL_SKIPPED = "no card could be embedded; index is empty"
    EMBED_FAILED = "skipping card {name}: {error}"
    DESCRIPTION_MISSING = "card {name} has no description; embedding tags only"
    DIMENSION_MISMATCH = "embedder returned dimension {got}, index expects {expected}"
    ZERO_VECTOR = "embedding text is empty"
    EMPTY_QUERY = "instruction of task {task_id} has no embeddable tokens"
    VOTE_TRANSPORT = "rerank vote {index} failed at transport level, counted as NONE: {error}"
    ALL_VOTES_FAILED = "every rerank vote failed at transport level"
    CONFIG_DEFAULTED = "reranker named {name} without a config; using {config}"
    NO_ANSWER = "rerank vote {index} named no candidate: {answer!r}"


class IndexFields(StrEnum):
    ENTRIES = 'entries'
    NAME = 'name'
    DIGEST = 'description_digest'
    VECTOR = 'vector'
    DIMENSION = 'dimension'
    EMBEDDER_ID = 'embedder_id'


class RerankLabels(StrEnum):
    NONE = 'NONE'
    SCHEMA_HEADER = ' Columns: '
    SAMPLES_HEADER = ' Sample rows: '
    NO_TAGS = '(none)'
