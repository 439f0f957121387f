from enum import StrEnum


class CliVerbs(StrEnum):
    INDEX = 'index'
    RETRIEVE = 'retrieve'
    RUN = 'run'
    TRANSFORM = 'transform'
    ANALYZE = 'analyze'
    DEDUP = 'dedup'
    REPORT = 'report'
    TASK = 'task'


class CliActions(StrEnum):
    BUILD = 'build'
    IMPORT_BIGBENCH = 'import-bigbench'


class CliDescriptions(StrEnum):
    PROG = 'dataset-repurposer'
    MAIN = 'Find existing datasets for a task and transform their rows into task-aligned training examples.'
    INDEX = 'Embed every dataset card of a corpus and save the index'
    RETRIEVE = 'Show the top-k datasets for a task and the reranker vote'
    RUN = 'Retrieve, rerank and transform datasets until the target example count is met'
    TRANSFORM = 'Transform one named dataset, skipping retrieval'
    ANALYZE = 'Uniqueness, diversity and optional difficulty of an example file'
    DEDUP = 'Drop near-duplicate examples from a JSONL file'
    REPORT = 'Print a run report and re-verify its counters'
    TASK = 'Task file utilities'
    IMPORT_BIGBENCH = 'Convert a BIG-Bench task JSON into the task format'


class CliMessages(StrEnum):
    CORPUS_REQUIRED = "one of --corpus or --hub is required"
    WROTE_INDEX = "index of {count} datasets written to {path}"
    RUN_DONE = "{produced} examples written to {path}"
    PARTIAL_RUN = "only {produced} of {target} requested examples were produced"
    ANALYZE_DONE = "quality report written to {path}"
    EXPORTED = "{count} inputs exported to {path}"
    DEDUP_DONE = "kept {kept} of {total} examples in {path}"
    REPORT_OK = "counter identity holds for every dataset"
    REPORT_BROKEN = "counter identity violated for dataset {key}"
    TASK_WRITTEN = "task {task_id} with {count} examples written to {path}"
    RERANK_WINNER = "reranker winner: {winner}"
    RERANK_NONE = "reranker winner: NONE"
    BAD_TASK_FILE = "cannot read task file {path}: {error}"
    BAD_BIGBENCH = "{path} has no usable examples (need examples[].input and target)"
    MISSING_API_KEY = "LLM_API_KEY is not set; pass --mock-transcript or export the key"
    INTERRUPTED = "interrupted"


class CliFlags(StrEnum):
    TARGET_COUNT_ALIAS = '--target-count'
    MOCK_TRANSCRIPT = '--mock-transcript'
    CONFIG = '--config'
