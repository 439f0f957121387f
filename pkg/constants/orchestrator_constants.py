from enum import StrEnum


class RunFlags(StrEnum):
    EMPTY_DESCRIPTION = 'empty_description:{name}'
    PLAN_FALLBACK = 'plan_fallback:{key}'
    PARTIAL = 'partial:{produced}/{target}'
    RERANK_NONE = 'rerank_none'
    RESUMED = 'resumed'


class OrchestratorMessages(StrEnum):
    NO_CANDIDATES = "no candidate dataset could be loaded for task {task_id}"
    RERANK_NONE = "reranker found no suitable dataset and retrieval-order fallback is disabled"
    ALL_EXCLUDED = "every attempted dataset was excluded; no examples produced"
    CANDIDATE_SKIPPED = "skipping candidate {name}: {error}"
    PROBE_RESULT = "dataset={key} probe {failures}/{attempted} failed (rate {rate:.2f}, threshold {threshold})"
    EXCLUDED = "dataset={key} excluded: {reason}"
    PARTIAL = "produced {produced} of {target} requested examples"
    DISCARDED = "dataset={key} discarded {count} successful rows beyond the quota"
    RESUMING = "resuming task {task_id} from checkpoint: {emitted} examples, {attempts} datasets attempted"
    CHECKPOINT_MISMATCH = "checkpoint in {path} belongs to task {found}, not {expected}"
