from enum import StrEnum


class ThresholdDefaults:
    """ROUGE-L uniqueness thresholds by task category"""
    CODE = 0.8
    LONG_TEXT = 0.9
    DEFAULT = 0.7
    BY_TAG = {'code': CODE, 'long_text': LONG_TEXT}


class QualityDefaults:
    # Hashed token-count buckets for the similarity upper bound
    BOUND_BUCKETS = 1024
    # Rows handed to one worker at a time
    ROW_BLOCK = 64
    SCORE_MIN = 1
    SCORE_MAX = 5


class QualityMessages(StrEnum):
    JUDGE_TRANSPORT = "difficulty judging failed for example {index}, counted as unparsed: {error}"
    JUDGE_UNPARSED = "difficulty judge gave no score for example {index}: {answer!r}"
    DEDUP_RESULT = "dedup kept {kept} of {total} examples at threshold {threshold}"
