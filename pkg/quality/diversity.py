"""Lexical diversity: distinct bigrams and token counts per example"""
from typing import Sequence

from pydantic import BaseModel, ConfigDict, Field

from quality.rouge import tokenize


class DiversityReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    examples: int = Field(ge=0)
    unique_bigrams_per_example: float = Field(ge=0)
    tokens_per_example: float = Field(ge=0)


def unique_bigrams(tokens: Sequence[str]) -> int:
    return len(set(zip(tokens, tokens[1:])))


def diversity_report(texts: Sequence[str]) -> DiversityReport:
    """Mean over examples of each example's own distinct-bigram count, and mean token count

    Both means are 0.0 for an empty dataset.
    """
    if not texts:
        return DiversityReport(examples=0, unique_bigrams_per_example=0.0, tokens_per_example=0.0)
    token_lists = [tokenize(text) for text in texts]
    bigram_total = sum(unique_bigrams(tokens) for tokens in token_lists)
    token_total = sum(len(tokens) for tokens in token_lists)
    return DiversityReport(
        examples=len(texts),
        unique_bigrams_per_example=bigram_total / len(texts),
        tokens_per_example=token_total / len(texts),
    )
