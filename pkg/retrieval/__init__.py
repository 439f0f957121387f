# Dataset retrieval: embedding top-k, then LLM reranking
from .embedders import HashingEmbedder, RemoteEmbedder
from .index import EmbeddingIndex, build_index, load_index, retrieve_top_k, save_index
from .rerank import RerankResult, RerankVote, rerank_once, rerank_with_self_consistency

__all__ = [
    'HashingEmbedder', 'RemoteEmbedder', 'EmbeddingIndex', 'build_index', 'load_index', 'retrieve_top_k',
    'save_index', 'RerankResult', 'RerankVote', 'rerank_once', 'rerank_with_self_consistency',
]
