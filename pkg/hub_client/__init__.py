# Dataset corpus access (local directory or remote hub)
from .client import HubClient
from .source import CorpusSource, RowPage

__all__ = ['HubClient', 'CorpusSource', 'RowPage']
