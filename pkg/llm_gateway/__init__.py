# Completion-model access
from .gateway import LlmGateway, build_gateway
from .json_extract import extract_json
from .providers import HttpProvider, MockProvider
from .templates import PromptTemplate, get_template, render_prompt
from .types import LlmRequest, LlmResponse, NullSample

__all__ = [
    'LlmGateway', 'build_gateway', 'extract_json', 'HttpProvider', 'MockProvider',
    'PromptTemplate', 'get_template', 'render_prompt', 'LlmRequest', 'LlmResponse', 'NullSample',
]
