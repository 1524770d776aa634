"""
LLM access: prompts, providers, gateway and the caches.
"""

from .prompts import (
    ChatRequest,
    OneShotSamples,
    build_cs_prompt,
    build_ecs_prompt,
    build_vs_prompt,
    load_samples,
)
from .providers import (
    ChatProvider,
    HttpChatProvider,
    MockChatProvider,
    ProviderConfig,
    create_provider,
    load_mock_table,
    record_mock_table,
)
from .gateway import LLMGateway, complete
from .cache import ResponseCache, StemCache

__all__ = [
    'ChatRequest',
    'OneShotSamples',
    'build_cs_prompt',
    'build_ecs_prompt',
    'build_vs_prompt',
    'load_samples',
    'ChatProvider',
    'HttpChatProvider',
    'MockChatProvider',
    'ProviderConfig',
    'create_provider',
    'load_mock_table',
    'record_mock_table',
    'LLMGateway',
    'complete',
    'ResponseCache',
    'StemCache',
]
