"""
LLM Gateway

Single entry point through which every pipeline talks to a provider.
The gateway bounds the number of in-flight requests, stamps each
request with an identifier and keeps request/character counters.
"""

from typing import Dict, Optional
import itertools
import logging
import threading

from .prompts import ChatRequest
from .providers import ChatProvider, ProviderConfig, create_provider
from ..core.telemetry import RunTelemetry
from ..exceptions import ProviderError

logger = logging.getLogger(__name__)


class LLMGateway:
    """
    Bounded-concurrency access to a chat provider.

    ``complete`` may be called from any number of threads; at most
    ``max_concurrent_requests`` of them reach the provider at once.
    """

    def __init__(self,
                 provider: ChatProvider,
                 config: Optional[ProviderConfig] = None,
                 telemetry: Optional[RunTelemetry] = None):
        """
        Initialize the gateway.

        Args:
            provider: Provider that sends the requests
            config: Provider configuration (concurrency and decoding preset)
            telemetry: Counter sink; a private one is created when omitted
        """
        self.provider = provider
        self.config = config or ProviderConfig()
        self.config.validate()
        self.telemetry = telemetry or RunTelemetry()
        self._semaphore = threading.BoundedSemaphore(self.config.max_concurrent_requests)
        self._ids = itertools.count(1)
        self._id_lock = threading.Lock()
        logger.info(f"Initialized LLMGateway over {provider.name} "
                    f"(max {self.config.max_concurrent_requests} concurrent requests)")

    @classmethod
    def from_config(cls, config: ProviderConfig,
                    telemetry: Optional[RunTelemetry] = None) -> 'LLMGateway':
        return cls(create_provider(config), config, telemetry)

    @property
    def decoding(self) -> Dict[str, float]:
        """Keyword arguments (temperature, top_p) for the prompt builders."""
        return self.config.decoding()

    def _next_request_id(self) -> str:
        with self._id_lock:
            return f"req-{next(self._ids):06d}"

    def complete(self, request: ChatRequest) -> str:
        """
        Send a request through the provider.

        Args:
            request: Chat request

        Returns:
            Assistant text of the first choice
        """
        request_id = self._next_request_id()
        with self._semaphore:
            self.telemetry.incr('llm_requests')
            self.telemetry.incr('llm_prompt_chars', len(request.user_text))
            logger.debug(f"[{request_id}] sending {len(request.user_text)} prompt characters")
            try:
                text = self.provider.complete(request, request_id)
            except ProviderError as e:
                self.telemetry.incr('llm_failures')
                logger.error(f"[{request_id}] request failed: {e}")
                raise
        self.telemetry.incr('llm_response_chars', len(text))
        return text


def complete(config: ProviderConfig, request: ChatRequest) -> str:
    """One-off completion with a freshly created provider."""
    return LLMGateway.from_config(config).complete(request)
