"""
Contextual Stemming (CS)

The whole (already truncated) document or query is handed to the LLM,
which returns a stemmed version of the paragraph. Because the model
sees context it may stem the same word differently in different
documents; outputs are used as returned, never normalized across
documents.
"""

from typing import Optional
import logging

from ..core.telemetry import RunTelemetry
from ..core.text_processing import RawDocument, TokenStream, tokenize
from ..exceptions import ProviderError
from ..llm.cache import ResponseCache
from ..llm.gateway import LLMGateway
from ..llm.prompts import CS_ANSWER, OneShotSamples, build_cs_prompt
from ..llm.providers import prompt_hash

logger = logging.getLogger(__name__)

MIN_LENGTH_RATIO = 0.5
MAX_LENGTH_RATIO = 2.0


def contextual_stem(doc: RawDocument,
                    gateway: LLMGateway,
                    samples: OneShotSamples,
                    telemetry: Optional[RunTelemetry] = None,
                    cache: Optional[ResponseCache] = None) -> TokenStream:
    """
    Stem a document through the LLM.

    The response is tokenized. If the request fails, the response is
    empty or its token count falls outside [0.5, 2.0] times the input
    token count, the original token stream is returned and a
    ``cs_fallbacks`` event is counted. Accepted responses are stored in
    ``cache`` under the prompt hash and reused instead of asking again.

    Args:
        doc: Document whose text is already FirstP-truncated
        gateway: LLM gateway
        samples: One-shot samples
        telemetry: Counter sink (defaults to the gateway's)
        cache: Response cache keyed by prompt SHA-256

    Returns:
        Stemmed token stream
    """
    telemetry = telemetry or gateway.telemetry
    original = tokenize(doc.text)
    if not original:
        return []

    request = build_cs_prompt(doc.text, samples, **gateway.decoding)
    key = prompt_hash(request.user_text)
    cached = cache.get(key) if cache is not None else None
    if cached is not None:
        telemetry.incr('cs_cache_hits')
        return _parse_response(cached)

    try:
        response = gateway.complete(request)
    except ProviderError as e:
        telemetry.incr('cs_fallbacks')
        telemetry.incr('cs_provider_errors')
        logger.warning(f"CS request for {doc.doc_id} failed, keeping original tokens: {e}")
        return original

    stemmed = _parse_response(response)

    ratio = len(stemmed) / len(original)
    if not stemmed or not MIN_LENGTH_RATIO <= ratio <= MAX_LENGTH_RATIO:
        telemetry.incr('cs_fallbacks')
        logger.warning(f"CS output for {doc.doc_id} has {len(stemmed)} tokens for "
                       f"{len(original)} input tokens, keeping original tokens")
        return original
    if cache is not None:
        cache.put(key, response)
    return stemmed


def _parse_response(response: str) -> TokenStream:
    response = response.strip()
    if response.startswith(CS_ANSWER):
        response = response[len(CS_ANSWER):]
    return tokenize(response)
