"""
Chat Completion Providers

Transport layer for the LLM stemming methods: an OpenAI-compatible HTTP
provider with retries and exponential backoff, and a deterministic
offline mock that answers from a prompt-hash table or from a rule.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, Optional, Tuple, Union
import hashlib
import logging
import os
import re
import threading

import requests
from tenacity import (
    Retrying,
    before_sleep_log,
    retry_if_exception_type,
    stop_after_attempt,
    wait_exponential,
)

from .prompts import ChatRequest, extract_cs_paragraph, extract_vs_terms
from ..core.text_processing import tokenize
from ..exceptions import (
    AuthError,
    ConfigError,
    MalformedResponseError,
    NotFoundError,
    ParseError,
    TransportError,
)
from ..stemmers.porter import porter_stem

logger = logging.getLogger(__name__)

PROVIDER_KINDS = ("mock", "http")
MOCK_MODES = ("identity", "porter", "none")
MAX_RETRIES_LIMIT = 10

# Decoding presets: remote chat APIs accept temperature 0; local open-model
# servers are run with a tiny temperature and nucleus sampling.
DECODING_PRESETS: Dict[str, Tuple[float, float]] = {
    "remote": (0.0, 1.0),
    "open-model": (1e-6, 0.9),
}

RETRYABLE_STATUS = {429, 500, 502, 503, 504}
AUTH_STATUS = {401, 403}
# Network failures worth another attempt; any other requests error is final.
TRANSIENT_REQUEST_ERRORS = (
    requests.ConnectionError,
    requests.Timeout,
    requests.exceptions.ChunkedEncodingError,
    requests.exceptions.ContentDecodingError,
)


@dataclass
class ProviderConfig:
    """Configuration for reaching a chat-completion LLM."""

    kind: str = "mock"
    endpoint_url: str = "https://api.openai.com/v1"
    model_name: str = "gpt-3.5-turbo-0613"
    api_key_env: str = "OPENAI_API_KEY"
    max_retries: int = 3
    backoff_base: float = 1.0
    max_concurrent_requests: int = 4
    request_timeout: float = 60.0
    preset: str = "remote"
    temperature: Optional[float] = None
    top_p: Optional[float] = None
    mock_mode: str = "identity"
    mock_table_path: Optional[str] = None

    def validate(self) -> None:
        """Raise ConfigError when a field is out of range."""
        if self.kind not in PROVIDER_KINDS:
            raise ConfigError(f"provider.kind must be one of {PROVIDER_KINDS}, got '{self.kind}'")
        if not 0 <= self.max_retries <= MAX_RETRIES_LIMIT:
            raise ConfigError(f"provider.max_retries must be in [0, {MAX_RETRIES_LIMIT}]")
        if self.max_concurrent_requests < 1:
            raise ConfigError("provider.max_concurrent_requests must be >= 1")
        if self.backoff_base < 0 or self.request_timeout <= 0:
            raise ConfigError("provider.backoff_base must be >= 0 and request_timeout > 0")
        if self.preset not in DECODING_PRESETS:
            raise ConfigError(f"provider.preset must be one of {tuple(DECODING_PRESETS)}")
        if self.mock_mode not in MOCK_MODES:
            raise ConfigError(f"provider.mock_mode must be one of {MOCK_MODES}")
        if self.kind == "http" and (not self.endpoint_url or not self.model_name):
            raise ConfigError("http provider needs endpoint_url and model_name")

    def decoding(self) -> Dict[str, float]:
        """Temperature and top_p after applying the preset and explicit overrides."""
        temperature, top_p = DECODING_PRESETS[self.preset]
        if self.temperature is not None:
            temperature = self.temperature
        if self.top_p is not None:
            top_p = self.top_p
        return {'temperature': temperature, 'top_p': top_p}


class ChatProvider(ABC):
    """Base interface for chat-completion providers."""

    @abstractmethod
    def complete(self, request: ChatRequest, request_id: str) -> str:
        """
        Send one request and return the assistant text.

        Args:
            request: Chat request
            request_id: Identifier carried by errors and log lines

        Returns:
            Assistant message text
        """
        pass

    @property
    @abstractmethod
    def name(self) -> str:
        pass


class _TransientFailure(Exception):
    """Retryable failure (network problem, 429 or 5xx)."""


class HttpChatProvider(ChatProvider):
    """OpenAI-compatible chat-completions client."""

    def __init__(self, config: ProviderConfig, session: Optional[requests.Session] = None):
        self.config = config
        self.session = session or requests.Session()
        url = config.endpoint_url.rstrip('/')
        self.url = url if url.endswith('/chat/completions') else f"{url}/chat/completions"
        logger.info(f"Initialized HttpChatProvider for {config.model_name} at {self.url}")

    @property
    def name(self) -> str:
        return f"http:{self.config.model_name}"

    def _headers(self, request_id: str) -> Dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.config.api_key_env:
            api_key = os.environ.get(self.config.api_key_env)
            if not api_key:
                raise AuthError(
                    f"Environment variable {self.config.api_key_env} is not set", request_id
                )
            headers["Authorization"] = f"Bearer {api_key}"
        return headers

    def _payload(self, request: ChatRequest) -> Dict:
        messages = []
        if request.system_text:
            messages.append({"role": "system", "content": request.system_text})
        messages.append({"role": "user", "content": request.user_text})
        return {
            "model": self.config.model_name,
            "messages": messages,
            "temperature": request.temperature,
            "top_p": request.top_p,
            "max_tokens": request.max_output_tokens,
        }

    def _post_once(self, payload: Dict, headers: Dict[str, str], request_id: str) -> str:
        try:
            response = self.session.post(self.url, json=payload, headers=headers,
                                         timeout=self.config.request_timeout)
        except TRANSIENT_REQUEST_ERRORS as e:
            raise _TransientFailure(f"connection error: {e}") from e
        except requests.RequestException as e:
            raise TransportError(f"Request to {self.url} failed: {e}", request_id) from e

        if response.status_code in AUTH_STATUS:
            raise AuthError(f"Provider rejected credentials (HTTP {response.status_code})", request_id)
        if response.status_code in RETRYABLE_STATUS:
            raise _TransientFailure(f"HTTP {response.status_code}")
        if response.status_code >= 400:
            raise TransportError(
                f"Provider returned HTTP {response.status_code}: {response.text[:200]}", request_id
            )

        try:
            data = response.json()
            content = data["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as e:
            raise MalformedResponseError(f"No assistant text in response: {e}", request_id) from e
        if not isinstance(content, str):
            raise MalformedResponseError("Assistant content is not text", request_id)
        return content

    def complete(self, request: ChatRequest, request_id: str) -> str:
        headers = self._headers(request_id)
        payload = self._payload(request)
        attempts = self.config.max_retries + 1
        retrying = Retrying(
            stop=stop_after_attempt(attempts),
            wait=wait_exponential(multiplier=self.config.backoff_base, max=60),
            retry=retry_if_exception_type(_TransientFailure),
            before_sleep=before_sleep_log(logger, logging.WARNING),
            reraise=True,
        )
        try:
            return retrying(self._post_once, payload, headers, request_id)
        except _TransientFailure as e:
            raise TransportError(f"Request failed after {attempts} attempts: {e}", request_id) from e


def prompt_hash(user_text: str) -> str:
    """SHA-256 hex digest keying the mock table."""
    return hashlib.sha256(user_text.encode('utf-8')).hexdigest()


_ESCAPES = {'n': '\n', 't': '\t', 'r': '\r', '\\': '\\'}
_ESCAPE_PATTERN = re.compile(r'\\(.)')


def escape_field(text: str) -> str:
    return (text.replace('\\', '\\\\').replace('\n', '\\n')
            .replace('\t', '\\t').replace('\r', '\\r'))


def unescape_field(text: str) -> str:
    return _ESCAPE_PATTERN.sub(lambda m: _ESCAPES.get(m.group(1), m.group(0)), text)


def load_mock_table(path: Union[str, Path]) -> Dict[str, str]:
    """
    Read a mock table of ``PROMPT-SHA256<TAB>response`` records.

    Args:
        path: UTF-8 table file; responses are backslash-escaped

    Returns:
        Mapping prompt hash -> response
    """
    path = Path(path)
    if not path.exists():
        raise NotFoundError(f"Mock table not found: {path}")
    table = {}
    with open(path, encoding='utf-8') as f:
        for line_number, line in enumerate(f, start=1):
            line = line.rstrip('\n')
            if not line or line.startswith('#'):
                continue
            key, sep, response = line.partition('\t')
            if not sep or not re.fullmatch(r'[0-9a-f]{64}', key):
                raise ParseError("expected 'PROMPT-SHA256<TAB>response'", str(path), line_number)
            table[key] = unescape_field(response)
    logger.info(f"Loaded {len(table)} mock responses from {path}")
    return table


def record_mock_table(path: Union[str, Path], records: Iterable[Tuple[str, str]]) -> None:
    """
    Write ``(prompt user text, response)`` pairs as a mock table.

    Args:
        path: Output file
        records: Prompt/response pairs
    """
    with open(path, 'w', encoding='utf-8') as f:
        for user_text, response in records:
            f.write(f"{prompt_hash(user_text)}\t{escape_field(response)}\n")


class MockChatProvider(ChatProvider):
    """
    Deterministic offline provider.

    Answers come from a prompt-hash table first; otherwise the rule mode
    ("identity" or "porter") answers VS and CS prompts programmatically.
    Any other prompt is a recorded miss answered with "".
    """

    def __init__(self, table: Optional[Dict[str, str]] = None, mode: str = "identity"):
        if mode not in MOCK_MODES:
            raise ConfigError(f"Unknown mock mode '{mode}'")
        self.table = dict(table or {})
        self.mode = mode
        self._lock = threading.Lock()
        self.misses = 0
        logger.info(f"Initialized MockChatProvider with {len(self.table)} entries, mode '{mode}'")

    @classmethod
    def from_prompts(cls, responses: Dict[str, str], mode: str = "none") -> 'MockChatProvider':
        """Build a mock from a user_text -> response mapping."""
        return cls({prompt_hash(k): v for k, v in responses.items()}, mode)

    @property
    def name(self) -> str:
        return f"mock:{self.mode}"

    def _stem(self, word: str) -> str:
        return porter_stem(word) if self.mode == "porter" else word

    def _rule_answer(self, user_text: str) -> Optional[str]:
        if self.mode == "none":
            return None
        terms = extract_vs_terms(user_text)
        if terms is not None:
            lines = []
            for term in terms:
                word = term.lower()
                lines.append(f"{word}:{self._stem(word)}")
            return "\n".join(lines)
        paragraph = extract_cs_paragraph(user_text)
        if paragraph is not None:
            if self.mode == "identity":
                return paragraph
            return " ".join(self._stem(token) for token in tokenize(paragraph))
        return None

    def complete(self, request: ChatRequest, request_id: str) -> str:
        key = prompt_hash(request.user_text)
        if key in self.table:
            return self.table[key]
        answer = self._rule_answer(request.user_text)
        if answer is not None:
            return answer
        with self._lock:
            self.misses += 1
        logger.warning(f"[{request_id}] mock provider has no answer for prompt {key[:12]}")
        return ""


def create_provider(config: ProviderConfig) -> ChatProvider:
    """
    Instantiate the provider described by a config.

    Args:
        config: Provider configuration

    Returns:
        HttpChatProvider or MockChatProvider
    """
    config.validate()
    if config.kind == "http":
        return HttpChatProvider(config)
    table = load_mock_table(config.mock_table_path) if config.mock_table_path else {}
    return MockChatProvider(table, config.mock_mode)
