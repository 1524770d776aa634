"""
One-Shot Prompt Templates

Prompt builders for the three LLM stemming methods: vocabulary
stemming (VS), contextual stemming (CS) and entity extraction for
entity-based contextual stemming (ECS). Each prompt contains a single
worked example taken from ``OneShotSamples`` before the real input.
"""

from dataclasses import dataclass, asdict
from pathlib import Path
from typing import Optional, Sequence, Union
import re
import logging

import yaml

from ..core.text_processing import tokenize
from ..exceptions import ConfigError, InvalidArgumentError, NotFoundError

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES_PATH = Path(__file__).resolve().parent.parent / 'data' / 'one_shot_samples.yaml'

DEFAULT_VS_BATCH_SIZE = 50
VS_MAX_OUTPUT_TOKENS = 512
ECS_MAX_OUTPUT_TOKENS = 512
CS_OUTPUT_FACTOR = 4
CS_MIN_OUTPUT_TOKENS = 64

VS_QUESTION = "Can you provide the stemmed version of these terms?"
VS_ANSWER = "Stemmer:"
CS_QUESTION = "Can you provide the stemmed version of this paragraph?"
CS_ANSWER = "Stemmed paragraph:"
ECS_QUESTION = "Can you extract all entities from the following paragraph?"
ECS_ANSWER = "Extracted entities:"

VS_INSTRUCTIONS = (
    "You are a professional stemmer that is responsible to stem text. Text stemming is a "
    "natural language processing technique that is used to reduce words to their base form, "
    "also known as the root form. The process of stemming is used to normalize text and make "
    "it easier to process.\n"
    "Your output should strictly follow the format \"original word:stem\". If a single original "
    "word produces multiple stems, separate the stems with a space."
)

CS_INSTRUCTIONS = (
    "You specialize in text stemming, text stemming is a natural language processing technique "
    "that is used to reduce words to their base form, also known as the root form. The process "
    "of stemming is used to normalize text and make it easier to process. You should stem every "
    "word except from names of people, places, organisations, brands. For example, the words "
    "\"programming,\" \"programmer,\" and \"programs\" can all be reduced down to the common stem "
    "\"program\". However, in the sentence \"Programs PTY. LTD. sold for 1 billion euros\", the "
    "word \"programs\" should not be stemmed because it refers to the name of a company."
)

ECS_INSTRUCTIONS = (
    "You specialize in identifying and preserving entities, such as names, brands, or "
    "organisations, within text paragraphs. It's imperative to ensure these terms are not "
    "stemmed to enhance search engine performance."
)

VS_TEMPLATE = (
    "{instructions}\n"
    "{question} {terms_sample}\n"
    "{answer} {stemmed_sample}\n"
    "{question} {terms}\n"
    "{answer}"
)

PARAGRAPH_TEMPLATE = (
    "{instructions}\n"
    "{question}\n"
    "{sample}\n"
    "{answer}\n"
    "{sample_answer}\n"
    "{question}\n"
    "{paragraph}\n"
    "{answer}"
)

_STEM_LINE = re.compile(r"^\s*[^\W_]+\s*:\s*[^\W_]+(?:[ \t]+[^\W_]+)*\s*$")


@dataclass(frozen=True)
class ChatRequest:
    """A single chat-completion request."""

    user_text: str
    system_text: Optional[str] = None
    temperature: float = 0.0
    top_p: float = 1.0
    max_output_tokens: int = VS_MAX_OUTPUT_TOKENS

    def __post_init__(self):
        if not self.user_text:
            raise InvalidArgumentError("user_text must be non-empty")
        if self.temperature < 0:
            raise InvalidArgumentError(f"temperature must be >= 0, got {self.temperature}")
        if not 0 < self.top_p <= 1:
            raise InvalidArgumentError(f"top_p must be in (0, 1], got {self.top_p}")
        if self.max_output_tokens < 1:
            raise InvalidArgumentError(f"max_output_tokens must be >= 1, got {self.max_output_tokens}")


@dataclass(frozen=True)
class OneShotSamples:
    """The worked examples substituted into the prompts."""

    terms_sample: str
    stemmed_sample: str
    paragraph_sample: str
    stemmed_paragraph_sample: str
    entities_extracted_sample: str

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not value or not value.strip():
                raise ConfigError(f"One-shot sample '{name}' must be non-empty")
        for line in self.stemmed_sample.strip().splitlines():
            if not _STEM_LINE.match(line):
                raise ConfigError(
                    f"stemmed_sample line does not follow 'original word:stem': {line!r}"
                )


def load_samples(path: Optional[Union[str, Path]] = None) -> OneShotSamples:
    """
    Load one-shot samples from a YAML file.

    Args:
        path: YAML file with the five sample keys; the bundled samples
            are used when omitted

    Returns:
        OneShotSamples
    """
    path = Path(path) if path else DEFAULT_SAMPLES_PATH
    if not path.exists():
        raise NotFoundError(f"One-shot samples file not found: {path}")
    with open(path, encoding='utf-8') as f:
        data = yaml.safe_load(f) or {}
    try:
        samples = OneShotSamples(**{key: str(value).strip() for key, value in data.items()})
    except TypeError as e:
        raise ConfigError(f"Invalid one-shot samples file {path}: {e}") from e
    logger.debug(f"Loaded one-shot samples from {path}")
    return samples


def build_vs_prompt(terms: Sequence[str],
                    samples: OneShotSamples,
                    batch_size: int = DEFAULT_VS_BATCH_SIZE,
                    temperature: float = 0.0,
                    top_p: float = 1.0) -> ChatRequest:
    """
    Build a vocabulary stemming prompt for a batch of terms.

    Args:
        terms: Between 1 and ``batch_size`` words
        samples: One-shot samples
        batch_size: Largest allowed batch
        temperature: Sampling temperature
        top_p: Nucleus sampling mass

    Returns:
        ChatRequest whose user text ends with "Stemmer:"
    """
    if not terms:
        raise InvalidArgumentError("VS prompt needs at least one term")
    if len(terms) > batch_size:
        raise InvalidArgumentError(f"VS batch of {len(terms)} terms exceeds batch size {batch_size}")
    user_text = VS_TEMPLATE.format(
        instructions=VS_INSTRUCTIONS,
        question=VS_QUESTION,
        answer=VS_ANSWER,
        terms_sample=samples.terms_sample,
        stemmed_sample=samples.stemmed_sample,
        terms=" ".join(terms),
    )
    return ChatRequest(user_text=user_text, temperature=temperature, top_p=top_p,
                       max_output_tokens=VS_MAX_OUTPUT_TOKENS)


def _paragraph_prompt(instructions: str, question: str, answer: str,
                      sample: str, sample_answer: str, paragraph: str) -> str:
    return PARAGRAPH_TEMPLATE.format(
        instructions=instructions,
        question=question,
        answer=answer,
        sample=sample,
        sample_answer=sample_answer,
        paragraph=paragraph,
    )


def build_cs_prompt(paragraph: str,
                    samples: OneShotSamples,
                    temperature: float = 0.0,
                    top_p: float = 1.0) -> ChatRequest:
    """
    Build a contextual stemming prompt for one document or query.

    Args:
        paragraph: Text to stem
        samples: One-shot samples
        temperature: Sampling temperature
        top_p: Nucleus sampling mass

    Returns:
        ChatRequest whose user text ends with "Stemmed paragraph:"
    """
    if not paragraph or not paragraph.strip():
        raise InvalidArgumentError("CS prompt needs a non-empty paragraph")
    user_text = _paragraph_prompt(CS_INSTRUCTIONS, CS_QUESTION, CS_ANSWER,
                                  samples.paragraph_sample, samples.stemmed_paragraph_sample,
                                  paragraph)
    max_tokens = max(CS_MIN_OUTPUT_TOKENS, CS_OUTPUT_FACTOR * len(tokenize(paragraph)))
    return ChatRequest(user_text=user_text, temperature=temperature, top_p=top_p,
                       max_output_tokens=max_tokens)


def build_ecs_prompt(paragraph: str,
                     samples: OneShotSamples,
                     temperature: float = 0.0,
                     top_p: float = 1.0) -> ChatRequest:
    """
    Build an entity extraction prompt for one document or query.

    Args:
        paragraph: Text to extract entities from
        samples: One-shot samples
        temperature: Sampling temperature
        top_p: Nucleus sampling mass

    Returns:
        ChatRequest whose user text ends with "Extracted entities:"
    """
    if not paragraph or not paragraph.strip():
        raise InvalidArgumentError("ECS prompt needs a non-empty paragraph")
    user_text = _paragraph_prompt(ECS_INSTRUCTIONS, ECS_QUESTION, ECS_ANSWER,
                                  samples.paragraph_sample, samples.entities_extracted_sample,
                                  paragraph)
    return ChatRequest(user_text=user_text, temperature=temperature, top_p=top_p,
                       max_output_tokens=ECS_MAX_OUTPUT_TOKENS)


def extract_vs_terms(user_text: str) -> Optional[Sequence[str]]:
    """Recover the real terms from a VS prompt, or None for other prompts."""
    if not user_text.startswith(VS_INSTRUCTIONS) or not user_text.endswith(VS_ANSWER):
        return None
    lines = user_text.splitlines()
    if len(lines) < 2 or not lines[-2].startswith(VS_QUESTION):
        return None
    return lines[-2][len(VS_QUESTION):].split()


def extract_cs_paragraph(user_text: str) -> Optional[str]:
    """Recover the real paragraph from a CS prompt, or None for other prompts."""
    if not user_text.startswith(CS_INSTRUCTIONS) or not user_text.endswith(CS_ANSWER):
        return None
    marker = f"\n{CS_QUESTION}\n"
    start = user_text.rfind(marker)
    if start < 0:
        return None
    return user_text[start + len(marker):-len(f"\n{CS_ANSWER}")]
