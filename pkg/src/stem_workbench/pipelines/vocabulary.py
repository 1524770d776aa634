"""
Vocabulary Stemming (VS)

Every unique word of the corpus and the queries is stemmed once,
without context, and the resulting word -> stems mapping is applied to
all token streams. The stemmer can be the LLM (batched "original
word:stem" prompts) or any classic stemmer.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple
import logging
import re

from joblib import Parallel, delayed
from tqdm import tqdm

from ..core.telemetry import RunTelemetry
from ..core.text_processing import TokenStream
from ..llm.cache import StemCache
from ..llm.gateway import LLMGateway
from ..llm.prompts import DEFAULT_VS_BATCH_SIZE, VS_ANSWER, OneShotSamples, build_vs_prompt
from ..stemmers.base_stemmer import BaseStemmer, StemmerKind

logger = logging.getLogger(__name__)

VS_LINE_PATTERN = re.compile(r"^\s*([^\W_]+)\s*:\s*([^\W_]+(?:[ \t]+[^\W_]+)*)\s*$")


@dataclass
class StemMapping:
    """Vocabulary-level word -> ordered stems mapping."""

    mapping: Dict[str, List[str]] = field(default_factory=dict)

    def stems_for(self, word: str, first_stem_only: bool = False) -> List[str]:
        """
        Stems emitted for a word.

        Args:
            word: Token
            first_stem_only: Keep only the first stem of multi-stem entries

        Returns:
            Mapped stems, or ``[word]`` when the word is unmapped
        """
        stems = self.mapping.get(word)
        if not stems:
            return [word]
        return stems[:1] if first_stem_only else list(stems)

    def __contains__(self, word: str) -> bool:
        return word in self.mapping

    def __len__(self) -> int:
        return len(self.mapping)


def parse_vs_response(text: str) -> Tuple[StemMapping, int]:
    """
    Parse a vocabulary stemming response.

    Each line of the form ``word:stem [stem ...]`` contributes an entry;
    the first occurrence of a word wins.

    Args:
        text: Assistant text

    Returns:
        Tuple of (parsed mapping, number of non-empty lines skipped)
    """
    mapping: Dict[str, List[str]] = {}
    skipped = 0
    for line in (text or "").splitlines():
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith(VS_ANSWER):
            stripped = stripped[len(VS_ANSWER):]
        match = VS_LINE_PATTERN.match(stripped)
        if not match:
            skipped += 1
            logger.debug(f"Skipping non-conforming VS line: {line!r}")
            continue
        word = match.group(1).lower()
        if word not in mapping:
            mapping[word] = match.group(2).lower().split()
    if skipped:
        logger.warning(f"{skipped} line(s) of a VS response did not follow 'original word:stem'")
    return StemMapping(mapping), skipped


class LlmVocabularyStemmer(BaseStemmer):
    """
    Batch stemmer that asks the LLM for the stems of up to
    ``batch_size`` words per request.

    ``stem_batch`` only returns words the LLM actually answered for;
    callers decide how to treat the rest.
    """

    kind = StemmerKind.LLM_VOCABULARY

    def __init__(self,
                 gateway: LLMGateway,
                 samples: OneShotSamples,
                 batch_size: int = DEFAULT_VS_BATCH_SIZE,
                 telemetry: Optional[RunTelemetry] = None):
        self.gateway = gateway
        self.samples = samples
        self.batch_size = batch_size
        self.telemetry = telemetry or gateway.telemetry
        logger.info(f"Initialized LlmVocabularyStemmer with batch size {batch_size}")

    def stem(self, word: str) -> str:
        return self.stem_batch([word]).get(word, [word])[0]

    def stem_batch(self, words: Iterable[str]) -> Dict[str, List[str]]:
        words = list(words)
        request = build_vs_prompt(words, self.samples, self.batch_size, **self.gateway.decoding)
        self.telemetry.incr('vs_terms_sent', len(words))
        response = self.gateway.complete(request)
        parsed, skipped = parse_vs_response(response)
        self.telemetry.incr('vs_skipped_lines', skipped)
        requested = set(words)
        return {word: stems for word, stems in parsed.mapping.items() if word in requested}


def _batches(words: Sequence[str], size: int) -> List[List[str]]:
    return [list(words[i:i + size]) for i in range(0, len(words), size)]


def vocabulary_stem(corpus: Iterable[TokenStream],
                    stemmer: BaseStemmer,
                    cache: Optional[StemCache] = None,
                    workers: int = 1,
                    telemetry: Optional[RunTelemetry] = None,
                    progress: bool = False) -> StemMapping:
    """
    Stem the vocabulary of a corpus.

    Cached words are resolved first; the rest is sent to the stemmer in
    batches. Batches run in waves of ``workers`` concurrent requests and
    the cache is checkpointed after every wave, so an aborted run keeps
    what it already paid for.

    Args:
        corpus: Token streams of documents and queries
        stemmer: LLM vocabulary stemmer or classic stemmer
        cache: Optional write-once stem cache
        workers: Concurrent batches per wave
        telemetry: Counter sink
        progress: Show a progress bar

    Returns:
        StemMapping covering the whole vocabulary
    """
    telemetry = telemetry or RunTelemetry()
    vocabulary = sorted({token for tokens in corpus for token in tokens})
    mapping: Dict[str, List[str]] = {}
    pending = []
    for word in vocabulary:
        stems = cache.get(word) if cache is not None else None
        if stems is not None:
            mapping[word] = stems
        else:
            pending.append(word)
    telemetry.incr('vs_vocabulary', len(vocabulary))
    telemetry.incr('vs_cache_hits', len(vocabulary) - len(pending))
    logger.info(f"Vocabulary of {len(vocabulary)} words, {len(pending)} not cached")

    batch_size = getattr(stemmer, 'batch_size', DEFAULT_VS_BATCH_SIZE)
    batches = _batches(pending, batch_size)
    workers = max(1, workers)
    waves = range(0, len(batches), workers)
    try:
        for start in tqdm(waves, desc="VS batches", unit="wave", disable=not progress):
            wave = batches[start:start + workers]
            results = Parallel(n_jobs=len(wave), backend="threading")(
                delayed(stemmer.stem_batch)(batch) for batch in wave
            )
            for batch, result in zip(wave, results):
                for word in batch:
                    stems = result.get(word)
                    if stems:
                        mapping[word] = stems
                        if cache is not None:
                            cache.put(word, stems)
                    else:
                        mapping[word] = [word]
                        telemetry.incr('vs_unresolved')
            if cache is not None:
                cache.checkpoint()
    except Exception:
        if cache is not None:
            cache.checkpoint()
        raise

    unresolved = telemetry.get('vs_unresolved')
    if unresolved:
        logger.warning(f"{unresolved} vocabulary words were not returned by the stemmer; kept unstemmed")
    return StemMapping({word: mapping[word] for word in vocabulary})


def apply_mapping(tokens: TokenStream, mapping: StemMapping,
                  first_stem_only: bool = False) -> TokenStream:
    """
    Replace every token by its mapped stems.

    Args:
        tokens: Token stream
        mapping: Vocabulary mapping
        first_stem_only: Emit only the first stem per token

    Returns:
        Stream of length sum(len(stems(token)))
    """
    output: TokenStream = []
    for token in tokens:
        output.extend(mapping.stems_for(token, first_stem_only))
    return output
