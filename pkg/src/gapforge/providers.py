"""Chat-LLM and embedding providers, live (HTTP) and mock (deterministic).

The live providers speak the common chat-completions / embeddings JSON
wire format against a configurable base URL; model names are pure
config. The mocks make the whole pipeline deterministic for tests and
demo builds:

* decomposition  = sentence split of the paragraph,
* inferability   = casefolded, punctuation-stripped containment in
                   either direction,
* translation    = the input tagged with a language marker,
* embeddings     = seeded hash of character n-grams into a fixed-dim
                   vector (language-blind but stable across platforms).
"""

from __future__ import annotations

import hashlib
import re
import threading
import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Any, Protocol, Sequence

import requests

from .errors import ProviderError
from .segmentation import split_sentences

LANGUAGE_NAMES = {"en": "English", "fr": "French", "ru": "Russian", "zh": "Chinese"}

STRICT_DECOMPOSE_REMINDER = "Output one fact per line. No numbering, no commentary, nothing else."
STRICT_VERIFY_REMINDER = 'Answer exactly "yes N" or "no".'
STRICT_TRANSLATE_REMINDER = "Output only the English translation."

_PROMPT_FILES = (
    "decompose.en.txt",
    "decompose.fr.txt",
    "decompose.ru.txt",
    "decompose.zh.txt",
    "verify.en.txt",
    "verify.fr.txt",
    "verify.ru.txt",
    "verify.zh.txt",
    "translate.txt",
)


@lru_cache(maxsize=None)
def _load_template(name: str) -> tuple[str, str]:
    """Return (system, user) halves of a prompt template file."""
    raw = resources.files("gapforge").joinpath("prompts", name).read_text(encoding="utf-8")
    system, _, user = raw.partition("\n---\n")
    return system.strip(), user.strip()


def prompt_hash() -> str:
    """Stable digest over all shipped prompt templates, for provenance."""
    h = hashlib.sha256()
    for name in _PROMPT_FILES:
        raw = resources.files("gapforge").joinpath("prompts", name).read_bytes()
        h.update(name.encode("utf-8"))
        h.update(b"\x00")
        h.update(raw)
        h.update(b"\x00")
    return h.hexdigest()[:16]


def has_decompose_template(language_code: str) -> bool:
    return f"decompose.{language_code}.txt" in _PROMPT_FILES


# ---------------------------------------------------------------------------
# chat-LLM providers
# ---------------------------------------------------------------------------


class ChatLlmProvider(Protocol):
    """Task-level chat-LLM surface.

    Each method returns the provider's raw text output; the calling
    operation owns parsing, validation, and the single strict retry.
    """

    def decompose(self, paragraph_text: str, language_code: str, *, strict: bool = False) -> str: ...

    def verify(
        self, target_text: str, neighbor_texts: Sequence[str], language_code: str, *, strict: bool = False
    ) -> str: ...

    def translate(self, text: str, source_lang: str, *, strict: bool = False) -> str: ...


@dataclass
class LlmConfig:
    base_url: str
    model: str
    api_key: str | None = None
    translate_model: str | None = None  # defaults to `model`
    temperature: float = 0.0
    request_budget: int | None = None
    timeout: float = 120.0


class HttpLlmProvider:
    """Chat-completions client over a provider-agnostic HTTP endpoint."""

    def __init__(self, config: LlmConfig, session: Any | None = None) -> None:
        self.config = config
        self._session = session or requests.Session()
        self._requests_made = 0
        self._budget_lock = threading.Lock()

    def _spend_budget(self) -> None:
        with self._budget_lock:
            budget = self.config.request_budget
            if budget is not None and self._requests_made >= budget:
                raise ProviderError(f"request budget of {budget} exhausted")
            self._requests_made += 1

    def _complete(self, system: str, user: str, model: str) -> str:
        self._spend_budget()
        headers = {"Content-Type": "application/json"}
        if self.config.api_key:
            headers["Authorization"] = f"Bearer {self.config.api_key}"
        payload = {
            "model": model,
            "temperature": self.config.temperature,
            "messages": [
                {"role": "system", "content": system},
                {"role": "user", "content": user},
            ],
        }
        try:
            resp = self._session.post(
                self.config.base_url, json=payload, headers=headers, timeout=self.config.timeout
            )
        except requests.RequestException as exc:
            raise ProviderError(f"chat endpoint unreachable: {exc}") from exc
        if getattr(resp, "status_code", 200) != 200:
            raise ProviderError(f"chat endpoint returned HTTP {resp.status_code}")
        try:
            return resp.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise ProviderError(f"malformed chat response: {exc}") from exc

    def decompose(self, paragraph_text: str, language_code: str, *, strict: bool = False) -> str:
        system, user = _load_template(f"decompose.{language_code}.txt")
        prompt = user.format(paragraph=paragraph_text)
        if strict:
            prompt = f"{prompt}\n\n{STRICT_DECOMPOSE_REMINDER}"
        return self._complete(system, prompt, self.config.model)

    def verify(
        self, target_text: str, neighbor_texts: Sequence[str], language_code: str, *, strict: bool = False
    ) -> str:
        system, user = _load_template(f"verify.{language_code}.txt")
        numbered = "\n".join(f"{i + 1}. {t}" for i, t in enumerate(neighbor_texts))
        prompt = user.format(target_fact=target_text, neighbors=numbered)
        if strict:
            prompt = f"{prompt}\n\n{STRICT_VERIFY_REMINDER}"
        return self._complete(system, prompt, self.config.model)

    def translate(self, text: str, source_lang: str, *, strict: bool = False) -> str:
        system, user = _load_template("translate.txt")
        name = LANGUAGE_NAMES.get(source_lang, source_lang)
        prompt = user.format(language_name=name, text=text)
        if strict:
            prompt = f"{prompt}\n\n{STRICT_TRANSLATE_REMINDER}"
        model = self.config.translate_model or self.config.model
        return self._complete(system, prompt, model)


_PUNCT_STRIP = re.compile(r"\s+")


def normalized_match_text(text: str) -> str:
    """Casefold, drop punctuation, collapse whitespace (mock verifier rule)."""
    kept = "".join(
        ch for ch in text.casefold() if not unicodedata.category(ch).startswith("P")
    )
    return _PUNCT_STRIP.sub(" ", kept).strip()


class MockLlmProvider:
    """Deterministic stand-in: no network, bit-identical output across runs."""

    def __init__(self) -> None:
        self.calls: list[tuple[str, str]] = []

    def decompose(self, paragraph_text: str, language_code: str, *, strict: bool = False) -> str:
        self.calls.append(("decompose", language_code))
        sentences = split_sentences(paragraph_text, language_code)
        return "\n".join(s.text for s in sentences)

    def verify(
        self, target_text: str, neighbor_texts: Sequence[str], language_code: str, *, strict: bool = False
    ) -> str:
        self.calls.append(("verify", language_code))
        target = normalized_match_text(target_text)
        for i, neighbor in enumerate(neighbor_texts):
            other = normalized_match_text(neighbor)
            if target and other and (target in other or other in target):
                return f"yes {i + 1}"
        return "no"

    def translate(self, text: str, source_lang: str, *, strict: bool = False) -> str:
        self.calls.append(("translate", source_lang))
        return f"[{source_lang}] {text}"


# ---------------------------------------------------------------------------
# embedding providers
# ---------------------------------------------------------------------------


class EmbeddingProvider(Protocol):
    dim: int

    def embed_batch(self, texts: Sequence[str]) -> list[list[float]]: ...


@dataclass
class EmbeddingConfig:
    base_url: str
    model: str
    api_key: str | None = None
    timeout: float = 120.0
    dim: int = 768


class HttpEmbeddingProvider:
    """Embeddings client over the common `{"model", "input"}` wire format."""

    def __init__(self, config: EmbeddingConfig, session: Any | None = None) -> None:
        self.config = config
        self.dim = config.dim
        self._session = session or requests.Session()

    def embed_batch(self, texts: Sequence[str]) -> list[list[float]]:
        headers = {"Content-Type": "application/json"}
        if self.config.api_key:
            headers["Authorization"] = f"Bearer {self.config.api_key}"
        payload = {"model": self.config.model, "input": list(texts)}
        try:
            resp = self._session.post(
                self.config.base_url, json=payload, headers=headers, timeout=self.config.timeout
            )
        except requests.RequestException as exc:
            raise ProviderError(f"embedding endpoint unreachable: {exc}") from exc
        if getattr(resp, "status_code", 200) != 200:
            raise ProviderError(f"embedding endpoint returned HTTP {resp.status_code}")
        try:
            rows = resp.json()["data"]
            vectors = [row["embedding"] for row in sorted(rows, key=lambda r: r.get("index", 0))]
        except (ValueError, KeyError, TypeError) as exc:
            raise ProviderError(f"malformed embedding response: {exc}") from exc
        if len(vectors) != len(texts):
            raise ProviderError(f"expected {len(texts)} embeddings, got {len(vectors)}")
        return vectors


@dataclass
class MockEmbeddingProvider:
    """Seeded hash of character n-grams into a fixed-dim vector.

    Language-blind but deterministic and platform-independent: buckets
    and signs come from blake2b digests, accumulation is over integers.
    Identical strings always embed identically; overlapping strings land
    near each other, which is all the plumbing tests need.
    """

    dim: int = 32
    seed: str = "gapforge-mock"
    ngram_sizes: tuple[int, ...] = (2, 3)

    def _bucket(self, gram: str) -> tuple[int, float]:
        digest = hashlib.blake2b(
            f"{self.seed}\x1f{gram}".encode("utf-8"), digest_size=8
        ).digest()
        value = int.from_bytes(digest, "big")
        sign = 1.0 if (value >> 1) & 1 else -1.0
        return value % self.dim, sign

    def embed_one(self, text: str) -> list[float]:
        counts = [0] * self.dim
        folded = text.casefold()
        grams = []
        for size in self.ngram_sizes:
            if len(folded) >= size:
                grams.extend(folded[i : i + size] for i in range(len(folded) - size + 1))
        if not grams:
            grams = [folded]
        for gram in grams:
            bucket, sign = self._bucket(gram)
            counts[bucket] += int(sign)
        if all(c == 0 for c in counts):
            # Degenerate cancellation; fall back to a single whole-text bucket.
            bucket, _ = self._bucket(f"\x1e{text}")
            counts[bucket] = 1
        return [float(c) for c in counts]

    def embed_batch(self, texts: Sequence[str]) -> list[list[float]]:
        return [self.embed_one(t) for t in texts]
