"""Pipeline configuration: defaults, config file, env vars, CLI flags.

Precedence is flags > environment > config file > defaults. The config
file is plain ``key = value`` lines with ``#`` comments. The language
set is config, not code; fr/ru/zh is just the default.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Mapping

DEFAULT_SOURCE_LANG = "en"
DEFAULT_TARGET_LANGS = ("fr", "ru", "zh")
DEFAULT_K = 3
DEFAULT_CAP = 10
MOCK_EPOCH = "2025-01-01T00:00:00+00:00"

ENV_LLM_URL = "GAPFORGE_LLM_URL"
ENV_LLM_MODEL = "GAPFORGE_LLM_MODEL"
ENV_LLM_KEY = "GAPFORGE_LLM_KEY"
ENV_EMB_URL = "GAPFORGE_EMB_URL"
ENV_EMB_MODEL = "GAPFORGE_EMB_MODEL"
ENV_TRANSLATE_MODEL = "GAPFORGE_TRANSLATE_MODEL"
ENV_FAKE_NOW = "GAPFORGE_FAKE_NOW"
ENV_CACHE_DIR = "GAPFORGE_CACHE_DIR"
ENV_OUTPUT_DIR = "GAPFORGE_OUTPUT_DIR"


@dataclass
class ProviderSettings:
    llm_url: str = ""
    llm_model: str = ""
    llm_key: str | None = None
    translate_model: str | None = None
    emb_url: str = ""
    emb_model: str = ""


@dataclass
class PipelineConfig:
    source_lang: str = DEFAULT_SOURCE_LANG
    target_langs: tuple[str, ...] = DEFAULT_TARGET_LANGS
    k: int = DEFAULT_K
    cap: int = DEFAULT_CAP
    mock_mode: bool = False
    cache_dir: Path = Path("cache")
    output_dir: Path = Path("datasets")
    max_concurrency: int = 1
    providers: ProviderSettings = field(default_factory=ProviderSettings)

    def validate(self) -> None:
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.cap < 0:
            raise ValueError("cap must be >= 0")
        if self.source_lang in self.target_langs:
            raise ValueError("source language cannot also be a target language")
        if self.max_concurrency < 1:
            raise ValueError("max concurrency must be >= 1")


def load_config_file(path: str | Path) -> dict[str, str]:
    """Parse ``key = value`` lines; later keys win; comments with #."""
    values: dict[str, str] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = stripped.partition("=")
        values[key.strip()] = value.strip()
    return values


def _parse_bool(value: str) -> bool:
    return value.strip().lower() in ("1", "true", "yes", "on")


def build_config(
    file_values: Mapping[str, str] | None = None,
    env: Mapping[str, str] | None = None,
    **flags: object,
) -> PipelineConfig:
    """Resolve a PipelineConfig with flags > env > file > defaults.

    `flags` entries with value None are treated as unset.
    """
    file_values = dict(file_values or {})
    env = env if env is not None else os.environ

    def pick(flag_name: str, file_key: str, env_key: str | None = None) -> str | None:
        flag = flags.get(flag_name)
        if flag is not None:
            return str(flag)
        if env_key and env_key in env:
            return env[env_key]
        if file_key in file_values:
            return file_values[file_key]
        return None

    config = PipelineConfig()
    if (v := pick("source_lang", "source_lang")) is not None:
        config.source_lang = v
    if (v := pick("langs", "target_langs")) is not None:
        config.target_langs = tuple(part.strip() for part in v.split(",") if part.strip())
    if (v := pick("k", "k")) is not None:
        config.k = int(v)
    if (v := pick("cap", "cap")) is not None:
        config.cap = int(v)
    if (v := pick("mock", "mock")) is not None:
        config.mock_mode = _parse_bool(v) if isinstance(v, str) else bool(v)
    if (v := pick("cache_dir", "cache_dir", ENV_CACHE_DIR)) is not None:
        config.cache_dir = Path(v)
    if (v := pick("output_dir", "output_dir", ENV_OUTPUT_DIR)) is not None:
        config.output_dir = Path(v)
    if (v := pick("max_concurrency", "max_concurrency")) is not None:
        config.max_concurrency = int(v)

    providers = config.providers
    if (v := pick("llm_url", "llm_url", ENV_LLM_URL)) is not None:
        providers.llm_url = v
    if (v := pick("llm_model", "llm_model", ENV_LLM_MODEL)) is not None:
        providers.llm_model = v
    if (v := pick("llm_key", "llm_key", ENV_LLM_KEY)) is not None:
        providers.llm_key = v
    if (v := pick("translate_model", "translate_model", ENV_TRANSLATE_MODEL)) is not None:
        providers.translate_model = v
    if (v := pick("emb_url", "emb_url", ENV_EMB_URL)) is not None:
        providers.emb_url = v
    if (v := pick("emb_model", "emb_model", ENV_EMB_MODEL)) is not None:
        providers.emb_model = v

    config.validate()
    return config


def now_iso(mock_mode: bool, env: Mapping[str, str] | None = None) -> str:
    """Build timestamp: GAPFORGE_FAKE_NOW wins; mock mode pins a constant
    so mock builds are bit-reproducible even without the env var."""
    env = env if env is not None else os.environ
    fake = env.get(ENV_FAKE_NOW)
    if fake:
        return fake
    if mock_mode:
        return MOCK_EPOCH
    return datetime.now(timezone.utc).isoformat(timespec="seconds")
