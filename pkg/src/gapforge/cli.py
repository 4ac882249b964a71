"""Command line entry points: build, serve, inspect.

`build` runs the whole pipeline for one topic: fetch and segment the
articles, decompose them into facts, align target facts against the
English ones, keep the gaps, select up to the cap per language, enrich
with translations/anchors/links, and write the unified dataset file.
`--mock` swaps in the bundled fixture corpus and deterministic providers,
which makes builds bit-reproducible and network-free.

Exit codes: 0 success, 2 usage, 3 provider/network, 4 schema or io.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .align import classify_article_pair
from .config import (
    DEFAULT_CAP,
    DEFAULT_K,
    PipelineConfig,
    build_config,
    load_config_file,
    now_iso,
)
from .corpus import FixtureRepository, WikiRepository
from .datastore import (
    DEFAULT_PORT,
    merge_language_outputs,
    read_dataset,
    serve,
    write_dataset,
)
from .decompose import decompose_article
from .enrich import enrich_selection
from .errors import (
    BindError,
    FormatError,
    GapforgeError,
    IoError,
    NetworkError,
    NoLanglink,
    NotFound,
    ParseError,
    ProviderError,
    SchemaError,
)
from .gapselect import GapInventory, select_for_topic
from .providers import (
    EmbeddingConfig,
    HttpEmbeddingProvider,
    HttpLlmProvider,
    LlmConfig,
    MockEmbeddingProvider,
    MockLlmProvider,
    prompt_hash,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PROVIDER = 3
EXIT_DATA = 4


class StageFailure(Exception):
    """Carries the failing stage name alongside the original error."""

    def __init__(self, stage: str, error: Exception) -> None:
        super().__init__(f"{stage}: {error}")
        self.stage = stage
        self.error = error


def _make_providers(config: PipelineConfig):
    if config.mock_mode:
        return MockLlmProvider(), MockEmbeddingProvider()
    settings = config.providers
    if not settings.llm_url or not settings.llm_model:
        raise ProviderError("llm_url and llm_model must be configured (or use --mock)")
    if not settings.emb_url or not settings.emb_model:
        raise ProviderError("emb_url and emb_model must be configured (or use --mock)")
    llm = HttpLlmProvider(
        LlmConfig(
            base_url=settings.llm_url,
            model=settings.llm_model,
            api_key=settings.llm_key,
            translate_model=settings.translate_model,
        )
    )
    embedder = HttpEmbeddingProvider(
        EmbeddingConfig(base_url=settings.emb_url, model=settings.emb_model, api_key=settings.llm_key)
    )
    return llm, embedder


def _make_repository(config: PipelineConfig):
    if config.mock_mode:
        return FixtureRepository()
    languages = (config.source_lang, *config.target_langs)
    return WikiRepository(config.cache_dir, languages=languages)


def cmd_build(topic: str, config: PipelineConfig) -> Path:
    """Run the full pipeline for one topic and return the dataset path."""
    repository = _make_repository(config)
    llm, embedder = _make_providers(config)

    def stage(name: str, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except GapforgeError as exc:
            raise StageFailure(name, exc) from exc

    english = stage("corpus", repository.fetch_article, topic, config.source_lang)
    english_facts = stage(
        "decompose", decompose_article, english, llm, config.max_concurrency
    )

    inventories: dict[str, GapInventory] = {}
    target_articles = {}
    for lang in config.target_langs:
        try:
            title = repository.resolve_interlanguage(topic, config.source_lang, lang)
        except NoLanglink:
            print(f"warning: no {lang} edition for {topic!r}; skipping", file=sys.stderr)
            continue
        article = stage("corpus", repository.fetch_article, title, lang)
        facts = stage("decompose", decompose_article, article, llm, config.max_concurrency)
        _, gap_verdicts = stage(
            "align",
            classify_article_pair,
            english_facts,
            facts,
            llm,
            embedder,
            config.k,
            config.max_concurrency,
        )
        facts_by_id = {f.id: f for f in facts}
        gaps = tuple(
            (facts_by_id[v.target_fact_id], v.neighbor_set) for v in gap_verdicts
        )
        inventories[lang] = GapInventory(language_code=lang, topic=topic, gaps=gaps)
        target_articles[lang] = article

    selected = stage("gapselect", select_for_topic, inventories, config.cap)
    presented = stage(
        "enrich",
        enrich_selection,
        selected,
        english,
        english_facts,
        target_articles,
        llm,
        embedder,
    )

    provenance = {
        "pipeline": "mock" if config.mock_mode else "live",
        "llm_model": "mock" if config.mock_mode else config.providers.llm_model,
        "embedding_model": "mock" if config.mock_mode else config.providers.emb_model,
        "translate_model": (
            "mock"
            if config.mock_mode
            else (config.providers.translate_model or config.providers.llm_model)
        ),
        "prompt_hash": prompt_hash(),
    }
    dataset = stage(
        "datastore",
        merge_language_outputs,
        topic,
        {lang: facts for lang, facts in presented.items()},
        english.revision_id,
        now_iso(config.mock_mode),
        provenance,
        config.target_langs,
        {lang: english.revision_id for lang in presented},
        config.cap,
    )
    path = stage("datastore", write_dataset, dataset, config.output_dir)

    for lang in config.target_langs:
        if lang not in inventories:
            print(f"{lang}: skipped (no edition)")
            continue
        total = len(inventories[lang].gaps)
        shown = len(selected.get(lang, []))
        print(f"{lang}: {total} gaps found, {shown} selected")
    print(f"wrote {path}")
    return path


def cmd_serve(datasets_dir: Path, host: str, port: int) -> None:
    service = serve(datasets_dir, (host, port))
    print(f"serving {datasets_dir} on {service.base_url} "
          f"({len(service.datasets)} dataset(s))")
    try:
        service.run_forever()
    except KeyboardInterrupt:
        service.close()


def cmd_inspect(path: Path) -> None:
    dataset = read_dataset(path)
    print(f"topic: {dataset.topic}")
    print(f"english revision: {dataset.english_revision}")
    print(f"generated at: {dataset.generated_at}")
    counts = " / ".join(f"{lang} {len(dataset.facts[lang])}" for lang in dataset.languages)
    print(f"facts: {counts if counts else '(none)'}")
    print("section distribution:")
    for lang in dataset.languages:
        sections: dict[int, int] = {}
        for fact in dataset.facts[lang]:
            sections[fact.section_index] = sections.get(fact.section_index, 0) + 1
        rendered = ", ".join(f"s{idx}: {n}" for idx, n in sorted(sections.items()))
        print(f"  {lang}: {rendered if rendered else '(empty)'}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gapforge",
        description="Discover and package cross-lingual knowledge gaps for Wikipedia topics.",
    )
    parser.add_argument("--version", action="version", version=f"gapforge {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="run the pipeline for one topic")
    build.add_argument("--topic", required=True, help="English article title")
    build.add_argument("--langs", help="comma-separated target languages (default fr,ru,zh)")
    build.add_argument("--mock", action="store_true", default=None,
                       help="use the bundled fixture corpus and deterministic providers")
    build.add_argument("--cap", type=int, help=f"facts per language (default {DEFAULT_CAP})")
    build.add_argument("--k", type=int, help=f"neighbors per fact (default {DEFAULT_K})")
    build.add_argument("--config", type=Path, help="key = value config file")
    build.add_argument("--cache-dir", type=Path, dest="cache_dir")
    build.add_argument("--output-dir", type=Path, dest="output_dir")
    build.add_argument("--max-concurrency", type=int, dest="max_concurrency")

    srv = sub.add_parser("serve", help="serve a datasets directory over HTTP")
    srv.add_argument("--datasets", type=Path, required=True)
    srv.add_argument("--port", type=int, default=DEFAULT_PORT)
    srv.add_argument("--host", default="127.0.0.1")

    inspect = sub.add_parser("inspect", help="summarize a dataset file")
    inspect.add_argument("dataset", type=Path)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=os.environ.get("GAPFORGE_LOG", "WARNING"))
    parser = _build_parser()
    args = parser.parse_args(argv)

    try:
        if args.command == "build":
            file_values = load_config_file(args.config) if args.config else None
            try:
                config = build_config(
                    file_values,
                    None,
                    langs=args.langs,
                    mock=args.mock,
                    cap=args.cap,
                    k=args.k,
                    cache_dir=args.cache_dir,
                    output_dir=args.output_dir,
                    max_concurrency=args.max_concurrency,
                )
            except ValueError as exc:
                print(f"usage error: {exc}", file=sys.stderr)
                return EXIT_USAGE
            cmd_build(args.topic, config)
            return EXIT_OK

        if args.command == "serve":
            cmd_serve(args.datasets, args.host, args.port)
            return EXIT_OK

        if args.command == "inspect":
            cmd_inspect(args.dataset)
            return EXIT_OK
    except StageFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        if isinstance(exc.error, (ProviderError, NetworkError, FormatError)):
            return EXIT_PROVIDER
        return EXIT_DATA
    except (ProviderError, NetworkError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PROVIDER
    except (SchemaError, IoError, ParseError, NotFound, BindError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except GapforgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA

    parser.error(f"unknown command {args.command!r}")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
