"""Per-topic dataset files and the local read-only HTTP service.

One unified JSON file per topic, named after the English article with
spaces replaced by underscores, groups the presented facts by language
code. Serialization is canonical (sorted keys, two-space indent, UTF-8,
trailing newline), so structurally equal datasets are byte-identical on
disk and over the wire.

Datasets are precomputed offline; the service never triggers pipeline
work and exposes only GET endpoints with permissive CORS headers so the
browser extension can fetch them.
"""

from __future__ import annotations

import json
import logging
import threading
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Any, Mapping, Sequence
from urllib.parse import unquote

import jsonschema

from .enrich import PresentedFact
from .errors import BindError, DuplicateFactId, IoError, RevisionMismatch, SchemaError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
DEFAULT_PORT = 8571

_PRESENTED_FACT_SCHEMA = {
    "type": "object",
    "properties": {
        "id": {"type": "string", "minLength": 1},
        "language_code": {"type": "string", "minLength": 2},
        "text_en": {"type": "string", "minLength": 1},
        "text_src": {"type": "string", "minLength": 1},
        "source_title": {"type": "string"},
        "source_link_url": {"type": "string", "pattern": "^https?://"},
        "anchor_sentence_en": {"type": "string"},
        "anchor_paragraph_index": {"type": "integer", "minimum": 0},
        "similarity": {"type": "number", "minimum": -1.0, "maximum": 1.0},
        "section_index": {"type": "integer", "minimum": 0},
    },
    "required": [
        "id",
        "language_code",
        "text_en",
        "text_src",
        "source_title",
        "source_link_url",
        "anchor_sentence_en",
        "anchor_paragraph_index",
        "similarity",
        "section_index",
    ],
    "additionalProperties": False,
}

DATASET_SCHEMA = {
    "type": "object",
    "properties": {
        "schema_version": {"type": "integer"},
        "topic": {"type": "string", "minLength": 1},
        "english_revision": {"type": "string", "minLength": 1},
        "generated_at": {"type": "string", "minLength": 1},
        "languages": {"type": "array", "items": {"type": "string"}},
        "facts": {
            "type": "object",
            "additionalProperties": {"type": "array", "items": _PRESENTED_FACT_SCHEMA},
        },
        "provenance": {"type": "object", "additionalProperties": {"type": "string"}},
    },
    "required": [
        "schema_version",
        "topic",
        "english_revision",
        "generated_at",
        "languages",
        "facts",
        "provenance",
    ],
    "additionalProperties": False,
}


@dataclass(frozen=True)
class TopicDataset:
    schema_version: int
    topic: str
    english_revision: str
    generated_at: str
    languages: tuple[str, ...]
    facts: Mapping[str, tuple[PresentedFact, ...]]
    provenance: Mapping[str, str]

    def to_json_obj(self) -> dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "topic": self.topic,
            "english_revision": self.english_revision,
            "generated_at": self.generated_at,
            "languages": list(self.languages),
            "facts": {
                lang: [f.to_json_obj() for f in facts] for lang, facts in self.facts.items()
            },
            "provenance": dict(self.provenance),
        }

    @classmethod
    def from_json_obj(cls, obj: dict[str, Any]) -> "TopicDataset":
        return cls(
            schema_version=obj["schema_version"],
            topic=obj["topic"],
            english_revision=obj["english_revision"],
            generated_at=obj["generated_at"],
            languages=tuple(obj["languages"]),
            facts={
                lang: tuple(PresentedFact.from_json_obj(f) for f in facts)
                for lang, facts in obj["facts"].items()
            },
            provenance=dict(obj["provenance"]),
        )


_VALIDATOR = jsonschema.Draft202012Validator(DATASET_SCHEMA)


def validate_dataset_obj(obj: Any, cap: int | None = None) -> None:
    """Schema plus structural invariants; SchemaError on any violation."""
    error = jsonschema.exceptions.best_match(_VALIDATOR.iter_errors(obj))
    if error is not None:
        raise SchemaError(f"dataset schema violation: {error.message}") from error

    if obj["schema_version"] != SCHEMA_VERSION:
        raise SchemaError(
            f"unsupported schema_version {obj['schema_version']} (expected {SCHEMA_VERSION})"
        )
    if obj["languages"] != list(obj["facts"].keys()):
        raise SchemaError("languages list does not match the fact group keys")
    seen_ids: set[str] = set()
    for lang, facts in obj["facts"].items():
        for fact in facts:
            if fact["language_code"] != lang:
                raise SchemaError(
                    f"fact {fact['id']} has language {fact['language_code']} under key {lang}"
                )
            if fact["id"] in seen_ids:
                raise SchemaError(f"duplicate fact id {fact['id']}")
            seen_ids.add(fact["id"])
        if cap is not None and len(facts) > cap:
            raise SchemaError(f"{lang} holds {len(facts)} facts, above the cap of {cap}")


def merge_language_outputs(
    topic: str,
    facts_by_language: Mapping[str, Sequence[PresentedFact]],
    english_revision: str,
    generated_at: str,
    provenance: Mapping[str, str],
    language_order: Sequence[str] = ("fr", "ru", "zh"),
    revisions: Mapping[str, str] | None = None,
    cap: int | None = None,
) -> TopicDataset:
    """Merge per-language enrichment outputs into one dataset.

    `revisions` maps each language to the English revision its facts
    were computed against; any disagreement is a RevisionMismatch.
    """
    if revisions:
        for lang, revision in revisions.items():
            if revision != english_revision:
                raise RevisionMismatch(
                    f"{lang} was built against revision {revision}, expected {english_revision}"
                )

    ordered = [lang for lang in language_order if lang in facts_by_language]
    ordered += [lang for lang in facts_by_language if lang not in ordered]

    seen_ids: set[str] = set()
    facts: dict[str, tuple[PresentedFact, ...]] = {}
    for lang in ordered:
        group = tuple(facts_by_language[lang])
        if cap is not None and len(group) > cap:
            raise ValueError(f"{lang} selection exceeds the cap of {cap}")
        for fact in group:
            if fact.id in seen_ids:
                raise DuplicateFactId(f"duplicate fact id {fact.id}")
            seen_ids.add(fact.id)
        facts[lang] = group

    return TopicDataset(
        schema_version=SCHEMA_VERSION,
        topic=topic,
        english_revision=english_revision,
        generated_at=generated_at,
        languages=tuple(ordered),
        facts=facts,
        provenance=dict(provenance),
    )


def dataset_filename(topic: str) -> str:
    return topic.replace(" ", "_") + ".json"


def canonical_bytes(dataset: TopicDataset) -> bytes:
    text = json.dumps(dataset.to_json_obj(), ensure_ascii=False, indent=2, sort_keys=True)
    return (text + "\n").encode("utf-8")


def write_dataset(dataset: TopicDataset, directory: str | Path) -> Path:
    path = Path(directory) / dataset_filename(dataset.topic)
    try:
        Path(directory).mkdir(parents=True, exist_ok=True)
        path.write_bytes(canonical_bytes(dataset))
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    return path


def read_dataset(path: str | Path) -> TopicDataset:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    try:
        obj = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SchemaError(f"not a JSON dataset: {path}: {exc}") from exc
    validate_dataset_obj(obj)
    return TopicDataset.from_json_obj(obj)


# ---------------------------------------------------------------------------
# local service
# ---------------------------------------------------------------------------


class DatasetService:
    """Read-only HTTP service over a directory of dataset files.

    Datasets load once at startup into an immutable map (malformed files
    are logged and skipped); concurrent GETs all see the same bytes.
    """

    def __init__(self, datasets_dir: str | Path, host: str = "127.0.0.1", port: int = DEFAULT_PORT):
        self.datasets: dict[str, bytes] = {}
        for path in sorted(Path(datasets_dir).glob("*.json")):
            try:
                dataset = read_dataset(path)
            except (SchemaError, IoError) as exc:
                logger.warning("skipping %s: %s", path, exc)
                continue
            self.datasets[dataset.topic] = path.read_bytes()

        service = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, fmt: str, *args: Any) -> None:
                logger.debug("http: " + fmt, *args)

            def _send(self, status: int, body: bytes) -> None:
                self.send_response(status)
                self.send_header("Content-Type", "application/json; charset=utf-8")
                self.send_header("Content-Length", str(len(body)))
                self.send_header("Access-Control-Allow-Origin", "*")
                self.send_header("Access-Control-Allow-Methods", "GET, OPTIONS")
                self.end_headers()
                self.wfile.write(body)

            def do_OPTIONS(self) -> None:  # CORS preflight
                self._send(204, b"")

            def do_GET(self) -> None:
                path = unquote(self.path.split("?", 1)[0])
                if path == "/api/topics":
                    body = json.dumps(sorted(service.datasets), ensure_ascii=False).encode("utf-8")
                    self._send(200, body)
                    return
                if path.startswith("/api/datasets/"):
                    name = path[len("/api/datasets/") :]
                    topic = name.replace("_", " ")
                    payload = service.datasets.get(topic) or service.datasets.get(name)
                    if payload is not None:
                        self._send(200, payload)
                        return
                self._send(404, json.dumps({"error": "not found"}).encode("utf-8"))

        try:
            self._server = ThreadingHTTPServer((host, port), Handler)
        except OSError as exc:
            raise BindError(f"cannot bind {host}:{port}: {exc}") from exc
        self._thread: threading.Thread | None = None

    @property
    def address(self) -> tuple[str, int]:
        host, port = self._server.server_address[:2]
        return str(host), int(port)

    @property
    def base_url(self) -> str:
        host, port = self.address
        return f"http://{host}:{port}"

    def run_forever(self) -> None:
        self._server.serve_forever()

    def start_background(self) -> "DatasetService":
        self._thread = threading.Thread(
            target=self._server.serve_forever, kwargs={"poll_interval": 0.05}, daemon=True
        )
        self._thread.start()
        return self

    def close(self) -> None:
        self._server.shutdown()
        self._server.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)


def serve(
    datasets_dir: str | Path, bind_addr: tuple[str, int] = ("127.0.0.1", DEFAULT_PORT)
) -> DatasetService:
    """Bind the service; caller decides foreground or background running."""
    host, port = bind_addr
    return DatasetService(datasets_dir, host=host, port=port)
