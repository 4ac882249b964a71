"""Exception hierarchy shared across the pipeline stages."""


class GapforgeError(Exception):
    """Base class for all errors raised by this package."""


# --- article corpus ---

class NotFound(GapforgeError):
    """The requested page does not exist (or the title is empty)."""


class NetworkError(GapforgeError):
    """Transport-level failure talking to the wiki API."""


class ParseError(GapforgeError):
    """The page body could not be extracted or parsed."""


class NoLanglink(GapforgeError):
    """The target language edition has no article for this topic.

    Callers must treat the whole edition as absent for the topic,
    never as an all-gaps article.
    """


# --- providers (chat LLM / embeddings) ---

class ProviderError(GapforgeError):
    """Transport failure, quota exhaustion, or bad provider response."""


class FormatError(GapforgeError):
    """Provider output stayed unparseable after the single retry."""


class DimensionMismatch(GapforgeError):
    """Embedding vectors of inconsistent dimension were mixed."""


# --- gap selection ---

class PlanMismatch(GapforgeError):
    """A quota plan violates its invariants against the given inventory."""


class TopicMismatch(GapforgeError):
    """Per-language inventories do not share a topic."""


# --- enrichment ---

class MissingParagraph(GapforgeError):
    """A fact references a paragraph index absent from the pinned article."""


class InvalidUrl(GapforgeError):
    """The base URL for a highlight link is not an absolute URL."""


# --- dataset store ---

class RevisionMismatch(GapforgeError):
    """Per-language outputs were built against different article revisions."""


class DuplicateFactId(GapforgeError):
    """Two facts in one dataset share an id."""


class SchemaError(GapforgeError):
    """A dataset file violates the dataset schema or its invariants."""


class IoError(GapforgeError):
    """Reading or writing a dataset file failed at the OS level."""


class BindError(GapforgeError):
    """The dataset service could not bind its address."""
