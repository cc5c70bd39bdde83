from .docstore import DocStore, document_id
from .fetch import (
    CorpusTransport,
    FetchedPage,
    Fetcher,
    HttpTransport,
    RecordingTransport,
    ReplayTransport,
    RobotsPolicy,
)
from .html_text import extract_text
from .keywords import DEFAULT_TEMPLATES, KeywordQuery, QueryTemplate, generate_keywords
from .search import (
    HttpSearchProvider,
    LocalCorpusSearchProvider,
    RecordingSearchProvider,
    ReplaySearchProvider,
    SearchProvider,
    SearchResult,
)
from .seeds import SeedRecord, load_seeds

__all__ = [
    "DEFAULT_TEMPLATES",
    "CorpusTransport",
    "DocStore",
    "FetchedPage",
    "Fetcher",
    "HttpSearchProvider",
    "HttpTransport",
    "KeywordQuery",
    "LocalCorpusSearchProvider",
    "QueryTemplate",
    "RecordingSearchProvider",
    "RecordingTransport",
    "ReplaySearchProvider",
    "ReplayTransport",
    "RobotsPolicy",
    "SearchProvider",
    "SearchResult",
    "SeedRecord",
    "document_id",
    "extract_text",
    "generate_keywords",
    "load_seeds",
]
