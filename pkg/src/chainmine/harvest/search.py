"""Search providers: live HTTP, local corpus scoring, and record/replay."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Protocol

from ..errors import ProviderError
from ..providers.cassette import Cassette
from ..textnorm import normalize_alias


@dataclass(frozen=True)
class SearchResult:
    url: str
    title: str
    snippet: str
    rank: int

    def to_dict(self) -> dict[str, Any]:
        return {"url": self.url, "title": self.title, "snippet": self.snippet, "rank": self.rank}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> SearchResult:
        return cls(url=d["url"], title=d["title"], snippet=d["snippet"], rank=int(d["rank"]))


class SearchProvider(Protocol):
    def search(self, query_text: str, limit: int) -> list[SearchResult]: ...


def cassette_key(query_text: str) -> str:
    return normalize_alias(query_text)


class HttpSearchProvider:
    """GET {base}/search?q=...&limit=... -> {"results": [{url,title,snippet}]}."""

    def __init__(self, base_url: str | None = None, api_key: str | None = None, timeout: float = 30.0):
        self.base_url = (base_url or os.environ.get("SEARCH_API_BASE", "")).rstrip("/")
        self.api_key = api_key or os.environ.get("SEARCH_API_KEY", "")
        self.timeout = timeout
        if not self.base_url:
            raise ProviderError("SEARCH_API_BASE not configured", retryable=False)

    def search(self, query_text: str, limit: int) -> list[SearchResult]:
        import httpx

        headers = {"Authorization": f"Bearer {self.api_key}"} if self.api_key else {}
        try:
            resp = httpx.get(
                f"{self.base_url}/search",
                params={"q": query_text, "limit": limit},
                headers=headers,
                timeout=self.timeout,
            )
        except httpx.HTTPError as exc:
            raise ProviderError(f"search transport failure: {exc}", retryable=True) from exc
        if resp.status_code == 429 or resp.status_code >= 500:
            raise ProviderError(f"search status {resp.status_code}", retryable=True, status=resp.status_code)
        if resp.status_code != 200:
            raise ProviderError(f"search status {resp.status_code}", retryable=False, status=resp.status_code)
        rows = resp.json().get("results", [])
        return [
            SearchResult(url=r["url"], title=r.get("title", ""), snippet=r.get("snippet", ""), rank=i + 1)
            for i, r in enumerate(rows[:limit])
        ]


class LocalCorpusSearchProvider:
    """Ranks the bundled corpus pages by query-token frequency.

    Stands in for a web search engine during offline runs and cassette
    recording. Scoring: sum of per-token occurrence counts in the page
    text (case-folded); ties broken by URL for a stable order.
    """

    def __init__(self, corpus_dir: str | Path):
        self.corpus_dir = Path(corpus_dir)
        self._pages: list[tuple[str, str, str]] = []  # (url, title, folded text)
        for path in sorted(self.corpus_dir.glob("*.html")) + sorted(self.corpus_dir.glob("*.txt")):
            raw = path.read_text(encoding="utf-8")
            title_m = re.search(r"<title>(.*?)</title>", raw, flags=re.IGNORECASE | re.DOTALL)
            title = title_m.group(1).strip() if title_m else path.stem
            text = re.sub(r"<[^>]+>", " ", raw)
            self._pages.append((f"corpus://{path.name}", title, text.casefold()))

    def search(self, query_text: str, limit: int) -> list[SearchResult]:
        tokens = [t for t in re.split(r"\W+", query_text.casefold()) if t]
        scored: list[tuple[int, str, str]] = []
        for url, title, text in self._pages:
            score = sum(text.count(tok) for tok in tokens)
            if score > 0:
                scored.append((score, url, title))
        scored.sort(key=lambda s: (-s[0], s[1]))
        return [
            SearchResult(url=url, title=title, snippet=f"score={score}", rank=i + 1)
            for i, (score, url, title) in enumerate(scored[:limit])
        ]


class ReplaySearchProvider:
    def __init__(self, cassette: Cassette):
        self.cassette = cassette

    def search(self, query_text: str, limit: int) -> list[SearchResult]:
        response = self.cassette.get("search", cassette_key(query_text))
        results = [SearchResult.from_dict(r) for r in response["results"]]
        return results[:limit]


class RecordingSearchProvider:
    """Records the inner provider's FULL result list; truncation happens on read."""

    def __init__(self, inner: SearchProvider, cassette: Cassette, record_limit: int = 25):
        self.inner = inner
        self.cassette = cassette
        self.record_limit = record_limit

    def search(self, query_text: str, limit: int) -> list[SearchResult]:
        key = cassette_key(query_text)
        if not self.cassette.has("search", key):
            full = self.inner.search(query_text, self.record_limit)
            self.cassette.put("search", key, {"results": [r.to_dict() for r in full]})
        return ReplaySearchProvider(self.cassette).search(query_text, limit)
