"""Polite document fetching over pluggable transports.

The Fetcher owns crawl policy: denylist, robots (live only), per-host
delay, size cap, bounded retries with backoff. Transports only move bytes.
All waiting goes through the injected clock, so replay runs spend virtual
time and remain deterministic.
"""

from __future__ import annotations

import base64
import urllib.robotparser
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Protocol
from urllib.parse import urlsplit

from ..clock import Clock, LogicalClock
from ..errors import CassetteMiss, FetchDenied, FetchFailed, ProviderError, TooLarge
from ..providers.cassette import Cassette

MAX_BODY_BYTES = 5 * 1024 * 1024


@dataclass
class FetchedPage:
    url: str
    status: int
    content_type: str
    body: bytes


class Transport(Protocol):
    def get(self, url: str) -> FetchedPage: ...


class CorpusTransport:
    """Serves corpus://<name> URLs from a local fixture directory."""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def get(self, url: str) -> FetchedPage:
        parts = urlsplit(url)
        if parts.scheme != "corpus":
            raise ProviderError(f"corpus transport cannot fetch {url}", retryable=False)
        name = (parts.netloc + parts.path).lstrip("/")
        path = self.root / name
        if not path.is_file() or path.parent != self.root:
            raise ProviderError(f"no corpus page {name!r}", retryable=False)
        content_type = "text/html; charset=utf-8" if path.suffix == ".html" else "text/plain; charset=utf-8"
        return FetchedPage(url=url, status=200, content_type=content_type, body=path.read_bytes())


class HttpTransport:
    def __init__(self, timeout: float = 30.0, max_bytes: int = MAX_BODY_BYTES):
        self.timeout = timeout
        self.max_bytes = max_bytes

    def get(self, url: str) -> FetchedPage:
        import httpx

        try:
            with httpx.stream("GET", url, timeout=self.timeout, follow_redirects=True) as resp:
                status = resp.status_code
                content_type = resp.headers.get("content-type", "")
                body = b""
                for chunk in resp.iter_bytes():
                    body += chunk
                    if len(body) > self.max_bytes:
                        raise TooLarge(f"{url}: body exceeds {self.max_bytes} bytes")
        except httpx.HTTPError as exc:
            raise ProviderError(f"fetch transport failure: {exc}", retryable=True) from exc
        return FetchedPage(url=url, status=status, content_type=content_type, body=body)


class ReplayTransport:
    def __init__(self, cassette: Cassette):
        self.cassette = cassette

    def get(self, url: str) -> FetchedPage:
        response = self.cassette.get("fetch", url)
        return FetchedPage(
            url=url,
            status=int(response["status"]),
            content_type=response.get("content_type", ""),
            body=base64.b64decode(response["body_b64"]),
        )


class RecordingTransport:
    def __init__(self, inner: Transport, cassette: Cassette):
        self.inner = inner
        self.cassette = cassette

    def get(self, url: str) -> FetchedPage:
        if not self.cassette.has("fetch", url):
            page = self.inner.get(url)
            self.cassette.put(
                "fetch",
                url,
                {
                    "status": page.status,
                    "content_type": page.content_type,
                    "body_b64": base64.b64encode(page.body).decode("ascii"),
                },
            )
        return ReplayTransport(self.cassette).get(url)


class RobotsPolicy:
    """robots.txt gate for live crawling; failures default to allow."""

    def __init__(self, transport: Transport, agent: str = "chainmine"):
        self.transport = transport
        self.agent = agent
        self._parsers: dict[str, urllib.robotparser.RobotFileParser | None] = {}

    def allows(self, url: str) -> bool:
        parts = urlsplit(url)
        if parts.scheme not in ("http", "https"):
            return True
        host = f"{parts.scheme}://{parts.netloc}"
        if host not in self._parsers:
            parser = urllib.robotparser.RobotFileParser()
            try:
                page = self.transport.get(f"{host}/robots.txt")
                if page.status == 200:
                    parser.parse(page.body.decode("utf-8", errors="replace").splitlines())
                else:
                    parser = None
            except (ProviderError, TooLarge, CassetteMiss):
                parser = None
            self._parsers[host] = parser
        parser = self._parsers[host]
        return True if parser is None else parser.can_fetch(self.agent, url)


@dataclass
class Fetcher:
    transport: Transport
    clock: Clock = field(default_factory=LogicalClock)
    per_host_delay: float = 2.0
    max_bytes: int = MAX_BODY_BYTES
    retries: int = 2
    backoff: float = 1.0
    denylist: frozenset[str] = frozenset()
    robots: RobotsPolicy | None = None
    log: list[dict[str, Any]] = field(default_factory=list)
    _last_start: dict[str, float] = field(default_factory=dict)

    def fetch(self, url: str) -> FetchedPage:
        host = urlsplit(url).netloc or urlsplit(url).scheme
        if host in self.denylist:
            raise FetchDenied(f"{url}: host on denylist")
        if self.robots is not None and not self.robots.allows(url):
            raise FetchDenied(f"{url}: robots policy disallows")
        self._wait_for_host(host)
        started_at = self.clock.monotonic()
        last_error: Exception | None = None
        for attempt in range(self.retries + 1):
            if attempt:
                self.clock.sleep(self.backoff * (2 ** (attempt - 1)))
            try:
                page = self.transport.get(url)
            except ProviderError as exc:
                last_error = exc
                if exc.retryable:
                    continue
                raise FetchFailed(f"{url}: {exc}") from exc
            if page.status == 429 or page.status >= 500:
                last_error = FetchFailed(f"{url}: status {page.status}")
                continue
            if page.status != 200:
                self._log(url, host, started_at, page.status)
                raise FetchFailed(f"{url}: status {page.status}")
            if len(page.body) > self.max_bytes:
                raise TooLarge(f"{url}: {len(page.body)} bytes over cap")
            self._log(url, host, started_at, page.status)
            return page
        raise FetchFailed(f"{url}: retries exhausted ({last_error})")

    def _wait_for_host(self, host: str) -> None:
        now = self.clock.monotonic()
        last = self._last_start.get(host)
        if last is not None and now - last < self.per_host_delay:
            self.clock.sleep(self.per_host_delay - (now - last))

    def _log(self, url: str, host: str, started_at: float, status: int) -> None:
        self._last_start[host] = started_at
        self.log.append({"url": url, "host": host, "started_at": started_at, "status": status})
