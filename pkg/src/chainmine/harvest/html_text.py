"""Markup stripping for fetched pages.

Boilerplate containers (script/style/nav/header/footer and friends) are
dropped wholesale; block boundaries become newlines; runs of whitespace
inside a paragraph collapse to single spaces. Deterministic by design so
document ids (hash of cleaned text) are stable.
"""

from __future__ import annotations

import re
from html.parser import HTMLParser

from ..errors import EmptyAfterCleaning, UnsupportedContentType

_SKIP_SUBTREE = {
    "script", "style", "noscript", "template", "svg", "head",
    "nav", "header", "footer", "aside", "form", "iframe",
}

_BLOCK = {
    "p", "div", "section", "article", "main", "br", "li", "ul", "ol",
    "table", "tr", "td", "th", "h1", "h2", "h3", "h4", "h5", "h6",
    "blockquote", "pre", "dl", "dt", "dd", "figure", "figcaption", "hr",
}


class _TextCollector(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.parts: list[str] = []
        self._skip_depth = 0

    def handle_starttag(self, tag: str, attrs) -> None:
        if tag in _SKIP_SUBTREE:
            self._skip_depth += 1
        elif tag in _BLOCK:
            self.parts.append("\n")

    def handle_endtag(self, tag: str) -> None:
        if tag in _SKIP_SUBTREE:
            self._skip_depth = max(0, self._skip_depth - 1)
        elif tag in _BLOCK:
            self.parts.append("\n")

    def handle_data(self, data: str) -> None:
        if self._skip_depth == 0 and data:
            self.parts.append(data)


def _normalize_plain(text: str) -> str:
    lines = [re.sub(r"[ \t\r\f\v]+", " ", line).strip() for line in text.split("\n")]
    out = "\n".join(line for line in lines if line)
    return out.strip()


def extract_text(body: bytes, content_type: str) -> str:
    """Cleaned text of an HTML or plain-text payload."""
    kind = content_type.split(";")[0].strip().lower()
    charset = "utf-8"
    m = re.search(r"charset=([\w\-]+)", content_type, flags=re.IGNORECASE)
    if m:
        charset = m.group(1)
    try:
        text = body.decode(charset, errors="replace")
    except LookupError:
        text = body.decode("utf-8", errors="replace")

    if kind in ("text/plain", ""):
        cleaned = _normalize_plain(text)
    elif kind in ("text/html", "application/xhtml+xml"):
        collector = _TextCollector()
        collector.feed(text)
        collector.close()
        cleaned = _normalize_plain("".join(collector.parts))
    else:
        raise UnsupportedContentType(content_type or "<missing content type>")

    if not cleaned:
        raise EmptyAfterCleaning("document has no text after cleanup")
    return cleaned
