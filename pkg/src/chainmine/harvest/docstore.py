"""Content-addressed document store with provenance.

A document's identity is the SHA-256 of its cleaned text, so the same page
reached through different queries (or re-crawled later) lands on one stored
copy with an extra provenance record.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..errors import StorageFailure
from ..jsonutil import dumps_canonical
from ..textnorm import looks_cjk


def document_id(cleaned_text: str) -> str:
    return hashlib.sha256(cleaned_text.encode("utf-8")).hexdigest()


@dataclass
class StoredDocument:
    document_id: str
    cleaned_text: str
    language: str
    provenance: list[dict[str, Any]] = field(default_factory=list)  # {url, query, fetched_at}


class DocStore:
    def __init__(self) -> None:
        self._docs: dict[str, StoredDocument] = {}

    def __len__(self) -> int:
        return len(self._docs)

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._docs

    def store(
        self,
        cleaned_text: str,
        url: str,
        query: str | None,
        fetched_at: str,
    ) -> tuple[str, bool]:
        """Returns (document_id, is_new). Provenance appends either way."""
        if not cleaned_text:
            raise ValueError("refusing to store empty document text")
        doc_id = document_id(cleaned_text)
        doc = self._docs.get(doc_id)
        is_new = doc is None
        if doc is None:
            doc = StoredDocument(
                document_id=doc_id,
                cleaned_text=cleaned_text,
                language="zh" if looks_cjk(cleaned_text) else "en",
            )
            self._docs[doc_id] = doc
        doc.provenance.append({"url": url, "query": query, "fetched_at": fetched_at})
        return doc_id, is_new

    def text_of(self, doc_id: str) -> str | None:
        doc = self._docs.get(doc_id)
        return doc.cleaned_text if doc else None

    def url_of(self, doc_id: str) -> str | None:
        doc = self._docs.get(doc_id)
        if doc is None or not doc.provenance:
            return None
        return doc.provenance[0]["url"]

    def all_ids(self) -> list[str]:
        return sorted(self._docs)

    # -- persistence -----------------------------------------------------------

    def save(self, path: str | Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        data = {
            doc_id: {
                "cleaned_text": d.cleaned_text,
                "language": d.language,
                "provenance": d.provenance,
            }
            for doc_id, d in sorted(self._docs.items())
        }
        try:
            path.write_text(dumps_canonical(data), encoding="utf-8")
        except OSError as exc:
            raise StorageFailure(f"docstore write failed: {exc}") from exc

    @classmethod
    def load(cls, path: str | Path) -> DocStore:
        store = cls()
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        for doc_id, d in raw.items():
            store._docs[doc_id] = StoredDocument(
                document_id=doc_id,
                cleaned_text=d["cleaned_text"],
                language=d.get("language", "en"),
                provenance=list(d.get("provenance", [])),
            )
        return store
