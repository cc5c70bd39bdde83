"""Keyed record/replay store for external-provider responses.

One JSON file per request, named by the SHA-256 of the request key, grouped
by provider kind (search / fetch / llm). Replay mode reads them verbatim;
record mode writes them. The raw key is kept inside the file for audit.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any

from ..errors import CassetteMiss, StorageFailure
from ..jsonutil import dumps_canonical


def key_digest(key_text: str) -> str:
    return hashlib.sha256(key_text.encode("utf-8")).hexdigest()


class Cassette:
    def __init__(self, root: str | Path):
        self.root = Path(root)

    def _path(self, kind: str, key_text: str) -> Path:
        return self.root / kind / f"{key_digest(key_text)}.json"

    def has(self, kind: str, key_text: str) -> bool:
        return self._path(kind, key_text).exists()

    def get(self, kind: str, key_text: str) -> dict[str, Any]:
        path = self._path(kind, key_text)
        if not path.exists():
            raise CassetteMiss(f"{kind}: no recording for key {key_text[:120]!r}")
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise StorageFailure(f"unreadable cassette {path.name}: {exc}") from exc
        return data["response"]

    def put(self, kind: str, key_text: str, response: dict[str, Any]) -> Path:
        path = self._path(kind, key_text)
        path.parent.mkdir(parents=True, exist_ok=True)
        body = {"kind": kind, "key": key_text, "response": response}
        try:
            path.write_text(dumps_canonical(body, sort_keys=True), encoding="utf-8")
        except OSError as exc:
            raise StorageFailure(f"cassette write failed: {exc}") from exc
        return path

    def count(self, kind: str | None = None) -> int:
        if kind is not None:
            d = self.root / kind
            return len(list(d.glob("*.json"))) if d.is_dir() else 0
        return len(list(self.root.glob("*/*.json")))
