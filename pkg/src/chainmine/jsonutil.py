"""Canonical JSON serialization shared by snapshots, cassettes, and reports."""

from __future__ import annotations

import json
from typing import Any


def dumps_canonical(obj: Any, sort_keys: bool = False) -> str:
    """Stable, human-diffable JSON text. Trailing newline included."""
    return json.dumps(obj, indent=2, ensure_ascii=False, sort_keys=sort_keys) + "\n"


def dumps_compact(obj: Any) -> str:
    """One-line form for journals and line-delimited CLI output."""
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False, sort_keys=False)
