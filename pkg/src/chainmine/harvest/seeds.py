"""Seed company lists distilled from industry reports (CSV or JSONL)."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import EmptySeedFile, SeedParseError


@dataclass
class SeedRecord:
    company_name: str
    aliases: list[str] = field(default_factory=list)
    industry: str = ""
    jurisdiction: str | None = None
    source_report: str = ""


def _split_aliases(raw: str | list[str] | None) -> list[str]:
    if raw is None:
        return []
    if isinstance(raw, list):
        return [a.strip() for a in raw if a and a.strip()]
    return [a.strip() for a in raw.split("|") if a.strip()]


def load_seeds(path: str | Path) -> list[SeedRecord]:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if not text.strip():
        raise EmptySeedFile(str(path))
    if path.suffix.lower() in (".jsonl", ".ndjson"):
        records = _parse_jsonl(text, path.name)
    else:
        records = _parse_csv(text, path.name)
    if not records:
        raise EmptySeedFile(str(path))
    return records


def _parse_csv(text: str, source: str) -> list[SeedRecord]:
    reader = csv.DictReader(text.splitlines())
    if reader.fieldnames is None or "name" not in reader.fieldnames:
        raise SeedParseError("missing header with a 'name' column", line=1)
    records = []
    for line_no, row in enumerate(reader, start=2):
        name = (row.get("name") or "").strip()
        if not name:
            raise SeedParseError("empty company name", line=line_no)
        records.append(
            SeedRecord(
                company_name=name,
                aliases=_split_aliases(row.get("aliases")),
                industry=(row.get("industry") or "").strip(),
                jurisdiction=(row.get("jurisdiction") or "").strip() or None,
                source_report=source,
            )
        )
    return records


def _parse_jsonl(text: str, source: str) -> list[SeedRecord]:
    records = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SeedParseError(f"invalid JSON: {exc.msg}", line=line_no) from exc
        if not isinstance(row, dict):
            raise SeedParseError("each line must be an object", line=line_no)
        name = str(row.get("name") or "").strip()
        if not name:
            raise SeedParseError("empty company name", line=line_no)
        records.append(
            SeedRecord(
                company_name=name,
                aliases=_split_aliases(row.get("aliases")),
                industry=str(row.get("industry") or "").strip(),
                jurisdiction=(str(row.get("jurisdiction")).strip() or None)
                if row.get("jurisdiction")
                else None,
                source_report=source,
            )
        )
    return records
