"""Shape validation for extraction provider output.

Accepts the payload when it is structurally shaped like
{"entities": [...], "relations": [...]} with known enum values and
non-empty strings. Anything semantic (does the quote exist, do the
names resolve) is the evidence gate's job, not this one's.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from ..errors import MalformedOutput
from ..model.types import ENDPOINT_KINDS, EntityKind, RelationKind

_ENTITY_KINDS = {k.value for k in EntityKind}
_RELATION_KINDS = {k.value for k in RelationKind}


@dataclass(frozen=True)
class RawEntity:
    name: str
    kind: EntityKind
    attributes: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class RawRelation:
    kind: RelationKind
    source_name: str
    target_name: str
    evidence_quote: str
    attributes: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class ExtractionPayload:
    entities: tuple[RawEntity, ...]
    relations: tuple[RawRelation, ...]


def _strip_fences(text: str) -> str:
    # Providers sometimes wrap JSON in a markdown fence; tolerate that one quirk.
    stripped = text.strip()
    if stripped.startswith("```"):
        lines = stripped.splitlines()
        if lines and lines[0].startswith("```"):
            lines = lines[1:]
        if lines and lines[-1].strip() == "```":
            lines = lines[:-1]
        stripped = "\n".join(lines).strip()
    return stripped


def parse_extraction_output(text: str) -> ExtractionPayload:
    errors: list[str] = []
    try:
        data = json.loads(_strip_fences(text))
    except json.JSONDecodeError as exc:
        raise MalformedOutput(f"not valid JSON: {exc}") from exc

    if not isinstance(data, dict):
        raise MalformedOutput("top level must be a JSON object")

    entities: list[RawEntity] = []
    relations: list[RawRelation] = []

    raw_entities = data.get("entities")
    if not isinstance(raw_entities, list):
        errors.append('"entities" must be a list')
        raw_entities = []
    raw_relations = data.get("relations")
    if not isinstance(raw_relations, list):
        errors.append('"relations" must be a list')
        raw_relations = []

    for i, item in enumerate(raw_entities):
        where = f"entities[{i}]"
        if not isinstance(item, dict):
            errors.append(f"{where} must be an object")
            continue
        name = item.get("name")
        kind = item.get("kind")
        if not isinstance(name, str) or not name.strip():
            errors.append(f"{where}.name must be a non-empty string")
            continue
        if kind not in _ENTITY_KINDS:
            errors.append(f"{where}.kind {kind!r} is not a known entity kind")
            continue
        attrs = item.get("attributes", {})
        if not isinstance(attrs, dict):
            errors.append(f"{where}.attributes must be an object")
            continue
        entities.append(RawEntity(name=name.strip(), kind=EntityKind(kind), attributes=dict(attrs)))

    for i, item in enumerate(raw_relations):
        where = f"relations[{i}]"
        if not isinstance(item, dict):
            errors.append(f"{where} must be an object")
            continue
        kind = item.get("kind")
        if kind not in _RELATION_KINDS:
            errors.append(f"{where}.kind {kind!r} is not a known relation kind")
            continue
        bad = False
        for fld in ("source_name", "target_name", "evidence_quote"):
            val = item.get(fld)
            if not isinstance(val, str) or not val.strip():
                errors.append(f"{where}.{fld} must be a non-empty string")
                bad = True
        if bad:
            continue
        attrs = item.get("attributes", {})
        if not isinstance(attrs, dict):
            errors.append(f"{where}.attributes must be an object")
            continue
        relations.append(
            RawRelation(
                kind=RelationKind(kind),
                source_name=item["source_name"].strip(),
                target_name=item["target_name"].strip(),
                evidence_quote=item["evidence_quote"],
                attributes=dict(attrs),
            )
        )

    if errors:
        raise MalformedOutput("; ".join(errors))
    return ExtractionPayload(entities=tuple(entities), relations=tuple(relations))
