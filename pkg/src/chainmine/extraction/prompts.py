"""Deterministic prompt assembly for the extraction provider call."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from ..errors import ContextBudgetExceeded
from ..model.types import ENDPOINT_KINDS, EntityKind

DEFAULT_CONTEXT_BUDGET = 24000  # characters, a conservative token proxy

_INSTRUCTION = (
    "You read a passage about companies and their supply chains and return "
    "every entity and relation it states, as one JSON object. Quote the exact "
    "sentence that supports each relation in evidence_quote. Do not infer "
    "relations the text does not state."
)


def _schema_description() -> str:
    entity_kinds = ", ".join(k.value for k in EntityKind)
    lines = [
        '{"entities": [{"name", "kind", "attributes"}],',
        ' "relations": [{"kind", "source_name", "target_name", "attributes", "evidence_quote"}]}',
        f"entity kinds: {entity_kinds}",
        "relation kinds (source kind -> target kind):",
    ]
    for kind, (src, tgt) in ENDPOINT_KINDS.items():
        lines.append(f"  {kind.value}: {src.value} -> {tgt.value}")
    lines.append("Supply direction: source supplies target.")
    return "\n".join(lines)


@dataclass(frozen=True)
class PromptBundle:
    system_instruction: str
    schema_description: str
    few_shot_samples: tuple[tuple[str, str], ...]  # (input_text, expected json)
    document_chunk: str
    chunk_offset: int

    def render(self) -> str:
        parts = [
            "SYSTEM:",
            self.system_instruction,
            "",
            "SCHEMA:",
            self.schema_description,
            "",
        ]
        for sample_in, sample_out in self.few_shot_samples:
            parts += ["EXAMPLE INPUT:", sample_in, "EXAMPLE OUTPUT:", sample_out, ""]
        parts += ["TASK: joint-extraction", "TEXT:", self.document_chunk, "END TEXT", "OUTPUT:"]
        return "\n".join(parts)


def load_few_shot(path: str | Path) -> list[tuple[str, str]]:
    """Per-industry sample file: {"industry", "samples": [{input_text, expected_payload}]}."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    samples = []
    for s in data.get("samples", []):
        payload = s["expected_payload"]
        rendered = payload if isinstance(payload, str) else json.dumps(payload, ensure_ascii=False)
        samples.append((s["input_text"], rendered))
    return samples


def build_prompt(
    chunk_text: str,
    chunk_offset: int,
    few_shot: list[tuple[str, str]] | None = None,
    context_budget: int = DEFAULT_CONTEXT_BUDGET,
) -> PromptBundle:
    bundle = PromptBundle(
        system_instruction=_INSTRUCTION,
        schema_description=_schema_description(),
        few_shot_samples=tuple(few_shot or ()),
        document_chunk=chunk_text,
        chunk_offset=chunk_offset,
    )
    size = len(bundle.render())
    if size > context_budget:
        raise ContextBudgetExceeded(f"prompt is {size} chars, budget {context_budget}")
    return bundle


def build_repair_prompt(bundle: PromptBundle, previous_output: str, error: str) -> str:
    return "\n".join(
        [
            bundle.render(),
            "",
            "REPAIR:",
            "Your previous output failed validation.",
            f"Error: {error}",
            "Previous output:",
            previous_output,
            "Return only the corrected JSON object.",
        ]
    )


def build_verification_prompt(
    kind: str,
    source_name: str,
    source_kind: str,
    source_aliases: list[str],
    target_name: str,
    target_kind: str,
    target_aliases: list[str],
    quotes: list[str],
    source_context: list[str],
    target_context: list[str],
) -> str:
    """Judgment-only prompt: accept / reject / flip for one stored relation."""
    lines = [
        "TASK: relation-judgment",
        "You judge whether the stored relation is supported by its evidence.",
        'Answer one JSON object: {"outcome": "accept|reject|flip", "confidence": 0..1, "rationale": "..."}',
        "Flip means the relation holds with source and target swapped.",
        "",
        f"KIND: {kind}",
        f"SOURCE: {source_name} | kind: {source_kind} | aliases: {'; '.join(source_aliases)}",
        f"TARGET: {target_name} | kind: {target_kind} | aliases: {'; '.join(target_aliases)}",
        "QUOTES:",
        *[f"- {q}" for q in quotes],
        "END QUOTES",
        "CONTEXT SOURCE:",
        *[f"- {c}" for c in source_context],
        "CONTEXT TARGET:",
        *[f"- {c}" for c in target_context],
        "OUTPUT:",
    ]
    return "\n".join(lines)


def build_synonym_prompt(
    name_a: str,
    aliases_a: list[str],
    name_b: str,
    aliases_b: list[str],
    context_a: list[str],
    context_b: list[str],
) -> str:
    lines = [
        "TASK: synonym-judgment",
        "You judge whether two graph entities denote the same real-world organization.",
        'Answer one JSON object: {"is_synonym": true|false, "rationale": "..."}',
        "",
        f"ENTITY A: {name_a} | aliases: {'; '.join(aliases_a)}",
        f"ENTITY B: {name_b} | aliases: {'; '.join(aliases_b)}",
        "CONTEXT A:",
        *[f"- {c}" for c in context_a],
        "CONTEXT B:",
        *[f"- {c}" for c in context_b],
        "OUTPUT:",
    ]
    return "\n".join(lines)
