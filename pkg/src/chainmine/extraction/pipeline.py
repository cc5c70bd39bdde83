"""Chunk -> prompt -> provider -> parse, with bounded repair retries."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import MalformedOutput
from ..providers.llm import LLMProvider
from .chunking import Chunk, chunk_document
from .evidence import ValidationReport, validate_evidence
from .prompts import DEFAULT_CONTEXT_BUDGET, build_prompt, build_repair_prompt
from .schema import ExtractionPayload, parse_extraction_output

REPAIR_RETRIES = 2  # one initial attempt plus this many repair rounds


@dataclass
class ChunkOutcome:
    chunk: Chunk
    payload: ExtractionPayload | None
    attempts: int
    error: str | None = None


@dataclass
class ExtractionRun:
    outcomes: list[ChunkOutcome] = field(default_factory=list)
    provider_calls: int = 0

    @property
    def failed_chunks(self) -> int:
        return sum(1 for o in self.outcomes if o.payload is None)


def extract_from_chunk(
    llm: LLMProvider,
    chunk: Chunk,
    few_shot: list[tuple[str, str]] | None = None,
    context_budget: int = DEFAULT_CONTEXT_BUDGET,
) -> ChunkOutcome:
    bundle = build_prompt(chunk.text, chunk.start, few_shot, context_budget)
    prompt = bundle.render()
    attempts = 0
    last_error = ""
    last_output = ""
    while attempts <= REPAIR_RETRIES:
        attempts += 1
        raw = llm.complete(prompt)
        try:
            payload = parse_extraction_output(raw)
            return ChunkOutcome(chunk=chunk, payload=payload, attempts=attempts)
        except MalformedOutput as exc:
            last_error = str(exc)
            last_output = raw
            prompt = build_repair_prompt(bundle, last_output, last_error)
    return ChunkOutcome(chunk=chunk, payload=None, attempts=attempts, error=last_error)


def extract_document(
    llm: LLMProvider,
    document_text: str,
    few_shot: list[tuple[str, str]] | None = None,
    max_chars: int = 6000,
    overlap: int = 300,
    context_budget: int = DEFAULT_CONTEXT_BUDGET,
) -> tuple[ValidationReport, ExtractionRun]:
    """Run joint extraction over every chunk and gate results on evidence.

    Duplicate relations across overlapping chunks collapse later in the
    graph store's dedup; here each chunk is validated against the FULL
    document so offsets are document coordinates.
    """
    run = ExtractionRun()
    all_entities: list = []
    seen_entities: set[str] = set()
    accepted: list = []
    seen_accepted: set[tuple] = set()
    rejected: list = []

    for chunk in chunk_document(document_text, max_chars=max_chars, overlap=overlap):
        outcome = extract_from_chunk(llm, chunk, few_shot, context_budget)
        run.outcomes.append(outcome)
        run.provider_calls += outcome.attempts
        if outcome.payload is None:
            continue
        report = validate_evidence(outcome.payload, document_text)
        for ent in report.entities:
            key = f"{ent.kind.value}:{ent.name.casefold()}"
            if key not in seen_entities:
                seen_entities.add(key)
                all_entities.append(ent)
        for trip in report.accepted:
            key = (trip.kind, trip.source.name, trip.target.name, trip.char_offset)
            if key not in seen_accepted:
                seen_accepted.add(key)
                accepted.append(trip)
        rejected.extend(report.rejected)

    merged = ValidationReport(
        entities=tuple(all_entities),
        accepted=tuple(accepted),
        rejected=tuple(rejected),
    )
    return merged, run
