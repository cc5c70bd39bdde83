from .chunking import Chunk, chunk_document
from .evidence import (
    RejectedTriplet,
    ValidatedTriplet,
    ValidationReport,
    find_quote_offset,
    validate_evidence,
)
from .pipeline import (
    REPAIR_RETRIES,
    ChunkOutcome,
    ExtractionRun,
    extract_document,
    extract_from_chunk,
)
from .prompts import (
    DEFAULT_CONTEXT_BUDGET,
    PromptBundle,
    build_prompt,
    build_repair_prompt,
    build_synonym_prompt,
    build_verification_prompt,
    load_few_shot,
)
from .schema import ExtractionPayload, RawEntity, RawRelation, parse_extraction_output

__all__ = [
    "Chunk",
    "chunk_document",
    "RejectedTriplet",
    "ValidatedTriplet",
    "ValidationReport",
    "find_quote_offset",
    "validate_evidence",
    "REPAIR_RETRIES",
    "ChunkOutcome",
    "ExtractionRun",
    "extract_document",
    "extract_from_chunk",
    "DEFAULT_CONTEXT_BUDGET",
    "PromptBundle",
    "build_prompt",
    "build_repair_prompt",
    "build_synonym_prompt",
    "build_verification_prompt",
    "load_few_shot",
    "ExtractionPayload",
    "RawEntity",
    "RawRelation",
    "parse_extraction_output",
]
