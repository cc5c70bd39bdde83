"""Document chunking with exact overlap and sentence-boundary snapping.

Each chunk ends at the last sentence break inside a bounded window below
the size limit (if any), and the next chunk starts exactly `overlap`
characters earlier, so stitching chunks back together reproduces the
document: text == chunks[0] + "".join(c[overlap:] for c in chunks[1:]).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_SENTENCE_END = re.compile(r"[.!?。！？](?=[ \n]|$)")


@dataclass(frozen=True)
class Chunk:
    start: int
    end: int
    text: str


def chunk_document(text: str, max_chars: int = 6000, overlap: int = 300) -> list[Chunk]:
    if overlap < 0 or max_chars <= overlap:
        raise ValueError("need max_chars > overlap >= 0")
    if not text:
        return []
    if len(text) <= max_chars:
        return [Chunk(0, len(text), text)]

    # keep the snap window small enough that progress per chunk stays positive
    window = min(200, (max_chars - overlap - 1) // 2)
    chunks: list[Chunk] = []
    start = 0
    while True:
        hard_end = start + max_chars
        if hard_end >= len(text):
            chunks.append(Chunk(start, len(text), text[start:]))
            break
        end = hard_end
        region = text[hard_end - window : hard_end]
        breaks = [m.end() for m in _SENTENCE_END.finditer(region)]
        if breaks:
            end = hard_end - window + breaks[-1]
        chunks.append(Chunk(start, end, text[start:end]))
        start = end - overlap
    return chunks
