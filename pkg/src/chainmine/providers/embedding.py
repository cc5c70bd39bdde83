"""Deterministic name embedder for offline synonym candidate generation.

Hashed character trigrams per word, with later words down-weighted so a
name extended by corporate boilerplate ("X Technologies ...") stays close
to the bare name. Uses a stable digest, never the process-seeded hash().
"""

from __future__ import annotations

import hashlib
import math
from typing import Sequence

from ..textnorm import normalize_company


def _trigrams(word: str) -> list[str]:
    padded = f" {word} "
    return [padded[i : i + 3] for i in range(len(padded) - 2)]


class TrigramHashEmbedder:
    def __init__(self, dim: int = 256, decay: float = 0.28):
        if dim < 8:
            raise ValueError("dim too small to be useful")
        self.dim = dim
        self.decay = decay

    def embed(self, text: str) -> list[float]:
        vec = [0.0] * self.dim
        words = normalize_company(text).split()
        for wi, word in enumerate(words):
            weight = self.decay**wi
            for tri in _trigrams(word):
                digest = hashlib.md5(tri.encode("utf-8")).digest()
                h = int.from_bytes(digest[:8], "big")
                bucket = (h >> 1) % self.dim
                sign = 1.0 if h & 1 else -1.0
                vec[bucket] += sign * weight
        norm = math.sqrt(sum(x * x for x in vec))
        if norm == 0.0:
            return vec
        return [x / norm for x in vec]


def cosine(u: Sequence[float], v: Sequence[float]) -> float:
    dot = sum(a * b for a, b in zip(u, v))
    nu = math.sqrt(sum(a * a for a in u))
    nv = math.sqrt(sum(b * b for b in v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return dot / (nu * nv)
