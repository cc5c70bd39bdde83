"""Jaro-Winkler string similarity for the candidate name gate."""

from __future__ import annotations

WINKLER_PREFIX_SCALE = 0.1
WINKLER_MAX_PREFIX = 4


def jaro(a: str, b: str) -> float:
    if a == b:
        return 1.0
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return 0.0
    window = max(la, lb) // 2 - 1
    if window < 0:
        window = 0

    matched_b = [False] * lb
    matches_a: list[str] = []
    for i, ch in enumerate(a):
        lo = max(0, i - window)
        hi = min(lb, i + window + 1)
        for j in range(lo, hi):
            if not matched_b[j] and b[j] == ch:
                matched_b[j] = True
                matches_a.append(ch)
                break
    m = len(matches_a)
    if m == 0:
        return 0.0

    matches_b = [b[j] for j in range(lb) if matched_b[j]]
    half_transpositions = sum(1 for x, y in zip(matches_a, matches_b) if x != y)
    t = half_transpositions / 2
    return (m / la + m / lb + (m - t) / m) / 3


def jaro_winkler(a: str, b: str) -> float:
    base = jaro(a, b)
    prefix = 0
    for x, y in zip(a, b):
        if x != y or prefix == WINKLER_MAX_PREFIX:
            break
        prefix += 1
    return base + prefix * WINKLER_PREFIX_SCALE * (1.0 - base)
