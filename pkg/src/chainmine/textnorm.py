"""Text normalization used by alias lookup, evidence checking and name matching.

Three levels, loosest to most aggressive:

* normalize_alias      — case-fold + whitespace collapse; the graph store's
                         alias uniqueness key.
* normalize_quote      — alias rules plus typographic quote/dash folding;
                         the evidence substring test. A variant returns an
                         index map back into the raw text so match offsets
                         can be reported in original coordinates.
* normalize_company    — quote rules plus corporate suffix stripping and
                         punctuation removal; feeds name similarity scoring.
"""

from __future__ import annotations

import re

# Typographic characters LLMs habitually substitute when quoting.
_CHAR_FOLD = {
    "‘": "'", "’": "'", "‚": "'", "‛": "'",
    "′": "'", "`": "'", "´": "'",
    "“": '"', "”": '"', "„": '"', "‟": '"',
    "″": '"', "«": '"', "»": '"', "‹": "'", "›": "'",
    "‐": "-", "‑": "-", "‒": "-", "–": "-",
    "—": "-", "―": "-", "−": "-",
    "、": ",", "，": ",",
}

DEFAULT_CORPORATE_SUFFIXES = [
    "co., ltd.", "co.,ltd.", "co., ltd", "co ltd", "company limited",
    "corporation", "incorporated", "limited", "holdings",
    "gmbh", "ag", "s.a.", "b.v.", "plc", "inc.", "inc", "corp.", "corp",
    "ltd.", "ltd", "llc", "l.l.c.", "kk", "k.k.",
    "株式会社", "有限公司", "股份有限公司", "有限责任公司",
]


def normalize_alias(text: str) -> str:
    """Conservative key for alias identity: case-fold and collapse whitespace."""
    return re.sub(r"\s+", " ", text).strip().casefold()


def normalize_quote(text: str) -> str:
    return normalize_quote_with_map(text)[0]


def normalize_quote_with_map(text: str) -> tuple[str, list[int]]:
    """Normalize for the evidence substring test.

    Returns (normalized, index_map) where index_map[i] is the offset in the
    raw text of the character that produced normalized[i]. Whitespace runs
    collapse to a single space mapped to the run's first character.
    """
    out: list[str] = []
    idx: list[int] = []
    for i, ch in enumerate(text):
        ch = _CHAR_FOLD.get(ch, ch)
        if ch.isspace():
            if out and out[-1] != " ":
                out.append(" ")
                idx.append(i)
            continue
        for folded in ch.casefold():
            out.append(folded)
            idx.append(i)
    if out and out[-1] == " ":
        out.pop()
        idx.pop()
    return "".join(out), idx


_PUNCT_RE = re.compile(r"[^\w\s]", re.UNICODE)


def normalize_company(name: str, suffixes: list[str] | None = None) -> str:
    """Aggressive form for name similarity: fold, strip suffixes, drop punctuation."""
    text = normalize_quote(name)
    if suffixes is None:
        suffixes = DEFAULT_CORPORATE_SUFFIXES
    changed = True
    while changed:
        changed = False
        for suffix in suffixes:
            s = suffix.casefold()
            if text.endswith(s) and len(text) > len(s):
                text = text[: -len(s)].rstrip(" ,.-")
                changed = True
    text = _PUNCT_RE.sub(" ", text)
    return re.sub(r"\s+", " ", text).strip()


def looks_cjk(text: str, threshold: float = 0.2) -> bool:
    """Crude language tagger: True when a fifth of the characters are CJK."""
    letters = [c for c in text if not c.isspace()]
    if not letters:
        return False
    cjk = sum(1 for c in letters if "一" <= c <= "鿿" or "぀" <= c <= "ヿ")
    return cjk / len(letters) >= threshold
