"""Deterministic rule-based stand-in for a live language model.

Drives offline demos and records the bundled cassettes. It dispatches on
the TASK marker the prompt builders emit and answers with the same JSON
shapes a live provider would return.

Quirk kept on purpose: the extraction rules read "X counts Y among its
suppliers" with the supply direction reversed. The relation-judgment rules
know the correct reading, so verification exercises a real direction flip.
"""

from __future__ import annotations

import json
import re

from ..textnorm import normalize_alias, normalize_company

_NAME = r"[A-Z0-9][A-Za-z0-9]*\.?(?:,? [A-Z0-9][A-Za-z0-9]*\.?)*"

# (pattern, relation kind, source group, target group, target entity kind)
_EXTRACT_RULES: list[tuple[re.Pattern, str, int, int, str]] = [
    (re.compile(rf"({_NAME}) supplies ({_NAME}) with ([a-z][a-z0-9 -]*)"), "Supply", 1, 2, "Company"),
    (re.compile(rf"({_NAME}) is a supplier of ({_NAME})"), "Supply", 1, 2, "Company"),
    (re.compile(rf"({_NAME}) is a customer of ({_NAME})"), "Supply", 2, 1, "Company"),
    # reversed on purpose; see module docstring
    (re.compile(rf"({_NAME}) counts ({_NAME}) among its suppliers"), "Supply", 1, 2, "Company"),
    (re.compile(rf"({_NAME}) counts ({_NAME}) among its customers"), "Supply", 1, 2, "Company"),
    (re.compile(rf"({_NAME}) and ({_NAME}) are competitors"), "Competitor", 1, 2, "Company"),
    (re.compile(rf"({_NAME}) may compete with ({_NAME})"), "Competitor", 1, 2, "Company"),
    (re.compile(rf"({_NAME}) partners with ({_NAME})"), "Partner", 1, 2, "Company"),
    (re.compile(rf"({_NAME}) produces ({_NAME})"), "Produce", 1, 2, "Product"),
    (re.compile(rf"({_NAME}) develops ({_NAME})"), "Develop", 1, 2, "Product"),
    (re.compile(rf"({_NAME}) is headquartered in ({_NAME})"), "LocatedIn", 1, 2, "Location"),
]

# correct readings used by the relation judge: (pattern, supplier grp, customer grp)
_DIRECTION_RULES: list[tuple[re.Pattern, int, int]] = [
    (re.compile(rf"({_NAME}) supplies ({_NAME}) with"), 1, 2),
    (re.compile(rf"({_NAME}) is a supplier of ({_NAME})"), 1, 2),
    (re.compile(rf"({_NAME}) is a customer of ({_NAME})"), 2, 1),
    (re.compile(rf"({_NAME}) counts ({_NAME}) among its suppliers"), 2, 1),
    (re.compile(rf"({_NAME}) counts ({_NAME}) among its customers"), 1, 2),
]

_HEDGES = ("speculate", "rumor", "rumour", " may ")

# descriptor words that do not distinguish a subsidiary from its parent
_GENERIC_WORDS = frozenset(
    "technologies technology electronics semiconductor semiconductors materials "
    "industries holdings group international devices systems solutions".split()
)

_CORPORATE_TAIL = frozenset({"co", "ltd", "inc", "corp", "gmbh", "ag", "sa", "plc"})


def _clean_name(raw: str) -> str:
    name = raw.strip()
    if name.endswith(".") and name.split()[-1].rstrip(".").lower() not in _CORPORATE_TAIL:
        name = name[:-1]
    return name.rstrip(",")


def split_sentences(text: str) -> list[str]:
    """Split on terminal punctuation followed by a capitalized start.

    Keeps dotted corporate names ("Co., Ltd. among ...") in one piece
    because the continuation is lowercase.
    """
    parts = re.split(r"(?<=[.!?])\s+(?=[A-Z0-9])", text)
    return [p.strip() for p in parts if p.strip()]


class ScriptedLLM:
    """LLMProvider implementation backed by the rules above."""

    def complete(self, prompt: str) -> str:
        if "TASK: joint-extraction" in prompt:
            return self._extract(prompt)
        if "TASK: synonym-judgment" in prompt:
            return self._judge_synonym(prompt)
        if "TASK: relation-judgment" in prompt:
            return self._judge_relation(prompt)
        raise ValueError("prompt has no recognized TASK marker")

    # -- extraction -----------------------------------------------------------

    @staticmethod
    def _between(prompt: str, start: str, end: str) -> str:
        i = prompt.index(start) + len(start)
        j = prompt.index(end, i)
        return prompt[i:j]

    def _extract(self, prompt: str) -> str:
        text = self._between(prompt, "TEXT:\n", "\nEND TEXT")
        entities: list[dict] = []
        seen: dict[str, str] = {}  # name -> kind
        relations: list[dict] = []

        def note_entity(name: str, kind: str) -> None:
            if name not in seen:
                seen[name] = kind
                entities.append({"name": name, "kind": kind, "attributes": {}})

        for sentence in split_sentences(text):
            for pattern, kind, src_g, tgt_g, tgt_kind in _EXTRACT_RULES:
                for m in pattern.finditer(sentence):
                    source = _clean_name(m.group(src_g))
                    target = _clean_name(m.group(tgt_g))
                    note_entity(source, "Company")
                    note_entity(target, tgt_kind)
                    attributes: dict[str, str] = {}
                    if kind == "Supply" and pattern.groups >= 3 and m.lastindex and m.lastindex >= 3:
                        attributes["commodity"] = m.group(3).strip()
                    relations.append(
                        {
                            "kind": kind,
                            "source_name": source,
                            "target_name": target,
                            "attributes": attributes,
                            "evidence_quote": sentence,
                        }
                    )
        return json.dumps({"entities": entities, "relations": relations}, ensure_ascii=False)

    # -- synonym judgment ------------------------------------------------------

    @staticmethod
    def _field(prompt: str, label: str) -> str:
        m = re.search(rf"^{re.escape(label)}:\s*(.*)$", prompt, flags=re.MULTILINE)
        if not m:
            raise ValueError(f"prompt lacks field {label}")
        return m.group(1).strip()

    @staticmethod
    def _strip_generics(words: list[str]) -> list[str]:
        out = list(words)
        while len(out) > 1 and out[-1] in _GENERIC_WORDS:
            out.pop()
        return out

    def _judge_synonym(self, prompt: str) -> str:
        name_a = self._field(prompt, "ENTITY A").split(" | ")[0]
        name_b = self._field(prompt, "ENTITY B").split(" | ")[0]
        base_a = normalize_company(name_a).split()
        base_b = normalize_company(name_b).split()
        if base_a == base_b:
            verdict, why = True, "names identical after corporate-suffix stripping"
        elif self._strip_generics(base_a) == self._strip_generics(base_b):
            verdict, why = True, "names differ only by a generic business descriptor"
        else:
            verdict, why = False, "name cores differ; likely distinct organizations"
        return json.dumps({"is_synonym": verdict, "rationale": why})

    # -- relation judgment -------------------------------------------------------

    @staticmethod
    def _aliases(field_value: str) -> set[str]:
        # field format: "<canonical> | kind: X | aliases: a; b; c"
        parts = field_value.split(" | ")
        names = {parts[0]}
        for part in parts[1:]:
            if part.startswith("aliases:"):
                names.update(a.strip() for a in part[len("aliases:"):].split(";"))
        return {normalize_alias(n) for n in names if n.strip()}

    def _judge_relation(self, prompt: str) -> str:
        kind = self._field(prompt, "KIND")
        source = self._aliases(self._field(prompt, "SOURCE"))
        target = self._aliases(self._field(prompt, "TARGET"))
        quotes_block = self._between(prompt, "QUOTES:\n", "\nEND QUOTES")
        quotes = [q[2:] if q.startswith("- ") else q for q in quotes_block.splitlines() if q.strip()]
        joined = " ".join(quotes).lower()
        if any(h in joined for h in _HEDGES):
            return json.dumps(
                {
                    "outcome": "reject",
                    "confidence": 0.91,
                    "rationale": "evidence is speculative or rumor-based",
                }
            )
        if kind == "Supply":
            for quote in quotes:
                for pattern, sup_g, cus_g in _DIRECTION_RULES:
                    m = pattern.search(quote)
                    if not m:
                        continue
                    supplier = normalize_alias(_clean_name(m.group(sup_g)))
                    customer = normalize_alias(_clean_name(m.group(cus_g)))
                    if supplier in source and customer in target:
                        return json.dumps(
                            {
                                "outcome": "accept",
                                "confidence": 0.94,
                                "rationale": "quote direction matches stored direction",
                            }
                        )
                    if supplier in target and customer in source:
                        return json.dumps(
                            {
                                "outcome": "flip",
                                "confidence": 0.88,
                                "rationale": "quote states the reverse supply direction",
                            }
                        )
        return json.dumps(
            {
                "outcome": "accept",
                "confidence": 0.94,
                "rationale": "evidence consistent with the stored relation",
            }
        )
