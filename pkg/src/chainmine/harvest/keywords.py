"""Search keyword generation: alias x template cartesian product."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import EmptyTemplateSet
from ..model.types import Entity, EntityKind
from ..textnorm import looks_cjk


@dataclass(frozen=True)
class QueryTemplate:
    id: str
    text: str  # must contain the {c} placeholder
    language: str = "en"


@dataclass(frozen=True)
class KeywordQuery:
    company_id: str
    template_id: str
    query_text: str
    language: str


DEFAULT_TEMPLATES = [
    QueryTemplate("suppliers-en", "{c} suppliers", "en"),
    QueryTemplate("supplier-list-en", "{c} supplier list", "en"),
    QueryTemplate("customers-en", "{c} customers", "en"),
    QueryTemplate("supply-chain-en", "{c} supply chain", "en"),
    QueryTemplate("suppliers-zh", "{c} 供应商", "zh"),
    QueryTemplate("customers-zh", "{c} 客户", "zh"),
]


def generate_keywords(company: Entity, templates: list[QueryTemplate]) -> list[KeywordQuery]:
    """All alias x template combinations, alias-major order, deduplicated."""
    if not templates:
        raise EmptyTemplateSet("no query templates configured")
    if company.kind is not EntityKind.COMPANY:
        raise ValueError(f"{company.id} is {company.kind.value}, not Company")
    if not company.aliases:
        raise ValueError(f"{company.id} has no aliases")
    queries: list[KeywordQuery] = []
    seen: set[str] = set()
    for alias in company.aliases:
        for template in templates:
            text = template.text.replace("{c}", alias)
            if text in seen:
                continue
            seen.add(text)
            language = template.language
            if looks_cjk(alias) and template.language == "en":
                language = "mixed"
            queries.append(KeywordQuery(company.id, template.id, text, language))
    return queries
