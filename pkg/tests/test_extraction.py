import json

import pytest

from chainmine.errors import ContextBudgetExceeded, MalformedOutput
from chainmine.extraction.chunking import Chunk, chunk_document
from chainmine.extraction.evidence import find_quote_offset, validate_evidence
from chainmine.extraction.pipeline import extract_document, extract_from_chunk
from chainmine.extraction.prompts import build_prompt, load_few_shot
from chainmine.extraction.schema import parse_extraction_output
from chainmine.model.types import EntityKind, RelationKind

VALID_PAYLOAD = json.dumps(
    {
        "entities": [
            {"name": "Alpha", "kind": "Company"},
            {"name": "Beta", "kind": "Company", "attributes": {"jurisdiction": "US"}},
        ],
        "relations": [
            {
                "kind": "Supply",
                "source_name": "Alpha",
                "target_name": "Beta",
                "evidence_quote": "Alpha supplies Beta.",
            }
        ],
    }
)


class QueueLLM:
    def __init__(self, responses):
        self.responses = list(responses)
        self.prompts = []

    def complete(self, prompt):
        self.prompts.append(prompt)
        return self.responses.pop(0)


# -- output shape validation -------------------------------------------------


def test_parse_valid_payload():
    payload = parse_extraction_output(VALID_PAYLOAD)
    assert [e.name for e in payload.entities] == ["Alpha", "Beta"]
    assert payload.entities[1].attributes == {"jurisdiction": "US"}
    rel = payload.relations[0]
    assert rel.kind is RelationKind.SUPPLY
    assert (rel.source_name, rel.target_name) == ("Alpha", "Beta")


def test_parse_strips_markdown_fences():
    fenced = "```json\n" + VALID_PAYLOAD + "\n```"
    assert len(parse_extraction_output(fenced).relations) == 1


def test_parse_rejects_non_json():
    with pytest.raises(MalformedOutput, match="not valid JSON"):
        parse_extraction_output("sorry, here is prose")


def test_parse_rejects_non_object_top_level():
    with pytest.raises(MalformedOutput, match="top level"):
        parse_extraction_output("[1, 2]")


def test_parse_collects_every_field_error():
    bad = json.dumps(
        {
            "entities": [
                {"name": "  ", "kind": "Company"},
                {"name": "Ok", "kind": "Starship"},
            ],
            "relations": [
                {"kind": "Supply", "source_name": "A", "target_name": "B", "evidence_quote": ""}
            ],
        }
    )
    with pytest.raises(MalformedOutput) as exc:
        parse_extraction_output(bad)
    message = str(exc.value)
    assert "entities[0].name" in message
    assert "entities[1].kind" in message
    assert "relations[0].evidence_quote" in message


def test_parse_trims_names_but_not_quotes():
    payload = parse_extraction_output(
        json.dumps(
            {
                "entities": [{"name": " Alpha ", "kind": "Company"}],
                "relations": [
                    {
                        "kind": "Competitor",
                        "source_name": " Alpha ",
                        "target_name": "Alpha B",
                        "evidence_quote": " verbatim  text ",
                    }
                ],
            }
        )
    )
    assert payload.entities[0].name == "Alpha"
    assert payload.relations[0].evidence_quote == " verbatim  text "


# -- evidence gate ------------------------------------------------------------


DOC = 'Intro:  “Alpha—Beta” pact signed.\nAlpha supplies Beta. The rest.'


def test_find_quote_offset_exact():
    assert find_quote_offset(DOC, "Alpha supplies Beta.") == DOC.index("Alpha supplies")


def test_find_quote_offset_tolerates_typographic_drift():
    # straight quotes and hyphen in the query, curly quotes and em dash in the doc
    offset = find_quote_offset(DOC, '"alpha-beta" pact   signed.')
    assert offset == DOC.index("“Alpha")


def test_find_quote_offset_missing_or_empty():
    assert find_quote_offset(DOC, "never written") is None
    assert find_quote_offset(DOC, "   ") is None


def test_validate_evidence_splits_accept_and_reject():
    payload = parse_extraction_output(
        json.dumps(
            {
                "entities": [
                    {"name": "Alpha", "kind": "Company"},
                    {"name": "Beta", "kind": "Company"},
                ],
                "relations": [
                    {
                        "kind": "Supply",
                        "source_name": "ALPHA",
                        "target_name": "beta",
                        "evidence_quote": "Alpha supplies Beta.",
                    },
                    {
                        "kind": "Supply",
                        "source_name": "Alpha",
                        "target_name": "Gamma",
                        "evidence_quote": "Alpha supplies Beta.",
                    },
                    {
                        "kind": "Supply",
                        "source_name": "Beta",
                        "target_name": "Alpha",
                        "evidence_quote": "Beta supplies Alpha.",
                    },
                ],
            }
        )
    )
    report = validate_evidence(payload, DOC)
    # endpoint names resolve case-insensitively against the declared entities
    assert len(report.accepted) == 1
    assert report.accepted[0].source.name == "Alpha"
    assert report.accepted[0].char_offset == DOC.index("Alpha supplies")
    assert [r.reason for r in report.rejected] == ["DanglingEntityRef", "EvidenceNotFound"]


# -- prompt assembly -----------------------------------------------------------


def test_build_prompt_renders_examples_and_task():
    bundle = build_prompt("Some text.", 0, few_shot=[("in", "out")])
    rendered = bundle.render()
    assert "TASK: joint-extraction" in rendered
    assert "EXAMPLE INPUT:\nin\nEXAMPLE OUTPUT:\nout" in rendered
    assert rendered.endswith("OUTPUT:")


def test_build_prompt_enforces_context_budget():
    with pytest.raises(ContextBudgetExceeded):
        build_prompt("x" * 2000, 0, context_budget=1000)


def test_load_few_shot_renders_dict_payloads(tmp_path):
    path = tmp_path / "samples.json"
    path.write_text(
        json.dumps(
            {
                "industry": "semiconductors",
                "samples": [
                    {"input_text": "A supplies B.", "expected_payload": {"entities": []}},
                    {"input_text": "raw", "expected_payload": "{\"entities\": []}"},
                ],
            }
        ),
        encoding="utf-8",
    )
    samples = load_few_shot(path)
    assert samples[0] == ("A supplies B.", '{"entities": []}')
    assert samples[1][1] == '{"entities": []}'


# -- chunk pipeline -------------------------------------------------------------


def test_extract_from_chunk_repairs_malformed_output():
    llm = QueueLLM(["not json at all", VALID_PAYLOAD])
    outcome = extract_from_chunk(llm, Chunk(0, 20, "Alpha supplies Beta."))
    assert outcome.attempts == 2
    assert outcome.payload is not None
    assert "REPAIR:" in llm.prompts[1]
    assert "not json at all" in llm.prompts[1]


def test_extract_from_chunk_gives_up_after_repair_budget():
    llm = QueueLLM(["bad"] * 3)
    outcome = extract_from_chunk(llm, Chunk(0, 5, "text."))
    assert outcome.payload is None
    assert outcome.attempts == 3
    assert "not valid JSON" in outcome.error
    assert len(llm.prompts) == 3


def test_extract_document_merges_chunks_without_duplicates():
    filler = "Background context sentence here. " * 3
    text = "Alpha supplies Beta. " + filler + "Beta partners with Gamma. " + filler
    chunks = chunk_document(text, max_chars=120, overlap=20)
    assert len(chunks) > 1

    # every chunk answers with the same triplet; the merge keeps one copy,
    # and the shouted duplicate entity collapses case-insensitively
    shouting = json.dumps(
        {
            "entities": [
                {"name": "ALPHA", "kind": "Company"},
                {"name": "Alpha", "kind": "Company"},
                {"name": "Beta", "kind": "Company"},
            ],
            "relations": [
                {
                    "kind": "Supply",
                    "source_name": "Alpha",
                    "target_name": "Beta",
                    "evidence_quote": "Alpha supplies Beta.",
                }
            ],
        }
    )
    llm = QueueLLM([VALID_PAYLOAD] + [shouting] * (len(chunks) - 1))
    report, run = extract_document(llm, text, max_chars=120, overlap=20)
    assert run.provider_calls == len(chunks)
    assert run.failed_chunks == 0
    assert [e.name for e in report.entities] == ["Alpha", "Beta"]
    assert len(report.accepted) == 1
    assert report.accepted[0].char_offset == 0
    assert all(e.kind is EntityKind.COMPANY for e in report.entities)


def test_extract_document_survives_a_dead_chunk():
    filler = "Background context sentence here. " * 3
    text = "Alpha supplies Beta. " + filler + "Beta partners with Gamma. " + filler
    chunks = chunk_document(text, max_chars=120, overlap=20)
    assert len(chunks) >= 2

    llm = QueueLLM(["garbage"] * 3 + [VALID_PAYLOAD] * (len(chunks) - 1))
    report, run = extract_document(llm, text, max_chars=120, overlap=20)
    assert run.failed_chunks == 1
    assert run.provider_calls == 3 + len(chunks) - 1
    # the healthy chunk still validates against the WHOLE document
    assert len(report.accepted) == 1
    assert report.accepted[0].char_offset == 0
