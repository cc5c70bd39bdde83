import pytest

from chainmine.clock import LogicalClock
from chainmine.errors import ProviderError, StaleState, UnknownPair
from chainmine.model import GraphStore
from chainmine.model.types import EntityKind, Evidence, RelationKind
from chainmine.providers.embedding import TrigramHashEmbedder, cosine
from chainmine.providers.scripted import ScriptedLLM
from chainmine.resolution.candidates import (
    CandidateState,
    SynonymCandidate,
    candidates_by_embedding,
    candidates_by_relation,
    merge_candidate_lists,
    name_score,
)
from chainmine.resolution.queue import ReviewQueue, elect_survivor
from chainmine.resolution.similarity import jaro, jaro_winkler


def ev(doc="doc-1"):
    return Evidence(document_id=doc, quote="quote", char_offset=0)


def add_company(store, name, **kwargs):
    entity, _ = store.upsert_entity(EntityKind.COMPANY, name, **kwargs)
    return entity


# -- string similarity -------------------------------------------------------


def test_jaro_reference_values():
    # classic record-linkage examples
    assert jaro("martha", "marhta") == pytest.approx(0.9444444444)
    assert jaro("dixon", "dicksonx") == pytest.approx(0.7666666666)
    assert jaro("dwayne", "duane") == pytest.approx(0.8222222222)


def test_jaro_winkler_reference_values():
    assert jaro_winkler("martha", "marhta") == pytest.approx(0.9611111111)
    assert jaro_winkler("dixon", "dicksonx") == pytest.approx(0.8133333333)
    assert jaro_winkler("dwayne", "duane") == pytest.approx(0.84)


def test_similarity_edge_cases():
    assert jaro("same", "same") == 1.0
    assert jaro("", "x") == 0.0
    assert jaro("abc", "xyz") == 0.0
    assert jaro_winkler("", "") == 1.0


def test_winkler_prefix_bonus_caps_at_four():
    base = jaro("prefixed", "prefixes")
    assert jaro_winkler("prefixed", "prefixes") == pytest.approx(base + 0.4 * (1 - base))


def test_name_score_ignores_corporate_suffixes():
    store = GraphStore(clock=LogicalClock())
    a = add_company(store, "Huawei")
    b = add_company(store, "Huawei Technologies Co., Ltd.")
    # best pair is "huawei" vs "huawei technologies" after suffix stripping
    assert name_score(a, b) == pytest.approx(0.8631578947)


def test_name_score_uses_best_alias():
    store = GraphStore(clock=LogicalClock())
    a = add_company(store, "HiSilicon", aliases=["Kirin Maker"])
    b = add_company(store, "Totally Different", aliases=["HiSilicon Inc"])
    assert name_score(a, b) == 1.0


# -- embeddings ----------------------------------------------------------------


def test_embedder_is_deterministic_and_normalized():
    one = TrigramHashEmbedder().embed("Glacier Networks")
    two = TrigramHashEmbedder().embed("Glacier Networks")
    assert one == two
    assert sum(x * x for x in one) == pytest.approx(1.0)


def test_embedder_folds_suffixes_to_identical_vectors():
    e = TrigramHashEmbedder()
    assert cosine(e.embed("Glacier Networks"), e.embed("Glacier Networks Inc")) == pytest.approx(1.0)


def test_embedder_separates_unrelated_names():
    e = TrigramHashEmbedder()
    assert cosine(e.embed("Huawei"), e.embed("Lumina Semiconductor")) < 0.3


def test_embedder_trailing_words_are_downweighted():
    e = TrigramHashEmbedder()
    sim = cosine(e.embed("Helios"), e.embed("Helios Materials"))
    assert sim == pytest.approx(0.951148, abs=1e-5)


def test_embedder_rejects_tiny_dimensions():
    with pytest.raises(ValueError):
        TrigramHashEmbedder(dim=4)


def test_cosine_zero_vector_is_zero():
    assert cosine([0.0, 0.0], [1.0, 0.0]) == 0.0


# -- candidate generation --------------------------------------------------------


def shared_customer_store():
    """Two near-duplicate suppliers feeding the same customer."""
    store = GraphStore(clock=LogicalClock())
    full = add_company(store, "Glacier Networks")
    short = add_company(store, "Glacier Networks Inc")
    customer = add_company(store, "Summit Assembly")
    store.upsert_relation(RelationKind.SUPPLY, full.id, customer.id, [ev("d1")])
    store.upsert_relation(RelationKind.SUPPLY, short.id, customer.id, [ev("d2")])
    return store, full, short, customer


def test_candidates_by_relation_finds_shared_neighbor_pair():
    store, full, short, customer = shared_customer_store()
    cands = candidates_by_relation(store)
    assert len(cands) == 1
    cand = cands[0]
    assert (cand.entity_a, cand.entity_b) == (full.id, short.id)
    assert cand.shared_neighbors == 1
    assert cand.sources == {"RelationMatch"}
    assert cand.name_similarity > 0.9


def test_candidates_by_relation_direction_matters():
    store = GraphStore(clock=LogicalClock())
    a = add_company(store, "Glacier Networks")
    b = add_company(store, "Glacier Networks Inc")
    hub = add_company(store, "Summit Assembly")
    # a supplies the hub, the hub supplies b: no shared typed neighbor
    store.upsert_relation(RelationKind.SUPPLY, a.id, hub.id, [ev("d1")])
    store.upsert_relation(RelationKind.SUPPLY, hub.id, b.id, [ev("d2")])
    assert candidates_by_relation(store) == []


def test_candidates_by_relation_applies_gates():
    store, full, short, customer = shared_customer_store()
    dissimilar = add_company(store, "Zenith Plastics")
    store.upsert_relation(RelationKind.SUPPLY, dissimilar.id, customer.id, [ev("d3")])

    cands = candidates_by_relation(store)
    # the dissimilar supplier shares a neighbor but fails the name gate
    assert [c.pair_id for c in cands] == [f"{full.id}_{short.id}"]

    assert candidates_by_relation(store, min_shared=2) == []
    blocked = candidates_by_relation(store, blocklist=[f"{full.id}_{short.id}"])
    assert blocked == []


def test_candidates_by_relation_skips_cross_kind_pairs():
    store = GraphStore(clock=LogicalClock())
    company = add_company(store, "Kunpeng")
    product, _ = store.upsert_entity(EntityKind.PRODUCT, "Kunpeng 920")
    maker = add_company(store, "HiSilicon")
    store.upsert_relation(RelationKind.PRODUCE, maker.id, product.id, [ev("d1")])
    store.upsert_relation(RelationKind.HOLD_SHARE, maker.id, company.id, [ev("d2")])
    assert candidates_by_relation(store, min_shared=1) == []


def test_candidates_by_embedding_gates_on_cosine():
    store = GraphStore(clock=LogicalClock())
    a = add_company(store, "Helios")
    b = add_company(store, "Helios Materials")
    add_company(store, "Lumina Semiconductor")
    cands = candidates_by_embedding(store, TrigramHashEmbedder())
    assert [(c.entity_a, c.entity_b) for c in cands] == [(a.id, b.id)]
    assert cands[0].sources == {"EmbeddingMatch"}
    assert cands[0].embedding_similarity == pytest.approx(0.951148, abs=1e-5)
    # raising the bar above the pair's similarity empties the list
    assert candidates_by_embedding(store, TrigramHashEmbedder(), min_cosine=0.99) == []


def test_merge_candidate_lists_unions_by_pair():
    rel = SynonymCandidate("e1", "e2", sources={"RelationMatch"}, name_similarity=0.9, shared_neighbors=2)
    emb = SynonymCandidate("e2", "e1", sources={"EmbeddingMatch"}, name_similarity=0.85, embedding_similarity=0.95)
    other = SynonymCandidate("e3", "e4", sources={"EmbeddingMatch"}, embedding_similarity=0.9)
    merged = merge_candidate_lists([rel], [emb, other])
    assert [c.pair_id for c in merged] == ["e1_e2", "e3_e4"]
    top = merged[0]
    assert top.sources == {"RelationMatch", "EmbeddingMatch"}
    assert top.name_similarity == 0.9
    assert top.shared_neighbors == 2
    assert top.embedding_similarity == 0.95


def test_candidate_orders_pair_by_natural_id():
    cand = SynonymCandidate("e10", "e2")
    assert (cand.entity_a, cand.entity_b) == ("e2", "e10")
    assert cand.pair_id == "e2_e10"


# -- review queue ------------------------------------------------------------------


def queue_with_candidate():
    store, full, short, customer = shared_customer_store()
    queue = ReviewQueue(store, clock=LogicalClock())
    added = queue.upsert_candidates(candidates_by_relation(store))
    assert added == 1
    return store, queue, full, short


def test_upsert_candidates_never_regresses_state():
    store, queue, full, short = queue_with_candidate()
    cand = queue.get(f"{full.id}_{short.id}")
    queue.verify_candidate(cand, ScriptedLLM())
    assert cand.state is CandidateState.AWAITING_REVIEW

    again = candidates_by_relation(store)
    assert queue.upsert_candidates(again) == 0
    assert queue.get(cand.pair_id).state is CandidateState.AWAITING_REVIEW


def test_get_unknown_pair_raises():
    _, queue, _, _ = queue_with_candidate()
    with pytest.raises(UnknownPair):
        queue.get("e8_e9")


def test_verify_candidate_routes_on_verdict():
    store, queue, full, short = queue_with_candidate()
    cand = queue.get(f"{full.id}_{short.id}")
    verdict = queue.verify_candidate(cand, ScriptedLLM())
    assert verdict["is_synonym"] is True
    assert "suffix" in verdict["rationale"] or "descriptor" in verdict["rationale"]
    assert cand.state is CandidateState.AWAITING_REVIEW
    with pytest.raises(StaleState):
        queue.verify_candidate(cand, ScriptedLLM())


def test_verify_candidate_rejects_different_cores():
    store = GraphStore(clock=LogicalClock())
    a = add_company(store, "Helios Materials")
    b = add_company(store, "Lumina Semiconductor GmbH")
    hub = add_company(store, "Summit Assembly")
    store.upsert_relation(RelationKind.SUPPLY, a.id, hub.id, [ev("d1")])
    store.upsert_relation(RelationKind.SUPPLY, b.id, hub.id, [ev("d2")])
    queue = ReviewQueue(store, clock=LogicalClock())
    cand = SynonymCandidate(a.id, b.id, sources={"RelationMatch"}, shared_neighbors=1)
    queue.upsert_candidates([cand])
    verdict = queue.verify_candidate(queue.get(cand.pair_id), ScriptedLLM())
    assert verdict["is_synonym"] is False
    assert queue.get(cand.pair_id).state is CandidateState.REJECTED_BY_LLM


class FailingLLM:
    def complete(self, prompt):
        raise ProviderError("offline", retryable=True)


def test_verify_pending_counts_and_keeps_failed_pending():
    store, queue, full, short = queue_with_candidate()
    counts = queue.verify_pending(FailingLLM())
    assert counts == {"awaiting_review": 0, "rejected_by_llm": 0, "errors": 1}
    cand = queue.get(f"{full.id}_{short.id}")
    assert cand.state is CandidateState.PENDING

    counts = queue.verify_pending(ScriptedLLM())
    assert counts == {"awaiting_review": 1, "rejected_by_llm": 0, "errors": 0}


def test_apply_decision_merge_and_idempotent_replay():
    store, queue, full, short = queue_with_candidate()
    pair = f"{full.id}_{short.id}"
    queue.verify_candidate(queue.get(pair), ScriptedLLM())

    result = queue.apply_decision(pair, "merge", reviewer="analyst")
    # equal degree, so the earlier-created entity survives
    assert result["survivor"] == full.id
    assert result["absorbed"] == short.id
    assert result["aliases_added"] == ["Glacier Networks Inc"]
    assert result["relations_coalesced"] == 1
    assert result["noop"] is False
    assert queue.get(pair).state is CandidateState.APPROVED

    replay = queue.apply_decision(pair, "merge", reviewer="analyst")
    assert replay["noop"] is True
    with pytest.raises(StaleState):
        queue.apply_decision(pair, "keep-separate", reviewer="analyst")


def test_apply_decision_requires_awaiting_review():
    store, queue, full, short = queue_with_candidate()
    pair = f"{full.id}_{short.id}"
    with pytest.raises(StaleState):
        queue.apply_decision(pair, "merge", reviewer="analyst")
    with pytest.raises(ValueError):
        queue.apply_decision(pair, "approve", reviewer="analyst")


def test_keep_separate_blocks_future_candidates():
    store, queue, full, short = queue_with_candidate()
    pair = f"{full.id}_{short.id}"
    queue.verify_candidate(queue.get(pair), ScriptedLLM())
    result = queue.apply_decision(pair, "keep-separate", reviewer="analyst")
    assert result["state"] == "RejectedByHuman"
    assert pair in store.rejected_pairs()

    # the pair never comes back, even from a fresh generator pass
    fresh = ReviewQueue(store, clock=LogicalClock())
    assert fresh.upsert_candidates(candidates_by_relation(store)) == 0
    regenerated = candidates_by_relation(store, blocklist=store.rejected_pairs())
    assert regenerated == []


def test_elect_survivor_prefers_degree_then_age_then_id():
    store = GraphStore(clock=LogicalClock())
    old = add_company(store, "Old Light")
    young = add_company(store, "Young Light")
    hub = add_company(store, "Hub")
    other = add_company(store, "Other")
    store.upsert_relation(RelationKind.SUPPLY, young.id, hub.id, [ev("d1")])
    store.upsert_relation(RelationKind.SUPPLY, young.id, other.id, [ev("d2")])
    store.upsert_relation(RelationKind.SUPPLY, old.id, hub.id, [ev("d3")])
    assert elect_survivor(store, old.id, young.id) == (young.id, old.id)

    store.upsert_relation(RelationKind.SUPPLY, old.id, other.id, [ev("d4")])
    # degrees tie at two relations each; age breaks the tie
    assert elect_survivor(store, young.id, old.id) == (old.id, young.id)

    young.created_at = old.created_at
    assert elect_survivor(store, young.id, old.id) == (old.id, young.id)


def test_queue_save_load_round_trip(tmp_path):
    store, queue, full, short = queue_with_candidate()
    pair = f"{full.id}_{short.id}"
    queue.verify_candidate(queue.get(pair), ScriptedLLM())
    path = tmp_path / "queue.json"
    queue.save(path)

    fresh = ReviewQueue(store, clock=LogicalClock())
    assert fresh.load(path) == 1
    restored = fresh.get(pair)
    assert restored.state is CandidateState.AWAITING_REVIEW
    assert restored.llm_verdict["is_synonym"] is True
    assert restored.to_dict() == queue.get(pair).to_dict()
