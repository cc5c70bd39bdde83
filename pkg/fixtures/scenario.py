"""Shared fixture scenario: configs, the mining storyline, review follow-up.

The cassette recorder and the test suite must issue the exact same provider
requests, so both drive runs through these helpers. Replay mode reads the
committed cassettes; record mode regenerates them from the bundled corpus.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

from chainmine.clock import LogicalClock
from chainmine.config import RunConfig
from chainmine.harvest.keywords import QueryTemplate
from chainmine.mining import MiningRunner, build_pipeline
from chainmine.model import EntityKind, Evidence, GraphStore, RelationKind

FIXTURES_DIR = Path(__file__).resolve().parent

LOCATION_CODES = {
    "shenzhen": "CN",
    "austin": "US",
    "hsinchu": "TW",
    "dresden": "DE",
    "osaka": "JP",
}

TEMPLATES = [
    QueryTemplate("suppliers-en", "{c} suppliers", "en"),
    QueryTemplate("customers-en", "{c} customers", "en"),
]


def _base_config(mode: str, seeds: str, corpus: str, cassettes: str) -> RunConfig:
    if mode not in ("replay", "record"):
        raise ValueError(f"scenario mode must be replay or record, got {mode!r}")
    return RunConfig(
        seeds_path=str(FIXTURES_DIR / seeds),
        templates=list(TEMPLATES),
        llm_mode=mode,
        search_mode=mode,
        fetch_mode=mode,
        cassette_dir=str(FIXTURES_DIR / "cassettes" / cassettes),
        corpus_dir=str(FIXTURES_DIR / corpus),
        search_limit=2,
        few_shot_path=str(FIXTURES_DIR / "fewshot" / "semiconductors.json"),
        location_codes=dict(LOCATION_CODES),
    )


def mining_config(mode: str = "replay") -> RunConfig:
    return _base_config(mode, "seeds.csv", "corpus", "mining")


def tiny_config(mode: str = "replay") -> RunConfig:
    return _base_config(mode, "tiny-seeds.csv", "tiny-corpus", "tiny")


def run_mining(config: RunConfig, workspace: str | Path) -> tuple[MiningRunner, dict[str, Any]]:
    """Seed, run to fixpoint, return the runner and its final report."""
    pipeline = build_pipeline(config, workspace)
    runner = MiningRunner(pipeline)
    runner.init_from_seeds()
    report = runner.run_until_fixpoint()
    return runner, report


def _pair_names(runner: MiningRunner, cand) -> set[str]:
    store = runner.p.store
    return {
        store.get_entity(cand.entity_a).canonical_name,
        store.get_entity(cand.entity_b).canonical_name,
    }


def run_review_followup(runner: MiningRunner) -> dict[str, Any]:
    """The human pass after fixpoint: merge the Huawei pair, keep the
    Lumina pair separate, then rerun resolution to show the blocklist and
    the alias-widened candidate search."""
    review = runner.p.review
    awaiting = review.awaiting_review()
    huawei_pair = next(
        c for c in awaiting if "Huawei Technologies Co., Ltd." in _pair_names(runner, c)
    )
    lumina_pair = next(
        c for c in awaiting if "Lumina Semiconductor GmbH" in _pair_names(runner, c)
    )
    merge = review.apply_decision(huawei_pair.pair_id, "merge", "analyst")
    keep = review.apply_decision(lumina_pair.pair_id, "keep-separate", "analyst")
    rerun = runner.run_resolution()
    return {
        "huawei_pair": huawei_pair.pair_id,
        "lumina_pair": lumina_pair.pair_id,
        "merge": merge,
        "keep": keep,
        "rerun": rerun,
    }


# -- standalone relation-verification fixture -----------------------------------

VERIFICATION_CASES = [
    # (source, target, quote, judged outcome, fact label)
    ("Borealis Chemicals", "Aurora Fab",
     "Borealis Chemicals supplies Aurora Fab with electronic-grade solvents.",
     "accept", True),
    ("Cobalt Micro", "Aurora Fab",
     "Cobalt Micro is a supplier of Aurora Fab.",
     "accept", True),
    ("Aurora Fab", "Delta Photonics",
     "Delta Photonics is a customer of Aurora Fab.",
     "accept", True),
    # stored backwards on purpose; the judge flips it
    ("Everest Casing", "Granite Substrates",
     "Everest Casing counts Granite Substrates among its suppliers.",
     "flip", True),
    ("Fjord Optics", "Harbor Logic",
     "Fjord Optics supplies Harbor Logic with precision lenses.",
     "accept", True),
    ("Ionis Power", "Juniper Displays",
     "Analysts speculate that Ionis Power supplies Juniper Displays with battery modules.",
     "reject", False),
    ("Krait Systems", "Lattice Forge",
     "Industry newsletters repeat a rumor that Krait Systems is a supplier of Lattice Forge.",
     "reject", False),
    ("Granite Substrates", "Harbor Logic",
     "Granite Substrates counts Harbor Logic among its customers.",
     "accept", True),
    ("Cobalt Micro", "Juniper Displays",
     "Juniper Displays is a customer of Cobalt Micro.",
     "accept", True),
    ("Lattice Forge", "Delta Photonics",
     "Lattice Forge supplies Delta Photonics with forged housings.",
     "accept", True),
]


def build_verification_fixture(clock: LogicalClock | None = None):
    """A ten-relation store: seven direction-correct quotes, one reversed
    edge, two hedged claims. Labels carry fact-level truth, so the reversed
    edge counts as true. Returns (store, labels, expectations)."""
    store = GraphStore(clock=clock or LogicalClock())
    ids: dict[str, str] = {}

    def company(name: str) -> str:
        if name not in ids:
            ent, _ = store.upsert_entity(EntityKind.COMPANY, name)
            ids[name] = ent.id
        return ids[name]

    labels: dict[str, bool] = {}
    expectations: dict[str, str] = {}
    for i, (src, tgt, quote, outcome, fact) in enumerate(VERIFICATION_CASES):
        ev = Evidence(document_id=f"verif-doc-{i}", quote=quote, char_offset=0)
        rel, _ = store.upsert_relation(RelationKind.SUPPLY, company(src), company(tgt), [ev])
        labels[rel.id] = fact
        expectations[rel.id] = outcome
    return store, labels, expectations
