"""Regenerate the committed cassettes from the bundled corpus.

Run from the repo root:

    python3 fixtures/build_fixtures.py

Record mode wraps the offline providers (local corpus search, corpus
fetch transport, scripted judgments) in recording cassettes, so the files
written here are exactly the requests a replay run makes. The assertions
freeze the expected storyline; if a corpus page or an extraction rule
changes, re-derive the numbers by hand before committing new cassettes.
"""

from __future__ import annotations

import shutil
import sys
import tempfile
from collections import Counter
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from scenario import (  # noqa: E402
    mining_config,
    run_mining,
    run_review_followup,
    tiny_config,
)

from chainmine.model import EntityKind  # noqa: E402
from chainmine.resolution.candidates import CandidateState  # noqa: E402


def check(label: str, got, want) -> None:
    if got != want:
        raise SystemExit(f"MISMATCH {label}: got {got!r}, want {want!r}")
    print(f"  ok {label} = {got!r}")


def wipe(cassette_dir: str) -> None:
    path = Path(cassette_dir)
    if path.exists():
        shutil.rmtree(path)


def cassette_inventory(cassette_dir: str) -> dict[str, int]:
    root = Path(cassette_dir)
    return {
        kind.name: len(list(kind.glob("*.json")))
        for kind in sorted(root.iterdir())
        if kind.is_dir()
    }


def record_mining() -> None:
    print("recording mining scenario")
    cfg = mining_config("record")
    wipe(cfg.cassette_dir)
    with tempfile.TemporaryDirectory() as ws:
        runner, report = run_mining(cfg, ws)

        check("stop_reason", report["stop_reason"], "fixpoint")
        check("iterations", report["iterations"], 3)
        check("visited", report["visited"], 10)
        check("pending_review", report["pending_review"], 2)
        check("unverified_relations", report["unverified_relations"], 0)
        check("frontier", report["frontier"], 0)

        store = runner.p.store
        kinds = Counter(e.kind for e in store.live_entities())
        check("companies", kinds[EntityKind.COMPANY], 10)
        check("products", kinds[EntityKind.PRODUCT], 2)
        check("locations", kinds[EntityKind.LOCATION], 4)

        statuses = Counter(r.status.value for r in store.live_relations())
        check("relations", sum(statuses.values()), 21)
        check("verified", statuses["Verified"], 18)
        check("rejected", statuses["Rejected"], 3)
        check("docs", len(runner.p.docs), 8)

        states = Counter(c.state for c in runner.p.review.candidates())
        check("awaiting", states[CandidateState.AWAITING_REVIEW], 2)
        check("llm_rejected", states[CandidateState.REJECTED_BY_LLM], 1)
        check("candidates", sum(states.values()), 3)

        followup = run_review_followup(runner)
        merge = followup["merge"]
        survivor = store.get_entity(merge["survivor"])
        check("survivor", survivor.canonical_name, "Huawei")
        check("aliases_added", merge["aliases_added"], ["Huawei Technologies Co., Ltd."])
        check("coalesced", merge["relations_coalesced"], 1)
        check("rewritten", merge["relations_rewritten"], 0)
        check("keep_state", followup["keep"]["state"], "RejectedByHuman")

        rerun = followup["rerun"]
        check("rerun_candidates", rerun["candidates"], 2)
        check("rerun_new", rerun["new"], 1)
        check("rerun_rejected", rerun["rejected_by_llm"], 1)
        check("rerun_awaiting", rerun["awaiting_review"], 0)

        # the post-merge candidate pairs Huawei with Kunpeng and the judge
        # keeps them separate; its prompt must land in the cassette
        rejected = runner.p.review.candidates(CandidateState.REJECTED_BY_LLM)
        names = {
            frozenset(
                (
                    store.get_entity(c.entity_a).canonical_name,
                    store.get_entity(c.entity_b).canonical_name,
                )
            )
            for c in rejected
        }
        check(
            "llm_rejected_pairs",
            names,
            {
                frozenset(("Helios Devices", "Lumina Semiconductor")),
                frozenset(("Huawei", "Kunpeng Electronics")),
            },
        )

    # 10 companies x 2 templates, plus 2 queries for the seeded Lumina alias
    inventory = cassette_inventory(cfg.cassette_dir)
    check("cassettes", inventory, {"fetch": 8, "llm": 32, "search": 22})


def record_tiny() -> None:
    print("recording tiny scenario")
    cfg = tiny_config("record")
    wipe(cfg.cassette_dir)
    with tempfile.TemporaryDirectory() as ws:
        runner, report = run_mining(cfg, ws)

        check("stop_reason", report["stop_reason"], "fixpoint")
        check("iterations", report["iterations"], 2)
        check("visited", report["visited"], 2)
        check("pending_review", report["pending_review"], 0)

        store = runner.p.store
        check("entities", len(store.live_entities()), 3)
        statuses = Counter(r.status.value for r in store.live_relations())
        check("relations", dict(statuses), {"Verified": 2})
        check("docs", len(runner.p.docs), 2)

        beta = store.get_entity(store.lookup_alias("Beta Gears"))
        check("beta_jurisdiction", beta.jurisdiction, "JP")

    inventory = cassette_inventory(cfg.cassette_dir)
    check("cassettes", inventory, {"fetch": 2, "llm": 4, "search": 4})


if __name__ == "__main__":
    record_mining()
    record_tiny()
    print("cassettes recorded")
