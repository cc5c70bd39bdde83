"""The mining loop: seeds in, knowledge graph out.

Breadth-first over companies: each iteration drains the current frontier,
searches and fetches documents per company, extracts evidence-backed
triplets, and enqueues newly discovered companies one hop deeper. Synonym
resolution and relation verification run as phases between iterations so
merges improve the routing of later mentions.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..clock import Clock, LogicalClock, SystemClock, isoformat
from ..config import RunConfig
from ..errors import (
    AliasConflict,
    BudgetExhausted,
    CassetteMiss,
    ChainMineError,
    CorruptCheckpoint,
    EmptySeedFile,
    EndpointKindMismatch,
    KindMismatch,
)
from ..extraction import extract_document, load_few_shot
from ..harvest import (
    CorpusTransport,
    DocStore,
    Fetcher,
    HttpSearchProvider,
    HttpTransport,
    LocalCorpusSearchProvider,
    RecordingSearchProvider,
    RecordingTransport,
    ReplaySearchProvider,
    ReplayTransport,
    RobotsPolicy,
    extract_text,
    generate_keywords,
    load_seeds,
)
from ..model.store import GraphStore
from ..model.types import EntityKind, Evidence, RelationKind
from ..providers.cassette import Cassette
from ..providers.embedding import TrigramHashEmbedder
from ..providers.llm import HttpLLMProvider, RecordingLLM, ReplayLLM
from ..providers.scripted import ScriptedLLM
from ..resolution import (
    ReviewQueue,
    candidates_by_embedding,
    candidates_by_relation,
    merge_candidate_lists,
)
from ..textnorm import normalize_alias
from ..verification import verify_batch
from .state import MiningState

CHECKPOINT_FILE = "checkpoint.json"
SNAPSHOT_FILE = "snapshot.json"
DOCS_FILE = "docs.json"
REVIEW_FILE = "review_queue.json"
JOURNAL_FILE = "journal.jsonl"


@dataclass
class Pipeline:
    """Everything a run needs, wired per the config's provider modes."""

    config: RunConfig
    clock: Clock
    store: GraphStore
    docs: DocStore
    review: ReviewQueue
    llm: Any
    search: Any
    fetcher: Fetcher
    embedder: TrigramHashEmbedder
    few_shot: list[tuple[str, str]] = field(default_factory=list)
    events: list[dict[str, Any]] = field(default_factory=list)


def _build_llm(config: RunConfig, cassette: Cassette):
    mode = config.llm_mode
    if mode == "scripted":
        return ScriptedLLM()
    if mode == "replay":
        return ReplayLLM(cassette)
    if mode == "record":
        inner = HttpLLMProvider() if os.environ.get("LLM_API_BASE") else ScriptedLLM()
        return RecordingLLM(inner, cassette)
    if mode == "http":
        return HttpLLMProvider()
    raise ValueError(f"unknown llm_mode {mode!r}")


def _build_search(config: RunConfig, cassette: Cassette):
    mode = config.search_mode
    if mode == "replay":
        return ReplaySearchProvider(cassette)
    if mode == "local":
        return LocalCorpusSearchProvider(config.corpus_dir or ".")
    if mode == "record":
        inner = (
            LocalCorpusSearchProvider(config.corpus_dir)
            if config.corpus_dir
            else HttpSearchProvider()
        )
        return RecordingSearchProvider(inner, cassette)
    if mode == "http":
        return HttpSearchProvider()
    raise ValueError(f"unknown search_mode {mode!r}")


def _build_fetcher(config: RunConfig, cassette: Cassette, clock: Clock) -> Fetcher:
    mode = config.fetch_mode
    robots = None
    if mode == "replay":
        transport: Any = ReplayTransport(cassette)
    elif mode == "corpus":
        transport = CorpusTransport(config.corpus_dir or ".")
    elif mode == "record":
        inner = CorpusTransport(config.corpus_dir) if config.corpus_dir else HttpTransport()
        transport = RecordingTransport(inner, cassette)
    elif mode == "http":
        transport = HttpTransport()
        robots = RobotsPolicy(transport)
    else:
        raise ValueError(f"unknown fetch_mode {mode!r}")
    return Fetcher(
        transport=transport,
        clock=clock,
        per_host_delay=config.per_host_delay,
        robots=robots,
    )


def build_pipeline(
    config: RunConfig,
    workspace: str | Path,
    clock: Clock | None = None,
) -> Pipeline:
    workspace = Path(workspace)
    workspace.mkdir(parents=True, exist_ok=True)
    if clock is None:
        live = "http" in (config.llm_mode, config.search_mode, config.fetch_mode)
        clock = SystemClock() if live else LogicalClock()
    # like every other config path, cassette_dir resolves against the cwd
    cassette = Cassette(Path(config.cassette_dir))
    store = GraphStore(clock=clock)
    store.attach_journal(workspace / JOURNAL_FILE)
    few_shot = load_few_shot(config.few_shot_path) if config.few_shot_path else []
    return Pipeline(
        config=config,
        clock=clock,
        store=store,
        docs=DocStore(),
        review=ReviewQueue(store, clock),
        llm=_build_llm(config, cassette),
        search=_build_search(config, cassette),
        fetcher=_build_fetcher(config, cassette, clock),
        embedder=TrigramHashEmbedder(),
        few_shot=few_shot,
    )


class MiningRunner:
    def __init__(self, pipeline: Pipeline, state: MiningState | None = None):
        self.p = pipeline
        self.state = state or MiningState()

    # -- lifecycle ---------------------------------------------------------------

    def init_from_seeds(self, path: str | Path | None = None) -> MiningState:
        seeds = load_seeds(path or self.p.config.seeds_path)
        if not seeds:
            raise EmptySeedFile(str(path))
        state = MiningState()
        state.started_monotonic = self.p.clock.monotonic()
        for seed in seeds:
            ent, _ = self.p.store.upsert_entity(
                EntityKind.COMPANY,
                seed.company_name,
                aliases=seed.aliases,
                jurisdiction=seed.jurisdiction,
            )
            state.enqueue(ent.id, 0)
        self.state = state
        return state

    def _elapsed(self) -> float:
        return self.p.clock.monotonic() - self.state.started_monotonic

    def _event(self, stage: str, item: str, error: Exception) -> None:
        self.state.counters.errors += 1
        self.p.events.append({"stage": stage, "item": item, "error": str(error)})

    # -- the loop -----------------------------------------------------------------

    def run_iteration(self) -> dict[str, Any]:
        """Drain the current frontier batch, then run the cadence phases."""
        cfg = self.p.config
        state = self.state
        state.check_budgets(cfg.budgets, self._elapsed())

        batch = list(state.frontier)
        state.frontier = []
        discovered_before = state.counters.companies_discovered
        for idx, (company_id, depth) in enumerate(batch):
            try:
                state.check_budgets(cfg.budgets, self._elapsed())
            except BudgetExhausted:
                # put the unprocessed tail back so a resume picks it up
                state.frontier = batch[idx:] + state.frontier
                raise
            self._process_company(company_id, depth)
            state.mark_visited(company_id)

        state.iteration += 1
        phases: dict[str, Any] = {}
        if cfg.resolution_cadence and state.iteration % cfg.resolution_cadence == 0:
            phases["resolution"] = self.run_resolution()
        if cfg.verification_cadence and state.iteration % cfg.verification_cadence == 0:
            phases["verification"] = self.run_verification()
        return {
            "iteration": state.iteration,
            "processed": len(batch),
            "discovered": state.counters.companies_discovered - discovered_before,
            "frontier": len(state.frontier),
            **phases,
        }

    def _process_company(self, company_id: str, depth: int) -> None:
        store = self.p.store
        live_id = store.resolve_id(company_id)
        if live_id != company_id and live_id in self.state.visited:
            return  # merged into an already-processed company
        company = store.get_entity(live_id)

        seen_urls: set[str] = set()
        for query in generate_keywords(company, self.p.config.templates):
            try:
                results = self.p.search.search(query.query_text, self.p.config.search_limit)
                self.state.counters.provider_calls += 1
            except ChainMineError as exc:
                self._event("search", query.query_text, exc)
                continue
            for result in results:
                if result.url in seen_urls:
                    continue
                seen_urls.add(result.url)
                self._process_url(result.url, query.query_text, depth)

    def _process_url(self, url: str, query_text: str, depth: int) -> None:
        counters = self.state.counters
        try:
            page = self.p.fetcher.fetch(url)
            counters.provider_calls += 1
            counters.docs_fetched += 1
        except ChainMineError as exc:
            self._event("fetch", url, exc)
            return
        try:
            text = extract_text(page.body, page.content_type)
        except ChainMineError as exc:
            self._event("clean", url, exc)
            return
        doc_id, is_new = self.p.docs.store(
            text, url, query_text, fetched_at=isoformat(self.p.clock.now())
        )
        if not is_new:
            return  # same cleaned text seen before; provenance recorded, no re-extract
        counters.docs_new += 1

        try:
            report, run = extract_document(
                self.p.llm,
                text,
                self.p.few_shot,
                max_chars=self.p.config.chunk_max_chars,
                overlap=self.p.config.chunk_overlap,
            )
        except (CassetteMiss, ChainMineError) as exc:
            self._event("extract", doc_id, exc)
            return
        counters.provider_calls += run.provider_calls
        counters.triplets_extracted += len(report.accepted) + len(report.rejected)
        counters.triplets_rejected += len(report.rejected)
        self._ingest(report, doc_id, depth)

    def _ingest(self, report, doc_id: str, depth: int) -> None:
        """Upsert validated entities and relations; grow the frontier."""
        cfg = self.p.config
        store = self.p.store
        state = self.state
        id_of: dict[str, str] = {}
        for raw in report.entities:
            try:
                ent, created = store.upsert_entity(raw.kind, raw.name)
            except (AliasConflict, KindMismatch) as exc:
                self._event("entity", raw.name, exc)
                continue
            id_of[normalize_alias(raw.name)] = ent.id
            if created and raw.kind is EntityKind.COMPANY:
                state.counters.companies_discovered += 1
                if depth + 1 <= cfg.max_depth:
                    state.enqueue(ent.id, depth + 1)

        for trip in report.accepted:
            src = id_of.get(normalize_alias(trip.source.name))
            tgt = id_of.get(normalize_alias(trip.target.name))
            if src is None or tgt is None:
                continue
            evidence = Evidence(
                document_id=doc_id,
                quote=trip.quote,
                char_offset=trip.char_offset,
                extracted_at=isoformat(self.p.clock.now()),
            )
            try:
                rel, _ = store.upsert_relation(
                    trip.kind, src, tgt, [evidence], trip.attributes or None
                )
            except EndpointKindMismatch as exc:
                self._event("relation", f"{trip.kind.value}:{trip.source.name}->{trip.target.name}", exc)
                continue
            if rel is not None:
                state.counters.triplets_accepted += 1
            if trip.kind is RelationKind.LOCATED_IN:
                code = cfg.location_codes.get(normalize_alias(trip.target.name))
                if code:
                    store.set_jurisdiction(src, code)

    # -- cadence phases ---------------------------------------------------------

    def run_resolution(self) -> dict[str, Any]:
        cfg = self.p.config
        blocked = self.p.store.rejected_pairs()
        rel_cands = candidates_by_relation(
            self.p.store,
            cfg.min_shared_neighbors,
            cfg.min_name_similarity,
            blocklist=blocked,
        )
        emb_cands = candidates_by_embedding(
            self.p.store,
            self.p.embedder,
            cfg.min_embedding_similarity,
            blocklist=blocked,
        )
        merged = merge_candidate_lists(rel_cands, emb_cands)
        added = self.p.review.upsert_candidates(merged)
        counts = self.p.review.verify_pending(self.p.llm)
        self.state.counters.provider_calls += (
            counts["awaiting_review"] + counts["rejected_by_llm"]
        )
        auto_merged = 0
        if cfg.auto_approve:
            for cand in self.p.review.awaiting_review():
                self.p.review.apply_decision(cand.pair_id, "merge", "llm", auto=True)
                auto_merged += 1
        return {
            "candidates": len(merged),
            "new": added,
            **counts,
            "auto_merged": auto_merged,
        }

    def run_verification(self) -> dict[str, Any]:
        report = verify_batch(self.p.store, self.p.llm)
        self.state.counters.provider_calls += report.judged + report.errors
        return report.to_dict()

    def run_until_fixpoint(self) -> dict[str, Any]:
        stop_reason, budget = "fixpoint", None
        iterations: list[dict[str, Any]] = []
        while self.state.frontier:
            try:
                iterations.append(self.run_iteration())
            except BudgetExhausted as exc:
                stop_reason, budget = "budget", exc.budget
                break
        return self.run_report(stop_reason, budget, iterations)

    def run_report(
        self,
        stop_reason: str,
        budget: str | None = None,
        iterations: list[dict[str, Any]] | None = None,
    ) -> dict[str, Any]:
        pending_review = len(self.p.review.awaiting_review())
        from ..model.types import RelationStatus

        unverified = sum(
            1
            for r in self.p.store.live_relations()
            if r.status is RelationStatus.EXTRACTED
        )
        return {
            "stop_reason": stop_reason,
            "budget": budget,
            "iterations": self.state.iteration,
            "counters": self.state.counters.to_dict(),
            "pending_review": pending_review,
            "unverified_relations": unverified,
            "frontier": len(self.state.frontier),
            "visited": len(self.state.visited),
            "elapsed_seconds": self._elapsed(),
            "finished_at": isoformat(self.p.clock.peek())
            if isinstance(self.p.clock, LogicalClock)
            else isoformat(self.p.clock.now()),
            "iteration_log": iterations or [],
            "errors": list(self.p.events),
        }

    # -- checkpointing ---------------------------------------------------------------

    def checkpoint(self, directory: str | Path) -> Path:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        self.p.store.save_snapshot(directory / SNAPSHOT_FILE)
        self.p.docs.save(directory / DOCS_FILE)
        self.p.review.save(directory / REVIEW_FILE)
        clock_state: dict[str, Any] = {}
        if isinstance(self.p.clock, LogicalClock):
            clock_state = {"tick": self.p.clock.tick, "slept": self.p.clock._slept}
        payload = {
            "schema_version": 1,
            "config_hash": self.p.config.semantic_hash(),
            "state": self.state.to_dict(),
            "clock": clock_state,
        }
        path = directory / CHECKPOINT_FILE
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        tmp.replace(path)
        return path

    @classmethod
    def resume(
        cls,
        config: RunConfig,
        workspace: str | Path,
        checkpoint_dir: str | Path | None = None,
    ) -> MiningRunner:
        workspace = Path(workspace)
        directory = Path(checkpoint_dir) if checkpoint_dir else workspace / "checkpoint"
        try:
            payload = json.loads((directory / CHECKPOINT_FILE).read_text(encoding="utf-8"))
            if payload.get("schema_version") != 1:
                raise CorruptCheckpoint(
                    f"unknown checkpoint schema {payload.get('schema_version')!r}"
                )
            state = MiningState.from_dict(payload["state"])
            config_hash = payload["config_hash"]
            clock_state = payload.get("clock") or {}
        except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise CorruptCheckpoint(f"cannot read checkpoint in {directory}: {exc}") from exc

        config.check_hash(config_hash)
        clock: Clock = LogicalClock() if clock_state else SystemClock()

        pipeline = build_pipeline(config, workspace, clock=clock)
        try:
            pipeline.store = GraphStore.load_snapshot(
                directory / SNAPSHOT_FILE, clock=clock
            )
        except ChainMineError:
            raise
        except (OSError, json.JSONDecodeError) as exc:
            raise CorruptCheckpoint(f"cannot read snapshot: {exc}") from exc
        journal = workspace / JOURNAL_FILE
        if journal.exists():
            pipeline.store.replay_journal(journal)
        pipeline.store.attach_journal(journal)
        if (directory / DOCS_FILE).exists():
            pipeline.docs = DocStore.load(directory / DOCS_FILE)
        pipeline.review = ReviewQueue(pipeline.store, clock)
        if (directory / REVIEW_FILE).exists():
            pipeline.review.load(directory / REVIEW_FILE)

        # Restore the clock position LAST: construction above consumed ticks,
        # and resumed timestamps must continue exactly where the checkpoint
        # stopped or resumed snapshots drift from uninterrupted ones.
        if clock_state and isinstance(clock, LogicalClock):
            clock.tick = int(clock_state["tick"])
            clock._slept = float(clock_state.get("slept", 0.0))
        return cls(pipeline, state)


def load_workspace(workspace: str | Path) -> dict[str, Any]:
    """Read-only view of a workspace's last checkpoint.

    Returns store, docs, review, and the checkpointed run state without
    constructing providers or touching the journal, so reporting surfaces
    can serve while a mining process owns the workspace.
    """
    directory = Path(workspace) / "checkpoint"
    snap = directory / SNAPSHOT_FILE
    if not snap.exists():
        raise FileNotFoundError(f"no checkpoint under {workspace}")
    store = GraphStore.load_snapshot(snap)
    docs = DocStore.load(directory / DOCS_FILE) if (directory / DOCS_FILE).exists() else DocStore()
    review = ReviewQueue(store)
    if (directory / REVIEW_FILE).exists():
        review.load(directory / REVIEW_FILE)
    run_state = None
    meta = directory / CHECKPOINT_FILE
    if meta.exists():
        run_state = json.loads(meta.read_text(encoding="utf-8")).get("state")
    return {"store": store, "docs": docs, "review": review, "run_state": run_state}
