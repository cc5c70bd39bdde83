"""HTTP service over a mined graph.

Read endpoints serve entity search, neighborhoods, relation evidence, run
status, and graph metrics. The one mutation is a review decision on a
synonym pair. Auth is a static bearer token pair from the environment:
API_TOKEN grants the reviewer role, API_VIEWER_TOKEN read-only access.
With neither set the service is open (local analyst use).
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from fastapi import Depends, FastAPI, HTTPException, Query, Request

from . import __version__
from .analytics.view import scope_metrics
from .errors import (
    EmptyGraph,
    StaleState,
    UnknownEntity,
    UnknownPair,
    UnknownRelation,
)
from .harvest.docstore import DocStore
from .mining.runner import load_workspace
from .model.store import GraphStore
from .model.types import Relation, RelationKind, RelationStatus
from .resolution.queue import ReviewQueue

DEFAULT_PAGE = 100
MAX_PAGE = 1000
MAX_NEIGHBORHOOD_DEPTH = 3


@dataclass
class ApiContext:
    store: GraphStore
    docs: DocStore = field(default_factory=DocStore)
    review: ReviewQueue | None = None
    run_state: dict[str, Any] | None = None

    def __post_init__(self) -> None:
        if self.review is None:
            self.review = ReviewQueue(self.store)


def load_context(workspace: str | Path) -> ApiContext:
    """Serve the last checkpointed view of a mining workspace."""
    parts = load_workspace(workspace)
    return ApiContext(
        store=parts["store"],
        docs=parts["docs"],
        review=parts["review"],
        run_state=parts["run_state"],
    )


# -- auth ----------------------------------------------------------------------


def _bearer(request: Request) -> str | None:
    header = request.headers.get("authorization")
    if not header or not header.lower().startswith("bearer "):
        return None
    return header[7:].strip()


def create_app(
    context: ApiContext,
    reviewer_token: str | None = None,
    viewer_token: str | None = None,
) -> FastAPI:
    reviewer_token = reviewer_token if reviewer_token is not None else os.environ.get("API_TOKEN")
    viewer_token = viewer_token if viewer_token is not None else os.environ.get("API_VIEWER_TOKEN")
    auth_enabled = bool(reviewer_token or viewer_token)

    app = FastAPI(title="chainmine", version=__version__)
    ctx = context

    def role_of(request: Request) -> str:
        if not auth_enabled:
            return "reviewer"
        token = _bearer(request)
        if token is None:
            raise HTTPException(401, "missing bearer token")
        if reviewer_token and token == reviewer_token:
            return "reviewer"
        if viewer_token and token == viewer_token:
            return "viewer"
        raise HTTPException(401, "unrecognized token")

    def require_reviewer(role: str = Depends(role_of)) -> str:
        if role != "reviewer":
            raise HTTPException(403, "reviewer role required")
        return role

    # -- serializers -----------------------------------------------------------

    def entity_payload(entity_id: str) -> dict[str, Any]:
        ent = ctx.store.get_entity(entity_id)
        return ent.to_dict()

    def degree_summary(entity_id: str) -> dict[str, Any]:
        out_deg = in_deg = 0
        by_kind: dict[str, dict[str, int]] = {}
        by_status: dict[str, int] = {}
        for rel in ctx.store.relations_of(entity_id):
            by_status[rel.status.value] = by_status.get(rel.status.value, 0) + 1
            if rel.status is RelationStatus.REJECTED:
                continue
            bucket = by_kind.setdefault(rel.kind.value, {"out": 0, "in": 0})
            if rel.source == entity_id:
                out_deg += 1
                bucket["out"] += 1
            else:
                in_deg += 1
                bucket["in"] += 1
        return {"out": out_deg, "in": in_deg, "by_kind": by_kind, "by_status": by_status}

    def relation_payload(rel: Relation) -> dict[str, Any]:
        data = rel.to_dict()
        for item in data["evidence"]:
            item["url"] = ctx.docs.url_of(item["document_id"])
        return data

    def neighbor_lines(entity_id: str, limit: int = 5) -> list[str]:
        lines = []
        for rel in ctx.store.relations_of(entity_id):
            if rel.status is RelationStatus.REJECTED:
                continue
            src = ctx.store.get_entity(ctx.store.resolve_id(rel.source))
            tgt = ctx.store.get_entity(ctx.store.resolve_id(rel.target))
            lines.append(f"{rel.kind.value}: {src.canonical_name} -> {tgt.canonical_name}")
            if len(lines) >= limit:
                break
        return lines

    def paginate(items: list[Any], cursor: str | None, limit: int, key) -> tuple[list[Any], str | None]:
        if cursor:
            keys = [key(item) for item in items]
            if cursor not in keys:
                raise HTTPException(404, f"unknown cursor {cursor!r}")
            items = items[keys.index(cursor) + 1 :]
        page = items[:limit]
        next_cursor = key(page[-1]) if len(items) > limit else None
        return page, next_cursor

    # -- read endpoints ----------------------------------------------------------

    @app.get("/api/health")
    def health(role: str = Depends(role_of)) -> dict[str, str]:
        return {"status": "ok", "version": __version__}

    @app.get("/api/entities")
    def list_entities(
        q: str | None = None,
        kind: str | None = None,
        jurisdiction: str | None = None,
        cursor: str | None = None,
        limit: int = Query(DEFAULT_PAGE, ge=1, le=MAX_PAGE),
        role: str = Depends(role_of),
    ) -> dict[str, Any]:
        items = ctx.store.live_entities()
        if kind is not None:
            items = [e for e in items if e.kind.value == kind]
        if jurisdiction is not None:
            items = [e for e in items if e.jurisdiction == jurisdiction]
        if q:
            needle = q.casefold()
            items = [
                e
                for e in items
                if needle in e.canonical_name.casefold()
                or any(needle in a.casefold() for a in e.aliases)
            ]
        page, next_cursor = paginate(items, cursor, limit, key=lambda e: e.id)
        return {
            "items": [e.to_dict() for e in page],
            "next_cursor": next_cursor,
            "total": len(items),
        }

    @app.get("/api/entities/{entity_id}")
    def get_entity(entity_id: str, role: str = Depends(role_of)) -> dict[str, Any]:
        try:
            payload = entity_payload(entity_id)
        except UnknownEntity as exc:
            raise HTTPException(404, str(exc)) from exc
        payload["degree"] = degree_summary(entity_id)
        return payload

    @app.get("/api/entities/{entity_id}/neighborhood")
    def neighborhood(
        entity_id: str,
        depth: int = Query(1, ge=1),
        kinds: str | None = None,
        role: str = Depends(role_of),
    ) -> dict[str, Any]:
        depth = min(depth, MAX_NEIGHBORHOOD_DEPTH)
        try:
            root = ctx.store.resolve_id(entity_id)
            ctx.store.get_entity(root)
        except UnknownEntity as exc:
            raise HTTPException(404, str(exc)) from exc
        allowed_kinds: set[RelationKind] | None = None
        if kinds:
            try:
                allowed_kinds = {RelationKind(k) for k in kinds.split(",") if k}
            except ValueError as exc:
                raise HTTPException(400, f"unknown relation kind in {kinds!r}") from exc

        seen = {root}
        ring = deque([(root, 0)])
        edges: dict[str, Relation] = {}
        while ring:
            node, dist = ring.popleft()
            if dist >= depth:
                continue
            for rel in ctx.store.relations_of(node):
                if rel.status is RelationStatus.REJECTED:
                    continue
                if allowed_kinds is not None and rel.kind not in allowed_kinds:
                    continue
                edges[rel.id] = rel
                other = rel.target if rel.source == node else rel.source
                if other not in seen:
                    seen.add(other)
                    ring.append((other, dist + 1))
        # induced subgraph only: drop edges that lead outside the ball
        kept = [r for r in edges.values() if r.source in seen and r.target in seen]
        kept.sort(key=lambda r: (len(r.id), r.id))
        nodes = sorted(seen, key=lambda i: (len(i), i))
        return {
            "root": root,
            "depth": depth,
            "nodes": [entity_payload(n) for n in nodes],
            "edges": [relation_payload(r) for r in kept],
        }

    @app.get("/api/relations/{relation_id}")
    def get_relation(relation_id: str, role: str = Depends(role_of)) -> dict[str, Any]:
        try:
            rel = ctx.store.get_relation(relation_id)
        except UnknownRelation as exc:
            raise HTTPException(404, str(exc)) from exc
        return relation_payload(rel)

    @app.get("/api/review/queue")
    def review_queue(
        cursor: str | None = None,
        limit: int = Query(DEFAULT_PAGE, ge=1, le=MAX_PAGE),
        role: str = Depends(role_of),
    ) -> dict[str, Any]:
        pending = ctx.review.awaiting_review()
        page, next_cursor = paginate(pending, cursor, limit, key=lambda c: c.pair_id)
        items = []
        for cand in page:
            item = cand.to_dict()
            item["entities"] = [
                {**entity_payload(eid), "neighbors": neighbor_lines(eid)}
                for eid in (cand.entity_a, cand.entity_b)
            ]
            items.append(item)
        return {"items": items, "next_cursor": next_cursor, "total": len(pending)}

    # -- the one mutation --------------------------------------------------------

    def apply_review(pair_id: str, decision: str) -> dict[str, Any]:
        try:
            return ctx.review.apply_decision(pair_id, decision, reviewer="api")
        except UnknownPair as exc:
            raise HTTPException(404, str(exc)) from exc
        except StaleState as exc:
            raise HTTPException(409, str(exc)) from exc

    @app.post("/api/review/{pair_id}/approve")
    def approve(pair_id: str, role: str = Depends(require_reviewer)) -> dict[str, Any]:
        return apply_review(pair_id, "merge")

    @app.post("/api/review/{pair_id}/reject")
    def reject(pair_id: str, role: str = Depends(require_reviewer)) -> dict[str, Any]:
        return apply_review(pair_id, "keep-separate")

    # -- run status and metrics ----------------------------------------------------

    @app.get("/api/runs/current")
    def runs_current(role: str = Depends(role_of)) -> dict[str, Any]:
        state = ctx.run_state
        if state is None:
            raise HTTPException(404, "no run state available")
        frontier = state.get("frontier", [])
        return {
            "iteration": state.get("iteration"),
            "counters": state.get("counters", {}),
            "frontier_size": len(frontier),
            "visited": len(state.get("visited", [])),
            "pending_review": len(ctx.review.awaiting_review()),
            "stop_reason": "fixpoint" if not frontier else None,
        }

    @app.get("/api/metrics")
    def metrics(scope: str = "All", role: str = Depends(role_of)) -> dict[str, Any]:
        try:
            return scope_metrics(ctx.store, scope)
        except EmptyGraph as exc:
            raise HTTPException(404, str(exc)) from exc

    return app
