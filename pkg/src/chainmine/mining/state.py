"""Mutable state of one mining run: frontier, visited set, counters."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..config import Budgets
from ..errors import BudgetExhausted


@dataclass
class Counters:
    docs_fetched: int = 0
    docs_new: int = 0
    triplets_extracted: int = 0
    triplets_accepted: int = 0
    triplets_rejected: int = 0
    companies_discovered: int = 0
    provider_calls: int = 0
    errors: int = 0

    def to_dict(self) -> dict[str, int]:
        return {
            "docs_fetched": self.docs_fetched,
            "docs_new": self.docs_new,
            "triplets_extracted": self.triplets_extracted,
            "triplets_accepted": self.triplets_accepted,
            "triplets_rejected": self.triplets_rejected,
            "companies_discovered": self.companies_discovered,
            "provider_calls": self.provider_calls,
            "errors": self.errors,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Counters:
        c = cls()
        for key in c.to_dict():
            setattr(c, key, int(data.get(key, 0)))
        return c


@dataclass
class MiningState:
    frontier: list[tuple[str, int]] = field(default_factory=list)  # (company id, depth)
    visited: set[str] = field(default_factory=set)
    iteration: int = 0
    counters: Counters = field(default_factory=Counters)
    started_monotonic: float = 0.0

    def enqueue(self, company_id: str, depth: int) -> bool:
        """Admit an unvisited, unqueued company. Returns True when enqueued."""
        if company_id in self.visited:
            return False
        if any(company_id == cid for cid, _ in self.frontier):
            return False
        self.frontier.append((company_id, depth))
        return True

    def mark_visited(self, company_id: str) -> None:
        self.visited.add(company_id)
        self.frontier = [(cid, d) for cid, d in self.frontier if cid != company_id]

    def check_budgets(self, budgets: Budgets, elapsed_seconds: float) -> None:
        if budgets.max_iterations is not None and self.iteration >= budgets.max_iterations:
            raise BudgetExhausted("max_iterations")
        if budgets.max_documents is not None and self.counters.docs_fetched >= budgets.max_documents:
            raise BudgetExhausted("max_documents")
        if (
            budgets.max_provider_calls is not None
            and self.counters.provider_calls >= budgets.max_provider_calls
        ):
            raise BudgetExhausted("max_provider_calls")
        if (
            budgets.wall_clock_seconds is not None
            and elapsed_seconds >= budgets.wall_clock_seconds
        ):
            raise BudgetExhausted("wall_clock")

    def to_dict(self) -> dict[str, Any]:
        return {
            "frontier": [[cid, depth] for cid, depth in self.frontier],
            "visited": sorted(self.visited, key=lambda i: (len(i), i)),
            "iteration": self.iteration,
            "counters": self.counters.to_dict(),
            "started_monotonic": self.started_monotonic,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> MiningState:
        return cls(
            frontier=[(str(cid), int(depth)) for cid, depth in data.get("frontier", [])],
            visited=set(data.get("visited", [])),
            iteration=int(data.get("iteration", 0)),
            counters=Counters.from_dict(data.get("counters", {})),
            started_monotonic=float(data.get("started_monotonic", 0.0)),
        )
