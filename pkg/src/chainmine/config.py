"""Run configuration: one JSON file drives a whole mining run.

The semantic hash pins everything that changes WHAT gets mined (templates,
thresholds, chunking, provider modes, limits). Budgets and filesystem
locations stay out of the hash so a resumed run may raise a budget or move
the workspace without tripping the checkpoint guard.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import ConfigHashMismatch
from .harvest.keywords import DEFAULT_TEMPLATES, QueryTemplate


@dataclass
class Budgets:
    max_iterations: int | None = None
    max_documents: int | None = None
    max_provider_calls: int | None = None
    wall_clock_seconds: float | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "max_iterations": self.max_iterations,
            "max_documents": self.max_documents,
            "max_provider_calls": self.max_provider_calls,
            "wall_clock_seconds": self.wall_clock_seconds,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Budgets:
        return cls(
            max_iterations=data.get("max_iterations"),
            max_documents=data.get("max_documents"),
            max_provider_calls=data.get("max_provider_calls"),
            wall_clock_seconds=data.get("wall_clock_seconds"),
        )


@dataclass
class RunConfig:
    seeds_path: str = "seeds.csv"
    workspace: str = "workspace"
    templates: list[QueryTemplate] = field(default_factory=lambda: list(DEFAULT_TEMPLATES))
    budgets: Budgets = field(default_factory=Budgets)

    # resolution thresholds
    min_shared_neighbors: int = 1  # K
    min_name_similarity: float = 0.6  # sigma_name
    min_embedding_similarity: float = 0.85  # tau

    # provider selection: scripted | replay | record | http
    llm_mode: str = "replay"
    search_mode: str = "replay"
    fetch_mode: str = "replay"
    cassette_dir: str = "cassettes"
    corpus_dir: str | None = None  # local page corpus for record mode

    # cadence: run resolution / verification every N iterations (0 = never)
    resolution_cadence: int = 1
    verification_cadence: int = 1
    auto_approve: bool = False

    # pipeline knobs
    search_limit: int = 10
    max_depth: int = 3
    chunk_max_chars: int = 6000
    chunk_overlap: int = 300
    per_host_delay: float = 2.0
    few_shot_path: str | None = None

    # LocatedIn target name (normalized) -> jurisdiction code
    location_codes: dict[str, str] = field(default_factory=dict)

    def semantic_dict(self) -> dict[str, Any]:
        """The configuration surface that must not change across a resume."""
        return {
            "templates": [
                {"id": t.id, "text": t.text, "language": t.language}
                for t in self.templates
            ],
            "min_shared_neighbors": self.min_shared_neighbors,
            "min_name_similarity": self.min_name_similarity,
            "min_embedding_similarity": self.min_embedding_similarity,
            "llm_mode": self.llm_mode,
            "search_mode": self.search_mode,
            "fetch_mode": self.fetch_mode,
            "resolution_cadence": self.resolution_cadence,
            "verification_cadence": self.verification_cadence,
            "auto_approve": self.auto_approve,
            "search_limit": self.search_limit,
            "max_depth": self.max_depth,
            "chunk_max_chars": self.chunk_max_chars,
            "chunk_overlap": self.chunk_overlap,
            "location_codes": dict(sorted(self.location_codes.items())),
        }

    def semantic_hash(self) -> str:
        blob = json.dumps(self.semantic_dict(), sort_keys=True, ensure_ascii=False)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    def check_hash(self, expected: str) -> None:
        actual = self.semantic_hash()
        if actual != expected:
            raise ConfigHashMismatch(
                f"run config changed since checkpoint: {actual[:12]} != {expected[:12]}"
            )

    def to_dict(self) -> dict[str, Any]:
        return {
            "seeds_path": self.seeds_path,
            "workspace": self.workspace,
            "templates": [
                {"id": t.id, "text": t.text, "language": t.language}
                for t in self.templates
            ],
            "budgets": self.budgets.to_dict(),
            "min_shared_neighbors": self.min_shared_neighbors,
            "min_name_similarity": self.min_name_similarity,
            "min_embedding_similarity": self.min_embedding_similarity,
            "llm_mode": self.llm_mode,
            "search_mode": self.search_mode,
            "fetch_mode": self.fetch_mode,
            "cassette_dir": self.cassette_dir,
            "corpus_dir": self.corpus_dir,
            "resolution_cadence": self.resolution_cadence,
            "verification_cadence": self.verification_cadence,
            "auto_approve": self.auto_approve,
            "search_limit": self.search_limit,
            "max_depth": self.max_depth,
            "chunk_max_chars": self.chunk_max_chars,
            "chunk_overlap": self.chunk_overlap,
            "per_host_delay": self.per_host_delay,
            "few_shot_path": self.few_shot_path,
            "location_codes": dict(self.location_codes),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> RunConfig:
        cfg = cls()
        if "templates" in data:
            cfg.templates = [
                QueryTemplate(id=t["id"], text=t["text"], language=t.get("language", "en"))
                for t in data["templates"]
            ]
        if "budgets" in data:
            cfg.budgets = Budgets.from_dict(data["budgets"])
        for key in (
            "seeds_path",
            "workspace",
            "min_shared_neighbors",
            "min_name_similarity",
            "min_embedding_similarity",
            "llm_mode",
            "search_mode",
            "fetch_mode",
            "cassette_dir",
            "corpus_dir",
            "resolution_cadence",
            "verification_cadence",
            "auto_approve",
            "search_limit",
            "max_depth",
            "chunk_max_chars",
            "chunk_overlap",
            "per_host_delay",
            "few_shot_path",
        ):
            if key in data:
                setattr(cfg, key, data[key])
        if "location_codes" in data:
            cfg.location_codes = dict(data["location_codes"])
        return cfg

    @classmethod
    def load(cls, path: str | Path) -> RunConfig:
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
