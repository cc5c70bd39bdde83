"""Frontier-driven mining orchestrator."""

from chainmine.mining.runner import (
    CHECKPOINT_FILE,
    DOCS_FILE,
    JOURNAL_FILE,
    REVIEW_FILE,
    SNAPSHOT_FILE,
    MiningRunner,
    Pipeline,
    build_pipeline,
    load_workspace,
)
from chainmine.mining.state import Counters, MiningState

__all__ = [
    "CHECKPOINT_FILE",
    "DOCS_FILE",
    "JOURNAL_FILE",
    "REVIEW_FILE",
    "SNAPSHOT_FILE",
    "Counters",
    "MiningRunner",
    "MiningState",
    "Pipeline",
    "build_pipeline",
    "load_workspace",
]
