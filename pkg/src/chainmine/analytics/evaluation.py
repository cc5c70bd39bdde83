"""Precision auditing: sampling, labeling sheets, scoring."""

from __future__ import annotations

import csv
import random
from pathlib import Path
from typing import Any, Iterable, Mapping

from ..errors import DivisionUndefined
from ..model.store import GraphStore
from ..model.types import Relation

SHEET_HEADER = ["relation_id", "source", "kind", "target", "quote", "url", "label"]

_TRUE_LABELS = {"1", "true", "t", "yes", "y"}
_FALSE_LABELS = {"0", "false", "f", "no", "n"}


def precision(tp: int, fp: int) -> float:
    if tp + fp == 0:
        raise DivisionUndefined("precision undefined with no judged samples")
    return tp / (tp + fp)


def sample_relations(
    relations: list[Relation],
    sample_size: int,
    seed: int,
) -> list[Relation]:
    """Seeded uniform sample without replacement, stable across runs."""
    if sample_size < 0:
        raise ValueError("sample_size must be >= 0")
    if sample_size > len(relations):
        raise ValueError(
            f"sample_size {sample_size} exceeds population {len(relations)}"
        )
    ordered = sorted(relations, key=lambda r: (len(r.id), r.id))
    rng = random.Random(seed)
    return rng.sample(ordered, sample_size)


def evaluate_precision(
    relations: list[Relation],
    labels: Mapping[str, bool],
    sample_size: int,
    seed: int,
) -> dict[str, Any]:
    """Eq.-of-record precision over a seeded sample: TP / (TP + FP)."""
    population = [r for r in relations if r.id in labels]
    if sample_size > len(population):
        raise ValueError(
            f"sample_size {sample_size} exceeds labeled population {len(population)}"
        )
    sample = sample_relations(population, sample_size, seed)
    tp = sum(1 for r in sample if labels[r.id])
    fp = len(sample) - tp
    return {
        "sample_size": len(sample),
        "seed": seed,
        "TP": tp,
        "FP": fp,
        "precision": precision(tp, fp),
        "relation_ids": [r.id for r in sample],
    }


def export_labeling_sheet(
    store: GraphStore,
    relations: list[Relation],
    sample_size: int,
    seed: int,
    path: str | Path,
    url_of: Any = None,
) -> int:
    """Write the annotation CSV; the label column starts empty.

    url_of maps a document id to its source url (usually DocStore.url_of).
    """
    sample = sample_relations(relations, sample_size, seed)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SHEET_HEADER)
        for rel in sample:
            src = store.get_entity(store.resolve_id(rel.source))
            tgt = store.get_entity(store.resolve_id(rel.target))
            ev = rel.evidence[0] if rel.evidence else None
            url = ""
            if ev is not None and url_of is not None:
                url = url_of(ev.document_id) or ""
            writer.writerow(
                [
                    rel.id,
                    src.canonical_name,
                    rel.kind.value,
                    tgt.canonical_name,
                    ev.quote if ev else "",
                    url,
                    "",
                ]
            )
    return len(sample)


def read_labeled_sheet(path: str | Path) -> dict[str, bool]:
    """Parse a filled-in sheet back into {relation_id: bool}; blanks skipped."""
    labels: dict[str, bool] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or reader.fieldnames != SHEET_HEADER:
            raise ValueError(
                f"sheet header must be {','.join(SHEET_HEADER)}, got {reader.fieldnames}"
            )
        for lineno, row in enumerate(reader, start=2):
            raw = (row.get("label") or "").strip().lower()
            if not raw:
                continue
            if raw in _TRUE_LABELS:
                labels[row["relation_id"]] = True
            elif raw in _FALSE_LABELS:
                labels[row["relation_id"]] = False
            else:
                raise ValueError(f"line {lineno}: unrecognized label {raw!r}")
    return labels


def score_sheet(path: str | Path) -> dict[str, Any]:
    """Precision straight from a filled-in sheet."""
    labels = read_labeled_sheet(path)
    tp = sum(1 for v in labels.values() if v)
    fp = len(labels) - tp
    return {"TP": tp, "FP": fp, "precision": precision(tp, fp), "labeled": len(labels)}
