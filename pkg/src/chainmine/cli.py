"""Command line front end.

Every subcommand is a thin wrapper over library calls: seed a workspace,
run the mining loop, trigger resolution or verification, work the review
queue, report metrics, audit precision, export graphs, and serve the HTTP
API. Pass --json for line-delimited machine-readable output.

Exit codes: 0 success, 1 operational error, 2 usage error.
"""

from __future__ import annotations

import functools
import json
import os
import sys
from pathlib import Path
from typing import Any

import click

from .analytics.export import export_graph
from .analytics.overlap import POLICIES, compare_datasets
from .analytics.view import build_view, scope_metrics
from .config import RunConfig
from .errors import ChainMineError
from .mining.runner import CHECKPOINT_FILE, MiningRunner, build_pipeline, load_workspace
from .model.store import GraphStore
from .model.types import RelationStatus


def common_options(f):
    f = click.option(
        "--config",
        "config_path",
        default="config.json",
        show_default=True,
        help="run configuration file",
    )(f)
    f = click.option("--workspace", default=None, help="override the config workspace")(f)
    f = click.option("--json", "as_json", is_flag=True, help="line-delimited JSON output")(f)
    return f


def guarded(f):
    """Map operational failures to exit 1 with one machine-readable line."""

    @functools.wraps(f)
    def wrapper(*args: Any, **kwargs: Any):
        try:
            return f(*args, **kwargs)
        except (ChainMineError, FileNotFoundError, NotADirectoryError, ValueError, OSError) as exc:
            click.echo(
                json.dumps({"error": type(exc).__name__, "message": str(exc)}, ensure_ascii=False),
                err=True,
            )
            sys.exit(1)

    return wrapper


def emit(as_json: bool, record: dict[str, Any], text: str) -> None:
    if as_json:
        click.echo(json.dumps(record, ensure_ascii=False, sort_keys=True))
    else:
        click.echo(text)


def load_config(config_path: str, workspace: str | None) -> tuple[RunConfig, Path]:
    cfg = RunConfig.load(config_path)
    ws = Path(workspace or cfg.workspace)
    return cfg, ws


def resume_runner(config_path: str, workspace: str | None) -> tuple[MiningRunner, Path]:
    cfg, ws = load_config(config_path, workspace)
    return MiningRunner.resume(cfg, ws), ws


@click.group()
def cli() -> None:
    """Mine supplier networks from text into an evidence-backed graph."""


# -- pipeline phases -----------------------------------------------------------


@cli.command()
@click.argument("seeds_file", type=click.Path(exists=True, dir_okay=False))
@common_options
@guarded
def seed(seeds_file: str, config_path: str, workspace: str | None, as_json: bool) -> None:
    """Load seed companies into a fresh workspace checkpoint."""
    cfg, ws = load_config(config_path, workspace)
    runner = MiningRunner(build_pipeline(cfg, ws))
    state = runner.init_from_seeds(seeds_file)
    runner.checkpoint(ws / "checkpoint")
    emit(
        as_json,
        {"seeded": len(state.frontier), "workspace": str(ws)},
        f"seeded {len(state.frontier)} companies into {ws}",
    )


@cli.command()
@click.option(
    "--resume",
    "resume_from",
    is_flag=False,
    flag_value="",
    default=None,
    help="resume from a checkpoint directory (default: the workspace's own)",
)
@common_options
@guarded
def run(resume_from: str | None, config_path: str, workspace: str | None, as_json: bool) -> None:
    """Run the mining loop until fixpoint or budget exhaustion."""
    cfg, ws = load_config(config_path, workspace)
    if resume_from is not None:
        runner = MiningRunner.resume(cfg, ws, checkpoint_dir=resume_from or None)
    elif (ws / "checkpoint" / CHECKPOINT_FILE).exists():
        runner = MiningRunner.resume(cfg, ws)
    else:
        runner = MiningRunner(build_pipeline(cfg, ws))
        runner.init_from_seeds()
    report = runner.run_until_fixpoint()
    runner.checkpoint(ws / "checkpoint")
    emit(
        as_json,
        report,
        "run stopped on {stop_reason}: {iterations} iterations, {visited} companies, "
        "{pending_review} pairs awaiting review".format(**report),
    )


@cli.command()
@common_options
@guarded
def resolve(config_path: str, workspace: str | None, as_json: bool) -> None:
    """Run one synonym-resolution pass over the workspace graph."""
    runner, ws = resume_runner(config_path, workspace)
    report = runner.run_resolution()
    runner.checkpoint(ws / "checkpoint")
    emit(
        as_json,
        report,
        "resolution: {candidates} candidates, {new} new, "
        "{awaiting_review} awaiting review, {rejected_by_llm} rejected".format(**report),
    )


@cli.command()
@common_options
@guarded
def verify(config_path: str, workspace: str | None, as_json: bool) -> None:
    """Judge every unverified relation in the workspace graph."""
    runner, ws = resume_runner(config_path, workspace)
    report = runner.run_verification()
    runner.checkpoint(ws / "checkpoint")
    emit(
        as_json,
        report,
        "verification: {judged} judged, {accepted} accepted, "
        "{rejected} rejected, {flipped} flipped".format(**report),
    )


# -- review queue -----------------------------------------------------------------


@cli.group()
def review() -> None:
    """Work the synonym review queue from the terminal."""


@review.command("list")
@common_options
@guarded
def review_list(config_path: str, workspace: str | None, as_json: bool) -> None:
    """Show pairs awaiting a human decision."""
    cfg, ws = load_config(config_path, workspace)
    parts = load_workspace(ws)
    store, queue = parts["store"], parts["review"]
    pending = queue.awaiting_review()
    if not pending and not as_json:
        click.echo("review queue is empty")
        return
    for cand in pending:
        a = store.get_entity(cand.entity_a)
        b = store.get_entity(cand.entity_b)
        record = cand.to_dict()
        record["names"] = [a.canonical_name, b.canonical_name]
        rationale = (cand.llm_verdict or {}).get("rationale", "")
        emit(
            as_json,
            record,
            f"{cand.pair_id}: {a.canonical_name!r} vs {b.canonical_name!r} "
            f"(shared={cand.shared_neighbors}, name={cand.name_similarity:.2f}) {rationale}",
        )


def _decide(pair_id: str, decision: str, config_path: str, workspace: str | None, as_json: bool) -> None:
    runner, ws = resume_runner(config_path, workspace)
    outcome = runner.p.review.apply_decision(pair_id, decision, reviewer="cli")
    runner.checkpoint(ws / "checkpoint")
    emit(
        as_json,
        outcome,
        f"{pair_id} -> {outcome['state']}" + (" (no-op)" if outcome.get("noop") else ""),
    )


@review.command("approve")
@click.argument("pair_id")
@common_options
@guarded
def review_approve(pair_id: str, config_path: str, workspace: str | None, as_json: bool) -> None:
    """Merge the pair's entities."""
    _decide(pair_id, "merge", config_path, workspace, as_json)


@review.command("reject")
@click.argument("pair_id")
@common_options
@guarded
def review_reject(pair_id: str, config_path: str, workspace: str | None, as_json: bool) -> None:
    """Keep the pair separate and stop re-proposing it."""
    _decide(pair_id, "keep-separate", config_path, workspace, as_json)


# -- reporting ---------------------------------------------------------------------


@cli.command()
@click.option("--scope", default="All", show_default=True, help="jurisdiction code or All")
@common_options
@guarded
def metrics(scope: str, config_path: str, workspace: str | None, as_json: bool) -> None:
    """Graph statistics and community structure for one scope."""
    cfg, ws = load_config(config_path, workspace)
    payload = scope_metrics(load_workspace(ws)["store"], scope)
    stats, comms = payload["stats"], payload["communities"]
    text = (
        f"scope {stats['scope']}: N={stats['N']} R={stats['R']} "
        f"avg_degree={stats['average_degree']:.3f} density={stats['density']:.4f}"
    )
    if comms:
        text += f" communities={comms['count']} modularity={comms['modularity']:.4f}"
    emit(as_json, payload, text)


@cli.group("eval")
def eval_group() -> None:
    """Precision auditing: draw a labeling sample, score a filled sheet."""


@eval_group.command("sample")
@click.option("--size", default=None, type=int, help="sample size (default: all verified)")
@click.option("--seed", "rng_seed", default=0, show_default=True, type=int)
@click.option("--out", "out_path", default="labeling_sheet.csv", show_default=True)
@common_options
@guarded
def eval_sample(
    size: int | None,
    rng_seed: int,
    out_path: str,
    config_path: str,
    workspace: str | None,
    as_json: bool,
) -> None:
    """Write a labeling sheet over a seeded sample of verified relations."""
    from .analytics.evaluation import export_labeling_sheet

    cfg, ws = load_config(config_path, workspace)
    parts = load_workspace(ws)
    store, docs = parts["store"], parts["docs"]
    population = [r for r in store.live_relations() if r.status is RelationStatus.VERIFIED]
    n = len(population) if size is None else size
    written = export_labeling_sheet(store, population, n, rng_seed, out_path, url_of=docs.url_of)
    emit(
        as_json,
        {"written": written, "path": out_path, "seed": rng_seed},
        f"wrote {written} rows to {out_path}",
    )


@eval_group.command("score")
@click.argument("sheet", type=click.Path(exists=True, dir_okay=False))
@common_options
@guarded
def eval_score(sheet: str, config_path: str, workspace: str | None, as_json: bool) -> None:
    """Compute precision from a filled-in labeling sheet."""
    from .analytics.evaluation import score_sheet

    result = score_sheet(sheet)
    emit(
        as_json,
        result,
        "precision {precision:.4f} over {labeled} labeled (TP={TP} FP={FP})".format(**result),
    )


@cli.command()
@click.argument("fmt", type=click.Choice(["gexf", "graphml"]))
@click.option("--out", "out_path", default=None, help="output file (default graph.<format>)")
@click.option("--scope", default=None, help="restrict to one jurisdiction")
@common_options
@guarded
def export(
    fmt: str,
    out_path: str | None,
    scope: str | None,
    config_path: str,
    workspace: str | None,
    as_json: bool,
) -> None:
    """Write the verified supplier graph for external graph tools."""
    cfg, ws = load_config(config_path, workspace)
    store = load_workspace(ws)["store"]
    view = build_view(store, jurisdiction=scope)
    path = out_path or f"graph.{fmt}"
    counts = export_graph(store, view, fmt, path)
    emit(
        as_json,
        {**counts, "path": path, "format": fmt},
        f"wrote {counts['nodes']} nodes / {counts['edges']} edges to {path}",
    )


@cli.command()
@click.argument("other_snapshot", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--policy",
    default="alias-aware",
    show_default=True,
    type=click.Choice(list(POLICIES)),
)
@common_options
@guarded
def compare(
    other_snapshot: str,
    policy: str,
    config_path: str,
    workspace: str | None,
    as_json: bool,
) -> None:
    """Overlap between this workspace's graph and another snapshot."""
    cfg, ws = load_config(config_path, workspace)
    store = load_workspace(ws)["store"]
    other = GraphStore.load_snapshot(other_snapshot)
    report = compare_datasets(store, other, policy=policy).to_dict()
    emit(
        as_json,
        report,
        "nodes {a}/{b} overlap {o}; edges {ea}/{eb} overlap {eo}".format(
            a=report["nodes"]["a"],
            b=report["nodes"]["b"],
            o=report["nodes"]["overlap"],
            ea=report["edges"]["a"],
            eb=report["edges"]["b"],
            eo=report["edges"]["overlap"],
        ),
    )


@cli.command()
@click.option("--bind", default=None, help="host:port (default BIND_ADDR or 127.0.0.1:8765)")
@common_options
@guarded
def serve(bind: str | None, config_path: str, workspace: str | None, as_json: bool) -> None:
    """Serve the HTTP API over the workspace's last checkpoint."""
    import uvicorn

    from .api import create_app, load_context

    cfg, ws = load_config(config_path, workspace)
    address = bind or os.environ.get("BIND_ADDR", "127.0.0.1:8765")
    host, _, port = address.rpartition(":")
    if not host or not port.isdigit():
        raise ValueError(f"bind address must be host:port, got {address!r}")
    app = create_app(load_context(ws))
    emit(as_json, {"listening": address, "workspace": str(ws)}, f"listening on {address}")
    uvicorn.run(app, host=host, port=int(port), log_level="warning")


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
