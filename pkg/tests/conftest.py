import sys
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES_DIR = REPO_ROOT / "fixtures"

# the shared scenario helpers live next to the cassettes, not in the package
sys.path.insert(0, str(FIXTURES_DIR))

import scenario  # noqa: E402


@pytest.fixture(scope="session")
def mined(tmp_path_factory):
    """One full replay mining run, untouched by review decisions."""
    ws = tmp_path_factory.mktemp("mined")
    runner, report = scenario.run_mining(scenario.mining_config(), ws)
    return runner, report


@pytest.fixture(scope="session")
def reviewed(tmp_path_factory):
    """A separate run with the review follow-up applied (merge + keep-separate)."""
    ws = tmp_path_factory.mktemp("reviewed")
    runner, report = scenario.run_mining(scenario.mining_config(), ws)
    followup = scenario.run_review_followup(runner)
    return {"runner": runner, "report": report, "followup": followup}


@pytest.fixture(scope="session")
def checkpointed_workspace(tmp_path_factory):
    """Workspace directory holding a checkpoint of a fresh run (no review)."""
    ws = tmp_path_factory.mktemp("ckpt-ws")
    runner, _ = scenario.run_mining(scenario.mining_config(), ws)
    runner.checkpoint(ws / "checkpoint")
    return ws
