from __future__ import annotations

import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rankmerge import EnsembleConfig, ModelRun  # noqa: E402
from rankmerge.rankings import runs_by_id  # noqa: E402


def rank_runs(mrr: list[list[int]], ndcg: list[int], qid: str = "q") -> dict[str, ModelRun]:
    """Runs named m1..mk plus 'n', each covering one question with the given rank lists."""
    runs = [ModelRun(f"m{i + 1}", "ranks", {qid: tuple(r)}) for i, r in enumerate(mrr)]
    runs.append(ModelRun("n", "ranks", {qid: tuple(ndcg)}))
    return runs_by_id(runs)


def config_for(n_m: int, **kw) -> EnsembleConfig:
    return EnsembleConfig(tuple(f"m{i + 1}" for i in range(n_m)), "n", **kw)


def random_perm_ranks(rng: random.Random, n: int) -> list[int]:
    ranks = list(range(1, n + 1))
    rng.shuffle(ranks)
    return ranks


# -- acceptance summary --------------------------------------------------------

_ACCEPTANCE: list[tuple[str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(name): acceptance criterion reported in the summary")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    name = getattr(report, "acceptance_name", None)
    if name:
        _ACCEPTANCE.append((name, report.outcome.upper()))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker:
        rep.acceptance_name = marker.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if outcome == 'PASSED' else 'FAIL'}  {name}")
