import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).resolve().parent.parent / "src" / "skillnet" / "data"


@pytest.fixture
def sample_lexicon_path():
    return DATA / "sample_lexicon.txt"


@pytest.fixture
def sample_corpus_path():
    return DATA / "sample_corpus.jsonl"


@pytest.fixture
def sample_labels_path():
    return DATA / "sample_labels.csv"


_ACCEPTANCE: list[tuple[int, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, text): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        _ACCEPTANCE.append((marker.args[0], marker.args[1], "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, text, status in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"[{status}] criterion {number}: {text}")
