import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import flat_words, syllables  # noqa: E402
from ptbundle.sl2z import TwistWord  # noqa: E402

_ACCEPTANCE = {}


def words(max_len):
    return [TwistWord(syllables(f)) for f in flat_words(max_len)]


@pytest.fixture(scope="session")
def words_upto_6():
    return words(6)


@pytest.fixture(scope="session")
def words_upto_8():
    return words(8)


@pytest.fixture
def criterion(request):
    """Record the outcome of an acceptance criterion for the summary table."""
    record = {"detail": ""}
    yield record
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    _ACCEPTANCE[record["name"]] = (ok, record["detail"])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[0])):
        ok, detail = _ACCEPTANCE[name]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}  {detail}")
