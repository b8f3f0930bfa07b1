import pytest

from incmerkle.combiners import digest_combiner, toy_combiner
from incmerkle.oracle import build_merkle

WORKED_VALUES = [3, 6, 2, -2, 4]


@pytest.fixture
def toy():
    return toy_combiner()


@pytest.fixture
def digest():
    return digest_combiner()


@pytest.fixture
def worked(toy):
    return build_merkle(WORKED_VALUES, 3, toy)


_CRITERIA = []


@pytest.fixture
def criterion(request):
    """Record a one-line verdict for an acceptance criterion.

    The test calls ``criterion(number, summary)`` once; the outcome of the
    test decides PASS/FAIL in the terminal summary.
    """
    entry = {}

    def record(number, summary):
        entry.update(number=number, summary=summary)

    yield record
    if entry:
        entry["nodeid"] = request.node.nodeid
        _CRITERIA.append(entry)


_OUTCOMES = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" or rep.failed:
        _OUTCOMES[item.nodeid] = rep.outcome if rep.when == "call" else "failed"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for e in sorted(_CRITERIA, key=lambda e: e["number"]):
        status = "PASS" if _OUTCOMES.get(e["nodeid"]) == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  criterion {e['number']:>2}: {e['summary']}")
