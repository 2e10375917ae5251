import pytest

_RESULTS = pytest.StashKey[dict]()


@pytest.fixture
def acceptance(request):
    """Record(criterion, passed, detail); several records for one criterion are ANDed."""
    store = request.config.stash.setdefault(_RESULTS, {})

    def record(name, passed, detail=""):
        prev = store.get(name)
        if prev is not None:
            passed = passed and prev[0]
            detail = f"{prev[1]}; {detail}" if detail else prev[1]
        store[name] = (bool(passed), detail)

    return record


def pytest_terminal_summary(terminalreporter, config):
    store = config.stash.get(_RESULTS, {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(store, key=lambda k: int(k[2:])):
        passed, detail = store[name]
        terminalreporter.write_line(f"{name} {'PASS' if passed else 'FAIL'}  {detail}")
