import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(autouse=True)
def _no_disk_cache(monkeypatch):
    # tests must not read systems completed by another version of the engine
    monkeypatch.delenv("OPERAD_FORGE_CACHE", raising=False)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
