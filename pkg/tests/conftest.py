import time

import pytest

_LINES = []


class Criterion:
    def __init__(self, number: int, title: str, limit: float):
        self.number, self.title, self.limit = number, title, limit
        self.start = time.perf_counter()

    def finish(self, ok: bool, detail: str = "") -> None:
        elapsed = time.perf_counter() - self.start
        in_time = elapsed < self.limit
        verdict = "PASS" if ok and in_time else "FAIL"
        note = detail if in_time else f"{detail}; over the time limit".lstrip("; ")
        line = (f"{verdict} criterion {self.number}: {self.title} "
                f"[{elapsed:.1f}s / {self.limit:.0f}s] {note}").rstrip()
        print(line)
        _LINES.append(line)
        assert ok, line
        assert in_time, line


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
