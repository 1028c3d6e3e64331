import pytest

from expanderlab import kernels

ACCEPTANCE_LINES = []


def _available():
    return sorted(kernels.backends())


@pytest.fixture(params=_available())
def backend(request, monkeypatch):
    """Run the test once per kernel implementation."""
    impl = kernels.backends()[request.param]
    for name in ("poly_table", "value_counts", "poly_points", "univariate_values", "quadruple_distinct"):
        monkeypatch.setattr(kernels, name, getattr(impl, name))
    return request.param


@pytest.fixture
def record_acceptance():
    def record(criterion, name, passed, detail=""):
        ACCEPTANCE_LINES.append((criterion, name, bool(passed), detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, name, passed, detail in ACCEPTANCE_LINES:
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] criterion {criterion}: {name}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
