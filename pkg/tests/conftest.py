import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from oddsw.bulk import PhysParams

settings.register_profile("default", max_examples=200, deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
small = st.floats(-3, 3, allow_nan=False, allow_infinity=False)
cplx = st.builds(complex, finite, finite)
c2 = st.tuples(cplx, cplx)


@pytest.fixture
def p():
    return PhysParams(1.0, 0.2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# ---------------------------------------------------------------- acceptance summary

_ACCEPTANCE: dict = {}


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion; the line is also printed at the end."""

    def record(number: int, title: str, ok: bool, detail: str = "", seconds: float | None = None):
        t = "" if seconds is None else f" [{seconds:.1f}s]"
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {title}{t}{': ' + detail if detail else ''}"
        _ACCEPTANCE[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[k])
