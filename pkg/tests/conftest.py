import numpy as np
import pytest

from oodeval import kernels
from oodeval.scores import Kind, validate_scoreset


def S(values, name="s", kind=Kind.ID):
    return validate_scoreset(values, name, kind)


@pytest.fixture(params=sorted(kernels.BACKENDS))
def backend(request):
    previous = kernels.backend_name()
    kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(previous)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# criterion number -> (title, passed, detail), filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} [{n:2d}] {title}: {detail}")
