import pytest

from myopic.adversary import reference_certificate
from myopic.core import Digraph, cut_function

VARIANTS = ("fixed-q2", "fixed-q3", "adaptive-q2")


@pytest.fixture(scope="session")
def six_cycle():
    return Digraph.cycle(6)


@pytest.fixture(scope="session")
def six_cycle_f(six_cycle):
    return cut_function(six_cycle)


@pytest.fixture(scope="session")
def single_edge():
    return Digraph(2, ((0, 1, 1.0),))


@pytest.fixture(scope="session")
def three_cycle():
    # a=v1->v2, z=v1->v3, b=v2->v3, x=v2->v1, c=v3->v1, y=v3->v2
    w = dict(a=1.0, z=2.0, b=3.0, x=5.0, c=7.0, y=11.0)
    edges = ((0, 1, w["a"]), (0, 2, w["z"]), (1, 2, w["b"]), (1, 0, w["x"]), (2, 0, w["c"]), (2, 1, w["y"]))
    return Digraph(3, edges), w


@pytest.fixture(scope="session", params=VARIANTS)
def reference(request):
    return reference_certificate(request.param)


@pytest.fixture(scope="session")
def references():
    return {v: reference_certificate(v) for v in VARIANTS}


# --- acceptance summary -------------------------------------------------------

ACCEPTANCE_CRITERIA = 10
_acceptance: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def acceptance():
    """``record(number, ok, detail)`` for the acceptance summary."""

    def record(number: int, ok: bool, detail: str) -> bool:
        _acceptance[number] = (bool(ok), detail)
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in range(1, ACCEPTANCE_CRITERIA + 1):
        ok, detail = _acceptance.get(number, (False, "not run or errored"))
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
