import pytest

from chevring.group import build_group, demo_ring
from chevring.torus import make_torus


@pytest.fixture(scope="session")
def z4():
    return demo_ring("Z/4")


@pytest.fixture(scope="session")
def gr16():
    return demo_ring("GR16")


@pytest.fixture(scope="session")
def sl2_z4(z4):
    return build_group("SL2", z4)


@pytest.fixture(scope="session")
def sl3_z4(z4):
    return build_group("SL3", z4)


@pytest.fixture(scope="session")
def gl2_z4(z4):
    return build_group("GL2", z4)


@pytest.fixture(scope="session")
def split_torus(sl2_z4):
    return make_torus(sl2_z4)


@pytest.fixture(scope="session")
def nonsplit_torus(sl2_z4):
    return make_torus(sl2_z4, "s")


@pytest.fixture(scope="session")
def alpha(sl2_z4):
    return sl2_z4.datum.positive[0]


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one pass/fail line; the lines are printed after the run."""

    def record(label: str, ok: bool, detail: str = "") -> bool:
        line = f"criterion {label}: {'PASS' if ok else 'FAIL'}"
        if detail:
            line += f"  ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
