import pytest

from cnoma_ihs.params import SystemParams, validate

# baseline scenario shared by most ESC sweeps
FIG3 = SystemParams(t_total=1, d_s1=0.6, d_s2=1, eta=1, delta=0.4, theta=0.4,
                    r_th1=0.3, r_th2=0.3, beta=1, v=2, rho_db=15)


@pytest.fixture
def fig3():
    return validate(FIG3)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES[criterion] = f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'}  {detail}"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
