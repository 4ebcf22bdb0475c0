import pytest

from procred import kernel
from procred.automata import BOT, STAR, Sra


def fig1c() -> Sra:
    """The reduced automaton of (xac*ax)+(ya(a+b)y), transcribed from the figure."""
    q0, q12, q34, q56, q7 = range(5)
    names = {q0: "q0", q12: "q12", q34: "q34", q56: "q56", q7: "q7"}
    return Sra(
        states=range(5),
        alphabet="xyabc",
        registers={1, 2},
        transitions=[
            (q0, "x", BOT, 1, q12),
            (q0, "y", BOT, 2, q12),
            (q12, "a", STAR, STAR, q34),
            (q34, "c", 1, 1, q34),
            (q34, "a", STAR, STAR, q56),
            (q34, "b", 2, 2, q56),
            (q56, "x", 1, BOT, q7),
            (q56, "y", 2, BOT, q7),
        ],
        initial={q0},
        final={q7},
        names=names,
    )


@pytest.fixture
def fig1c_sra():
    return fig1c()


@pytest.fixture(params=sorted(kernel.BACKENDS))
def backend_name(request):
    return request.param


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record the one-line verdict of an acceptance criterion."""

    def record(name, ok, detail):
        line = f"criterion {name}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
