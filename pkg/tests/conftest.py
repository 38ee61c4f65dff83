import mpmath as mp
import pytest

from icosa_cm.cm_field import CMFieldSpec

# symplectic bases (columns, in integral-basis coordinates) and Sp(4, Z)
# matrices of the two worked examples
EXAMPLE_1 = {
    "spec": CMFieldSpec(-1, 1, 2, 5),
    "basis_change": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, -1, 1]],
    "gamma": [0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0],
}
EXAMPLE_2 = {
    "spec": CMFieldSpec(-37, 2, 1, 5),
    "basis_change": [[1, 0, 0, 1], [0, 1, 0, 0], [0, 0, 2, -1], [0, 0, -1, 1]],
    "gamma": [0, -1, 0, 1, 1, 0, 1, 0, 0, -1, 0, 0, -1, 0, 0, 0],
}


def example_1_taus():
    r5 = mp.sqrt(5)
    return (mp.mpc(0, mp.sqrt(mp.mpf(25) / 2 + r5) / 5),
            mp.mpc(0, mp.sqrt(5 - r5) / 5),
            mp.mpc(0, mp.sqrt(mp.mpf(5) / 2 + r5) / 5))


def example_2_taus():
    r5 = mp.sqrt(5)
    return (mp.mpc(0, mp.sqrt(37 * (5 + r5) / 10)),
            mp.mpc(mp.mpf(3) / 2, -mp.sqrt(185 - 74 / r5) / 2),
            mp.mpc(-mp.mpf(3) / 2, mp.sqrt(481 + 74 / r5) / 2))


@pytest.fixture
def prec128():
    with mp.workprec(128):
        yield 128


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            props = dict(getattr(rep, "user_properties", ()))
            if "criterion" in props and rep.when == "call":
                lines.append((props["criterion"], outcome, props.get("detail", "")))
    if lines:
        terminalreporter.section("acceptance criteria")
        for n, outcome, detail in sorted(lines):
            status = "PASS" if outcome == "passed" else "FAIL"
            terminalreporter.write_line(f"criterion {n:2d}: {status}  {detail}")
