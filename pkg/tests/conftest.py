from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qfeedback.codec import build_from_strategy  # noqa: E402
from qfeedback.solver import scripted_tree  # noqa: E402
from qfeedback.state import State  # noqa: E402

# letters used in the hand-worked nine-message example
LETTERS = "ABCDEFGHI"

# partition chosen at each state of the hand-worked q=3, e=1, n=4 strategy
EXAMPLE_RULE = {
    (0, 9): ((0, 3), (0, 3), (0, 3)),
    (6, 3): ((2, 1), (2, 1), (2, 1)),
    (4, 1): ((0, 1), (2, 0), (2, 0)),
    (3, 0): ((1, 0), (1, 0), (1, 0)),
    (1, 0): ((1, 0), (0, 0), (0, 0)),
    (0, 1): ((0, 1), (0, 0), (0, 0)),
    (0, 0): ((0, 0), (0, 0), (0, 0)),
}

# concrete assignment of letters where the hand-worked example departs from ascending fill
EXAMPLE_ASSIGNMENTS = {
    (2,): ((0, 3, 6), (1, 4, 7), (2, 5, 8)),  # {A,D,G} {B,E,H} {C,F,I}
    (2, 1, 1): ((4,), (1,), (7,)),  # {E} {B} {H}
}


def example_rule(state: State, n: int):
    return EXAMPLE_RULE[state.counts]


@pytest.fixture(scope="session")
def example_tree():
    return scripted_tree((0, 9), 4, 3, example_rule)


@pytest.fixture(scope="session")
def example_code(example_tree):
    return build_from_strategy(example_tree, 9, 1, 3, EXAMPLE_ASSIGNMENTS)


ACCEPTANCE: dict[str, str] = {}


def record(criterion: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE[criterion] = ("PASS" if ok else "FAIL") + (f"  {detail}" if detail else "")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda s: (int(s.split()[1].rstrip("abcdef")), s)):
        terminalreporter.write_line(f"{name}: {ACCEPTANCE[name]}")
