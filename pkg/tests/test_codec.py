from __future__ import annotations

import itertools
import json

import pytest

from conftest import LETTERS
from qfeedback import codec
from qfeedback.codec import (
    LedgerMismatch,
    NoUniqueSurvivor,
    RootMismatch,
    build_from_strategy,
    build_from_table,
    code_from_json,
    code_to_json,
    decode,
    encode_step,
    replay,
)
from qfeedback.solver import Solver, StrategyTree, extract_strategy
from qfeedback.state import State, initial_state


def parts_as_letters(ledger):
    return ["".join(sorted(LETTERS[i] for i in p)) for p in ledger.parts()]


def test_example_round_sets(example_code):
    ledger = example_code.start()
    assert parts_as_letters(ledger) == ["ABC", "DEF", "GHI"]
    ledger = ledger.advance(2)
    assert parts_as_letters(ledger) == ["ADG", "BEH", "CFI"]
    ledger = ledger.advance(1)
    assert parts_as_letters(ledger) == ["H", "BE", "GI"]
    ledger = ledger.advance(1)
    assert parts_as_letters(ledger) == ["E", "B", "H"]


def test_example_encoder(example_code):
    E = LETTERS.index("E")
    assert encode_step(example_code, E, []) == 1
    assert encode_step(example_code, E, [2]) == 1
    assert encode_step(example_code, E, [2, 1]) == 1
    assert encode_step(example_code, E, [2, 1, 1]) == 0
    with pytest.raises(ValueError):
        encode_step(example_code, E, [2, 1, 1, 0])
    with pytest.raises(ValueError):
        encode_step(example_code, 9, [])


def test_example_decoder(example_code):
    assert LETTERS[decode(example_code, [2, 1, 1, 0])] == "E"
    with pytest.raises(ValueError):
        decode(example_code, [2, 1])


def test_default_fill_is_ascending(example_tree):
    code = build_from_strategy(example_tree, 9, 1, 3)
    assert code.start().parts() == ((0, 1, 2), (3, 4, 5), (6, 7, 8))


def test_single_message_code():
    t = StrategyTree(State((1,)), 0)
    code = build_from_strategy(t, 1, 0, 3)
    assert code.n == 0
    assert decode(code, []) == 0
    t = extract_strategy(State((0, 1)), 3, 3)
    code = build_from_strategy(t, 1, 1, 3)
    for rec in ([0, 0, 0], [2, 0, 0], [0, 0, 1]):
        assert decode(code, rec) == 0


def test_error_free_transcript_decodes():
    s = Solver(3)
    code = build_from_strategy(s.extract_strategy(initial_state(9, 1), 4), 9, 1, 3)
    for theta in range(9):
        received = []
        for _ in range(code.n):
            received.append(encode_step(code, theta, received))
        assert decode(code, received) == theta


def test_dummies_and_phantom_votes():
    s = Solver(3)
    # a root with spare room: two dummies at capacity 1
    t = s.extract_strategy(State((0, 9)), 4)
    code = build_from_strategy(t, 7, 1, 3)
    assert code.dummy_capacity == (1, 1) and code.size == 9
    # messages sitting at capacity 0 under a budget-1 policy
    t = s.extract_strategy(State((3,)), 1)
    code = build_from_strategy(t, 3, 0, 3)
    for theta in range(3):
        assert decode(code, [encode_step(code, theta, [])]) == theta
    t = s.extract_strategy(State((3, 0)), 1)
    code = build_from_strategy(t, 2, 0, 3)
    assert code.start().votes == (1, 1, 1)


def test_root_mismatch():
    t = extract_strategy(State((4, 1)), 2, 3)
    with pytest.raises(RootMismatch):
        build_from_strategy(t, 3, 1, 3)
    with pytest.raises(RootMismatch):
        build_from_strategy(t, 1, 2, 3)


def test_saturated_code_decodes_every_word(example_code):
    # 9 messages x 9 words within one error fill all 81 words
    hits = [decode(example_code, w) for w in itertools.product(range(3), repeat=4)]
    assert sorted(hits) == sorted(list(range(9)) * 9)


def test_no_unique_survivor_on_dummy_words(example_tree):
    code = build_from_strategy(example_tree, 7, 1, 3)
    failures = []
    for w in itertools.product(range(3), repeat=4):
        try:
            decode(code, w)
        except NoUniqueSurvivor as exc:
            failures.append(str(exc))
    # the two dummies own 9 words each
    assert len(failures) == 18
    assert all("leaves messages []" in f for f in failures)


def test_ledger_mismatch_detected():
    # a policy whose stated child state disagrees with the real vote counts
    t = extract_strategy(State((4, 1)), 2, 3)
    first = t.children[0]
    wrong_child = StrategyTree(State((1, 0)), 1, first.partition, first.children)
    forged = StrategyTree(t.state, t.n, t.partition, (wrong_child,) + t.children[1:])
    code = build_from_strategy(forged, 1, 1, 3)
    with pytest.raises(LedgerMismatch):
        replay(code, [0]).parts()


def test_bad_override_rejected(example_tree):
    code = build_from_strategy(example_tree, 9, 1, 3, {(): ((0, 1), (2, 3, 4, 5), (6, 7, 8))})
    with pytest.raises(ValueError):
        code.start().parts()


def test_table_codes():
    code = build_from_table(6, 1, 3)
    assert (code.n, code.budget) == (5, 2)
    code = build_from_table(3, 0, 3)
    assert code.n == 1
    assert [decode(code, [encode_step(code, th, [])]) for th in range(3)] == [0, 1, 2]
    code = build_from_table(9, 1, 3)
    assert code.n == 7 and code.size == code.root.state.total == 3 + 6 + 24 + 96


def test_rate():
    assert build_from_table(3, 0, 3).rate == 1
    assert build_from_table(9, 1, 3).rate == pytest.approx(2 / 7)
    assert isinstance(build_from_table(6, 1, 3).rate, float)


def test_json_round_trip(example_code):
    doc = json.loads(json.dumps(code_to_json(example_code)))
    assert doc["format"] == codec.FORMAT
    back = code_from_json(doc)
    assert LETTERS[decode(back, [2, 1, 1, 0])] == "E"
    assert back.start().advance(2).parts() == example_code.start().advance(2).parts()
    tdoc = code_to_json(build_from_table(24, 1, 3))
    assert set(tdoc) == {"format", "via", "M", "e", "n", "q"}
    assert code_from_json(tdoc).n == 7
    with pytest.raises(ValueError):
        code_from_json({"format": "other"})
