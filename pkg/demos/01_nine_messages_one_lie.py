"""Nine messages, one possible lie, four ternary questions.

Walks through a hand-built strategy round by round, then lets the solver
find its own strategy and checks both against every adversary.
"""
from __future__ import annotations

from qfeedback import build_from_strategy, decode, exhaustive_verify, simulate
from qfeedback.channel import ScriptedAdversary
from qfeedback.solver import Solver, scripted_tree

LETTERS = "ABCDEFGHI"

# partition to use at each state (bottom-up counts -> q parts)
RULE = {
    (0, 9): ((0, 3), (0, 3), (0, 3)),
    (6, 3): ((2, 1), (2, 1), (2, 1)),
    (4, 1): ((0, 1), (2, 0), (2, 0)),
    (3, 0): ((1, 0), (1, 0), (1, 0)),
    (1, 0): ((1, 0), (0, 0), (0, 0)),
    (0, 1): ((0, 1), (0, 0), (0, 0)),
    (0, 0): ((0, 0), (0, 0), (0, 0)),
}

tree = scripted_tree((0, 9), 4, 3, lambda c, n: RULE[c.counts])
assignments = {
    (2,): ((0, 3, 6), (1, 4, 7), (2, 5, 8)),
    (2, 1, 1): ((4,), (1,), (7,)),
}
code = build_from_strategy(tree, 9, 1, 3, assignments)

# Alice holds E.  The channel corrupts her first answer to 2.
theta = LETTERS.index("E")
tr = simulate(code, ScriptedAdversary(1, [2, 1, 1, 0]), theta)
ledger = code.start()
print(f"start        state {ledger.class_counts().stripped()}")
for rnd, (a, b) in enumerate(zip(tr.sent, tr.received), start=1):
    parts = [''.join(LETTERS[i] for i in p) for p in ledger.parts()]
    ledger = ledger.advance(b)
    print(f"round {rnd}: parts {parts}, sent {a}, received {b} -> state {ledger.class_counts().stripped()}")
print("decoded:", LETTERS[decode(code, tr.received)])

res = exhaustive_verify(code)
print(f"hand-built code: ok={res.ok} over {res.runs} message/error-pattern pairs")

s = Solver(3)
auto = build_from_strategy(s.extract_strategy((0, 9), 4), 9, 1, 3)
res = exhaustive_verify(auto)
print(f"solver code:     ok={res.ok} over {res.runs} pairs ({s.stats.nodes} search nodes)")
