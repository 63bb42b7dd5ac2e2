"""Codes straight from the recursive table, no search needed."""
from __future__ import annotations

from qfeedback import build_from_table, build_table, exhaustive_verify, verify_table
from qfeedback.channel import GreedyAdversary, simulate

t = build_table(3, 6, 8)
print(t.render())
print()
for line in verify_table(t).lines():
    print(line)
print()

for M, e in [(3, 0), (6, 1), (24, 1), (9, 2)]:
    code = build_from_table(M, e, 3)
    res = exhaustive_verify(code)
    wins = sum(simulate(code, GreedyAdversary(e), th).ok for th in range(M))
    print(f"M={M:3d} e={e}: n={code.n}, {code.size - M} dummies, exhaustive ok={res.ok} ({res.runs} runs), greedy adversary beaten {wins}/{M}")
