"""How many messages survive e lies with n ternary questions?

Compares the exact answer from the game solver with the converse bound
(volume plus translation) and the block length promised by the table
construction.
"""
from __future__ import annotations

from qfeedback import max_messages, min_blocklength_converse
from qfeedback.bounds import ball_size
from qfeedback.solver import Solver, min_blocklength
from qfeedback.table import achievable_blocklength

q = 3
s = Solver(q)

print("largest M (q=3)")
print("  n  " + "".join(f"e={e:<8d}" for e in range(3)))
for n in range(1, 9):
    row = []
    for e in range(3):
        row.append(f"{max_messages(e, n, q, s):<10d}")
    print(f"{n:3d}  " + "".join(row))

print()
print("shortest block length for e=1: converse <= exact <= table")
for M in (3, 6, 9, 24, 50, 100):
    lo = min_blocklength_converse(M, 1, q)
    exact = min_blocklength(M, 1, q, s, start=lo)
    hi, _ = achievable_blocklength(M, 1, q)
    print(f"  M={M:4d}: {lo} <= {exact} <= {hi}")

print()
print("volume bound alone for (e=1, n=4):", q**4 // ball_size(4, 1, q))
