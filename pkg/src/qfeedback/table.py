"""The recursive integer table whose column prefixes are winning states.

Rows ``m`` and columns ``k`` are 1-based.  The prefix of column ``k`` cut at
row ``m`` is a state of budget ``m - 1`` with ``A[1,k]`` at the top capacity
and ``A[m,k]`` at capacity 0; it wins with ``2m - k`` questions and comes
with an explicit partition that reduces it to other column prefixes.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .bounds import UnsupportedAlphabet, volume
from .state import (
    PartitionQ,
    State,
    check_reduction,
    embed,
    initial_state,
    reduce,
    zero_state,
)


class NegativeEntry(ArithmeticError):
    pass


class NonExactDivision(ArithmeticError):
    pass


class IndexOutOfRange(IndexError):
    pass


def _check_alphabet(q: int) -> None:
    if not isinstance(q, int) or q < 2:
        raise ValueError(f"alphabet size must be >= 2, got {q!r}")
    if q == 2:
        raise UnsupportedAlphabet(
            "q = 2 collapses the first column to (2, 0, ..., 0); only M <= 2 is reachable that way"
        )


@dataclass(frozen=True)
class TableA:
    q: int
    m_max: int
    k_max: int
    rows: tuple[tuple[int, ...], ...] = field(repr=False)

    def entry(self, m: int, k: int) -> int:
        if m == 0:
            return 0
        if not (1 <= m <= self.m_max and 1 <= k <= self.k_max):
            raise IndexOutOfRange(f"A[{m},{k}] outside 1..{self.m_max} x 1..{self.k_max}")
        return self.rows[m - 1][k - 1]

    def extended(self, m_max: int, k_max: int) -> "TableA":
        if m_max <= self.m_max and k_max <= self.k_max:
            return self
        return build_table(self.q, max(m_max, self.m_max), max(k_max, self.k_max))

    def to_csv(self) -> str:
        lines = ["m," + ",".join(f"k={k}" for k in range(1, self.k_max + 1))]
        for m, row in enumerate(self.rows, start=1):
            lines.append(f"{m}," + ",".join(str(v) for v in row))
        return "\n".join(lines) + "\n"

    def render(self) -> str:
        width = max(len(str(v)) for row in self.rows for v in row)
        return "\n".join(" ".join(str(v).rjust(width) for v in row) for row in self.rows)


def build_table(q: int, m_max: int, k_max: int) -> TableA:
    _check_alphabet(q)
    if m_max < 1 or k_max < 2:
        raise ValueError("need m_max >= 1 and k_max >= 2")
    A = [[0] * (k_max + 1) for _ in range(m_max + 1)]  # row/column 0 stay zero
    s = (q - 1) ** 2
    for k in range(1, k_max + 1):
        for m in range(1, m_max + 1):
            if m == 1:
                v = q if k == 1 else 1
            elif k == 1:
                v = q * (q - 1) * (q - 2) if m == 2 else s * A[m - 1][1]
            elif k == 2:
                if m == 2:
                    v = s
                elif m == 3:
                    v = q * s * (q - 2)
                else:
                    v = s * A[m - 1][2]
            else:
                v = A[m][k - 1] + (q - 1) * A[m - 1][k - 1] - (q - 1) * A[m - 1][k - 2]
            if v < 0:
                raise NegativeEntry(f"A[{m},{k}] = {v} < 0 for q={q}")
            A[m][k] = v
    rows = tuple(tuple(A[m][1:]) for m in range(1, m_max + 1))
    return TableA(q, m_max, k_max, rows)


def column_state(t: TableA, m: int, k: int) -> State:
    if m < 1 or k < 1:
        raise IndexOutOfRange(f"column prefix ({m},{k}) needs m, k >= 1")
    return State(tuple(t.entry(i, k) for i in range(m, 0, -1)))


def _exact(value: int, d: int, where: str) -> int:
    quot, rem = divmod(value, d)
    if rem:
        raise NonExactDivision(f"{where}: {value} is not divisible by {d}")
    return quot


def table_partition(t: TableA, m: int, k: int) -> PartitionQ:
    c = column_state(t, m, k)
    q = t.q
    if k == 1:
        part = tuple(_exact(v, q, f"A[.,1] at capacity {i}") for i, v in enumerate(c.counts))
        return PartitionQ((part,) * q)
    first = [0] * m
    rest = [0] * m
    first[m - 1] = 1  # the single top element A[1,k] = 1
    for i in range(2, m + 1):
        a = t.entry(i, k)
        if i <= k:
            rest[m - i] = _exact(a, q - 1, f"A[{i},{k}]")
        else:
            first[m - i] = rest[m - i] = _exact(a, q, f"A[{i},{k}]")
    return PartitionQ((tuple(first),) + (tuple(rest),) * (q - 1))


def table_children(t: TableA, m: int, k: int) -> tuple[State, ...]:
    """The column prefixes the table partition is meant to produce, at budget ``m - 1``."""
    q = t.q
    if k == 1:
        return (column_state(t, m, 2),) * q
    x0 = column_state(t, m, k + 1)
    xj = embed(column_state(t, m - 1, k - 1), 1) if m > 1 else zero_state(0)
    return (x0,) + (xj,) * (q - 1)


def table_successor(m: int, k: int, answer: int) -> tuple[int, int]:
    if k == 1:
        return m, 2
    return (m, k + 1) if answer == 0 else (m - 1, k - 1)


@dataclass
class TableReport:
    q: int
    m_max: int
    k_max: int
    checked: dict[str, int] = field(default_factory=dict)
    failures: dict[str, list[str]] = field(default_factory=dict)

    def record(self, check: str, ok: bool, detail: str = "") -> None:
        self.checked[check] = self.checked.get(check, 0) + 1
        self.failures.setdefault(check, [])
        if not ok:
            self.failures[check].append(detail)

    @property
    def ok(self) -> bool:
        return not any(self.failures.values())

    def lines(self) -> list[str]:
        out = []
        for name in sorted(self.checked):
            bad = self.failures.get(name, [])
            status = "PASS" if not bad else f"FAIL ({len(bad)})"
            out.append(f"{name}: {status} [{self.checked[name]} checks]")
            out.extend(f"  {d}" for d in bad[:5])
        return out


CHECK_NAMES = {
    "a": "a_divisibility",
    "b": "b_diagonal_laws",
    "c": "c_zeros",
    "d": "d_saturation",
    "e": "e_reductions",
    "f": "f_winning",
    "f_solver": "f_solver_crosscheck",
}


def verify_table(t: TableA, solver_limit: int = 4) -> TableReport:
    """Check every structural claim about the table on its stored range.

    ``solver_limit`` bounds the number of remaining questions for which the
    winning claim is also confirmed by the general solver (0 disables it).
    """
    from .solver import Solver  # local: solver is optional for table use

    q, M, K = t.q, t.m_max, t.k_max
    rep = TableReport(q, M, K)
    big = t.extended(M, max(K, 2 * M) + 1)
    A = big.entry
    N = CHECK_NAMES

    for m in range(1, M + 1):
        for k in range(1, K + 1):
            a = A(m, k)
            if k >= 2 and m >= 2:
                rep.record(N["a"], a % (q - 1) == 0, f"(q-1) does not divide A[{m},{k}]={a}")
            if m > k >= 2:
                rep.record(N["a"], a % q == 0, f"q does not divide A[{m},{k}]={a}")
            if k >= 3 and 2 <= m < k:
                rep.record(N["c"], a == 0, f"A[{m},{k}]={a} should be 0")
            if k >= 3:
                if m == k:
                    rep.record(N["b"], a == (q - 1) ** k, f"A[{k},{k}]={a} != (q-1)^{k}")
                elif m == k + 1:
                    want = q * (q - 1) ** k * (q - 2)
                    rep.record(N["b"], a == want, f"A[{m},{k}]={a} != {want}")
                elif m > k + 1:
                    rep.record(N["b"], a == (q - 1) ** 2 * A(m - 1, k), f"A[{m},{k}] breaks the geometric law")

    for m in range(1, M + 1):
        v = volume(column_state(big, m, 1), 2 * m - 1, q)
        rep.record(N["d"], v == q ** (2 * m - 1), f"V_{2*m-1}(col {m},1) = {v} != {q}^{2*m-1}")

    reduction_ok: dict[tuple[int, int], bool] = {}

    def reduction_holds(m: int, k: int) -> bool:
        if (m, k) not in reduction_ok:
            try:
                c = column_state(big, m, k)
                P = table_partition(big, m, k)
                want = table_children(big, m, k)
                ok = list(reduce(c, P, q)) == list(want) and check_reduction(c, want, q)
            except (ArithmeticError, ValueError):
                ok = False
            reduction_ok[(m, k)] = ok
        return reduction_ok[(m, k)]

    for m in range(1, M + 1):
        for k in range(1, K + 1):
            rep.record(N["e"], reduction_holds(m, k), f"table partition of ({m},{k}) fails")

    winning: dict[tuple[int, int], bool] = {}

    def wins_by_table(m: int, k: int) -> bool:
        if m == 0:
            return True  # empty state
        key = (m, k)
        if key not in winning:
            r = 2 * m - k
            if r == 0:
                winning[key] = column_state(big, m, k).total <= 1
            else:
                winning[key] = reduction_holds(m, k) and all(
                    wins_by_table(*table_successor(m, k, j)) for j in range(min(q, 2))
                )
        return winning[key]

    solver = Solver(q) if solver_limit > 0 else None
    for m in range(1, M + 1):
        for k in range(1, min(K, 2 * m) + 1):
            rep.record(N["f"], wins_by_table(m, k), f"({m},{k}) not winning by composition")
            if solver is not None and 2 * m - k <= solver_limit:
                c = column_state(big, m, k)
                rep.record(
                    N["f_solver"],
                    solver.wins(c.counts, 2 * m - k),
                    f"solver rejects ({m},{k}) = {c.literal()} at n={2*m-k}",
                )
    return rep


def achievable_blocklength(M: int, e: int, q: int) -> tuple[int, int]:
    """Block length ``2(e+i) - 1`` from the first column, with ``i`` minimal s.t. ``M <= A[i,1]``."""
    _check_alphabet(q)
    if M < 1 or e < 0:
        raise ValueError("need M >= 1 and e >= 0")
    i, a = 1, q
    while M > a:
        i += 1
        a = q * (q - 1) * (q - 2) if i == 2 else a * (q - 1) ** 2
    return 2 * (e + i) - 1, i


def first_column_witness(M: int, e: int, q: int) -> tuple[State, State]:
    """The embedded initial state and the table column that must dominate it."""
    n, i = achievable_blocklength(M, e, q)
    m = e + i
    t = build_table(q, m, max(2, 2 * m))
    return embed(initial_state(M, e), i - 1), column_state(t, m, 1)
