from __future__ import annotations

import pytest

from qfeedback.bounds import UnsupportedAlphabet, volume
from qfeedback.solver import Solver
from qfeedback.state import PartitionQ, State, check_reduction, embed, reduce
from qfeedback.table import (
    IndexOutOfRange,
    achievable_blocklength,
    build_table,
    column_state,
    first_column_witness,
    table_children,
    table_partition,
    verify_table,
)


@pytest.fixture(scope="module")
def t3():
    return build_table(3, 8, 8)


def naive_table(q, m_max, k_max):
    """Straight transcription of the defining rules, no shared code."""
    A = {}

    def a(m, k):
        if m < 1 or k < 1:
            return 0
        if (m, k) in A:
            return A[(m, k)]
        if m == 1:
            v = q if k == 1 else 1
        elif k == 1:
            v = q * (q - 1) * (q - 2) * (q - 1) ** (2 * (m - 2))
        elif k == 2:
            v = (q - 1) ** 2 if m == 2 else q * (q - 1) ** 2 * (q - 2) * (q - 1) ** (2 * (m - 3))
        else:
            v = a(m, k - 1) + (q - 1) * a(m - 1, k - 1) - (q - 1) * a(m - 1, k - 2)
        A[(m, k)] = v
        return v

    return [[a(m, k) for k in range(1, k_max + 1)] for m in range(1, m_max + 1)]


def test_entries(t3):
    assert t3.entry(1, 1) == 3
    assert [t3.entry(m, 1) for m in (2, 3, 4)] == [6, 24, 96]
    assert t3.entry(3, 3) == 8
    assert t3.entry(2, 3) == 0
    assert t3.entry(4, 3) == 24
    assert t3.entry(2, 4) == t3.entry(3, 4) == 0
    with pytest.raises(IndexOutOfRange):
        t3.entry(9, 1)


@pytest.mark.parametrize("q", [3, 4, 5, 7])
def test_matches_naive_transcription(q):
    t = build_table(q, 9, 9)
    assert [list(r) for r in t.rows] == naive_table(q, 9, 9)


def test_q2_refused():
    with pytest.raises(UnsupportedAlphabet):
        build_table(2, 3, 3)
    with pytest.raises(UnsupportedAlphabet):
        achievable_blocklength(3, 1, 2)


def test_column_states(t3):
    assert column_state(t3, 2, 1) == State((6, 3))
    assert column_state(t3, 2, 2) == State((4, 1))
    assert column_state(t3, 1, 1) == State((3,))


def test_partitions(t3):
    assert table_partition(t3, 2, 1) == PartitionQ(((2, 1),) * 3)
    assert list(reduce(column_state(t3, 2, 1), table_partition(t3, 2, 1), 3)) == [State((4, 1))] * 3
    P = table_partition(t3, 2, 2)
    assert P == PartitionQ(((0, 1), (2, 0), (2, 0)))
    xs = reduce(column_state(t3, 2, 2), P, 3)
    assert xs[0] == State((0, 1)) and xs[1] == xs[2] == State((3, 0))
    xs = reduce(column_state(t3, 3, 2), table_partition(t3, 3, 2), 3)
    assert xs[0] == column_state(t3, 3, 3)
    assert xs[1] == xs[2] == embed(column_state(t3, 2, 1), 1)
    assert check_reduction(column_state(t3, 3, 2), xs, 3)


@pytest.mark.parametrize("q", [3, 4, 5, 6])
def test_every_partition_hits_its_children(q):
    t = build_table(q, 7, 14)
    for m in range(1, 8):
        for k in range(1, 2 * m):
            assert list(reduce(column_state(t, m, k), table_partition(t, m, k), q)) == list(
                table_children(t, m, k)
            )


def test_saturation(t3):
    assert volume(State((6, 3)), 3, 3) == 27
    for m in range(1, 9):
        assert volume(column_state(t3, m, 1), 2 * m - 1, 3) == 3 ** (2 * m - 1)


def test_verify_table_report():
    rep = verify_table(build_table(3, 6, 6))
    assert rep.ok, rep.lines()
    assert all(line.split(": ")[1].startswith("PASS") for line in rep.lines())


def test_small_columns_win_by_solver():
    s = Solver(4)
    t = build_table(4, 4, 6)
    for m in range(1, 4):
        for k in range(1, 2 * m + 1):
            if 2 * m - k <= 4:
                assert s.wins(column_state(t, m, k).counts, 2 * m - k)


def test_achievable_blocklength():
    assert achievable_blocklength(3, 0, 3) == (1, 1)
    assert achievable_blocklength(6, 1, 3) == (5, 2)
    assert achievable_blocklength(9, 1, 3) == (7, 3)
    assert achievable_blocklength(24, 1, 3) == (7, 3)
    assert achievable_blocklength(25, 1, 3) == (9, 4)


def test_first_column_witness_dominates():
    for M in (3, 6, 9, 24, 100):
        for e in range(3):
            init, col = first_column_witness(M, e, 3)
            assert all(a <= b for a, b in zip(init.counts, col.counts))


def test_csv_and_render(t3):
    csv = build_table(3, 2, 3).to_csv().splitlines()
    assert csv == ["m,k=1,k=2,k=3", "1,3,1,1", "2,6,4,0"]
    assert t3.render().splitlines()[0].split()[:3] == ["3", "1", "1"]
