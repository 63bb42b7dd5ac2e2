"""States, partitions and the one-question reduction rule.

A state ``c`` is stored bottom-up: ``counts[i]`` is the number of candidate
messages that can still absorb ``i`` more wrong answers.  The budget ``e`` is
``len(counts) - 1``.  Everything is exact Python integers.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class DimensionMismatch(ValueError):
    """Vectors that must share a budget do not."""


class InvalidPartition(ValueError):
    """A partition does not split its state into q non-negative parts."""


class NonIntegralOrNegativePartition(ValueError):
    """The outcome list is not reachable from any state by one question."""


def check_q(q: int) -> int:
    if not isinstance(q, int) or q < 2:
        raise ValueError(f"alphabet size q must be an integer >= 2, got {q!r}")
    return q


@dataclass(frozen=True)
class State:
    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        counts = tuple(int(c) for c in self.counts)
        if not counts:
            raise ValueError("a state has at least one entry (budget e >= 0)")
        if any(c < 0 for c in counts):
            raise ValueError(f"state counts must be non-negative: {counts}")
        object.__setattr__(self, "counts", counts)

    @property
    def e(self) -> int:
        return len(self.counts) - 1

    @property
    def total(self) -> int:
        return sum(self.counts)

    def __getitem__(self, i: int) -> int:
        # c_{e+1} = 0 and anything above it.
        if 0 <= i < len(self.counts):
            return self.counts[i]
        return 0

    def __len__(self) -> int:
        return len(self.counts)

    def __iter__(self):
        return iter(self.counts)

    def literal(self) -> str:
        return ",".join(str(c) for c in self.counts)

    def stripped(self) -> "State":
        """Same game with the unused top capacities removed (keeps e >= 0)."""
        counts = list(self.counts)
        while len(counts) > 1 and counts[-1] == 0:
            counts.pop()
        return State(tuple(counts))

    def __str__(self) -> str:
        return "(" + ";".join(str(c) for c in reversed(self.counts)) + ")"


@dataclass(frozen=True)
class PartitionQ:
    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        parts = tuple(tuple(int(v) for v in p) for p in self.parts)
        if not parts:
            raise InvalidPartition("a partition needs at least one part")
        width = len(parts[0])
        if any(len(p) != width for p in parts):
            raise DimensionMismatch("partition parts differ in length")
        if any(v < 0 for p in parts for v in p):
            raise InvalidPartition(f"negative entry in partition {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def q(self) -> int:
        return len(self.parts)

    @property
    def e(self) -> int:
        return len(self.parts[0]) - 1

    def total(self) -> State:
        return State(tuple(sum(col) for col in zip(*self.parts)))

    def literal(self) -> str:
        return "|".join(",".join(str(v) for v in p) for p in self.parts)

    def validate(self, c: State, q: int) -> None:
        if self.q != q:
            raise InvalidPartition(f"expected {q} parts, got {self.q}")
        if self.e != c.e:
            raise DimensionMismatch(f"partition budget {self.e} != state budget {c.e}")
        if self.total() != c:
            raise InvalidPartition(
                f"column sums {self.total().counts} do not match state {c.counts}"
            )


@dataclass(frozen=True)
class ReductionOutcome:
    states: tuple[State, ...]

    def __post_init__(self) -> None:
        states = tuple(s if isinstance(s, State) else State(tuple(s)) for s in self.states)
        if states and any(s.e != states[0].e for s in states):
            raise DimensionMismatch("outcome states differ in budget")
        object.__setattr__(self, "states", states)

    def __getitem__(self, j: int) -> State:
        return self.states[j]

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)


def as_state(c: State | Sequence[int]) -> State:
    return c if isinstance(c, State) else State(tuple(c))


def initial_state(M: int, e: int) -> State:
    if M < 1:
        raise ValueError("message count M must be >= 1")
    if e < 0:
        raise ValueError("error budget e must be >= 0")
    return State((0,) * e + (M,))


def zero_state(e: int) -> State:
    return State((0,) * (e + 1))


def child_counts(c: Sequence[int], p: Sequence[int]) -> tuple[int, ...]:
    """Counts after answering against part ``p`` of a state with counts ``c``.

    Elements outside ``p`` lose one unit of capacity, so level ``i`` of the
    child holds ``p_i`` plus what the other parts had at ``i + 1``.
    """
    e = len(c) - 1
    out = [p[i] + c[i + 1] - p[i + 1] for i in range(e)]
    out.append(p[e])
    return tuple(out)


def reduce(c: State, P: PartitionQ, q: int) -> ReductionOutcome:
    check_q(q)
    P.validate(c, q)
    return ReductionOutcome(tuple(State(child_counts(c.counts, p)) for p in P.parts))


def invert_reduction(xs: ReductionOutcome | Sequence[State], q: int) -> PartitionQ:
    check_q(q)
    states = [as_state(x) for x in xs]
    if len(states) != q:
        raise DimensionMismatch(f"expected {q} outcome states, got {len(states)}")
    e = states[0].e
    if any(x.e != e for x in states):
        raise DimensionMismatch("outcome states differ in budget")
    parts = [[0] * (e + 1) for _ in range(q)]
    for j in range(q):
        parts[j][e] = states[j][e]
    for i in range(e - 1, -1, -1):
        above = sum(parts[j][i + 1] for j in range(q))
        for j in range(q):
            parts[j][i] = states[j][i] - (above - parts[j][i + 1])
    for j, p in enumerate(parts):
        for i, v in enumerate(p):
            if v < 0:
                raise NonIntegralOrNegativePartition(
                    f"back-substitution gives p^{j}_{i} = {v} < 0"
                )
    return PartitionQ(tuple(tuple(p) for p in parts))


def check_reduction(c: State, xs: ReductionOutcome | Sequence[State], q: int) -> bool:
    states = [as_state(x) for x in xs]
    if len(states) != q or any(x.e != c.e for x in states):
        return False
    expected = [c[i] + (q - 1) * c[i + 1] for i in range(c.e + 1)]
    got = [sum(x[i] for x in states) for i in range(c.e + 1)]
    if got != expected:
        return False
    try:
        invert_reduction(states, q)
    except (NonIntegralOrNegativePartition, DimensionMismatch):
        return False
    return True


def translate(c: State) -> State:
    if c.e < 1:
        raise ValueError("translation needs a state with budget e >= 1")
    return State(c.counts[1:])


def embed(c: State, extra: int) -> State:
    if extra < 0:
        raise ValueError("extra must be non-negative")
    return State(c.counts + (0,) * extra)


def _same_budget(c: State, d: State) -> None:
    if c.e != d.e:
        raise DimensionMismatch(f"budgets differ: {c.e} vs {d.e}")


def dominates_componentwise(c: State, d: State) -> bool:
    """True iff ``c_i <= d_i`` at every level (``d`` is the larger state)."""
    _same_budget(c, d)
    return all(a <= b for a, b in zip(c.counts, d.counts))


def dominates_tailsum(c: State, d: State) -> bool:
    """True iff for every k the elements of ``c`` with capacity >= k are at most those of ``d``."""
    _same_budget(c, d)
    sc = sd = 0
    for a, b in zip(reversed(c.counts), reversed(d.counts)):
        sc += a
        sd += b
        if sc > sd:
            return False
    return True


def parse_state(text: str) -> State:
    """Parse the bottom-up literal ``"c0,c1,...,ce"``."""
    try:
        values = [int(tok) for tok in text.replace(" ", "").split(",")]
    except ValueError as exc:
        raise ValueError(f"bad state literal {text!r}") from exc
    return State(tuple(values))


def parse_partition(text: str) -> PartitionQ:
    return PartitionQ(tuple(parse_state(chunk).counts for chunk in text.split("|")))


def partition_of(parts: Iterable[Sequence[int]]) -> PartitionQ:
    return PartitionQ(tuple(tuple(p) for p in parts))
