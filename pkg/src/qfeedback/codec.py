"""Executable feedback codes built from winning strategies.

The encoder and the decoder run the same replay: starting from the root of
the policy, every received symbol moves the policy to a child and adds one
vote against each candidate outside the announced part.  Which concrete
candidates form a part is fixed by filling parts in ascending id order inside
each capacity class (reals come before dummies because dummy ids start at
``M``), unless an explicit assignment is supplied for that transcript prefix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Optional, Sequence, Union

from .solver import StrategyTree, strategy_from_json, strategy_to_json
from .state import PartitionQ, State, check_q, dominates_componentwise, embed, initial_state
from .table import TableA, achievable_blocklength, build_table, column_state, table_partition, table_successor


class RootMismatch(ValueError):
    pass


class NoUniqueSurvivor(RuntimeError):
    pass


class LedgerMismatch(RuntimeError):
    """The vote ledger disagrees with the policy's state (invalid policy)."""


@dataclass(frozen=True)
class TableNode:
    """Policy node backed by a column prefix of the table, embedded at a fixed budget."""

    table: TableA
    m: int
    k: int
    budget: int

    @property
    def n(self) -> int:
        return 2 * self.m - self.k

    @property
    def state(self) -> State:
        return embed(column_state(self.table, self.m, self.k), self.budget - (self.m - 1))

    @property
    def partition(self) -> Optional[PartitionQ]:
        if self.n == 0:
            return None
        pad = (0,) * (self.budget - (self.m - 1))
        return PartitionQ(tuple(p + pad for p in table_partition(self.table, self.m, self.k).parts))

    def child(self, answer: int) -> "TableNode":
        m, k = table_successor(self.m, self.k, answer)
        return TableNode(self.table, m, k, self.budget)


Node = Union[StrategyTree, TableNode]
Assignment = tuple[tuple[int, ...], ...]


@dataclass(frozen=True, eq=False)
class FeedbackCode:
    M: int
    n: int
    e: int
    q: int
    root: Node
    budget: int
    dummy_capacity: tuple[int, ...] = ()
    via: str = "strategy"
    overrides: Mapping[tuple[int, ...], Assignment] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return self.M + len(self.dummy_capacity)

    @property
    def rate(self) -> Union[Fraction, float]:
        """``log_q M / n``; exact when M is a power of q."""
        k, power = 0, 1
        while power < self.M:
            power *= self.q
            k += 1
        if self.n == 0:
            return Fraction(0)
        if power == self.M:
            return Fraction(k, self.n)
        return math.log(self.M, self.q) / self.n

    def start(self) -> "VoteLedger":
        votes = [self.budget - self.e] * self.M + [self.budget - c for c in self.dummy_capacity]
        return VoteLedger(self, self.root, tuple(votes), ())


@dataclass(frozen=True)
class VoteLedger:
    """Negative-vote tallies for every element, plus the current policy node."""

    code: FeedbackCode
    node: Node
    votes: tuple[int, ...]
    received: tuple[int, ...]

    def alive(self, i: int) -> bool:
        return self.votes[i] <= self.code.budget

    def capacity(self, i: int) -> int:
        return self.code.budget - self.votes[i]

    def class_counts(self) -> State:
        counts = [0] * (self.code.budget + 1)
        for i, v in enumerate(self.votes):
            if v <= self.code.budget:
                counts[self.code.budget - v] += 1
        return State(tuple(counts))

    def survivors(self) -> list[int]:
        return [i for i in range(self.code.M) if self.alive(i)]

    def parts(self) -> Assignment:
        node = self.node
        P = node.partition
        if P is None:
            raise ValueError("no questions remain at this node")
        state = node.state
        if self.class_counts() != state:
            raise LedgerMismatch(
                f"ledger {self.class_counts().literal()} != policy state {state.literal()} "
                f"after {list(self.received)}"
            )
        override = self.code.overrides.get(self.received)
        if override is not None:
            self._check_override(override, P)
            return override
        E = self.code.budget
        classes: list[list[int]] = [[] for _ in range(E + 1)]
        for i, v in enumerate(self.votes):
            if v <= E:
                classes[E - v].append(i)
        parts: list[list[int]] = [[] for _ in range(self.code.q)]
        for cap, members in enumerate(classes):
            pos = 0
            for j, p in enumerate(P.parts):
                parts[j].extend(members[pos : pos + p[cap]])
                pos += p[cap]
        return tuple(tuple(sorted(p)) for p in parts)

    def _check_override(self, override: Assignment, P: PartitionQ) -> None:
        if len(override) != self.code.q:
            raise ValueError(f"assignment at {self.received} needs {self.code.q} parts")
        seen = sorted(i for part in override for i in part)
        alive = [i for i in range(len(self.votes)) if self.alive(i)]
        if seen != alive:
            raise ValueError(f"assignment at {self.received} does not cover the live elements")
        for j, part in enumerate(override):
            counts = [0] * (self.code.budget + 1)
            for i in part:
                counts[self.capacity(i)] += 1
            if tuple(counts) != P.parts[j]:
                raise ValueError(f"assignment part {j} at {self.received} disagrees with the partition")

    def answer_of(self, theta: int) -> int:
        """Part index holding ``theta``; eliminated elements answer 0."""
        for j, part in enumerate(self.parts()):
            if theta in part:
                return j
        return 0

    def advance(self, beta: int) -> "VoteLedger":
        if not 0 <= beta < self.code.q:
            raise ValueError(f"symbol {beta} outside 0..{self.code.q - 1}")
        inside = set(self.parts()[beta])
        votes = tuple(v if i in inside or v > self.code.budget else v + 1 for i, v in enumerate(self.votes))
        return VoteLedger(self.code, self.node.child(beta), votes, self.received + (beta,))


def _dummies(root: State, base: State) -> tuple[int, ...]:
    out: list[int] = []
    for cap, (have, need) in enumerate(zip(root.counts, base.counts)):
        out.extend([cap] * (have - need))
    return tuple(out)


def build_from_strategy(
    t: StrategyTree,
    M: int,
    e: Optional[int] = None,
    q: Optional[int] = None,
    overrides: Optional[Mapping[tuple[int, ...], Assignment]] = None,
) -> FeedbackCode:
    """Wrap a strategy tree as a code for messages ``0..M-1`` at error budget ``e``.

    ``e`` defaults to the tree's budget; a larger tree budget gives every
    message phantom votes.  Root slots beyond the M messages become dummies.
    """
    if q is None:
        if not t.children:
            raise ValueError("q cannot be inferred from a tree without questions")
        q = len(t.children)
    check_q(q)
    E = t.state.e
    e = E if e is None else e
    if not 0 <= e <= E:
        raise RootMismatch(f"error budget {e} does not fit the strategy budget {E}")
    base = embed(initial_state(M, e), E - e)
    if not dominates_componentwise(base, t.state):
        raise RootMismatch(f"root {t.state.literal()} cannot hold {M} messages at capacity {e}")
    return FeedbackCode(
        M=M,
        n=t.n,
        e=e,
        q=q,
        root=t,
        budget=E,
        dummy_capacity=_dummies(t.state, base),
        via="strategy",
        overrides=dict(overrides or {}),
    )


def build_from_table(M: int, e: int, q: int) -> FeedbackCode:
    n, i = achievable_blocklength(M, e, q)
    m = e + i
    table = build_table(q, m, max(2, 2 * m))
    root = TableNode(table, m, 1, m - 1)
    base = embed(initial_state(M, e), i - 1)
    return FeedbackCode(
        M=M,
        n=n,
        e=e,
        q=q,
        root=root,
        budget=m - 1,
        dummy_capacity=_dummies(root.state, base),
        via="table",
    )


def encode_step(code: FeedbackCode, theta: int, transcript: Sequence[int]) -> int:
    if not 0 <= theta < code.M:
        raise ValueError(f"message {theta} outside 0..{code.M - 1}")
    if len(transcript) >= code.n:
        raise ValueError("transcript already has n symbols")
    ledger = code.start()
    for beta in transcript:
        ledger = ledger.advance(beta)
    return ledger.answer_of(theta)


def replay(code: FeedbackCode, received: Sequence[int]) -> VoteLedger:
    ledger = code.start()
    for beta in received:
        ledger = ledger.advance(beta)
    return ledger


def decode(code: FeedbackCode, received: Sequence[int]) -> int:
    if len(received) != code.n:
        raise ValueError(f"expected {code.n} received symbols, got {len(received)}")
    survivors = replay(code, received).survivors()
    if len(survivors) != 1:
        raise NoUniqueSurvivor(f"received {list(received)} leaves messages {survivors}")
    return survivors[0]


# -- serialisation ---------------------------------------------------------------

FORMAT = "qfeedback-code/1"


def code_to_json(code: FeedbackCode) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "format": FORMAT,
        "via": code.via,
        "M": code.M,
        "e": code.e,
        "n": code.n,
        "q": code.q,
    }
    if code.via == "strategy":
        assert isinstance(code.root, StrategyTree)
        doc["strategy"] = strategy_to_json(code.root, code.q)
        if code.overrides:
            doc["assignments"] = [
                {"received": list(k), "parts": [list(p) for p in v]} for k, v in sorted(code.overrides.items())
            ]
    return doc


def code_from_json(doc: Mapping[str, Any]) -> FeedbackCode:
    if doc.get("format") != FORMAT:
        raise ValueError(f"unknown code format {doc.get('format')!r}")
    if doc["via"] == "table":
        return build_from_table(int(doc["M"]), int(doc["e"]), int(doc["q"]))
    tree = strategy_from_json(doc["strategy"])
    overrides = {
        tuple(a["received"]): tuple(tuple(p) for p in a["parts"]) for a in doc.get("assignments", [])
    }
    return build_from_strategy(tree, int(doc["M"]), int(doc["e"]), int(doc["q"]), overrides)
