"""Exact decision procedure for winning n-states, with strategy extraction.

A partition of ``c`` into q parts wins iff every part's child state wins with
one question fewer.  The child of part ``p`` depends only on ``p`` and ``c``,
so the search first decides which single parts are good, then looks for q
good parts summing to ``c``.  Parts are tried in descending order (compared
from the highest capacity down), which makes the first decomposition found
canonical up to relabelling the answers.
"""
from __future__ import annotations

import itertools
import json
import math
from bisect import bisect_right
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

from .bounds import ball_size, volume
from .state import (
    PartitionQ,
    State,
    as_state,
    check_q,
    check_reduction,
    child_counts,
    initial_state,
    reduce,
)

DEFAULT_NODE_LIMIT = 10**7
_RECENT = 256

Counts = tuple[int, ...]


class SolverBudgetExceeded(RuntimeError):
    pass


class NotWinning(ValueError):
    pass


def _strip(c: Counts) -> Counts:
    end = len(c)
    while end > 1 and c[end - 1] == 0:
        end -= 1
    return c[:end]


def _tail_dominated(c: Counts, d: Counts) -> bool:
    sc = sd = 0
    for a, b in zip(reversed(c), reversed(d)):
        sc += a
        sd += b
        if sc > sd:
            return False
    return True


@dataclass
class SolverStats:
    nodes: int = 0
    cache_hits: int = 0
    domination_hits: int = 0


@dataclass(frozen=True, eq=False)
class StrategyTree:
    state: State
    n: int
    partition: Optional[PartitionQ] = None
    children: tuple["StrategyTree", ...] = ()

    @property
    def is_leaf(self) -> bool:
        return self.partition is None

    def child(self, answer: int) -> "StrategyTree":
        return self.children[answer]

    def __repr__(self) -> str:
        return f"StrategyTree(state={self.state.literal()}, n={self.n})"


@dataclass
class SolveVerdict:
    winning: bool
    strategy: Optional[StrategyTree]
    stats: SolverStats


class Solver:
    """Memoised winning-state search for a fixed alphabet size.

    ``prune`` switches on the sound shortcuts: small totals, the ``e = 0``
    rule, the volume bound, the translation rule, volume windows on single
    parts and domination against recently decided states.  With ``prune``
    off the search is the bare recursion over partitions.  ``translation``
    can drop just the translation rule, so that the rule itself can be
    tested against the search.
    """

    def __init__(
        self,
        q: int,
        *,
        prune: bool = True,
        translation: bool = True,
        node_limit: int = DEFAULT_NODE_LIMIT,
    ):
        self.q = check_q(q)
        self.prune = prune
        self.translation = translation
        self.node_limit = node_limit
        self.stats = SolverStats()
        self._verdict: dict[tuple[Counts, int], bool] = {}
        self._choice: dict[tuple[Counts, int], tuple[Counts, ...]] = {}
        self._recent_win: dict[tuple[int, int], deque] = {}
        self._recent_lose: dict[tuple[int, int], deque] = {}

    # -- bookkeeping --------------------------------------------------------

    def _tick(self) -> None:
        self.stats.nodes += 1
        if self.stats.nodes > self.node_limit:
            raise SolverBudgetExceeded(
                f"node budget of {self.node_limit} exceeded; raise node_limit to continue"
            )

    def _remember(self, key: tuple[Counts, int], win: bool) -> bool:
        self._verdict[key] = win
        if self.prune:
            c, n = key
            book = self._recent_win if win else self._recent_lose
            book.setdefault((n, len(c)), deque(maxlen=_RECENT)).append(c)
        return win

    def _dominated_verdict(self, c: Counts, n: int) -> Optional[bool]:
        for d in self._recent_win.get((n, len(c)), ()):
            if _tail_dominated(c, d):
                return True
        for d in self._recent_lose.get((n, len(c)), ()):
            if all(a <= b for a, b in zip(d, c)):
                return False
        return None

    # -- verdicts -----------------------------------------------------------

    def wins(self, c: Sequence[int], n: int) -> bool:
        if n < 0:
            raise ValueError("n must be non-negative")
        c = _strip(tuple(c))
        key = (c, n)
        cached = self._verdict.get(key)
        if cached is not None:
            self.stats.cache_hits += 1
            return cached
        self._tick()
        total = sum(c)
        q = self.q
        if n == 0:
            return self._remember(key, total <= 1)
        if self.prune:
            if total <= 1:
                return self._remember(key, True)
            if len(c) == 1:
                return self._remember(key, c[0] <= q**n)
            if volume(c, n, q) > q**n:
                return self._remember(key, False)
            if self.translation and n >= 2 and not self.wins(c[1:], n - 2):
                return self._remember(key, False)
            dom = self._dominated_verdict(c, n)
            if dom is not None:
                self.stats.domination_hits += 1
                return self._remember(key, dom)
        choice = self._search(c, n)
        if choice is not None:
            self._choice[key] = choice
        return self._remember(key, choice is not None)

    def choose(self, c: Sequence[int], n: int) -> Optional[tuple[Counts, ...]]:
        """First winning partition of ``c`` (stripped form), or ``None`` if losing."""
        c = _strip(tuple(c))
        key = (c, n)
        if key in self._choice:
            return self._choice[key]
        if not self.wins(c, n):
            return None
        if key not in self._choice:
            self._choice[key] = self._search(c, n)
        return self._choice[key]

    def _search(self, c: Counts, n: int) -> Optional[tuple[Counts, ...]]:
        q = self.q
        e = len(c) - 1
        cap = q ** (n - 1)
        # child volume is affine in the part: base + sum_i p_i * weight_i
        weights = [math.comb(n - 1, i) * (q - 1) ** i for i in range(e + 1)]
        base = volume(c[1:] + (0,), n - 1, q)

        def part_volume(p: Counts) -> int:
            return base + sum(w * v for w, v in zip(weights, p))

        good: dict[Counts, bool] = {}

        def is_good(p: Counts) -> bool:
            hit = good.get(p)
            if hit is None:
                if self.prune and part_volume(p) > cap:
                    hit = False
                else:
                    hit = self.wins(child_counts(c, p), n - 1)
                good[p] = hit
            return hit

        memo: dict[tuple[Counts, int], Optional[tuple[Counts, ...]]] = {}

        def split(r: Counts, t: int) -> Optional[tuple[Counts, ...]]:
            key = (r, t)
            if key in memo:
                return memo[key]
            self._tick()
            if t == 1:
                out = (r,) if is_good(r) else None
                memo[key] = out
                return out
            out = None
            if not self.prune or t * base + sum(w * v for w, v in zip(weights, r)) <= t * cap:
                top = e
                while top > 0 and r[top] == 0:
                    top -= 1
                floor_top = -(-r[top] // t)
                ranges = [range(r[i], -1, -1) for i in range(e, -1, -1)]
                for rev in itertools.product(*ranges):
                    if rev[e - top] < floor_top:
                        break
                    p = tuple(reversed(rev))
                    if not is_good(p):
                        continue
                    rest = split(tuple(a - b for a, b in zip(r, p)), t - 1)
                    if rest is not None:
                        out = (p,) + rest
                        break
            memo[key] = out
            return out

        return split(c, q)

    # -- public API -----------------------------------------------------------

    def is_winning(self, c: State | Sequence[int], n: int) -> SolveVerdict:
        c = as_state(c)
        win = self.wins(c.counts, n)
        tree = self.extract_strategy(c, n) if win else None
        return SolveVerdict(win, tree, self.stats)

    def extract_strategy(self, c: State | Sequence[int], n: int) -> StrategyTree:
        c = as_state(c)
        if not self.wins(c.counts, n):
            raise NotWinning(f"{c} is not a winning {n}-state for q={self.q}")
        built: dict[tuple[Counts, int], StrategyTree] = {}

        def build(counts: Counts, m: int) -> StrategyTree:
            key = (counts, m)
            if key in built:
                return built[key]
            state = State(counts)
            if m == 0:
                node = StrategyTree(state, 0)
            else:
                parts = self.choose(counts, m)
                assert parts is not None, "winning state without a winning partition"
                width = len(counts)
                P = PartitionQ(tuple(p + (0,) * (width - len(p)) for p in parts))
                xs = reduce(state, P, self.q)
                node = StrategyTree(state, m, P, tuple(build(x.counts, m - 1) for x in xs))
            built[key] = node
            return node

        return build(c.counts, n)


def is_winning(c: State | Sequence[int], n: int, q: int, **kwargs: Any) -> SolveVerdict:
    return Solver(q, **kwargs).is_winning(c, n)


def extract_strategy(c: State | Sequence[int], n: int, q: int, **kwargs: Any) -> StrategyTree:
    return Solver(q, **kwargs).extract_strategy(c, n)


def max_messages(e: int, n: int, q: int, solver: Optional[Solver] = None) -> int:
    """Largest M whose initial state wins with n questions (binary search on M)."""
    solver = solver or Solver(q)
    if solver.q != q:
        raise ValueError("solver alphabet does not match q")
    hi = q**n // ball_size(n, e, q)  # volume bound
    if hi < 1:
        return 1
    # winning is monotone in M, so bisect for the first losing M in [1, hi]
    lost = bisect_right(range(1, hi + 1), False, key=lambda M: not solver.wins(initial_state(M, e).counts, n))
    return max(1, lost)


def min_blocklength(M: int, e: int, q: int, solver: Optional[Solver] = None, start: int = 0) -> int:
    """Smallest n for which the initial state of M messages is winning."""
    solver = solver or Solver(q)
    n = start
    while not solver.wins(initial_state(M, e).counts, n):
        n += 1
    return n


# -- independent checking ------------------------------------------------------


def find_strategy_defect(t: StrategyTree, q: int) -> Optional[tuple[tuple[int, ...], str]]:
    """First violated tree invariant as ``(answer path, reason)``, or ``None``."""
    seen: set[int] = set()
    stack: list[tuple[StrategyTree, tuple[int, ...]]] = [(t, ())]
    while stack:
        node, path = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        if node.n == 0:
            if node.partition is not None or node.children:
                return path, "node with no remaining questions carries a question"
            if node.state.total > 1:
                return path, f"leaf {node.state.literal()} keeps {node.state.total} candidates"
            continue
        if node.partition is None or len(node.children) != q:
            return path, f"internal node needs a partition and {q} children"
        try:
            node.partition.validate(node.state, q)
        except ValueError as exc:
            return path, f"bad partition: {exc}"
        xs = [ch.state for ch in node.children]
        if not check_reduction(node.state, xs, q):
            return path, "children are not a valid reduction of the node state"
        if list(reduce(node.state, node.partition, q)) != xs:
            return path, "children do not match the node's partition"
        for j, ch in enumerate(node.children):
            if ch.n != node.n - 1:
                return path + (j,), f"depth mismatch: expected {node.n - 1} questions, got {ch.n}"
            stack.append((ch, path + (j,)))
    return None


def verify_strategy(t: StrategyTree, q: int) -> bool:
    return find_strategy_defect(t, q) is None


def scripted_tree(
    c: State | Sequence[int],
    n: int,
    q: int,
    rule: Callable[[State, int], Sequence[Sequence[int]]],
) -> StrategyTree:
    """Build a full tree by asking ``rule(state, n)`` for each node's partition."""
    check_q(q)

    def build(state: State, m: int) -> StrategyTree:
        if m == 0:
            return StrategyTree(state, 0)
        P = PartitionQ(tuple(tuple(p) for p in rule(state, m)))
        xs = reduce(state, P, q)
        return StrategyTree(state, m, P, tuple(build(x, m - 1) for x in xs))

    return build(as_state(c), n)


# -- serialisation ---------------------------------------------------------------


def strategy_to_json(t: StrategyTree, q: int) -> dict[str, Any]:
    out: dict[str, Any] = {"state": list(t.state.counts), "n": t.n, "q": q}
    if t.partition is not None:
        out["partition"] = [list(p) for p in t.partition.parts]
        out["children"] = [strategy_to_json(ch, q) for ch in t.children]
    return out


def strategy_from_json(doc: dict[str, Any]) -> StrategyTree:
    state = State(tuple(doc["state"]))
    if "partition" not in doc:
        return StrategyTree(state, int(doc["n"]))
    P = PartitionQ(tuple(tuple(p) for p in doc["partition"]))
    children = tuple(strategy_from_json(ch) for ch in doc["children"])
    return StrategyTree(state, int(doc["n"]), P, children)


def dumps_strategy(t: StrategyTree, q: int) -> str:
    return json.dumps(strategy_to_json(t, q), separators=(",", ":"))
