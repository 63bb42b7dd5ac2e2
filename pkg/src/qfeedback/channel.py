"""Adversarial channel with noiseless feedback, and exhaustive verification.

Adversaries are omniscient: they see the sent symbol, the history and the
current vote ledger (hence the whole public policy), but never the future.
"""
from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .bounds import ball_size
from .codec import FeedbackCode, NoUniqueSurvivor, VoteLedger, decode

DEFAULT_LEAF_CAP = 10**7


class BudgetExceeded(RuntimeError):
    def __init__(self, message: str, planned: int = 0, cap: int = 0):
        super().__init__(message)
        self.planned = planned
        self.cap = cap


@dataclass
class Transcript:
    theta: int
    sent: list[int] = field(default_factory=list)
    received: list[int] = field(default_factory=list)
    decoded: Optional[int] = None
    failure: str = ""

    @property
    def error_positions(self) -> list[int]:
        return [i for i, (a, b) in enumerate(zip(self.sent, self.received)) if a != b]

    @property
    def errors(self) -> int:
        return len(self.error_positions)

    @property
    def ok(self) -> bool:
        return self.decoded == self.theta

    def line(self) -> str:
        sym = lambda xs: " ".join(str(x) for x in xs)  # noqa: E731
        decoded = "" if self.decoded is None else str(self.decoded)
        return f"{self.theta},{sym(self.sent)},{sym(self.received)},{self.errors},{decoded},{str(self.ok).lower()}"


TRANSCRIPT_HEADER = "theta,sent,received,errors,decoded,ok"


class Adversary:
    """Base adversary: a budget and a per-run error count."""

    kind = "silent"

    def __init__(self, e: int):
        self.e = e
        self.used = 0

    def reset(self, seed: Optional[int] = None) -> None:
        self.used = 0

    def choose(self, alpha: int, ledger: VoteLedger, sent: Sequence[int]) -> int:
        return alpha

    def respond(self, alpha: int, ledger: VoteLedger, sent: Sequence[int]) -> int:
        beta = self.choose(alpha, ledger, sent)
        q = ledger.code.q
        if not 0 <= beta < q:
            raise ValueError(f"adversary produced {beta} outside 0..{q - 1}")
        if beta != alpha:
            self.used += 1
        return beta


class SilentAdversary(Adversary):
    pass


class ScriptedAdversary(Adversary):
    """Delivers a fixed received sequence regardless of what was sent."""

    kind = "scripted"

    def __init__(self, e: int, received: Sequence[int]):
        super().__init__(e)
        self.script = list(received)

    def choose(self, alpha, ledger, sent):
        return self.script[len(sent) - 1]


class RandomAdversary(Adversary):
    kind = "random"

    def __init__(self, e: int, seed: int = 0, p: float = 0.5):
        super().__init__(e)
        self.seed = seed
        self.p = p
        self.rng = random.Random(seed)

    def reset(self, seed: Optional[int] = None) -> None:
        super().reset()
        self.rng = random.Random(self.seed if seed is None else seed)

    def choose(self, alpha, ledger, sent):
        q = ledger.code.q
        if self.used < self.e and self.rng.random() < self.p:
            return self.rng.choice([b for b in range(q) if b != alpha])
        return alpha


class GreedyAdversary(Adversary):
    """Flip towards the answer that keeps the most rivals at least as strong as theta."""

    kind = "greedy"

    def __init__(self, e: int, theta: Optional[int] = None):
        super().__init__(e)
        self.theta = theta

    def choose(self, alpha, ledger, sent):
        theta = self.theta
        if theta is None or self.used >= self.e:
            return alpha
        best, best_score = alpha, None
        order = [alpha] + [b for b in range(ledger.code.q) if b != alpha]
        for beta in order:
            nxt = ledger.advance(beta)
            mine = nxt.capacity(theta)
            score = sum(1 for i in range(len(nxt.votes)) if i != theta and nxt.alive(i) and nxt.capacity(i) >= mine)
            if best_score is None or score > best_score:
                best, best_score = beta, score
        return best


def make_adversary(kind: str, e: int, seed: int = 0, received: Optional[Sequence[int]] = None) -> Adversary:
    if kind == "silent":
        return SilentAdversary(e)
    if kind == "random":
        return RandomAdversary(e, seed)
    if kind == "greedy":
        return GreedyAdversary(e)
    if kind == "scripted":
        if received is None:
            raise ValueError("a scripted adversary needs the received sequence")
        return ScriptedAdversary(e, received)
    raise ValueError(f"unknown adversary kind {kind!r}")


def simulate(code: FeedbackCode, adversary: Adversary, theta: int, seed: Optional[int] = None) -> Transcript:
    if not 0 <= theta < code.M:
        raise ValueError(f"message {theta} outside 0..{code.M - 1}")
    adversary.reset(seed)
    if isinstance(adversary, GreedyAdversary):
        adversary.theta = theta
    tr = Transcript(theta)
    ledger = code.start()
    for _ in range(code.n):
        alpha = ledger.answer_of(theta)  # depends on theta and past received symbols only
        tr.sent.append(alpha)
        beta = adversary.respond(alpha, ledger, tr.sent)
        tr.received.append(beta)
        ledger = ledger.advance(beta)
    try:
        tr.decoded = decode(code, tr.received)
    except NoUniqueSurvivor as exc:
        tr.failure = str(exc)
    return tr


@dataclass
class VerifyResult:
    ok: bool
    runs: int
    paths_per_message: int
    counterexample: Optional[Transcript] = None


def _verify_message(code: FeedbackCode, theta: int) -> tuple[int, Optional[Transcript]]:
    q, e = code.q, code.e
    leaves = 0
    first_bad: Optional[Transcript] = None

    def dfs(ledger: VoteLedger, sent: list[int], received: list[int], cost: int) -> None:
        nonlocal leaves, first_bad
        if len(received) == code.n:
            leaves += 1
            if first_bad is None:
                tr = Transcript(theta, list(sent), list(received))
                try:
                    tr.decoded = decode(code, received)
                except NoUniqueSurvivor as exc:
                    tr.failure = str(exc)
                if not tr.ok:
                    first_bad = tr
            return
        alpha = ledger.answer_of(theta)
        sent.append(alpha)
        for beta in [alpha] + [b for b in range(q) if b != alpha]:
            extra = int(beta != alpha)
            if cost + extra > e:
                continue
            received.append(beta)
            dfs(ledger.advance(beta), sent, received, cost + extra)
            received.pop()
        sent.pop()

    dfs(code.start(), [], [], 0)
    return leaves, first_bad


def exhaustive_verify(code: FeedbackCode, cap: int = DEFAULT_LEAF_CAP, threads: int = 1) -> VerifyResult:
    """Run every message against every adaptive error pattern of weight at most e."""
    per_message = ball_size(code.n, code.e, code.q)
    planned = per_message * code.M
    if planned > cap:
        raise BudgetExceeded(
            f"{planned} runs planned ({code.M} messages x {per_message} paths), cap is {cap}",
            planned,
            cap,
        )
    thetas = range(code.M)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda th: _verify_message(code, th), thetas))
    else:
        results = [_verify_message(code, th) for th in thetas]
    counter = None
    for leaves, bad in results:
        if leaves != per_message:
            raise RuntimeError(f"path enumeration produced {leaves} leaves, expected {per_message}")
        if counter is None and bad is not None:
            counter = bad
    return VerifyResult(counter is None, planned, per_message, counter)
