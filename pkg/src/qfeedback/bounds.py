"""Converse bounds on winning states and the asymptotic rate-region curves.

Finite bounds are exact integer comparisons.  The curves are plain floats.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from scipy.optimize import minimize_scalar

from .state import PartitionQ, State, as_state, check_q, initial_state, reduce

TANGENCY_TOL = 1e-9


class UnsupportedAlphabet(ValueError):
    pass


def ball_size(n: int, radius: int, q: int) -> int:
    """Number of q-ary words within Hamming distance ``radius`` of a fixed word of length n."""
    if radius < 0:
        return 0
    return sum(math.comb(n, l) * (q - 1) ** l for l in range(min(radius, n) + 1))


def volume(c: State | Sequence[int], n: int, q: int) -> int:
    check_q(q)
    if n < 0:
        raise ValueError("n must be non-negative")
    c = as_state(c)
    total = 0
    ball = 0
    for i, ci in enumerate(c.counts):
        if i <= n:
            ball += math.comb(n, i) * (q - 1) ** i
        if ci:
            total += ci * ball
    return total


def volume_bound_holds(c: State | Sequence[int], n: int, q: int) -> bool:
    return volume(c, n, q) <= q**n


def conservation_check(c: State, P: PartitionQ, n: int, q: int) -> bool:
    if n < 1:
        raise ValueError("conservation needs at least one remaining question")
    xs = reduce(c, P, q)
    return volume(c, n, q) == sum(volume(x, n - 1, q) for x in xs)


def translated_volume_bounds(M: int, e: int, q: int, n: int) -> bool:
    """Volume bound applied to every translate ``T^m I`` of the initial state.

    ``T^m I`` must be winning with ``n - 2m`` questions, so its volume is at
    most ``q^(n-2m)`` for every ``0 <= m <= e``.  The ``m = e`` term reads
    ``M <= q^(n-2e)``.
    """
    check_q(q)
    if n < 2 * e:
        return False
    for m in range(e + 1):
        if volume(initial_state(M, e - m), n - 2 * m, q) > q ** (n - 2 * m):
            return False
    return True


def translated_display_bound(M: int, e: int, q: int, n: int, m: int) -> bool:
    """Dominant-term form ``M * C(n-2m, e-m) <= q^(n-2m)`` of the translated bound."""
    if not 0 <= m <= e or n - 2 * m < 0:
        raise ValueError("need 0 <= m <= e and n >= 2m")
    return M * math.comb(n - 2 * m, e - m) <= q ** (n - 2 * m)


def tightest_translation(M: int, e: int, q: int, n: int) -> int:
    """The m whose translated volume ratio ``V/q^(n-2m)`` is largest (ties: smallest m)."""
    if n < 2 * e:
        raise ValueError("need n >= 2e")
    best, best_ratio = 0, Fraction(-1)
    for m in range(e + 1):
        N = n - 2 * m
        ratio = Fraction(volume(initial_state(M, e - m), N, q), q**N)
        if ratio > best_ratio:
            best, best_ratio = m, ratio
    return best


def min_blocklength_converse(M: int, e: int, q: int) -> int:
    if M < 1:
        raise ValueError("M must be >= 1")
    n = 2 * e
    while not translated_volume_bounds(M, e, q, n):
        n += 1
    return n


# --- asymptotic curves -----------------------------------------------------


def hq(x: float, q: int) -> float:
    """q-ary entropy, with ``0 log 0 = 0`` at the endpoints."""
    check_q(q)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"hq is defined on [0, 1], got {x}")
    lq = math.log(q)
    out = x * math.log(q - 1) / lq if q > 2 else 0.0
    if 0.0 < x:
        out -= x * math.log(x) / lq
    if x < 1.0:
        out -= (1.0 - x) * math.log1p(-x) / lq
    return out


def curve_volume(f: float, q: int) -> float:
    return 1.0 - hq(f, q)


def curve_construction(f: float, q: int) -> float:
    check_q(q)
    return (1.0 - 2.0 * f) * math.log(q - 1) / math.log(q)


def translation_threshold(q: int) -> float:
    """Left end ``2 / (q^2 + q sqrt(q^2 - 4))`` of the translation curve's domain."""
    if q < 3:
        raise UnsupportedAlphabet("the translation curve needs q >= 3")
    return 2.0 / (q * q + q * math.sqrt(q * q - 4))


def curve_translation(f: float, q: int) -> Optional[float]:
    """Closed-form translated bound, or ``None`` outside ``[threshold, 1/2]``.

    The slope is fixed by the large-n optimum ``y = b x`` of the dominant
    binomial term, so this is a straight line from the volume curve at the
    threshold down to zero at ``f = 1/2``.
    """
    check_q(q)
    if q == 2:
        raise UnsupportedAlphabet(
            "binary alphabets follow a different translation law; no closed form here"
        )
    beta = translation_threshold(q)
    if not beta <= f <= 0.5:
        return None
    s = q * math.sqrt(q * q - 4)
    lead = (q * q + s) / (q * q - 4 + s)
    return lead * (1.0 - 2.0 * f) * (1.0 - hq(beta, q))


def curve_translation_optimized(f: float, q: int) -> float:
    """Translated volume bound minimised over the translation depth.

    Uses ``R <= (1 - 2u) (1 - H_q((f - u) / (1 - 2u)))`` for ``u`` in ``[0, f]``;
    ``u = 0`` is the plain volume bound, so this never exceeds it.
    """
    check_q(q)
    if not 0.0 <= f <= 0.5:
        raise ValueError("f must lie in [0, 1/2]")
    if f == 0.5:
        return 0.0

    def bound(u: float) -> float:
        return (1.0 - 2.0 * u) * (1.0 - hq((f - u) / (1.0 - 2.0 * u), q))

    best = min(bound(0.0), bound(f))
    if f > 0.0:
        res = minimize_scalar(bound, bounds=(0.0, f), method="bounded", options={"xatol": 1e-12})
        best = min(best, float(res.fun))
    return best


@dataclass(frozen=True)
class RateRegionPoint:
    f: float
    R_volume: Optional[float]
    R_translation: Optional[float]
    R_construction: Optional[float]


def emit_rate_region(q: int, f_grid: Iterable[float]) -> list[RateRegionPoint]:
    check_q(q)
    points = []
    for f in f_grid:
        f = float(f)
        if not 0.0 <= f <= 0.5:
            raise ValueError(f"grid value {f} outside [0, 1/2]")
        rt = curve_translation(f, q) if q >= 3 else None
        points.append(
            RateRegionPoint(
                f=f,
                R_volume=max(0.0, curve_volume(f, q)),
                R_translation=rt,
                R_construction=max(0.0, curve_construction(f, q)),
            )
        )
    return points


def rate_region_csv(points: Iterable[RateRegionPoint]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["f", "R_volume", "R_translation", "R_construction"])
    for p in points:
        writer.writerow(
            ["" if v is None else repr(float(v)) for v in (p.f, p.R_volume, p.R_translation, p.R_construction)]
        )
    return buf.getvalue()
