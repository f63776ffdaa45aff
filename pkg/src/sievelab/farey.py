"""Farey fractions with power denominators and their spacing statistics.

The central family is S(Q) = { a/q^k : gcd(a,q)=1, 1 <= a < q^k, Q <= q <= 2Q }
together with the clustering statistic

    M(n, family) = max over x in S of #{ y in S : ||x - y|| < 1/2n }.

Everything here is exact: family values are Fractions, and the sweep and
oracle both compare cross-multiplied big integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from .budgets import Budgets, DEFAULT
from .errors import InvalidArgumentError, ResourceLimitError
from .exactmath import circle_distance, rational_str


def euler_phi(n: int) -> int:
    result = n
    p, m = 2, n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@dataclass(frozen=True)
class FareyPoint:
    a: int
    q: int
    k: int
    value: Fraction

    def __post_init__(self):
        if gcd(self.a, self.q) != 1:
            raise InvalidArgumentError(f"gcd({self.a},{self.q}) != 1")


@dataclass
class FareyFamily:
    k: int
    q_min: int
    q_max: int
    points: list  # FareyPoint, sorted ascending by value
    _scaled: tuple | None = field(default=None, repr=False, compare=False)

    def __len__(self):
        return len(self.points)

    def scaled(self) -> tuple[int, list[int]]:
        """(D, s) with s[i] = points[i].value * D, D = lcm of denominators."""
        if self._scaled is None:
            D = 1
            for p in self.points:
                D = lcm(D, p.value.denominator)
            s = [p.value.numerator * (D // p.value.denominator) for p in self.points]
            self._scaled = (D, s)
        return self._scaled


@dataclass
class SpacingReport:
    min_gap: Fraction
    max_close_count: int
    argmax_point: FareyPoint

    def to_json(self) -> dict:
        return {
            "min_gap": rational_str(self.min_gap),
            "m_value": self.max_close_count,
            "argmax": {
                "k": self.argmax_point.k,
                "q": self.argmax_point.q,
                "a": self.argmax_point.a,
            },
        }


def predicted_size(k: int, q_min: int, q_max: int) -> int:
    total = 0
    for q in range(q_min, q_max + 1):
        total += 1 if q == 1 else q ** (k - 1) * euler_phi(q)
    return total


def enumerate_family(
    k: int, q_min: int, q_max: int, budgets: Budgets = DEFAULT
) -> FareyFamily:
    """All points a/q^k with gcd(a,q)=1, 1 <= a < q^k, q_min <= q <= q_max.

    q = 1 contributes the single point 0 (written 1/1) and only enters when
    q_min = 1; dyadic families use q_min = Q >= 2.
    """
    if k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {k}")
    if not 1 <= q_min <= q_max:
        raise InvalidArgumentError(f"need 1 <= q_min <= q_max, got [{q_min}, {q_max}]")
    size = predicted_size(k, q_min, q_max)
    if size > budgets.max_family:
        raise ResourceLimitError(
            f"family would have {size} points, budget is {budgets.max_family}",
            predicted=size,
            budget=budgets.max_family,
        )
    pts = []
    for q in range(q_min, q_max + 1):
        if q == 1:
            pts.append(FareyPoint(1, 1, k, Fraction(0)))
            continue
        d = q**k
        residues = [b for b in range(1, q) if gcd(b, q) == 1]
        for t in range(q ** (k - 1)):
            base = t * q
            for b in residues:
                a = base + b
                pts.append(FareyPoint(a, q, k, Fraction(a, d)))
    pts.sort(key=lambda p: p.value)
    # distinct (q, a) pairs must land on distinct circle points: the reduced
    # denominator of a/q^k is exactly q^k, so collisions are impossible.
    for u, v in zip(pts, pts[1:]):
        assert u.value != v.value, (u, v)
    return FareyFamily(k=k, q_min=q_min, q_max=q_max, points=pts)


def min_spacing(family: FareyFamily) -> Fraction:
    """Smallest circle distance between adjacent points (wraparound included).

    On the circle this equals the minimum over all distinct pairs.
    """
    if len(family) < 2:
        raise InvalidArgumentError("min_spacing needs at least 2 points")
    D, s = family.scaled()
    best = min(b - a for a, b in zip(s, s[1:]))
    best = min(best, s[0] + D - s[-1])
    return Fraction(best, D)


def close_count(family: FareyFamily, x: FareyPoint, threshold: Fraction) -> int:
    """#{ y in family : ||x.value - y.value|| < threshold }, strict; counts x itself."""
    if threshold <= 0:
        raise InvalidArgumentError("threshold must be > 0")
    if not any(p.a == x.a and p.q == x.q for p in family.points):
        raise InvalidArgumentError(f"point {x.a}/{x.q}^{x.k} not in family")
    tn, td = threshold.numerator, threshold.denominator
    D, s = family.scaled()
    xs = x.value.numerator * (D // x.value.denominator)
    count = 0
    for v in s:
        m = abs(v - xs)
        m = min(m, D - m)
        if m * td < tn * D:
            count += 1
    return count


def max_close_count(family: FareyFamily, n: int) -> SpacingReport:
    """M(n, family) by a sorted two-pointer sweep over the circle, O(|S| + output)."""
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    if len(family) == 0:
        raise InvalidArgumentError("family is empty")
    D, s = family.scaled()
    m = len(s)
    s2 = s + [v + D for v in s] + [v + 2 * D for v in s]
    two_n = 2 * n
    best = -1
    best_idx = 0
    lo = 1
    hi = m
    for c in range(m, 2 * m):
        lo = max(lo, c - m + 1)
        while two_n * (s2[c] - s2[lo]) >= D:
            lo += 1
        hi = max(hi, c)
        while hi + 1 < c + m and two_n * (s2[hi + 1] - s2[c]) < D:
            hi += 1
        count = hi - lo + 1
        if count > best:
            best = count
            best_idx = c - m
    gap = min_spacing(family) if m >= 2 else Fraction(1)
    return SpacingReport(
        min_gap=gap, max_close_count=best, argmax_point=family.points[best_idx]
    )


def brute_force_max_close_count(
    family: FareyFamily, n: int, budgets: Budgets = DEFAULT
) -> int:
    """Independent oracle for M(n, family): the full O(|S|^2) pairwise count.

    Uses exact integer cross-multiplication throughout; the vectorized path
    is taken only when every product provably fits in int64.
    """
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    m = len(family)
    if m == 0:
        raise InvalidArgumentError("family is empty")
    if m * m > budgets.max_pairwise:
        raise ResourceLimitError(
            f"oracle needs {m * m} pair comparisons, budget is {budgets.max_pairwise}",
            predicted=m * m,
            budget=budgets.max_pairwise,
        )
    D, s = family.scaled()
    if 2 * n * D < 2**62:
        arr = np.asarray(s, dtype=np.int64)
        diff = np.abs(arr[:, None] - arr[None, :])
        np.minimum(diff, D - diff, out=diff)
        close = (2 * n * diff) < D
        return int(close.sum(axis=1).max())
    best = 0
    for i in range(m):
        si = s[i]
        count = 0
        for j in range(m):
            d = abs(s[j] - si)
            d = min(d, D - d)
            if 2 * n * d < D:
                count += 1
        best = max(best, count)
    return best


def family_csv_rows(family: FareyFamily):
    """Rows for the family dump schema: k, q, a, value."""
    for p in family.points:
        yield {"k": p.k, "q": p.q, "a": p.a, "value": rational_str(p.value)}


__all__ = [
    "FareyPoint",
    "FareyFamily",
    "SpacingReport",
    "euler_phi",
    "predicted_size",
    "enumerate_family",
    "min_spacing",
    "close_count",
    "max_close_count",
    "brute_force_max_close_count",
    "family_csv_rows",
    "circle_distance",
]
