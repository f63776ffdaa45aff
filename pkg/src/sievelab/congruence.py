"""Polynomial congruences in boxes, and the congruence route to close-pair counts.

count_box_solutions counts (x, y) in [K+1, K+H] x [L+1, L+R] with
f(x) = y (mod m) and evaluates the box-count bound
H((R/m)^(1/j) + (R/H^k)^(1/2j)) with j = k(k+1)/2.

count_close_pairs_via_congruence recounts, for a Farey point a/q^k, the
neighbours within 1/2n by solving a*r^k = z (mod q^k) over a symmetric
z-window, sharing no code with the farey module's direct counters.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .budgets import Budgets, DEFAULT
from .errors import InvalidArgumentError, ResourceLimitError


@dataclass(frozen=True)
class PolySpec:
    """f(x) = coefficients[0] + coefficients[1] x + ... ; degree k >= 2."""

    coefficients: tuple
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise InvalidArgumentError("modulus must be positive")
        if len(self.coefficients) < 3 or self.coefficients[-1] == 0:
            raise InvalidArgumentError("polynomial must have degree k >= 2")
        if gcd(self.coefficients[-1], self.modulus) != 1:
            raise InvalidArgumentError(
                f"leading coefficient {self.coefficients[-1]} shares a factor "
                f"with modulus {self.modulus}"
            )

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def eval_mod(self, x: int) -> int:
        """Horner evaluation with intermediate reduction mod m."""
        m = self.modulus
        acc = 0
        for c in reversed(self.coefficients):
            acc = (acc * x + c) % m
        return acc


@dataclass(frozen=True)
class BoxSpec:
    K: int
    H: int
    L: int
    R: int

    def __post_init__(self):
        if self.H < 1 or self.R < 1:
            raise InvalidArgumentError("box sides H, R must be >= 1")


@dataclass
class BoxCount:
    count: int
    bound_value: float
    ratio: float


def j_constant(k: int, legacy: bool = False) -> Fraction:
    """k(k+1)/2, the exponent constant in the box bound; legacy form k(k+1)."""
    if k < 2:
        raise InvalidArgumentError(f"k must be >= 2, got {k}")
    return Fraction(k * (k + 1)) if legacy else Fraction(k * (k + 1), 2)


def _residues_in_window(v: int, m: int, lo: int, length: int) -> int:
    """#{ y in [lo, lo + length - 1] : y = v (mod m) }."""
    if length <= 0:
        return 0
    d = (v - lo) % m
    return 0 if d > length - 1 else 1 + (length - 1 - d) // m


def count_box_solutions(
    poly: PolySpec,
    box: BoxSpec,
    legacy_j: bool = False,
    budgets: Budgets = DEFAULT,
) -> BoxCount:
    """Exact box count plus the bound value (epsilon = 0) and their ratio."""
    if box.H > poly.modulus or box.R > poly.modulus:
        raise InvalidArgumentError("box sides must satisfy 1 <= H, R <= m")
    if box.H > budgets.max_box_width:
        raise ResourceLimitError(
            f"H = {box.H} exceeds budget {budgets.max_box_width}",
            predicted=box.H,
            budget=budgets.max_box_width,
        )
    m = poly.modulus
    count = 0
    for x in range(box.K + 1, box.K + box.H + 1):
        count += _residues_in_window(poly.eval_mod(x), m, box.L + 1, box.R)
    j = float(j_constant(poly.degree, legacy=legacy_j))
    k = poly.degree
    bound = box.H * (
        (box.R / m) ** (1.0 / j) + (box.R / box.H**k) ** (1.0 / (2.0 * j))
    )
    return BoxCount(count=count, bound_value=bound, ratio=count / bound)


def count_box_solutions_brute(poly: PolySpec, box: BoxSpec) -> int:
    """Double loop over (x, y); independent check of the per-x window formula."""
    m = poly.modulus
    count = 0
    for x in range(box.K + 1, box.K + box.H + 1):
        fx = poly.eval_mod(x)
        for y in range(box.L + 1, box.L + box.R + 1):
            if (y - fx) % m == 0:
                count += 1
    return count


def count_close_pairs_via_congruence(
    a: int,
    q: int,
    k: int,
    q_min: int,
    q_max: int,
    n: int,
    require_coprime: bool = True,
) -> int:
    """Pairs (b, r) with q_min <= r <= q_max, 1 <= b < r^k (b = r = 1 for the
    point 0) and |a r^k - b q^k| / (q^k r^k) < 1/2n, evaluated exactly.

    Iterates r, enumerates representatives z of a r^k mod q^k inside the
    symmetric window |z| < q^k r^k / 2n, and recovers b = (a r^k - z)/q^k.
    With require_coprime, additionally demands gcd(b, r) = 1 (the exact
    close-neighbour count); without it, the relaxed count used when the
    congruence bound is applied as an upper estimate.
    """
    if gcd(a, q) != 1:
        raise InvalidArgumentError(f"gcd({a},{q}) != 1")
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    qk = q**k
    count = 0
    for r in range(q_min, q_max + 1):
        if r == 1:
            # single point 0 (b = r = 1); distance is ||a/q^k||
            m0 = a % qk
            m0 = min(m0, qk - m0)
            if 2 * n * m0 < qk:
                count += 1
            continue
        rk = r**k
        c = (a * rk) % qk
        # z ranges over c + t*q^k inside the open window |z| < q^k r^k / 2n;
        # the window is shorter than q^k r^k, so each residue b mod r^k is
        # reachable by at most one z and no point is counted twice.
        half_num = qk * rk  # condition: 2n|z| < q^k r^k
        t_span = (half_num // (2 * n)) // qk + 2
        for t in range(-t_span, t_span + 1):
            z = c + t * qk
            if 2 * n * abs(z) >= half_num:
                continue
            b = (a * rk - z) // qk
            b_mod = b % rk
            if b_mod == 0:
                continue
            if require_coprime and gcd(b_mod, r) != 1:
                continue
            count += 1
    return count


__all__ = [
    "PolySpec",
    "BoxSpec",
    "BoxCount",
    "j_constant",
    "count_box_solutions",
    "count_box_solutions_brute",
    "count_close_pairs_via_congruence",
]
