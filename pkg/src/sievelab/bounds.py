"""Catalog of admissible-constant formulas for the power-moduli large sieve.

Each bound is available two ways:

* evaluate(id, k, Q, N, eps) -- the printed formula as a float;
* exponent(id, k, theta)     -- the exact exponent e with value ~ Q^e when
  N = Q^theta and eps = 0, as a Fraction.

Exponent functions are piecewise linear over exact rationals, so crossovers
and regime maps are solved exactly rather than root-found numerically.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import InvalidArgumentError


class BoundId(str, Enum):
    TRIVIAL = "trivial"
    ZHAO_CONJECTURE = "zhao-conjecture"
    ZHAO = "zhao"
    BAIER_ZHAO = "baier-zhao"
    HALUPCZOK_DELTA = "halupczok-delta"
    HALUPCZOK_AK = "halupczok-ak"
    HALUPCZOK_2K = "halupczok-2k"
    MUNSCH_NEW = "munsch-new"


# Prior proven bounds used for "improves on everything" comparisons.  The
# conjectural floor is excluded (nothing beats it by design), and so is
# Zhao's formula: its printed exponents are textually unreliable (see the
# decisions ledger) and taking it literally contradicts the published
# crossover ranges.
PROVEN_COMPETITORS = (
    BoundId.TRIVIAL,
    BoundId.BAIER_ZHAO,
    BoundId.HALUPCZOK_DELTA,
    BoundId.HALUPCZOK_AK,
    BoundId.HALUPCZOK_2K,
)


def kappa(k: int) -> int:
    return 2 ** (k - 1)


def halupczok_delta_const(k: int) -> Fraction:
    return Fraction(1, 2 * k * (k - 1))


def omega_const(k: int) -> Fraction:
    return Fraction(1, (k - 1) * (k - 2) + 2)


def _check_k(k: int) -> None:
    if k < 2:
        raise InvalidArgumentError(f"k must be >= 2, got {k}")


@dataclass
class BoundValue:
    id: BoundId
    value: float
    in_range: bool | None = None  # validity-range flag (munsch-new only)


def evaluate(
    id: BoundId,
    k: int,
    Q: float,
    N: float,
    eps: float = 0.0,
    zhao_variant: bool = False,
    halupczok_combine: str = "max",
) -> BoundValue:
    """Numeric value of the formula; eps is kept explicit and defaults to 0.

    zhao_variant replaces the implausible printed N^(1-kappa) term by
    N^(1-1/kappa).  halupczok_combine resolves the missing operator in the
    refined Halupczok formula ("max" or "sum").
    """
    _check_k(k)
    if Q < 1 or N < 1 or eps < 0:
        raise InvalidArgumentError("need Q >= 1, N >= 1, eps >= 0")
    id = BoundId(id)
    if id is BoundId.TRIVIAL:
        return BoundValue(id, min(Q ** (2 * k) + N, Q * (Q**k + N)))
    if id is BoundId.ZHAO_CONJECTURE:
        return BoundValue(id, Q**eps * (Q ** (k + 1) + N))
    if id is BoundId.ZHAO:
        kap = kappa(k)
        third = N ** (1 - 1 / kap) if zhao_variant else N ** float(1 - kap)
        val = Q ** (k + 1) + (
            N * Q ** ((kap - 1) / kap) + third * Q ** ((kap + k) / kap)
        ) * N**eps
        return BoundValue(id, val)
    if id is BoundId.BAIER_ZHAO:
        val = (Q ** (k + 1) + N + N ** (0.5 + eps) * Q**k) * (
            math.log(math.log(10 * N * Q)) ** (k + 1)
        )
        return BoundValue(id, val)
    if id is BoundId.HALUPCZOK_DELTA:
        d = float(halupczok_delta_const(k))
        val = (Q * N) ** eps * (
            Q ** (k + 1) + Q ** (1 - d) * N + Q ** (1 + k * d) * N ** (1 - d)
        )
        return BoundValue(id, val)
    if id is BoundId.HALUPCZOK_AK:
        return BoundValue(id, (Q * N) ** eps * _a_k(k, Q, N))
    if id is BoundId.HALUPCZOK_2K:
        om = float(omega_const(k))
        second = min(_a_k(k, Q, N), N ** (1 - om) * Q ** (1 + (2 * k - 1) * om))
        if halupczok_combine == "max":
            val = Q**eps * max(Q ** (k + 1), second)
        elif halupczok_combine == "sum":
            val = Q**eps * (Q ** (k + 1) + second)
        else:
            raise InvalidArgumentError(f"unknown combine mode {halupczok_combine!r}")
        return BoundValue(id, val)
    if id is BoundId.MUNSCH_NEW:
        val = (Q * N) ** eps * Q ** (1 + 1 / (k + 1)) * N ** (1 - 1 / (k * (k + 1)))
        in_range = Q**k <= N <= Q ** (2 * k)
        return BoundValue(id, val, in_range=in_range)
    raise InvalidArgumentError(f"unknown bound id {id!r}")


def _a_k(k: int, Q: float, N: float) -> float:
    e = 1 / (k * (k - 1))
    return Q ** (k + 1) + Q ** (1 - e) * N + Q ** (1 + 1 / (k - 1)) * N ** (1 - e)


# ----------------------------------------------------------------------
# Exact piecewise-linear exponent profiles
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Line:
    slope: Fraction
    intercept: Fraction

    def __call__(self, theta: Fraction) -> Fraction:
        return self.slope * theta + self.intercept

    def expression(self, var: str = "theta") -> str:
        if self.slope == 0:
            return str(self.intercept)
        return f"{self.intercept} + {self.slope}*{var}"


@dataclass
class PiecewiseLinear:
    """Continuous piecewise-linear function on [breaks[0], breaks[-1]].

    Segment i is the line ``lines[i]`` on [breaks[i], breaks[i+1]].
    """

    breaks: list  # Fractions, strictly increasing
    lines: list  # Lines, len(breaks) - 1

    @classmethod
    def from_line(cls, line: Line, lo: Fraction, hi: Fraction) -> "PiecewiseLinear":
        return cls(breaks=[lo, hi], lines=[line])

    def __call__(self, theta) -> Fraction:
        theta = Fraction(theta)
        return self.line_at(theta)(theta)

    def line_at(self, theta: Fraction) -> Line:
        if not self.breaks[0] <= theta <= self.breaks[-1]:
            raise InvalidArgumentError(f"{theta} outside domain {self.breaks[0]}..{self.breaks[-1]}")
        i = bisect_right(self.breaks, theta) - 1
        return self.lines[min(i, len(self.lines) - 1)]

    def normalized(self) -> "PiecewiseLinear":
        breaks = [self.breaks[0]]
        lines = []
        for b, ln in zip(self.breaks[1:], self.lines):
            if lines and lines[-1] == ln:
                breaks[-1] = b
            else:
                lines.append(ln)
                breaks.append(b)
        return PiecewiseLinear(breaks, lines)

    def equal_to(self, other: "PiecewiseLinear") -> bool:
        a, b = self.normalized(), other.normalized()
        return a.breaks == b.breaks and a.lines == b.lines


def _combine(f: PiecewiseLinear, g: PiecewiseLinear, larger: bool) -> PiecewiseLinear:
    if f.breaks[0] != g.breaks[0] or f.breaks[-1] != g.breaks[-1]:
        raise InvalidArgumentError("combine requires identical domains")
    cuts = sorted(set(f.breaks) | set(g.breaks))
    refined = [cuts[0]]
    for lo, hi in zip(cuts, cuts[1:]):
        mid = (lo + hi) / 2
        lf, lg = f.line_at(mid), g.line_at(mid)
        if lf.slope != lg.slope:
            x = (lg.intercept - lf.intercept) / (lf.slope - lg.slope)
            if lo < x < hi:
                refined.append(x)
        refined.append(hi)
    lines = []
    for lo, hi in zip(refined, refined[1:]):
        mid = (lo + hi) / 2
        lf, lg = f.line_at(mid), g.line_at(mid)
        if lf(mid) == lg(mid):
            lines.append(lf)
        elif (lf(mid) > lg(mid)) == larger:
            lines.append(lf)
        else:
            lines.append(lg)
    return PiecewiseLinear(refined, lines).normalized()


def pl_max(*fs: PiecewiseLinear) -> PiecewiseLinear:
    out = fs[0]
    for f in fs[1:]:
        out = _combine(out, f, larger=True)
    return out


def pl_min(*fs: PiecewiseLinear) -> PiecewiseLinear:
    out = fs[0]
    for f in fs[1:]:
        out = _combine(out, f, larger=False)
    return out


def exponent_profile(
    id: BoundId,
    k: int,
    lo=None,
    hi=None,
    zhao_variant: bool = False,
) -> PiecewiseLinear:
    """Exact exponent of Q in the dominant term, as a function of theta.

    The Baier-Zhao (log log)^(k+1) factor is Q^o(1) and excluded here.
    """
    _check_k(k)
    id = BoundId(id)
    lo = Fraction(k) if lo is None else Fraction(lo)
    hi = Fraction(2 * k) if hi is None else Fraction(hi)
    if lo >= hi:
        raise InvalidArgumentError("empty theta domain")

    def line(slope, intercept):
        return PiecewiseLinear.from_line(
            Line(Fraction(slope), Fraction(intercept)), lo, hi
        )

    if id is BoundId.TRIVIAL:
        return pl_min(
            pl_max(line(0, 2 * k), line(1, 0)),
            pl_max(line(0, 1 + k), line(1, 1)),
        )
    if id is BoundId.ZHAO_CONJECTURE:
        return pl_max(line(0, k + 1), line(1, 0))
    if id is BoundId.ZHAO:
        kap = kappa(k)
        third_slope = 1 - Fraction(1, kap) if zhao_variant else Fraction(1 - kap)
        return pl_max(
            line(0, k + 1),
            line(1, Fraction(kap - 1, kap)),
            line(third_slope, Fraction(kap + k, kap)),
        )
    if id is BoundId.BAIER_ZHAO:
        return pl_max(line(0, k + 1), line(1, 0), line(Fraction(1, 2), k))
    if id is BoundId.HALUPCZOK_DELTA:
        d = halupczok_delta_const(k)
        return pl_max(line(0, k + 1), line(1, 1 - d), line(1 - d, 1 + k * d))
    if id is BoundId.HALUPCZOK_AK:
        return _ak_profile(k, lo, hi)
    if id is BoundId.HALUPCZOK_2K:
        om = omega_const(k)
        refined = pl_min(
            _ak_profile(k, lo, hi),
            line(1 - om, 1 + (2 * k - 1) * om),
        )
        return pl_max(line(0, k + 1), refined)
    if id is BoundId.MUNSCH_NEW:
        return line(1 - Fraction(1, k * (k + 1)), 1 + Fraction(1, k + 1))
    raise InvalidArgumentError(f"unknown bound id {id!r}")


def _ak_profile(k, lo, hi):
    e = Fraction(1, k * (k - 1))
    mk = PiecewiseLinear.from_line
    return pl_max(
        mk(Line(Fraction(0), Fraction(k + 1)), lo, hi),
        mk(Line(Fraction(1), 1 - e), lo, hi),
        mk(Line(1 - e, 1 + Fraction(1, k - 1)), lo, hi),
    )


def exponent(id: BoundId, k: int, theta, **kw) -> Fraction:
    """Exact rational exponent at a single theta >= 0."""
    theta = Fraction(theta)
    if theta < 0:
        raise InvalidArgumentError("theta must be >= 0")
    lo = min(Fraction(0), theta)
    hi = max(Fraction(2 * k), theta + 1)
    return exponent_profile(id, k, lo=lo, hi=hi, **kw)(theta)


@dataclass
class CrossoverResult:
    identical: bool
    crossings: list  # Fractions where dominance flips
    signs: list  # (lo, hi, sign of e_A - e_B) on maximal constant-sign intervals


def crossover(id_a: BoundId, id_b: BoundId, k: int, lo=None, hi=None) -> CrossoverResult:
    """All theta in [k, 2k] where the exponent profiles of A and B cross."""
    fa = exponent_profile(id_a, k, lo=lo, hi=hi)
    fb = exponent_profile(id_b, k, lo=lo, hi=hi)
    if fa.equal_to(fb):
        return CrossoverResult(identical=True, crossings=[], signs=[])
    # refine to a common grid where both are single lines
    cuts = sorted(set(fa.breaks) | set(fb.breaks))
    refined = [cuts[0]]
    for seg_lo, seg_hi in zip(cuts, cuts[1:]):
        mid = (seg_lo + seg_hi) / 2
        la, lb = fa.line_at(mid), fb.line_at(mid)
        if la.slope != lb.slope:
            x = (lb.intercept - la.intercept) / (la.slope - lb.slope)
            if seg_lo < x < seg_hi:
                refined.append(x)
        refined.append(seg_hi)
    signs = []
    for seg_lo, seg_hi in zip(refined, refined[1:]):
        mid = (seg_lo + seg_hi) / 2
        d = fa(mid) - fb(mid)
        sign = (d > 0) - (d < 0)
        if signs and signs[-1][2] == sign:
            signs[-1] = (signs[-1][0], seg_hi, sign)
        else:
            signs.append((seg_lo, seg_hi, sign))
    crossings = [b[0] for a, b in zip(signs, signs[1:]) if a[2] != b[2]]
    return CrossoverResult(identical=False, crossings=crossings, signs=signs)


@dataclass
class RegimeSegment:
    theta_lo: Fraction
    theta_hi: Fraction
    winner: BoundId
    exponent_expression: str


def regime_map(k: int, ids=None, lo=None, hi=None) -> list:
    """Partition of [k, 2k] by which bound has the smallest exponent.

    Ties are broken by the catalog's fixed id order.
    """
    ids = list(BoundId) if ids is None else [BoundId(i) for i in ids]
    profiles = {i: exponent_profile(i, k, lo=lo, hi=hi) for i in ids}
    cuts = set()
    for f in profiles.values():
        cuts.update(f.breaks)
    # pairwise intersections refine the grid
    base = sorted(cuts)
    refined = set(base)
    for seg_lo, seg_hi in zip(base, base[1:]):
        mid = (seg_lo + seg_hi) / 2
        lns = [profiles[i].line_at(mid) for i in ids]
        for i in range(len(lns)):
            for j in range(i + 1, len(lns)):
                if lns[i].slope != lns[j].slope:
                    x = (lns[j].intercept - lns[i].intercept) / (
                        lns[i].slope - lns[j].slope
                    )
                    if seg_lo < x < seg_hi:
                        refined.add(x)
    grid = sorted(refined)
    out = []
    for seg_lo, seg_hi in zip(grid, grid[1:]):
        mid = (seg_lo + seg_hi) / 2
        best = min(ids, key=lambda i: (profiles[i](mid), ids.index(i)))
        expr = profiles[best].line_at(mid).expression()
        if out and out[-1].winner == best and out[-1].exponent_expression == expr:
            out[-1].theta_hi = seg_hi
        else:
            out.append(RegimeSegment(seg_lo, seg_hi, best, expr))
    return out


def dominant_bound(k: int, theta, ids=None) -> tuple:
    """(winner id, exact exponent) at one theta in the critical range."""
    theta = Fraction(theta)
    ids = list(BoundId) if ids is None else [BoundId(i) for i in ids]
    vals = [(exponent(i, k, theta), ids.index(i), i) for i in ids]
    e, _, winner = min(vals)
    return winner, e


def improvement_interval(
    k: int, challenger: BoundId = BoundId.MUNSCH_NEW, competitors=PROVEN_COMPETITORS
) -> list:
    """Open subintervals of [k, 2k] where the challenger's exponent is
    strictly below every competitor's."""
    cm = pl_min(*[exponent_profile(i, k) for i in competitors])
    ch = exponent_profile(challenger, k)
    cuts = sorted(set(cm.breaks) | set(ch.breaks))
    refined = [cuts[0]]
    for seg_lo, seg_hi in zip(cuts, cuts[1:]):
        mid = (seg_lo + seg_hi) / 2
        la, lb = ch.line_at(mid), cm.line_at(mid)
        if la.slope != lb.slope:
            x = (lb.intercept - la.intercept) / (la.slope - lb.slope)
            if seg_lo < x < seg_hi:
                refined.append(x)
        refined.append(seg_hi)
    wins = []
    for seg_lo, seg_hi in zip(refined, refined[1:]):
        mid = (seg_lo + seg_hi) / 2
        if ch(mid) < cm(mid):
            if wins and wins[-1][1] == seg_lo:
                wins[-1] = (wins[-1][0], seg_hi)
            else:
                wins.append((seg_lo, seg_hi))
    return wins


__all__ = [
    "BoundId",
    "BoundValue",
    "PROVEN_COMPETITORS",
    "kappa",
    "halupczok_delta_const",
    "omega_const",
    "evaluate",
    "exponent",
    "exponent_profile",
    "PiecewiseLinear",
    "Line",
    "pl_max",
    "pl_min",
    "crossover",
    "CrossoverResult",
    "regime_map",
    "RegimeSegment",
    "dominant_bound",
    "improvement_interval",
]
