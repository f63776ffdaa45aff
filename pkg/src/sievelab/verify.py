"""Cross-module invariant suite, runnable as a release gate.

Each check recomputes a fact two independent ways (sweep vs brute force,
closed form vs direct sum, iterative vs dense eigensolver, ...) at built-in
desk-scale parameters.  ``quick=True`` runs a subset sized for under a
minute.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import bounds as bnd
from .budgets import DEFAULT
from .congruence import (
    BoxSpec,
    PolySpec,
    count_box_solutions,
    count_box_solutions_brute,
    count_close_pairs_via_congruence,
)
from .farey import (
    brute_force_max_close_count,
    enumerate_family,
    max_close_count,
    min_spacing,
    predicted_size,
)
from .gram import (
    ComplexSequence,
    GramKernel,
    delta_star,
    delta_star_dense_oracle,
    kernel_entry,
    kernel_entry_naive,
    ratio_for_sequence,
)
from .partition import build_partition, covering_bound, verify_partition


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def _family_grid(quick: bool):
    if quick:
        return [(2, 2, 4), (2, 4, 8), (3, 2, 4), (3, 3, 6)]
    return [(k, Q, 2 * Q) for k in (2, 3) for Q in (2, 3, 4, 6, 8)]


def check_spacing_floor(quick: bool) -> CheckResult:
    """min spacing >= 1/(2Q)^2k, exactly, for every desk-scale family."""
    for k, q_min, q_max in _family_grid(quick):
        fam = enumerate_family(k, q_min, q_max)
        floor = Fraction(1, q_max ** (2 * k))
        gap = min_spacing(fam)
        if gap < floor:
            return CheckResult(
                "spacing-floor",
                False,
                f"k={k} q=[{q_min},{q_max}]: gap {gap} < {floor}",
            )
    return CheckResult("spacing-floor", True)


def check_cardinality(quick: bool) -> CheckResult:
    """Enumerated size equals the sum of q^(k-1) phi(q)."""
    for k, q_min, q_max in _family_grid(quick):
        fam = enumerate_family(k, q_min, q_max)
        want = predicted_size(k, q_min, q_max)
        if len(fam) != want:
            return CheckResult(
                "cardinality", False, f"k={k} q=[{q_min},{q_max}]: {len(fam)} != {want}"
            )
    return CheckResult("cardinality", True)


def check_m_three_paths(quick: bool) -> CheckResult:
    """Sweep M == brute-force M == congruence recount at the argmax point."""
    grids = [(2, 2, 4, 50), (2, 4, 8, 200)] if quick else [
        (k, Q, 2 * Q, n)
        for k, Q in ((2, 2), (2, 4), (3, 2), (3, 3))
        for n in (Q**k, Q**k * 3, Q ** (2 * k))
    ]
    for k, q_min, q_max, n in grids:
        fam = enumerate_family(k, q_min, q_max)
        rep = max_close_count(fam, n)
        brute = brute_force_max_close_count(fam, n)
        if rep.max_close_count != brute:
            return CheckResult(
                "m-three-paths",
                False,
                f"sweep/oracle mismatch: k={k} q=[{q_min},{q_max}] n={n}: "
                f"sweep {rep.max_close_count} != brute {brute}",
            )
        p = rep.argmax_point
        cong = count_close_pairs_via_congruence(p.a, p.q, k, q_min, q_max, n)
        if cong != rep.max_close_count:
            return CheckResult(
                "m-three-paths",
                False,
                f"congruence recount mismatch at {p.a}/{p.q}^{k}: "
                f"{cong} != {rep.max_close_count}",
            )
    return CheckResult("m-three-paths", True)


def check_m_monotone(quick: bool) -> CheckResult:
    """M(n) never increases as n grows (windows shrink)."""
    fam = enumerate_family(2, 2, 6)
    prev = None
    for n in (4, 8, 16, 64, 256, 1296):
        m = max_close_count(fam, n).max_close_count
        if prev is not None and m > prev:
            return CheckResult("m-monotone", False, f"M({n}) = {m} > previous {prev}")
        prev = m
    return CheckResult("m-monotone", True)


def check_congruence_relaxation(quick: bool) -> CheckResult:
    """Dropping the gcd(b, r) = 1 filter can only increase the count."""
    fam = enumerate_family(2, 2, 6)
    pts = fam.points[:: max(1, len(fam) // 10)]
    for p in pts:
        for n in (16, 100):
            strict = count_close_pairs_via_congruence(p.a, p.q, p.k, 2, 6, n)
            relaxed = count_close_pairs_via_congruence(
                p.a, p.q, p.k, 2, 6, n, require_coprime=False
            )
            if relaxed < strict:
                return CheckResult(
                    "congruence-relaxation",
                    False,
                    f"relaxed {relaxed} < strict {strict} at {p.a}/{p.q}^2, n={n}",
                )
    return CheckResult("congruence-relaxation", True)


def check_partition_certified(quick: bool) -> CheckResult:
    """build_partition passes its verifier; sweeps <= M; bound >= Delta*."""
    cases = [(2, 2, 4, 16), (2, 4, 8, 256)] if quick else [
        (2, 2, 4, 16),
        (2, 4, 8, 256),
        (2, 4, 8, 4096),
        (3, 2, 4, 64),
        (3, 3, 6, 729),
    ]
    for k, q_min, q_max, n in cases:
        fam = enumerate_family(k, q_min, q_max)
        part = build_partition(fam, n)
        cert = verify_partition(part)
        if not cert.ok:
            return CheckResult(
                "partition-certified",
                False,
                f"k={k} q=[{q_min},{q_max}] n={n}: {cert.first_failure()}",
            )
        cover = covering_bound(part, cert)
        if len(fam) <= DEFAULT.max_dense:
            ds = delta_star_dense_oracle(fam, n)
            if ds > cover * (1 + 1e-9):
                return CheckResult(
                    "partition-certified",
                    False,
                    f"covering bound {cover} below Delta* {ds}",
                )
    return CheckResult("partition-certified", True)


def check_delta_star_sandwich(quick: bool) -> CheckResult:
    """Iterative Delta* matches the dense oracle and sits in its sandwich."""
    cases = [(2, 2, 4, 16), (2, 3, 5, 81)] if quick else [
        (2, 2, 4, 16),
        (2, 3, 5, 81),
        (2, 4, 6, 256),
        (3, 2, 3, 64),
    ]
    for k, q_min, q_max, n in cases:
        fam = enumerate_family(k, q_min, q_max)
        est = delta_star(fam, n)
        oracle = delta_star_dense_oracle(fam, n)
        if abs(est.value - oracle) > 1e-6 * oracle:
            return CheckResult(
                "delta-star-sandwich",
                False,
                f"iterative {est.value} vs dense {oracle} (k={k} n={n})",
            )
        lower = max(n, len(fam))
        part = build_partition(fam, n)
        upper = min(
            covering_bound(part), n + 1.0 / float(min_spacing(fam))
        )
        if not (lower - 1e-6 * est.value <= est.value <= upper * (1 + 1e-6)):
            return CheckResult(
                "delta-star-sandwich",
                False,
                f"{est.value} outside [{lower}, {upper}] (k={k} n={n})",
            )
    return CheckResult("delta-star-sandwich", True)


def check_energy_lower_bound(quick: bool) -> CheckResult:
    """Any explicit coefficient sequence gives energy/mass <= Delta*."""
    fam = enumerate_family(2, 2, 4)
    n = 25
    ds = delta_star_dense_oracle(fam, n)
    rng = np.random.default_rng(7)
    for _ in range(3 if quick else 8):
        vals = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        r = ratio_for_sequence(fam, ComplexSequence(offset=0, values=vals))
        if r > ds * (1 + 1e-9):
            return CheckResult(
                "energy-lower-bound", False, f"ratio {r} exceeds Delta* {ds}"
            )
    return CheckResult("energy-lower-bound", True)


def check_kernel_closed_form(quick: bool) -> CheckResult:
    """Closed-form kernel vs direct summation on random rational pairs."""
    rng = np.random.default_rng(11)
    trials = 50 if quick else 400
    for _ in range(trials):
        qx, qy = int(rng.integers(2, 40)), int(rng.integers(2, 40))
        x = Fraction(int(rng.integers(0, qx)), qx)
        y = Fraction(int(rng.integers(0, qy)), qy)
        N = int(rng.integers(1, 500))
        M = int(rng.choice([0, 7, -7]))
        a = kernel_entry(x, y, N, M)
        b = kernel_entry_naive(x, y, N, M)
        if abs(a - b) > 1e-10 * N:
            return CheckResult(
                "kernel-closed-form",
                False,
                f"|closed - naive| = {abs(a - b):.3e} at x={x} y={y} N={N} M={M}",
            )
    return CheckResult("kernel-closed-form", True)


def check_matvec_vs_dense(quick: bool) -> CheckResult:
    """FFT-folded G v equals the materialized matrix product."""
    fam = enumerate_family(2, 2, 5)
    for n in (8, 64) if quick else (8, 64, 301):
        kern = GramKernel(fam, n, M=7)
        G = kern.dense()
        rng = np.random.default_rng(13)
        v = rng.standard_normal(len(fam)) + 1j * rng.standard_normal(len(fam))
        dev = float(np.linalg.norm(kern.matvec(v) - G @ v)) / float(
            np.linalg.norm(G @ v)
        )
        if dev > 1e-10:
            return CheckResult(
                "matvec-vs-dense", False, f"relative deviation {dev:.3e} at N={n}"
            )
    return CheckResult("matvec-vs-dense", True)


def check_box_full_window(quick: bool) -> CheckResult:
    """R = m makes the count exactly H; hashed and brute counts agree."""
    rng = np.random.default_rng(17)
    trials = 20 if quick else 60
    for _ in range(trials):
        m = int(rng.integers(2, 200))
        k = int(rng.integers(2, 5))
        coeffs = [int(rng.integers(0, m)) for _ in range(k)]
        lead = int(rng.integers(1, m))
        from math import gcd

        while gcd(lead, m) != 1:
            lead = int(rng.integers(1, m))
        poly = PolySpec(coefficients=tuple(coeffs + [lead]), modulus=m)
        K, L = int(rng.integers(-50, 50)), int(rng.integers(-50, 50))
        H = int(rng.integers(1, min(m, 40) + 1))
        full = count_box_solutions(poly, BoxSpec(K=K, H=H, L=L, R=m))
        if full.count != H:
            return CheckResult(
                "box-full-window", False, f"R=m count {full.count} != H {H}"
            )
        R = int(rng.integers(1, m + 1))
        box = BoxSpec(K=K, H=H, L=L, R=R)
        if count_box_solutions(poly, box).count != count_box_solutions_brute(poly, box):
            return CheckResult(
                "box-full-window", False, f"window/brute mismatch at m={m} H={H} R={R}"
            )
    return CheckResult("box-full-window", True)


def check_exponent_arithmetic(quick: bool) -> CheckResult:
    """Crossover closed form and improvement intervals, exactly."""
    for k in range(3, 6 if quick else 13):
        want = Fraction(2 * k * (k * k - 2), k * k + k - 2)
        got = bnd.crossover(bnd.BoundId.MUNSCH_NEW, bnd.BoundId.BAIER_ZHAO, k)
        if want not in got.crossings:
            return CheckResult(
                "exponent-arithmetic", False, f"k={k}: {got.crossings} misses {want}"
            )
        wins = bnd.improvement_interval(k)
        if k == 3 and wins:
            return CheckResult("exponent-arithmetic", False, f"k=3 interval {wins} not empty")
        if k >= 4 and not wins:
            return CheckResult("exponent-arithmetic", False, f"k={k} interval empty")
    return CheckResult("exponent-arithmetic", True)


def check_exponent_vs_value(quick: bool) -> CheckResult:
    """log_Q(evaluate(...)) approaches the exact exponent for large Q."""
    import math

    Q = 1e5
    for k in (2, 3, 4):
        for theta in (Fraction(k), Fraction(3 * k, 2), Fraction(2 * k)):
            N = Q ** float(theta)
            for i in bnd.BoundId:
                if i is bnd.BoundId.BAIER_ZHAO:
                    continue  # loglog factor shifts the finite-Q exponent
                val = bnd.evaluate(i, k, Q, N).value
                e_obs = math.log(val) / math.log(Q)
                e_exact = float(bnd.exponent(i, k, theta))
                # each formula is a sum/min of at most 3 terms, so the
                # finite-Q exponent can sit up to log_Q 3 above the exact one
                if abs(e_obs - e_exact) > 0.1:
                    return CheckResult(
                        "exponent-vs-value",
                        False,
                        f"{i.value} k={k} theta={theta}: {e_obs:.4f} vs {e_exact:.4f}",
                    )
    return CheckResult("exponent-vs-value", True)


ALL_CHECKS = [
    check_spacing_floor,
    check_cardinality,
    check_m_three_paths,
    check_m_monotone,
    check_congruence_relaxation,
    check_partition_certified,
    check_delta_star_sandwich,
    check_energy_lower_bound,
    check_kernel_closed_form,
    check_matvec_vs_dense,
    check_box_full_window,
    check_exponent_arithmetic,
    check_exponent_vs_value,
]


def run_verify(quick: bool = False) -> list:
    """All checks, in order; never raises, failures land in the results."""
    results = []
    for check in ALL_CHECKS:
        try:
            results.append(check(quick))
        except Exception as e:  # a crash is a failure with the traceback message
            results.append(CheckResult(check.__name__, False, f"{type(e).__name__}: {e}"))
    return results


__all__ = ["CheckResult", "run_verify", "ALL_CHECKS"]
