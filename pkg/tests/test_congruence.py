from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from sievelab.budgets import Budgets
from sievelab.congruence import (
    BoxSpec,
    PolySpec,
    count_box_solutions,
    count_box_solutions_brute,
    count_close_pairs_via_congruence,
    j_constant,
)
from sievelab.errors import InvalidArgumentError, ResourceLimitError
from sievelab.farey import enumerate_family, max_close_count


def test_polyspec_validation():
    with pytest.raises(InvalidArgumentError):
        PolySpec(coefficients=(1, 2), modulus=7)  # degree 1
    with pytest.raises(InvalidArgumentError):
        PolySpec(coefficients=(1, 2, 6), modulus=9)  # leading shares factor 3
    p = PolySpec(coefficients=(1, 0, 2), modulus=9)
    assert p.degree == 2
    assert p.eval_mod(4) == (1 + 2 * 16) % 9


def test_j_constant():
    assert j_constant(3) == Fraction(6)
    assert j_constant(3, legacy=True) == Fraction(12)
    assert j_constant(2) == Fraction(3)


def test_full_window_gives_H():
    poly = PolySpec(coefficients=(3, 1, 5), modulus=13)
    for H in (1, 5, 13):
        res = count_box_solutions(poly, BoxSpec(K=-4, H=H, L=100, R=13))
        assert res.count == H


def test_window_formula_matches_brute():
    poly = PolySpec(coefficients=(2, 7, 0, 3), modulus=29)
    for box in (
        BoxSpec(K=0, H=10, L=0, R=7),
        BoxSpec(K=-15, H=29, L=3, R=29),
        BoxSpec(K=100, H=4, L=-50, R=20),
    ):
        assert count_box_solutions(poly, box).count == count_box_solutions_brute(
            poly, box
        )


@settings(max_examples=60, deadline=None)
@given(
    m=st.integers(2, 80),
    k=st.integers(2, 4),
    data=st.data(),
)
def test_window_formula_matches_brute_property(m, k, data):
    lead = data.draw(
        st.integers(1, m - 1).filter(lambda c: gcd(c, m) == 1), label="lead"
    )
    lower = data.draw(st.lists(st.integers(0, m - 1), min_size=k, max_size=k))
    poly = PolySpec(coefficients=tuple(lower + [lead]), modulus=m)
    K = data.draw(st.integers(-30, 30))
    L = data.draw(st.integers(-30, 30))
    H = data.draw(st.integers(1, m))
    R = data.draw(st.integers(1, m))
    box = BoxSpec(K=K, H=H, L=L, R=R)
    assert count_box_solutions(poly, box).count == count_box_solutions_brute(poly, box)


def test_bound_positive_and_ratio_consistent():
    poly = PolySpec(coefficients=(0, 0, 1), modulus=101)
    res = count_box_solutions(poly, BoxSpec(K=0, H=20, L=0, R=50))
    assert res.bound_value > 0
    assert res.ratio == pytest.approx(res.count / res.bound_value)


def test_box_budget_and_size_checks():
    poly = PolySpec(coefficients=(0, 0, 1), modulus=10**9 + 7)
    with pytest.raises(ResourceLimitError):
        count_box_solutions(
            poly, BoxSpec(K=0, H=10**6, L=0, R=5), budgets=Budgets(max_box_width=10)
        )
    small = PolySpec(coefficients=(0, 0, 1), modulus=5)
    with pytest.raises(InvalidArgumentError):
        count_box_solutions(small, BoxSpec(K=0, H=6, L=0, R=5))


def test_congruence_count_matches_direct_neighbour_count():
    # the congruence route recounts, for each family point, the number of
    # family points within the strict 1/2n window
    for k, q_min, q_max, n in ((2, 2, 4, 50), (2, 2, 6, 100), (3, 2, 4, 300)):
        fam = enumerate_family(k, q_min, q_max)
        D, s = fam.scaled()
        for p in fam.points:
            direct = 0
            ps = p.value.numerator * (D // p.value.denominator)
            for v in s:
                d = abs(v - ps)
                d = min(d, D - d)
                if 2 * n * d < D:
                    direct += 1
            assert (
                count_close_pairs_via_congruence(p.a, p.q, k, q_min, q_max, n)
                == direct
            ), (p, n)


def test_congruence_max_matches_sweep():
    fam = enumerate_family(2, 3, 6)
    for n in (30, 100, 700):
        rep = max_close_count(fam, n)
        best = max(
            count_close_pairs_via_congruence(p.a, p.q, 2, 3, 6, n)
            for p in fam.points
        )
        assert best == rep.max_close_count


def test_relaxed_count_dominates_strict():
    for p_a, p_q in ((1, 3), (7, 4), (5, 6)):
        for n in (10, 60):
            strict = count_close_pairs_via_congruence(p_a, p_q, 2, 2, 6, n)
            relaxed = count_close_pairs_via_congruence(
                p_a, p_q, 2, 2, 6, n, require_coprime=False
            )
            assert relaxed >= strict


def test_congruence_validates_input():
    with pytest.raises(InvalidArgumentError):
        count_close_pairs_via_congruence(2, 4, 2, 2, 4, 10)
    with pytest.raises(InvalidArgumentError):
        count_close_pairs_via_congruence(1, 3, 2, 2, 4, 0)
