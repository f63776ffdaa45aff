from fractions import Fraction

import numpy as np
import pytest

from sievelab.budgets import Budgets
from sievelab.errors import ConvergenceError, InvalidArgumentError
from sievelab.farey import enumerate_family
from sievelab.gram import (
    ComplexSequence,
    GramKernel,
    delta_star,
    delta_star_dense_oracle,
    kernel_entry,
    kernel_entry_naive,
    lhs_energy,
    ratio_for_sequence,
)


def test_kernel_diagonal_is_N():
    assert kernel_entry(Fraction(1, 3), Fraction(1, 3), 17) == 17
    assert kernel_entry(Fraction(1, 3), Fraction(4, 3), 17) == 17  # mod 1


def test_kernel_closed_form_vs_naive():
    rng = np.random.default_rng(3)
    for _ in range(300):
        x = Fraction(int(rng.integers(0, 30)), int(rng.integers(1, 30)))
        y = Fraction(int(rng.integers(0, 30)), int(rng.integers(1, 30)))
        N = int(rng.integers(1, 800))
        M = int(rng.choice([0, 7, -7]))
        assert abs(
            kernel_entry(x, y, N, M) - kernel_entry_naive(x, y, N, M)
        ) <= 1e-10 * N


def test_kernel_two_point_magnitude():
    # |sum_{n=1}^{5} e(n/2)| = 1 for the pair 1/4, 3/4
    v = kernel_entry(Fraction(1, 4), Fraction(3, 4), 5)
    assert abs(abs(v) - 1.0) < 1e-12


def test_dense_is_hermitian_psd_with_N_diagonal():
    fam = enumerate_family(2, 2, 4)
    G = GramKernel(fam, 9, M=2).dense()
    assert np.allclose(G, G.conj().T)
    assert np.allclose(np.diag(G), 9.0)
    assert np.linalg.eigvalsh(G)[0] > -1e-8


def test_matvec_matches_dense():
    fam = enumerate_family(2, 2, 5)
    for N, M in ((7, 0), (64, 7), (301, -7)):
        kern = GramKernel(fam, N, M)
        G = kern.dense()
        rng = np.random.default_rng(5)
        v = rng.standard_normal(len(fam)) + 1j * rng.standard_normal(len(fam))
        got = kern.matvec(v)
        want = G @ v
        assert np.linalg.norm(got - want) <= 1e-10 * np.linalg.norm(want)


def test_matvec_block_shape():
    fam = enumerate_family(2, 2, 4)
    kern = GramKernel(fam, 20)
    V = np.random.default_rng(6).standard_normal((len(fam), 3)).astype(complex)
    W = kern.matvec(V)
    assert W.shape == V.shape
    for j in range(3):
        assert np.allclose(W[:, j], kern.matvec(V[:, j]))


def test_delta_star_two_by_two_closed_form():
    fam = enumerate_family(2, 2, 2)  # {1/4, 3/4}
    est = delta_star(fam, 5)
    want = 5 + abs(kernel_entry(Fraction(1, 4), Fraction(3, 4), 5))
    assert est.value == pytest.approx(want, rel=1e-10)
    assert est.residual <= 1e-8


def test_delta_star_matches_dense_oracle():
    for k, q_min, q_max, n in ((2, 2, 4, 16), (2, 3, 6, 81), (3, 2, 4, 64)):
        fam = enumerate_family(k, q_min, q_max)
        est = delta_star(fam, n)
        assert est.value == pytest.approx(delta_star_dense_oracle(fam, n), rel=1e-8)


def test_delta_star_fft_path_matches_dense_path():
    fam = enumerate_family(2, 2, 6)
    a = delta_star(fam, 40, dense_cutoff=0)  # forces the FFT matvec
    b = delta_star(fam, 40, dense_cutoff=10_000)
    assert a.value == pytest.approx(b.value, rel=1e-9)


def test_delta_star_lower_bounds():
    fam = enumerate_family(2, 2, 4)
    for n in (4, 100):
        est = delta_star(fam, n)
        assert est.value >= max(n, len(fam)) - 1e-6 * est.value


def test_delta_star_deterministic():
    fam = enumerate_family(2, 2, 5)
    a = delta_star(fam, 30)
    b = delta_star(fam, 30)
    assert (a.value, a.residual, a.iterations) == (b.value, b.residual, b.iterations)


def test_delta_star_convergence_error_carries_estimate():
    fam = enumerate_family(2, 2, 6)
    with pytest.raises(ConvergenceError) as exc:
        delta_star(fam, 100, max_iters=1, tol=1e-14)
    assert exc.value.estimate is not None
    assert exc.value.iterations == 1


def test_dense_oracle_budget():
    fam = enumerate_family(2, 2, 6)
    with pytest.raises(InvalidArgumentError):
        delta_star_dense_oracle(fam, 10, budgets=Budgets(max_dense=5))


def test_energy_ratio_below_delta_star():
    fam = enumerate_family(2, 2, 4)
    n = 25
    ds = delta_star_dense_oracle(fam, n)
    rng = np.random.default_rng(8)
    for _ in range(5):
        seq = ComplexSequence(
            offset=0, values=rng.standard_normal(n) + 1j * rng.standard_normal(n)
        )
        assert ratio_for_sequence(fam, seq) <= ds * (1 + 1e-9)


def test_energy_quadratic_form_agreement():
    # direct |sum a_n e(x n)|^2 energy equals v^H G v with v = A^H a
    fam = enumerate_family(2, 2, 4)
    n = 30
    rng = np.random.default_rng(9)
    a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    seq = ComplexSequence(offset=0, values=a)
    kern = GramKernel(fam, n)
    u = kern._coeffs_to_points(a)
    assert lhs_energy(fam, seq) == pytest.approx(
        float(np.vdot(u, u).real), rel=1e-10
    )


def test_sequence_window_mismatch_rejected():
    fam = enumerate_family(2, 2, 4)
    kern = GramKernel(fam, 10, M=0)
    with pytest.raises(InvalidArgumentError):
        kern.lhs_energy(ComplexSequence(offset=3, values=np.ones(10)))
