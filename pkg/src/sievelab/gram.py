"""The optimal sieve constant as a Gram-operator norm.

For a family S and window n = M+1 .. M+N the Gram matrix is

    G(x, y) = sum_n e((x - y) n),   e(t) = exp(2 pi i t),

Hermitian PSD with G(x, x) = N.  Its top eigenvalue is the least constant
Delta* such that the sieve energy is bounded by Delta* * sum |a_n|^2 with
implied constant 1.

G = A A^H with A[x, n] = e(x n).  Since e((a/q^k) n) only depends on
n mod q^k, both A^H v and A w reduce to one length-q^k FFT per modulus
plus O(N) folding, so G v costs O(#moduli * N) instead of O(|S| N); this
is exact arithmetic reorganization, not an approximate transform.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .budgets import Budgets, DEFAULT
from .errors import ConvergenceError, InvalidArgumentError
from .exactmath import mod1
from .farey import FareyFamily

TWO_PI = 2.0 * np.pi
NEAR_DIAGONAL = 1e-12  # below this |d| the geometric sum is the limit value N


@dataclass
class ComplexSequence:
    offset: int  # M; coefficients live on n = M+1 .. M+N
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.ndim != 1 or len(self.values) == 0:
            raise InvalidArgumentError("coefficient sequence must be non-empty 1-d")

    @property
    def N(self) -> int:
        return len(self.values)


@dataclass
class EigenEstimate:
    value: float
    residual: float
    iterations: int


def kernel_entry(x: Fraction, y: Fraction, N: int, M: int = 0) -> complex:
    """Closed form of sum_{n=M+1}^{M+N} e((x-y) n)."""
    if N < 1:
        raise InvalidArgumentError(f"N must be >= 1, got {N}")
    d_exact = mod1(x - y)
    if d_exact == 0:
        return complex(N)
    d = float(d_exact)
    if min(d, 1.0 - d) < NEAR_DIAGONAL:
        return complex(N)
    phase = TWO_PI * d * (M + 1 + (N - 1) / 2.0)
    mag = np.sin(np.pi * N * d) / np.sin(np.pi * d)
    return complex(np.cos(phase) * mag, np.sin(phase) * mag)


def kernel_entry_naive(x: Fraction, y: Fraction, N: int, M: int = 0) -> complex:
    """Direct summation; the independent oracle for kernel_entry."""
    d = float(mod1(x - y))
    n = np.arange(M + 1, M + N + 1, dtype=np.float64)
    return complex(np.exp(2j * np.pi * d * n).sum())


class GramKernel:
    """G for one (family, N, M); exposes matvec, dense form, and energies."""

    def __init__(self, family: FareyFamily, N: int, M: int = 0):
        if N < 1:
            raise InvalidArgumentError(f"N must be >= 1, got {N}")
        if len(family) == 0:
            raise InvalidArgumentError("family is empty")
        self.family = family
        self.N = N
        self.M = M
        self.size = len(family)
        # group point indices by modulus q^k
        groups: dict[int, tuple[list, list]] = {}
        for i, p in enumerate(family.points):
            d = p.q**p.k
            idx, avals = groups.setdefault(d, ([], []))
            idx.append(i)
            avals.append(p.a % d)
        self._groups = [
            (d, np.asarray(idx), np.asarray(avals)) for d, (idx, avals) in groups.items()
        ]

    # -- transforms ----------------------------------------------------

    def _coeffs_to_points(self, w: np.ndarray) -> np.ndarray:
        """u[x] = sum_n w[n] e(x n)   (A w); w may be (N,) or (N, b)."""
        N, M = self.N, self.M
        w2 = w.reshape(N, -1)
        u = np.zeros((self.size, w2.shape[1]), dtype=np.complex128)
        for d, idx, avals in self._groups:
            reps = -(-N // d)
            padded = np.zeros((reps * d, w2.shape[1]), dtype=np.complex128)
            padded[:N] = w2
            folded = padded.reshape(reps, d, -1).sum(axis=0)
            t = np.roll(folded, (M + 1) % d, axis=0)
            u[idx] = (np.fft.ifft(t, axis=0) * d)[avals]
        return u.reshape(self.size) if w.ndim == 1 else u

    def _points_to_coeffs(self, v: np.ndarray) -> np.ndarray:
        """w[n] = sum_x conj(e(x n)) v[x]   (A^H v); v may be (|S|,) or (|S|, b)."""
        N, M = self.N, self.M
        v2 = v.reshape(self.size, -1)
        w = np.zeros((N, v2.shape[1]), dtype=np.complex128)
        for d, idx, avals in self._groups:
            c = np.zeros((d, v2.shape[1]), dtype=np.complex128)
            np.add.at(c, avals, v2[idx])
            F = np.fft.fft(c, axis=0)
            reps = -(-N // d)
            w += np.tile(np.roll(F, -((M + 1) % d), axis=0), (reps, 1))[:N]
        return w.reshape(N) if v.ndim == 1 else w

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return self._coeffs_to_points(self._points_to_coeffs(v))

    # -- dense form ----------------------------------------------------

    def dense(self) -> np.ndarray:
        """Materialized G from the sine closed form (double precision)."""
        D, s = self.family.scaled()
        sv = np.asarray([si / D for si in s], dtype=np.float64)
        d = sv[:, None] - sv[None, :]
        d = np.mod(d, 1.0)
        N, M = self.N, self.M
        with np.errstate(invalid="ignore", divide="ignore"):
            mag = np.sin(np.pi * N * d) / np.sin(np.pi * d)
        phase = TWO_PI * d * (M + 1 + (N - 1) / 2.0)
        G = mag * (np.cos(phase) + 1j * np.sin(phase))
        near = np.minimum(d, 1.0 - d) < NEAR_DIAGONAL
        G[near] = N
        return G

    # -- energies ------------------------------------------------------

    def lhs_energy(self, seq: ComplexSequence) -> float:
        """sum over x of |sum_n a_n e(x n)|^2 by direct evaluation."""
        if seq.N != self.N or seq.offset != self.M:
            raise InvalidArgumentError("sequence window does not match the kernel")
        D, s = self.family.scaled()
        sv = np.asarray([si / D for si in s], dtype=np.float64)
        n = np.arange(self.M + 1, self.M + self.N + 1, dtype=np.float64)
        total = 0.0
        chunk = max(1, 4_000_000 // max(1, self.N))
        for lo in range(0, self.size, chunk):
            phases = np.exp(2j * np.pi * np.outer(sv[lo : lo + chunk], n))
            total += float((np.abs(phases @ seq.values) ** 2).sum())
        return total


def lhs_energy(family: FareyFamily, seq: ComplexSequence) -> float:
    return GramKernel(family, seq.N, seq.offset).lhs_energy(seq)


def ratio_for_sequence(family: FareyFamily, seq: ComplexSequence) -> float:
    """Empirical lower bound on Delta*: energy over sum |a_n|^2."""
    denom = float((np.abs(seq.values) ** 2).sum())
    if denom == 0.0:
        raise InvalidArgumentError("sequence is identically zero")
    return lhs_energy(family, seq) / denom


def _start_block(m: int, block: int) -> np.ndarray:
    # column 0 is all-ones plus a deterministic perturbation (never
    # orthogonal to the top eigenspace by symmetry); further columns are
    # deterministic patterns from a fixed-seed generator
    b = min(block, m)
    V = np.zeros((m, b), dtype=np.complex128)
    V[:, 0] = 1.0 + (np.arange(m) % 7 - 3) / (7.0 * max(m, 2))
    if b > 1:
        rng = np.random.default_rng(0x5EED)
        V[:, 1:] = rng.standard_normal((m, b - 1)) + 1j * rng.standard_normal(
            (m, b - 1)
        )
    Q, _ = np.linalg.qr(V)
    return Q


def delta_star(
    family: FareyFamily,
    N: int,
    M: int = 0,
    tol: float | None = None,
    max_iters: int | None = None,
    budgets: Budgets = DEFAULT,
    dense_cutoff: int = 1500,
    block: int = 8,
) -> EigenEstimate:
    """Top eigenvalue of G by (block) power iteration with a deterministic seed.

    Small families use a materialized matrix; large ones apply G through the
    per-modulus FFT folding.  Convergence is the residual ||G v - lambda v||
    of the leading Ritz pair, never an eigenvalue-separation assumption; the
    block exists because the top eigenvalues come in near-degenerate pairs
    and a single vector converges at their ratio.
    """
    tol = budgets.power_tol if tol is None else tol
    max_iters = budgets.power_max_iters if max_iters is None else max_iters
    if tol <= 0:
        raise InvalidArgumentError("tol must be > 0")
    kern = GramKernel(family, N, M)
    if kern.size <= dense_cutoff:
        G = kern.dense()
        matvec = lambda v: G @ v
    else:
        matvec = kern.matvec
    V = _start_block(kern.size, block)
    lam = float("nan")
    residual = float("inf")
    for it in range(1, max_iters + 1):
        W = matvec(V)
        H = V.conj().T @ W  # Rayleigh quotient matrix (Hermitian up to rounding)
        evals, evecs = np.linalg.eigh((H + H.conj().T) / 2.0)
        y = evecs[:, -1]
        lam = float(evals[-1])
        residual = float(np.linalg.norm(W @ y - lam * (V @ y)))
        if residual <= tol:
            return EigenEstimate(value=lam, residual=residual, iterations=it)
        V, _ = np.linalg.qr(W)
    raise ConvergenceError(
        f"power iteration did not reach residual {tol} in {max_iters} iterations "
        f"(best {residual:.3e})",
        estimate=lam,
        residual=residual,
        iterations=max_iters,
    )


def delta_star_dense_oracle(
    family: FareyFamily, N: int, M: int = 0, budgets: Budgets = DEFAULT
) -> float:
    """Full Hermitian eigendecomposition; the oracle for delta_star."""
    if len(family) > budgets.max_dense:
        raise InvalidArgumentError(
            f"dense oracle limited to {budgets.max_dense} points, family has {len(family)}"
        )
    G = GramKernel(family, N, M).dense()
    return float(np.linalg.eigvalsh(G)[-1])


__all__ = [
    "ComplexSequence",
    "EigenEstimate",
    "GramKernel",
    "kernel_entry",
    "kernel_entry_naive",
    "lhs_energy",
    "ratio_for_sequence",
    "delta_star",
    "delta_star_dense_oracle",
]
