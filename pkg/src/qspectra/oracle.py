"""Brute-force cross-check machinery: truncated matrices and certified sums.

Everything the other modules claim in closed form is validated against this
module: finite Dirichlet truncations of the two doubly infinite matrices,
diagonalized by an in-house symmetric tridiagonal eigensolver (Sturm-count
bisection with a guarded secant polish and inverse-iteration eigenvectors),
plus a generic bilateral/one-sided summation routine with an explicit
geometric tail certificate.

The eigensolver is deliberately independent of any closed-form knowledge:
bisection on the negative-pivot count of the shifted LDL^T recursion locates
every eigenvalue to a prescribed width, whatever the grading of the entries
(the matrices here have entries spanning hundreds of orders of magnitude,
which the count handles exactly because the huge pivots stay sign-stable).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConvergenceFailure, DomainError, NonConvergent, WindowTooSmall
from .operator_a import SpectrumWindow
from .operator_b import BParams
from .qkernel import DEFAULT_POLICY, QBase, SeriesPolicy, as_qbase

__all__ = [
    "TridiagonalMatrix",
    "EigenDecomposition",
    "truncate_a",
    "truncate_b",
    "eigen_tridiag",
    "sturm_count",
    "tail_bounded_sum",
    "DEFAULT_SEED",
]

DEFAULT_SEED = 20177


@dataclass(frozen=True)
class TridiagonalMatrix:
    """Symmetric tridiagonal matrix stored as a diagonal and one off-diagonal
    array; ``index_offset`` maps storage row 0 to its lattice index."""

    diag: np.ndarray
    offdiag: np.ndarray
    index_offset: int

    def __post_init__(self):
        if len(self.diag) < 2:
            raise WindowTooSmall("tridiagonal truncation needs at least 2 sites")
        if len(self.offdiag) != len(self.diag) - 1:
            raise DomainError("offdiag must be one entry shorter than diag")

    @property
    def size(self) -> int:
        return len(self.diag)

    def norm_bound(self) -> float:
        """Gershgorin bound on the spectral radius."""
        d = self.diag
        e = np.concatenate(([0.0], np.abs(self.offdiag), [0.0]))
        return float(np.max(np.abs(d) + e[:-1] + e[1:]))


@dataclass(frozen=True)
class EigenDecomposition:
    """Sorted eigenvalues, optional column eigenvectors, the verified residual
    bound max ||M v - lambda v|| / ||v||, and the inverse-iteration seed."""

    values: np.ndarray
    vectors: np.ndarray | None
    residual_bound: float
    seed: int = DEFAULT_SEED


def truncate_a(q: QBase | float, window: SpectrumWindow) -> TridiagonalMatrix:
    """Dirichlet truncation of the first operator over a lattice window:
    zero diagonal, coupling q^{-n} between sites n and n+1.

    Couplings grow like q^{-n} toward +infinity, so asymmetric windows with a
    short positive side keep the truncation well conditioned.
    """
    qv = as_qbase(q).q
    if len(window) < 2:
        raise WindowTooSmall("truncate_a needs a window of at least 2 sites")
    n = np.arange(window.n_min, window.n_max + 1, dtype=np.float64)
    diag = np.zeros(len(n))
    offdiag = qv ** (-n[:-1])
    return TridiagonalMatrix(diag=diag, offdiag=offdiag, index_offset=window.n_min)


def truncate_b(p: BParams, window: SpectrumWindow) -> TridiagonalMatrix:
    """Dirichlet truncation of the Schroedinger operator: diagonal
    alpha q^{-n}, unit couplings."""
    if len(window) < 2:
        raise WindowTooSmall("truncate_b needs a window of at least 2 sites")
    n = np.arange(window.n_min, window.n_max + 1, dtype=np.float64)
    diag = p.alpha * p.q.q ** (-n)
    offdiag = np.ones(len(n) - 1)
    return TridiagonalMatrix(diag=diag, offdiag=offdiag, index_offset=window.n_min)


# --------------------------------------------------------------------------
# Sturm-count bisection
# --------------------------------------------------------------------------

def _sturm_counts(diag: np.ndarray, off2: np.ndarray, lams: np.ndarray,
                  pivmin: float) -> np.ndarray:
    """Number of eigenvalues strictly below each pivot in ``lams``: the count
    of negative pivots of the shifted LDL^T recursion, vectorized over pivots.
    Pivots that underflow toward zero are clamped to -pivmin, which perturbs
    the count decision by less than the bisection resolution."""
    u = diag[0] - lams
    u = np.where(np.abs(u) < pivmin, -pivmin, u)
    count = (u < 0).astype(np.int64)
    for i in range(1, len(diag)):
        u = diag[i] - lams - off2[i - 1] / u
        u = np.where(np.abs(u) < pivmin, -pivmin, u)
        count += u < 0
    return count


def _last_pivot(diag: np.ndarray, off2: np.ndarray, lam: float,
                pivmin: float) -> float:
    """Final pivot of the shifted recursion: det T(lam) / det T'(lam) up to
    sign conventions; vanishes at eigenvalues of the full matrix."""
    u = diag[0] - lam
    if abs(u) < pivmin:
        u = -pivmin
    for i in range(1, len(diag)):
        u = diag[i] - lam - off2[i - 1] / u
        if abs(u) < pivmin:
            u = -pivmin
    return u


def _tridiag_solve(diag: np.ndarray, off: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve (tridiagonal) x = rhs by LU with partial pivoting between
    adjacent rows; pivoting introduces a second superdiagonal."""
    n = len(diag)
    a = np.concatenate(([0.0], off)).astype(np.float64)      # subdiagonal
    b = diag.astype(np.float64).copy()                       # main
    c = np.concatenate((off, [0.0])).astype(np.float64)      # super
    d = np.zeros(n)                                          # super-super
    x = rhs.astype(np.float64).copy()
    for i in range(n - 1):
        if abs(a[i + 1]) > abs(b[i]):
            b[i], a[i + 1] = a[i + 1], b[i]
            c[i], b[i + 1] = b[i + 1], c[i]
            d[i], c[i + 1] = c[i + 1], d[i]
            x[i], x[i + 1] = x[i + 1], x[i]
        if b[i] == 0.0:
            b[i] = 1e-300
        m = a[i + 1] / b[i]
        b[i + 1] -= m * c[i]
        c[i + 1] -= m * d[i]
        x[i + 1] -= m * x[i]
    if b[n - 1] == 0.0:
        b[n - 1] = 1e-300
    x[n - 1] /= b[n - 1]
    if n >= 2:
        x[n - 2] = (x[n - 2] - c[n - 2] * x[n - 1]) / b[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (x[i] - c[i] * x[i + 1] - d[i] * x[i + 2]) / b[i]
    return x


def eigen_tridiag(m: TridiagonalMatrix, want_vectors: bool = False,
                  seed: int = DEFAULT_SEED,
                  max_bisections: int = 200) -> EigenDecomposition:
    """All eigenvalues (and optionally eigenvectors) of a symmetric
    tridiagonal matrix.

    Eigenvalues: synchronized Sturm-count bisection inside the Gershgorin
    interval, refined per eigenvalue to relative width 1e-14 (with an
    absolute floor), then a guarded two-step secant polish on the last pivot
    of the shifted recursion.  An interval that fails to shrink below
    1e-13 * ||M|| within ``max_bisections`` raises
    :class:`~qspectra.errors.ConvergenceFailure`.

    Eigenvectors: inverse iteration (at most 4 steps) from a seeded random
    start, re-seeded once on stagnation; the returned residual bound is the
    verified maximum of ||M v - lambda v|| / ||v||.
    """
    diag = np.asarray(m.diag, dtype=np.float64)
    off = np.asarray(m.offdiag, dtype=np.float64)
    size = len(diag)
    if size > 5000:
        raise DomainError("eigen_tridiag is meant for desk-scale matrices (L <= 5000)")
    off2 = off * off
    norm = m.norm_bound()
    pivmin = max(1e-290, 1e-300 * max(1.0, float(np.max(off2, initial=1.0))))

    lo = np.full(size, -norm - 1.0)
    hi = np.full(size, norm + 1.0)
    targets = np.arange(1, size + 1)  # j-th smallest needs count >= j
    active = np.ones(size, dtype=bool)
    for it in range(max_bisections):
        if not active.any():
            break
        mid = 0.5 * (lo + hi)
        counts = _sturm_counts(diag, off2, mid, pivmin)
        go_left = counts >= targets
        hi = np.where(active & go_left, mid, hi)
        lo = np.where(active & ~go_left, mid, lo)
        width = hi - lo
        tol = 1e-14 * np.maximum(np.abs(lo), np.abs(hi)) + 5e-324
        active = width > tol
    else:
        if np.any((hi - lo) > 1e-13 * norm):
            raise ConvergenceFailure(
                f"bisection intervals failed to shrink below 1e-13*||M|| "
                f"within {max_bisections} iterations"
            )
    values = 0.5 * (lo + hi)

    # derivative-free secant polish on the last pivot, kept inside brackets
    for j in range(size):
        x0, x1 = lo[j], hi[j]
        if x1 <= x0:
            continue
        f0 = _last_pivot(diag, off2, x0, pivmin)
        f1 = _last_pivot(diag, off2, x1, pivmin)
        x, fx = values[j], _last_pivot(diag, off2, values[j], pivmin)
        for _ in range(2):
            if f1 == f0 or not (math.isfinite(f0) and math.isfinite(f1)):
                break
            cand = x1 - f1 * (x1 - x0) / (f1 - f0)
            if not (lo[j] <= cand <= hi[j]):
                break
            fc = _last_pivot(diag, off2, cand, pivmin)
            if not math.isfinite(fc) or abs(fc) >= abs(fx):
                break
            x, fx = cand, fc
            x0, f0, x1, f1 = x1, f1, cand, fc
        values[j] = x

    values = np.sort(values)

    vectors = None
    residual_bound = 0.0
    if want_vectors:
        rng = np.random.default_rng(seed)
        start = rng.standard_normal(size)
        vectors = np.empty((size, size))
        for j, lam in enumerate(values):
            shift = lam * (1.0 + 1e-14) + pivmin
            v = start.copy()
            prev_res = math.inf
            reseeded = False
            for _ in range(4):
                v = _tridiag_solve(diag - shift, off, v)
                nv = float(np.linalg.norm(v))
                if nv == 0.0 or not math.isfinite(nv):
                    v = rng.standard_normal(size)
                    continue
                v /= nv
                res = _residual(diag, off, lam, v)
                if res < 1e-13 * max(1.0, abs(lam)):
                    break
                if res >= prev_res and not reseeded:
                    v = rng.standard_normal(size)
                    v /= np.linalg.norm(v)
                    reseeded = True
                    prev_res = math.inf
                    continue
                prev_res = res
            vectors[:, j] = v
            residual_bound = max(residual_bound, _residual(diag, off, lam, v))
        if residual_bound > 1e-10 * norm:
            raise ConvergenceFailure(
                f"inverse iteration residual {residual_bound:.3e} exceeds 1e-10*||M||"
            )
    return EigenDecomposition(values=values, vectors=vectors,
                              residual_bound=residual_bound, seed=seed)


def _residual(diag: np.ndarray, off: np.ndarray, lam: float, v: np.ndarray) -> float:
    r = diag * v - lam * v
    r[:-1] += off * v[1:]
    r[1:] += off * v[:-1]
    return float(np.linalg.norm(r) / np.linalg.norm(v))


def sturm_count(m: TridiagonalMatrix, pivot: float) -> int:
    """Number of eigenvalues of the truncation strictly below ``pivot``."""
    diag = np.asarray(m.diag, dtype=np.float64)
    off2 = np.asarray(m.offdiag, dtype=np.float64) ** 2
    pivmin = max(1e-290, 1e-300 * max(1.0, float(np.max(off2, initial=1.0))))
    return int(_sturm_counts(diag, off2, np.array([pivot]), pivmin)[0])


# --------------------------------------------------------------------------
# Certified summation
# --------------------------------------------------------------------------

def tail_bounded_sum(term: Callable[[int], complex],
                     ratio_bound: Callable[[int], float],
                     policy: SeriesPolicy = DEFAULT_POLICY,
                     start: int = 0,
                     bilateral: bool = False) -> tuple[complex, float]:
    """Sum term(n) with a certified geometric tail bound.

    ``ratio_bound(n)`` must eventually dominate |term at the next index away
    from start| / |term(n)| and fall below 1; summation in each direction
    stops once |term(n)| * r/(1-r) < rel_tol * max(|partial|, abs_floor) for
    ``consecutive_small`` successive n.  Returns (value, certified bound on
    the discarded tails).  A ratio bound that never drops below 1 raises
    :class:`~qspectra.errors.NonConvergent`.
    """
    total = 0j
    bound = 0.0

    def one_direction(first: int, step: int, carry: complex) -> tuple[complex, float]:
        partial = carry
        small = 0
        n = first
        for _ in range(policy.max_terms):
            t = term(n)
            partial += t
            r = ratio_bound(n)
            if 0.0 <= r < 1.0:
                tail = abs(t) * r / (1.0 - r)
                if tail < policy.rel_tol * max(abs(partial), policy.abs_floor):
                    small += 1
                    if small >= policy.consecutive_small:
                        return partial, tail
                else:
                    small = 0
            else:
                small = 0
            n += step
        raise NonConvergent(
            f"tail bound never certified within {policy.max_terms} terms"
        )

    total, b1 = one_direction(start, +1, 0j)
    bound += b1
    if bilateral:
        total, b2 = one_direction(start - 1, -1, total)
        bound += b2
    return total, bound
