"""Spectral analysis of the discrete Schroedinger operator with potential alpha q^{-n}.

The operator acts on two-sided square-summable sequences by

    (B psi)_n = psi_{n-1} + alpha q^{-n} psi_n + psi_{n+1},

and is self-adjoint on the natural domain of the potential.  Its essential
spectrum is [-2, 2] (purely absolutely continuous, no embedded eigenvalues);
outside that band sits an explicit ladder of simple eigenvalues

    alpha^{-1} q^m + alpha q^{-m},   m > Delta = floor(log_q |alpha|).

Spectral parameters off the band are described through the Joukowski map
mu(z) = z + 1/z on the punctured unit disk.  This module provides the two
canonical eigensolutions f (square summable at +inf) and g (at -inf), their
Wronskian, the oscillatory asymptotics of f on the unit circle with explicit
Darboux constants, eigenvectors and their norms, the Green function, the
complete matrix-valued spectral measure (discrete atoms plus an absolutely
continuous density of Askey-Wilson form), and the resulting orthogonality
and summation formulas for third Jackson q-Bessel functions.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

from .errors import (
    ConvergenceFailure,
    DomainError,
    EmptySpectrum,
    NonConvergent,
    PoleError,
)
from .qkernel import (
    DEFAULT_POLICY,
    QBase,
    SeriesPolicy,
    as_qbase,
    jackson_qbessel3,
    phi11_reg_scaled,
    phi11_upper_q,
    qpochhammer_inf,
    theta,
)
from .qkernel import (
    Scaled,
    _renorm,
    _sadd,
    _smul,
    _spow_c,
    _spow_q,
    _spow_signed,
    _sto_complex,
    _sum_bilateral,
)
from .operator_a import SpectrumWindow
from .quadrature import adaptive_simpson

__all__ = [
    "BParams",
    "JoukowskiPoint",
    "BSpectralMeasure",
    "f_n",
    "g_n",
    "f_scaled",
    "g_scaled",
    "wronskian_fg",
    "darboux_constants",
    "darboux_boundary_slope",
    "point_spectrum_b",
    "eigenvector_b",
    "eigenvector_norm",
    "green_function",
    "connection_coeffs",
    "ac_density",
    "atom_weight",
    "build_spectral_measure",
    "spectral_measure",
    "qbessel_orthogonality",
]

POLE_REL_RADIUS = 1e-8
_ENDPOINT_INSET = 1e-9


# --------------------------------------------------------------------------
# Domain types
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BParams:
    """Coupling constant and base of the operator.

    ``delta`` is floor(log_q |alpha|), with an exactness guard: if |alpha| is
    within relative 1e-12 of an exact power q^k the floor is taken as k, so
    the reduced coupling beta = alpha q^{-delta} satisfies |beta| in (q, 1]
    (ties resolve upward to |beta| = 1 rather than falling to q + eps).
    """

    alpha: float
    q: QBase

    def __init__(self, alpha: float, q: QBase | float):
        if alpha == 0 or not math.isfinite(alpha):
            raise DomainError("BParams requires a finite nonzero alpha; the "
                              "alpha = 0 operator is the free one with spectrum [-2, 2]")
        object.__setattr__(self, "alpha", float(alpha))
        object.__setattr__(self, "q", as_qbase(q))

    @property
    def delta(self) -> int:
        qv = self.q.q
        t = math.log(abs(self.alpha)) / math.log(qv)
        k = round(t)
        if abs(abs(self.alpha) - qv ** k) <= 1e-12 * qv ** k:
            return k
        return math.floor(t)

    @property
    def beta(self) -> float:
        return self.alpha * self.q.q ** (-self.delta)


@dataclass(frozen=True)
class JoukowskiPoint:
    """A point z in the punctured closed unit disk together with its
    Joukowski image mu = z + 1/z."""

    z: complex
    mu: complex

    def __post_init__(self):
        if self.z == 0 or abs(self.z) > 1.0 + 1e-14:
            raise DomainError("JoukowskiPoint requires 0 < |z| <= 1")
        back = self.z + 1.0 / self.z
        if abs(back - self.mu) > 1e-14 * (1.0 + abs(self.mu)):
            raise DomainError("inconsistent (z, mu) pair")

    @classmethod
    def from_z(cls, z: complex) -> "JoukowskiPoint":
        return cls(z, z + 1.0 / z)

    @classmethod
    def from_mu(cls, mu: complex) -> "JoukowskiPoint":
        """Invert mu = z + 1/z on the canonical branch |z| <= 1."""
        w = cmath.sqrt(mu - 2.0) * cmath.sqrt(mu + 2.0)
        z1 = 0.5 * (mu - w)
        z2 = 0.5 * (mu + w)
        z = z1 if abs(z1) <= abs(z2) else z2
        return cls(z, mu)


@dataclass(frozen=True)
class BSpectralMeasure:
    """Matrix element E_{k,l} of the spectral measure: discrete atoms outside
    [-2, 2] plus an absolutely continuous density on the band, the latter as
    a callable density in the angle variable phi in (0, pi), energy 2 cos(phi)."""

    k: int
    l: int
    atoms: list[tuple[int, float, float]]  # (m, location, weight)
    ac_density: Callable[[float], float] = field(repr=False)


# --------------------------------------------------------------------------
# Eigensolutions
# --------------------------------------------------------------------------

def f_scaled(n: int, z: complex, p: BParams,
             policy: SeriesPolicy = DEFAULT_POLICY) -> Scaled:
    """f_n(z) as (mantissa, base-2 exponent)."""
    qv = p.q.q
    a = p.alpha
    if z == 0:
        raise DomainError("f_n is defined for z != 0 only")
    qn1 = qv ** (n + 1)
    series = phi11_reg_scaled(qn1 / (z * a), qv, z * qn1 / a, policy)
    pref = _smul(_spow_signed(-1.0 / a, n), _spow_q(qv, n * (n + 1) / 2.0))
    return _smul(pref, series)


def f_n(n: int, z: complex, p: BParams,
        policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """Eigensolution square summable at +infinity:

        f_n(z) = (-1)^n alpha^{-n} q^{n(n+1)/2}
                 * (b;q)_inf 1phi1(0; b; q, z alpha^{-1} q^{n+1}),
                 b = z^{-1} alpha^{-1} q^{n+1}.

    Symmetric under z <-> 1/z, and asymptotic to its prefactor as n -> +inf.
    """
    return _sto_complex(f_scaled(n, z, p, policy))


def g_scaled(n: int, z: complex, p: BParams,
             policy: SeriesPolicy = DEFAULT_POLICY) -> Scaled:
    """g_n(z) as (mantissa, base-2 exponent)."""
    qv = p.q.q
    if z == 0:
        raise DomainError("g_n is defined for z != 0 only")
    series = phi11_reg_scaled(z * p.alpha * qv ** (1 - n), qv, qv * z * z, policy)
    return _smul(_spow_c(z, -n), series)


def g_n(n: int, z: complex, p: BParams,
        policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """Eigensolution square summable at -infinity (for |z| < 1):

        g_n(z) = z^{-n} (b;q)_inf 1phi1(0; b; q, q z^2),  b = z alpha q^{1-n},

    asymptotic to z^{-n} (q z^2; q)_inf as n -> -inf.
    """
    return _sto_complex(g_scaled(n, z, p, policy))


def wronskian_fg(z: complex, p: BParams,
                 method: Literal["closed_form", "direct"] = "closed_form",
                 policy: SeriesPolicy = DEFAULT_POLICY,
                 sample_indices: Sequence[int] = (-10, -5, 0, 5, 10)) -> complex:
    """Wronskian W(f, g) = f_{n+1} g_n - f_n g_{n+1}, independent of n.

    ``closed_form`` returns -theta_q(alpha z)/z; it vanishes exactly when
    z is in alpha^{-1} q^Z, where f and g become proportional.  ``direct``
    evaluates the cross difference at ``sample_indices``, checks constancy
    against the cancellation scale of the products, and returns the mean.
    """
    qv = p.q.q
    if z == 0:
        raise DomainError("the Wronskian is defined for z != 0 only")
    if method == "closed_form":
        return -theta(p.alpha * z, qv, "product", policy) / z
    if method == "direct":
        vals = []
        scales = []
        for n in sample_indices:
            t1 = _smul(f_scaled(n + 1, z, p, policy), g_scaled(n, z, p, policy))
            t2 = _smul(f_scaled(n, z, p, policy), g_scaled(n + 1, z, p, policy))
            vals.append(_sto_complex(_sadd(t1, (-t2[0], t2[1]))))
            scales.append(abs(_sto_complex(t1)) + abs(_sto_complex(t2)))
        mean = sum(vals) / len(vals)
        spread = max(abs(v - mean) for v in vals)
        if spread > 1e-11 * max(abs(mean), max(scales) * 1e-3):
            raise ConvergenceFailure(
                f"Wronskian not constant across indices: spread {spread:.3e}"
            )
        return mean
    raise DomainError(f"unknown wronskian method {method!r}")


# --------------------------------------------------------------------------
# Asymptotics of f on the unit circle
# --------------------------------------------------------------------------

def darboux_constants(phi: float, p: BParams,
                      policy: SeriesPolicy = DEFAULT_POLICY) -> tuple[complex, complex]:
    """Constants (A, B) of the oscillatory expansion
    f_n(e^{i phi}) = e^{-i n phi} A + e^{i n phi} B + o(1) as n -> -infinity.

    Requires phi strictly inside (0, pi) and alpha in (q, 1] (reduce by the
    index shift first: the shifted operator has coupling beta).  At the band
    edges the expansion degenerates to linear growth; see
    :func:`darboux_boundary_slope`.

        B = theta_q(alpha e^{i phi}) / (e^{2 i phi}; q)_inf,
        A = (q alpha^{-1} e^{-i phi}; q)_inf / (q; q)_inf
            * ( -i e^{i phi}/(2 sin phi) 1phi1(q; q e^{-2 i phi}; q, alpha e^{-i phi})
                + 1phi1(q; q alpha^{-1} e^{-i phi}; q, q alpha^{-1} e^{i phi}) - 1 ).
    """
    qv = p.q.q
    a = p.alpha
    if not 0.0 < phi < math.pi:
        raise DomainError("darboux_constants requires phi strictly inside (0, pi)")
    if not qv < a <= 1.0:
        raise DomainError("darboux_constants requires alpha in (q, 1]; "
                          "shift the index to the reduced coupling first")
    w = cmath.exp(1j * phi)
    bconst = theta(a * w, qv, "product", policy) / qpochhammer_inf(w * w, qv, policy)
    head = qpochhammer_inf(qv / (a * w), qv, policy) / qpochhammer_inf(qv, qv, policy)
    osc = -1j * w / (2.0 * math.sin(phi)) * phi11_upper_q(qv / (w * w), qv, a / w, policy)
    rest = phi11_upper_q(qv / (a * w), qv, qv * w / a, policy)
    aconst = head * (osc + rest - 1.0)
    return aconst, bconst


def darboux_boundary_slope(phi: float, p: BParams,
                           policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Linear growth rate of f at the band edges as n -> -infinity.

    With the parity factor eps_n = 1 at z = +1 and eps_n = (-1)^n at z = -1,

        eps_n f_n(z) = slope * (-n) + O(1),
        slope = theta_q(alpha) / (q;q)_inf   at phi = 0  (z = +1),
        slope = theta_q(-alpha) / (q;q)_inf  at phi = pi (z = -1),

    for alpha in (q, 1], so same-parity finite differences taken toward
    deeper negative n reproduce +slope.  At alpha = 1, phi = 0 the slope
    vanishes (theta_q(1) = 0), matching the bounded asymptote
    f_n(1) -> (q;q)_inf of that degenerate corner.
    """
    qv = p.q.q
    a = p.alpha
    if not qv < a <= 1.0:
        raise DomainError("darboux_boundary_slope requires alpha in (q, 1]")
    if phi == 0.0:
        sgn = 1.0
    elif phi == math.pi:
        sgn = -1.0
    else:
        raise DomainError("boundary slopes exist at phi in {0, pi} only")
    if a == 1.0 and sgn > 0:
        return 0.0
    val = theta(sgn * a, qv, "product", policy) / qpochhammer_inf(qv, qv, policy)
    return val.real


# --------------------------------------------------------------------------
# Point spectrum, eigenvectors, norms
# --------------------------------------------------------------------------

def point_spectrum_b(p: BParams, m_max: int) -> list[tuple[int, float]]:
    """Eigenvalues alpha^{-1} q^m + alpha q^{-m} for delta < m <= m_max.

    All are simple and lie outside [-2, 2]; the list is empty only when
    m_max <= delta, which raises :class:`~qspectra.errors.EmptySpectrum`.
    """
    qv = p.q.q
    if m_max <= p.delta:
        raise EmptySpectrum(
            f"no eigenvalue indices in ({p.delta}, {m_max}]: need m_max > delta"
        )
    return [(m, qv ** m / p.alpha + p.alpha * qv ** (-m))
            for m in range(p.delta + 1, m_max + 1)]


def _eigenvector_entry_scaled(m: int, j: int, p: BParams,
                              policy: SeriesPolicy) -> Scaled:
    qv = p.q.q
    series = phi11_reg_scaled(qv ** (-m + j + 1), qv,
                              qv ** (m + j + 1) / (p.alpha * p.alpha), policy)
    pref = _smul(_spow_signed(-1.0 / p.alpha, j), _spow_q(qv, j * (j + 1) / 2.0))
    return _smul(pref, series)


def eigenvector_b(m: int, p: BParams, j_range: SpectrumWindow,
                  policy: SeriesPolicy = DEFAULT_POLICY) -> list[float]:
    """Entries of the eigenvector belonging to alpha^{-1} q^m + alpha q^{-m}:

        v_{m,j} = (-1)^j alpha^{-j} q^{j(j+1)/2}
                  * 1phi1~(0; q^{-m+j+1}; q, alpha^{-2} q^{m+j+1})

    over the requested index window.  The regularization parameter passes
    through exact zeros q^{-k} for j < m; the series handles those natively.
    """
    if m <= p.delta:
        raise DomainError(f"m = {m} is not an eigenvalue index: need m > delta = {p.delta}")
    out = []
    for j in j_range.indices():
        val = _sto_complex(_eigenvector_entry_scaled(m, j, p, policy))
        out.append(val.real)
    return out


def eigenvector_norm(m: int, p: BParams,
                     method: Literal["closed_form", "direct_sum"] = "closed_form",
                     policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """l2 norm of the eigenvector v_m.

    Closed form: |alpha|^{-m} q^{m(m+1)/2} (q;q)_inf / sqrt(1 - alpha^{-2} q^{2m}).
    Direct sum: bilateral summation of v_{m,j}^2 under the policy.
    """
    qv = p.q.q
    if m <= p.delta:
        raise DomainError(f"m = {m} is not an eigenvalue index: need m > delta = {p.delta}")
    if method == "closed_form":
        euler = qpochhammer_inf(qv, qv, policy).real
        denom = 1.0 - qv ** (2 * m) / (p.alpha * p.alpha)
        pref = _sto_complex(_smul(_spow_q(abs(p.alpha), float(-m)),
                                  _spow_q(qv, m * (m + 1) / 2.0))).real
        return pref * euler / math.sqrt(denom)
    if method == "direct_sum":
        def term(j: int) -> complex:
            v = _sto_complex(_eigenvector_entry_scaled(m, j, p, policy)).real
            return complex(v * v)

        return math.sqrt(_sum_bilateral(term, policy).real)
    raise DomainError(f"unknown eigenvector_norm method {method!r}")


# --------------------------------------------------------------------------
# Green function and connection coefficients
# --------------------------------------------------------------------------

def _check_eigenparameter_pole(z: complex, p: BParams) -> None:
    qv = p.q.q
    r = abs(z) * abs(p.alpha)
    if r <= 0:
        return
    m = round(math.log(r) / math.log(qv))
    if m > p.delta:
        pole = qv ** m / p.alpha
        if abs(z - pole) < POLE_REL_RADIUS * abs(pole):
            raise PoleError(f"z = {z} is within the exclusion radius of the "
                            f"resolvent pole alpha^-1 q^{m}")


def green_function(k: int, l: int, z: complex, p: BParams,
                   policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """Matrix element G_{k,l} of the resolvent at spectral parameter
    mu(z) = z + 1/z, for 0 < |z| < 1:

        G_{k,l} = g_{min(k,l)}(z) f_{max(k,l)}(z) / W(f, g).

    Raises :class:`PoleError` within relative 1e-8 of an eigen-parameter
    alpha^{-1} q^m and :class:`DomainError` for |z| >= 1 (the band itself).
    """
    if z == 0 or abs(z) >= 1.0:
        raise DomainError("green_function requires 0 < |z| < 1")
    _check_eigenparameter_pole(z, p)
    w = wronskian_fg(z, p, "closed_form", policy)
    lo, hi = min(k, l), max(k, l)
    num = _smul(g_scaled(lo, z, p, policy), f_scaled(hi, z, p, policy))
    return _sto_complex(num) / w


def connection_coeffs(z: complex, p: BParams,
                      policy: SeriesPolicy = DEFAULT_POLICY,
                      check: bool = True) -> tuple[complex, complex]:
    """Coefficients (A(z), A(1/z)) of the expansion of f over the g pair:

        f_n(z) = A(z) g_n(z) + A(1/z) g_n(1/z),
        A(z) = theta_q(alpha z^{-1}) / theta_q(z^{-2}),

    valid off z^2 in q^Z (where the two g solutions degenerate).  With
    ``check=True`` the identity is verified at a few indices against the
    natural cancellation scale before returning.
    """
    qv = p.q.q
    if z == 0:
        raise DomainError("connection_coeffs requires z != 0")
    w2 = z * z
    j = round(math.log(abs(w2)) / math.log(qv))
    if abs(w2 - qv ** j) < POLE_REL_RADIUS * qv ** j:
        raise DomainError(f"z^2 = {w2} is within the exclusion radius of q^{j}")
    a_z = theta(p.alpha / z, qv, "product", policy) / theta(1.0 / w2, qv, "product", policy)
    a_inv = theta(p.alpha * z, qv, "product", policy) / theta(w2, qv, "product", policy)
    if check:
        for n in (-3, 0, 3):
            fv = f_n(n, z, p, policy)
            t1 = a_z * g_n(n, z, p, policy)
            t2 = a_inv * g_n(n, 1.0 / z, p, policy)
            scale = abs(t1) + abs(t2) + abs(fv)
            if abs(fv - t1 - t2) > 1e-8 * scale:
                raise ConvergenceFailure(
                    f"connection formula residual too large at n = {n}"
                )
    return a_z, a_inv


# --------------------------------------------------------------------------
# Spectral measure
# --------------------------------------------------------------------------

def ac_density(phi: float, k: int, l: int, p: BParams,
               policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Absolutely continuous density of E_{k,l} in the angle variable:

        rho_{k,l}(phi) = (1/2 pi) f_l(e^{i phi}) f_k(e^{i phi})
                         |(e^{2 i phi};q)_inf / ((alpha e^{i phi};q)_inf
                           (q alpha^{-1} e^{-i phi};q)_inf)|^2,

    phi in (0, pi), energy 2 cos(phi).  For real alpha the f factors are
    real on the circle, so the density is real (and nonnegative for k = l);
    the roundoff imaginary part is checked and discarded.  The weight is the
    Askey-Wilson one with parameters (alpha, q/alpha, 0, 0).
    """
    qv = p.q.q
    if not 0.0 < phi < math.pi:
        raise DomainError("ac_density requires phi strictly inside (0, pi)")
    w = cmath.exp(1j * phi)
    num = qpochhammer_inf(w * w, qv, policy)
    den = qpochhammer_inf(p.alpha * w, qv, policy) \
        * qpochhammer_inf(qv / (p.alpha * w), qv, policy)
    weight = abs(num / den) ** 2
    fk = f_n(k, w, p, policy)
    fl = f_n(l, w, p, policy)
    val = fl * fk * weight / (2.0 * math.pi)
    if abs(val.imag) > 1e-12 * (1.0 + abs(val)):
        raise ConvergenceFailure(
            f"ac_density produced a non-real value at phi = {phi}: {val}"
        )
    return val.real


def atom_weight(m: int, k: int, l: int, p: BParams,
                policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Weight of the spectral-measure atom at alpha^{-1} q^m + alpha q^{-m}:

        E_{k,l}({.}) = (1 - alpha^{-2} q^{2m}) alpha^{2m} q^{-m(m+1)}
                       f_k(alpha^{-1} q^m) f_l(alpha^{-1} q^m) / (q;q)_inf^2.

    The prefactor alone overflows doubles for moderate m; the f products
    decay much faster, so the whole expression is formed in scaled
    arithmetic.
    """
    qv = p.q.q
    if m <= p.delta:
        raise DomainError(f"m = {m} is not an eigenvalue index: need m > delta = {p.delta}")
    zm = qv ** m / p.alpha
    euler = qpochhammer_inf(qv, qv, policy).real
    pref = _smul(_spow_signed(p.alpha, 2 * m), _spow_q(qv, float(-m * (m + 1))))
    prod = _smul(f_scaled(k, zm, p, policy), f_scaled(l, zm, p, policy))
    out = _sto_complex(_smul(pref, prod)).real
    return (1.0 - qv ** (2 * m) / (p.alpha * p.alpha)) * out / (euler * euler)


def build_spectral_measure(k: int, l: int, p: BParams,
                           policy: SeriesPolicy = DEFAULT_POLICY,
                           m_cap: int = 200) -> BSpectralMeasure:
    """Assemble the atoms (until their weights are negligible) and the AC
    density callable of the matrix element E_{k,l}."""
    atoms: list[tuple[int, float, float]] = []
    qv = p.q.q
    tiny_run = 0
    for m in range(p.delta + 1, p.delta + 1 + m_cap):
        wgt = atom_weight(m, k, l, p, policy)
        loc = qv ** m / p.alpha + p.alpha * qv ** (-m)
        atoms.append((m, loc, wgt))
        if abs(wgt) < 1e-18:
            tiny_run += 1
            if tiny_run >= 3:
                break
        else:
            tiny_run = 0

    def density(phi: float) -> float:
        return ac_density(phi, k, l, p, policy)

    return BSpectralMeasure(k=k, l=l, atoms=atoms, ac_density=density)


def _phi_interval(lo_e: float, hi_e: float) -> tuple[float, float]:
    """Map an energy interval clipped to [-2, 2] to its phi preimage."""
    lo_e = max(lo_e, -2.0)
    hi_e = min(hi_e, 2.0)
    if lo_e >= hi_e:
        return 0.0, 0.0
    return math.acos(hi_e / 2.0), math.acos(lo_e / 2.0)


def spectral_measure(k: int, l: int,
                     set_spec: Sequence[tuple[float, float]] | None,
                     p: BParams,
                     policy: SeriesPolicy = DEFAULT_POLICY,
                     quad_rel_tol: float = 1e-8) -> float:
    """E_{k,l}(A) for A a finite union of bounded closed intervals, or the
    whole real line (``set_spec=None``).

    Atom weights are summed over eigenvalues inside the set; the absolutely
    continuous part is integrated by adaptive Simpson in the angle variable,
    with endpoint insets of 1e-9 (there are no endpoint atoms: +-2 are not
    eigenvalues).  Intervals are assumed pairwise disjoint.
    """
    measure = build_spectral_measure(k, l, p, policy)
    if set_spec is None:
        intervals = [(-2.0, 2.0)]
        atom_total = sum(w for _, _, w in measure.atoms)
    else:
        intervals = [(float(a), float(b)) for a, b in set_spec]
        atom_total = sum(w for _, loc, w in measure.atoms
                         if any(a <= loc <= b for a, b in intervals))
    ac_total = 0.0
    for a, b in intervals:
        ph_lo, ph_hi = _phi_interval(a, b)
        ph_lo = max(ph_lo, _ENDPOINT_INSET)
        ph_hi = min(ph_hi, math.pi - _ENDPOINT_INSET)
        if ph_lo >= ph_hi:
            continue
        ac_total += adaptive_simpson(measure.ac_density, ph_lo, ph_hi,
                                     rel_tol=quad_rel_tol, abs_tol=1e-12)
    return atom_total + ac_total


# --------------------------------------------------------------------------
# q-Bessel consequences
# --------------------------------------------------------------------------

def qbessel_orthogonality(m: int, n: int, p: BParams,
                          policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Residual of the q-Bessel orthogonality relation

        sum_j J_{j+m}(alpha^{-1} q^m; q) J_{j+n}(alpha^{-1} q^n; q)
            = delta_{m,n} / (1 - alpha^{-2} q^{2m}),

    as |LHS - RHS| with tail-bounded bilateral truncation.  For m = n this is
    the summation formula sum_j J_j(x;q)^2 = 1/(1-x^2) at x = alpha^{-1} q^m.
    """
    qv = p.q.q
    if m <= p.delta or n <= p.delta:
        raise DomainError("qbessel_orthogonality requires m, n > delta")
    xm = qv ** m / p.alpha
    xn = qv ** n / p.alpha

    def term(j: int) -> complex:
        return (jackson_qbessel3(j + m, xm, qv, policy)
                * jackson_qbessel3(j + n, xn, qv, policy))

    lhs = _sum_bilateral(term, policy)
    rhs = (1.0 / (1.0 - qv ** (2 * m) / (p.alpha * p.alpha))) if m == n else 0.0
    return abs(lhs - rhs)
