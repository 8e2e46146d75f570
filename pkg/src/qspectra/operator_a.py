"""Spectral analysis of the doubly infinite Jacobi operator with hopping q^{-n}.

The operator acts on two-sided square-summable sequences by

    (A psi)_n = q^{-n+1} psi_{n-1} + q^{-n} psi_{n+1}.

It is symmetric with deficiency indices (1,1); its self-adjoint extensions A_t
are labeled by t in R together with a point at infinity, through boundary
conditions at +infinity.  This module provides:

* the eigensolutions ``psi_pm`` (square summable at +infinity) and ``varphi``
  (the unique, up to scaling, two-sided square-summable solution);
* the closed-form squared norm of ``varphi`` and its direct-sum cross-check;
* the secular function whose zeros are exactly the eigenvalues of A_t;
* the reparametrization map ``phi_map`` (a theta-function ratio, monotone on
  (0, -2 ln q)) and its inverse, which turn the spectrum of every extension
  into two explicit geometric ladders  {e^s q^{2n}} and {-e^{-s} q^{2m}};
* boundary-condition residuals for membership tests in Dom A_t;
* orthogonality relations for the eigenvectors and, equivalently, for the
  Ramanujan entire function, evaluated as residuals of truncated sums against
  closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from .errors import ConvergenceFailure, DomainError
from .qkernel import (
    DEFAULT_POLICY,
    QBase,
    SeriesPolicy,
    as_qbase,
    jacobi_thetas,
    phi01,
    phi11,
    qpochhammer_inf,
    ramanujan_entire_scaled,
    theta,
    theta_abs_scale,
    theta_scaled,
)
from .qkernel import _renorm, _sadd, _smul, _spow_c, _spow_q, _sto_complex, _sum_bilateral
from .quadrature import adaptive_simpson

__all__ = [
    "ExtensionParam",
    "SpectrumWindow",
    "ASpectrum",
    "as_extension",
    "psi_pm",
    "null_solution",
    "varphi",
    "varphi_scaled",
    "varphi_norm_sq",
    "secular",
    "secular_scale",
    "phi_map",
    "phi_inverse",
    "point_spectrum_a",
    "boundary_residual",
    "og_ramanujan",
    "og_varphi",
]

SECULAR_REL_TOL = 1e-9


# --------------------------------------------------------------------------
# Domain types
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ExtensionParam:
    """Label of a self-adjoint extension: a finite real t, or the single
    point at infinity (value None).  Never encoded as a large float."""

    value: float | None

    @classmethod
    def infinity(cls) -> "ExtensionParam":
        return cls(None)

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __repr__(self) -> str:
        return "ExtensionParam(inf)" if self.is_infinite else f"ExtensionParam({self.value})"


def as_extension(t: "ExtensionParam | float") -> ExtensionParam:
    """Coerce a float into an ExtensionParam; both float infinities map to
    the single projective point at infinity."""
    if isinstance(t, ExtensionParam):
        return t
    t = float(t)
    if math.isinf(t):
        return ExtensionParam.infinity()
    if math.isnan(t):
        raise DomainError("extension parameter must not be NaN")
    return ExtensionParam(t)


@dataclass(frozen=True)
class SpectrumWindow:
    """Inclusive integer index range selecting finitely many members of a
    doubly infinite eigenvalue family."""

    n_min: int
    n_max: int

    def __post_init__(self):
        if self.n_min > self.n_max:
            raise DomainError(f"empty window [{self.n_min}, {self.n_max}]")

    def indices(self) -> range:
        return range(self.n_min, self.n_max + 1)

    def __len__(self) -> int:
        return self.n_max - self.n_min + 1


@dataclass(frozen=True)
class ASpectrum:
    """Explicit point spectrum of one self-adjoint extension over a window.

    ``positive_branch`` holds (n, e^s q^{2n}); ``negative_branch`` holds
    (m, -e^{-s} q^{2m}).  Every point has been validated against the secular
    function at construction time.
    """

    s: float
    positive_branch: list[tuple[int, float]]
    negative_branch: list[tuple[int, float]]
    t: ExtensionParam


# --------------------------------------------------------------------------
# Eigensolutions
# --------------------------------------------------------------------------

_I_POWERS = (1 + 0j, 1j, -1 + 0j, -1j)


def psi_pm(n: int, x: complex, q: QBase | float, sign: Literal["+", "-"],
           policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """Eigensolution psi^+-_n(x) = (+-i)^n q^{n/2} 1phi1(0; -q; q, -+ i x q^{n+1/2}).

    Both signs solve q^{-n+1} psi_{n-1} + q^{-n} psi_{n+1} = x psi_n and are
    square summable at +infinity; their Wronskian is the constant 2i q^{1/2}.
    """
    qv = as_qbase(q).q
    if sign == "+":
        phase = _I_POWERS[n % 4]
        arg = -1j * x * qv ** (n + 0.5)
    elif sign == "-":
        phase = _I_POWERS[(-n) % 4]
        arg = 1j * x * qv ** (n + 0.5)
    else:
        raise DomainError(f"sign must be '+' or '-', got {sign!r}")
    series = phi11(-qv, qv, arg, policy)
    return _sto_complex(_smul(_spow_q(qv, n / 2.0), (phase * series, 0)))


def null_solution(n: int, which: Literal["p", "q"], q: QBase | float) -> float:
    """The two explicit solutions of the zero-eigenvalue equation:
    p_{2m-1} = 0, p_{2m} = (-q)^m and q_{2m} = 0, q_{2m+1} = (-q)^m,
    normalized by p_0 = 1, p_1 = 0, q_0 = 0, q_1 = 1."""
    qv = as_qbase(q).q
    if which == "p":
        if n % 2:
            return 0.0
        return (-qv) ** (n // 2)
    if which == "q":
        if n % 2 == 0:
            return 0.0
        return (-qv) ** ((n - 1) // 2)
    raise DomainError(f"which must be 'p' or 'q', got {which!r}")


def _varphi_theta_coeffs_scaled(x: complex, qv: float, policy: SeriesPolicy):
    root = math.sqrt(qv)
    return (theta_scaled(-1j * x / root, qv, policy),
            theta_scaled(1j * x / root, qv, policy))


def varphi_scaled(n: int, x: complex, q: QBase | float,
                  method: Literal["combination", "ramanujan", "auto"] = "auto",
                  policy: SeriesPolicy = DEFAULT_POLICY):
    """varphi_n(x) as (mantissa, base-2 exponent).

    varphi itself is not large, but the pieces it is built from are: the
    theta coefficients of the ``combination`` route blow up as |x| -> 0, and
    bilateral identities sweep x across many orders of magnitude.  Keeping
    the assembly scaled lets downstream sums form products like
    prefactor * varphi_k * varphi_l without intermediate overflow.
    """
    qv = as_qbase(q).q
    if x == 0:
        raise DomainError("varphi is defined for x != 0 only")
    if method == "auto":
        method = "combination" if abs(x) * qv ** (n + 0.5) <= 1.0 else "ramanujan"
    if method == "combination":
        a_minus, a_plus = _varphi_theta_coeffs_scaled(x, qv, policy)
        pm = _renorm(psi_pm(n, x, qv, "-", policy), 0)
        pp = _renorm(psi_pm(n, x, qv, "+", policy), 0)
        return _sadd(_smul(a_minus, pm), _smul(a_plus, pp))
    if method == "ramanujan":
        c = 2.0 * qpochhammer_inf(-qv, qv, policy)  # (-1;q)_inf
        series = phi01(qv * qv, -(qv ** (-2 * n + 4)) / (x * x), policy)
        pref = _smul(_spow_c(x, n), _spow_q(qv, n * (n - 1) / 2.0))
        return _smul(pref, _renorm(c * series, 0))
    raise DomainError(f"unknown varphi method {method!r}")


def varphi(n: int, x: complex, q: QBase | float,
           method: Literal["combination", "ramanujan", "auto"] = "auto",
           policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """The square-summable eigensolution varphi_n(x), unique up to scaling.

    ``combination`` evaluates theta_q(-i q^{-1/2} x) psi^-_n + theta_q(i q^{-1/2} x) psi^+_n,
    accurate where the 1phi1 argument x q^{n+1/2} stays small (large n).
    ``ramanujan`` evaluates (-1;q)_inf x^n q^{n(n-1)/2} 0phi1(-; 0; q^2, -q^{-2n+4} x^{-2}),
    accurate in the opposite regime (n -> -infinity).  ``auto`` switches at
    |x| q^{n+1/2} = 1, where each route's series argument is comfortably small.
    """
    return _sto_complex(varphi_scaled(n, x, q, method, policy))


def varphi_norm_sq(x: complex, q: QBase | float,
                   method: Literal["closed_form", "direct_sum"] = "closed_form",
                   policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """sum_n varphi_n(x)^2, the squared l2 norm for real x and its analytic
    continuation otherwise.

    Closed form: 4 (q^2;q^2)_inf^2 / (q;q^2)_inf^2 * theta_{q^2}(-x^2).
    Direct sum: bilateral summation of varphi_n(x)^2 under the policy.
    """
    qv = as_qbase(q).q
    if x == 0:
        raise DomainError("varphi_norm_sq is defined for x != 0 only")
    q2 = qv * qv
    if method == "closed_form":
        num = qpochhammer_inf(q2, q2, policy)
        den = qpochhammer_inf(qv, q2, policy)
        return 4.0 * (num / den) ** 2 * theta(-x * x, q2, "product", policy)
    if method == "direct_sum":
        def term(n: int) -> complex:
            v = varphi(n, x, qv, "auto", policy)
            return v * v

        return _sum_bilateral(term, policy)
    raise DomainError(f"unknown varphi_norm_sq method {method!r}")


# --------------------------------------------------------------------------
# Secular equation and the reparametrized spectrum
# --------------------------------------------------------------------------

def secular(x: complex, t: ExtensionParam | float, q: QBase | float,
            policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """Secular function of the extension A_t:
    x theta_{q^4}(q^2 x^2) + t theta_{q^4}(x^2) for finite t, and
    theta_{q^4}(x^2) for t at infinity.  Its roots are exactly the
    eigenvalues of A_t.  The value at x = 0 is not defined."""
    qv = as_qbase(q).q
    tp = as_extension(t)
    if x == 0:
        raise DomainError("secular function is not defined at x = 0")
    q4 = qv ** 4
    if tp.is_infinite:
        return theta(x * x, q4, "product", policy)
    return (x * theta(qv * qv * x * x, q4, "product", policy)
            + tp.value * theta(x * x, q4, "product", policy))


def secular_scale(x: complex, t: ExtensionParam | float, q: QBase | float,
                  policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Cancellation-aware magnitude scale for secular residuals.

    Uses the sums of absolute values of the theta series terms, so a root
    (where the signed theta sums collapse to zero) still gets a meaningful
    relative scale: |x| S(q^2 x^2) + max(1, |t|) S(x^2), with the max
    keeping the test sharp at t = 0.
    """
    qv = as_qbase(q).q
    tp = as_extension(t)
    if x == 0:
        raise DomainError("secular scale is not defined at x = 0")
    q4 = qv ** 4
    s2 = theta_abs_scale(x * x, q4, policy)
    if tp.is_infinite:
        return s2
    s1 = theta_abs_scale(qv * qv * x * x, q4, policy)
    return abs(x) * s1 + max(1.0, abs(tp.value)) * s2


def phi_map(s: float, q: QBase | float,
            policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """The reparametrization t = Phi(s) = i q^{1/2} th4(i s | q^2) / th1(i s | q^2).

    Real-valued and strictly decreasing on (0, -2 ln q), with Phi(0) taken as
    infinity by convention; it maps [0, -2 ln q) onto the extended reals.
    """
    qv = as_qbase(q).q
    smax = -2.0 * math.log(qv)
    if s == 0.0:
        return math.inf
    if not 0.0 < s < smax:
        raise DomainError(f"phi_map requires 0 <= s < {smax}, got {s}")
    th = jacobi_thetas(1j * s, QBase(qv * qv), policy)
    r = 1j * math.sqrt(qv) * th.v4 / th.v1
    return r.real


def phi_inverse(t: ExtensionParam | float, q: QBase | float,
                method: Literal["monotone_inversion", "elliptic_quadrature"] = "monotone_inversion",
                policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Inverse of the reparametrization: the s in [0, -2 ln q) with Phi(s) = t.

    ``monotone_inversion`` bisects phi_map (50 steps on a bracket inset by
    1e-12 from both endpoints); ``elliptic_quadrature`` evaluates the elliptic
    integral representation

        s = q^{1/2}/(th2 th3)
            * int_t^inf [((q th3^2/th2^2) + x^2)((q th2^2/th3^2) + x^2)]^{-1/2} dx

    with theta constants at nome q^2, transformed by x = tan(u) into a smooth
    bounded integrand on (arctan t, pi/2].  The two inner constants are the
    squares of q^{1/2} th3/th2 and of its reciprocal-modulus companion; their
    product is q^2 and the integrand is invariant under swapping them with
    x -> q/x.  For t at infinity s = 0 exactly.
    """
    qv = as_qbase(q).q
    tp = as_extension(t)
    if tp.is_infinite:
        return 0.0
    tval = tp.value
    smax = -2.0 * math.log(qv)
    if method == "monotone_inversion":
        lo, hi = 1e-12, smax - 1e-12
        for _ in range(50):
            mid = 0.5 * (lo + hi)
            if phi_map(mid, qv, policy) > tval:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)
    if method == "elliptic_quadrature":
        th = jacobi_thetas(0j, QBase(qv * qv), policy)
        th2, th3 = th.v2.real, th.v3.real
        a = qv * (th3 / th2) ** 2
        b = qv * (th2 / th3) ** 2
        pref = math.sqrt(qv) / (th2 * th3)

        def integrand(u: float) -> float:
            c2 = math.cos(u) ** 2
            s2 = 1.0 - c2
            return 1.0 / math.sqrt((a * c2 + s2) * (b * c2 + s2))

        val = adaptive_simpson(integrand, math.atan(tval), 0.5 * math.pi, rel_tol=1e-9)
        return pref * val
    raise DomainError(f"unknown phi_inverse method {method!r}")


def point_spectrum_a(t: ExtensionParam | float, q: QBase | float,
                     window: SpectrumWindow,
                     policy: SeriesPolicy = DEFAULT_POLICY) -> ASpectrum:
    """Materialize the explicit point spectrum of A_t over an index window.

    With s = Phi^{-1}(t) the spectrum is the union of the two geometric
    ladders {e^s q^{2n}} and {-e^{-s} q^{2m}}.  Every emitted point is
    validated against the secular function at relative tolerance 1e-9.
    """
    qv = as_qbase(q).q
    tp = as_extension(t)
    s = phi_inverse(tp, qv, "monotone_inversion", policy)
    es = math.exp(s)
    positive = [(n, es * qv ** (2 * n)) for n in window.indices()]
    negative = [(m, -(qv ** (2 * m)) / es) for m in window.indices()]
    for _, val in positive + negative:
        res = abs(secular(val, tp, qv, policy))
        scale = secular_scale(val, tp, qv, policy)
        if res > SECULAR_REL_TOL * scale:
            raise ConvergenceFailure(
                f"spectrum point {val} fails the secular residual test: "
                f"{res:.3e} > {SECULAR_REL_TOL:.0e} * {scale:.3e}"
            )
    return ASpectrum(s=s, positive_branch=positive, negative_branch=negative, t=tp)


def boundary_residual(x: complex, t: ExtensionParam | float, q: QBase | float,
                      n: int, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Boundary-condition residual of varphi(x) against Dom A_t at depth n.

    For finite t this is max(|q^{-n}(varphi_{2n+1} + t varphi_{2n})|,
    |q^{-n}(q varphi_{2n-1} - t varphi_{2n})|); for t at infinity it is
    |q^{-n} varphi_{2n}|.  The residual decays in n exactly when x is an
    eigenvalue of A_t.
    """
    qv = as_qbase(q).q
    tp = as_extension(t)
    if x == 0:
        raise DomainError("boundary residual is defined for x != 0 only")
    qn = qv ** (-n)
    v2n = varphi(2 * n, x, qv, "auto", policy)
    if tp.is_infinite:
        return abs(qn * v2n)
    v2n1 = varphi(2 * n + 1, x, qv, "auto", policy)
    v2nm1 = varphi(2 * n - 1, x, qv, "auto", policy)
    r1 = abs(qn * (v2n1 + tp.value * v2n))
    r2 = abs(qn * (qv * v2nm1 - tp.value * v2n))
    return max(r1, r2)


# --------------------------------------------------------------------------
# Orthogonality relations
# --------------------------------------------------------------------------

def og_ramanujan(kind: Literal["first", "second", "third"], z: complex,
                 q: QBase | float, *, ell: int = 0, k: int = 0,
                 policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Orthogonality relations of the Ramanujan entire function A_q.

    Returns |LHS - RHS| / (1 + |RHS|), with the LHS summed bilaterally under
    the policy and the RHS taken in closed form:

    * ``first``  - sum_j z^j q^{j(j-1)/2} A_q(z q^{j+ell}) A_q(z q^{j-ell})
                   = (q;q)_inf^2 theta_q(-z) delta_{0,ell};
    * ``second`` - sum_j (-1)^j q^{j(j-1)/2} A_q(z q^{j+ell}) A_q(z^{-1} q^{j-ell}) = 0;
    * ``third``  - with B_j(z) = z^j A_{q^2}(z^2 q^{2j+1}),
                   sum_j q^{j(j+k+ell)} (B_{j+k}(z) B_{j+ell}(z)
                   + B_{j+k}(-1/z) B_{j+ell}(-1/z))
                   = 2 q^{-k^2} (q^2;q^2)_inf^2 theta_{q^2}(-q z^2) delta_{k,ell}.

    The A_q factors at deep negative j have magnitudes far outside the double
    range; products are assembled in scaled arithmetic before being folded
    back into ordinary terms.
    """
    qv = as_qbase(q).q
    if z == 0:
        raise DomainError("orthogonality relations require z != 0")

    if kind == "first":
        def term(j: int) -> complex:
            pref = _smul(_spow_c(z, j), _spow_q(qv, j * (j - 1) / 2.0))
            a1 = ramanujan_entire_scaled(z * qv ** (j + ell), qv, policy)
            a2 = ramanujan_entire_scaled(z * qv ** (j - ell), qv, policy)
            return _sto_complex(_smul(_smul(pref, a1), a2))

        lhs = _sum_bilateral(term, policy)
        euler = qpochhammer_inf(qv, qv, policy)
        rhs = euler * euler * theta(-z, qv, "product", policy) if ell == 0 else 0j
        return abs(lhs - rhs) / (1.0 + abs(rhs))

    if kind == "second":
        def term(j: int) -> complex:
            pref = _smul(_spow_c(-1 + 0j, j), _spow_q(qv, j * (j - 1) / 2.0))
            a1 = ramanujan_entire_scaled(z * qv ** (j + ell), qv, policy)
            a2 = ramanujan_entire_scaled(qv ** (j - ell) / z, qv, policy)
            return _sto_complex(_smul(_smul(pref, a1), a2))

        lhs = _sum_bilateral(term, policy)
        return abs(lhs)

    if kind == "third":
        q2 = qv * qv

        def big_b(j: int, w: complex):
            return _smul(_spow_c(w, j),
                         ramanujan_entire_scaled(w * w * qv ** (2 * j + 1), q2, policy))

        def term(j: int) -> complex:
            pref = _spow_q(qv, float(j * (j + k + ell)))
            direct = _smul(big_b(j + k, z), big_b(j + ell, z))
            recip = _smul(big_b(j + k, -1.0 / z), big_b(j + ell, -1.0 / z))
            return _sto_complex(_smul(pref, _sadd(direct, recip)))

        lhs = _sum_bilateral(term, policy)
        if k == ell:
            euler2 = qpochhammer_inf(q2, q2, policy)
            rhs = (2.0 * qv ** float(-k * k) * euler2 * euler2
                   * theta(-qv * z * z, q2, "product", policy))
        else:
            rhs = 0j
        return abs(lhs - rhs) / (1.0 + abs(rhs))

    raise DomainError(f"unknown og_ramanujan kind {kind!r}")


def og_varphi(kind: Literal["first", "second", "dual"], omega: float,
              q: QBase | float, *, m: int = 0, n: int = 0,
              k: int = 0, ell: int = 0,
              policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Orthogonality relations of the eigenvector family varphi.

    Returns |LHS - RHS| / (1 + |RHS|):

    * ``first``  - sum_j varphi_j(w q^{2m}) varphi_j(w q^{2n})
                   = w^{-4n} q^{-2n(2n-1)} ||varphi(w)||^2 delta_{m,n};
    * ``second`` - sum_j varphi_j(w q^{2m}) varphi_j(-w^{-1} q^{2n}) = 0
                   (eigenvectors of the two ladders of one extension);
    * ``dual``   - sum_j w^{2j} q^{j(j-1)} [varphi_k(w q^j) varphi_l(w q^j)
                   + varphi_k(-w^{-1} q^{-j+1}) varphi_l(-w^{-1} q^{-j+1})]
                   = 2 ||varphi(w)||^2 delta_{k,l}   (Parseval dual).
    """
    qv = as_qbase(q).q
    if omega == 0:
        raise DomainError("og_varphi requires omega != 0")

    if kind == "first":
        x1, x2 = omega * qv ** (2 * m), omega * qv ** (2 * n)

        def term(j: int) -> complex:
            return varphi(j, x1, qv, "auto", policy) * varphi(j, x2, qv, "auto", policy)

        lhs = _sum_bilateral(term, policy)
        if m == n:
            norm = varphi_norm_sq(omega, qv, "closed_form", policy)
            pref = _smul(_spow_q(abs(omega), float(-4 * n)), _spow_q(qv, float(-2 * n * (2 * n - 1))))
            rhs = _sto_complex(pref) * norm
        else:
            rhs = 0j
        return abs(lhs - rhs) / (1.0 + abs(rhs))

    if kind == "second":
        x1, x2 = omega * qv ** (2 * m), -qv ** (2 * n) / omega

        def term(j: int) -> complex:
            return varphi(j, x1, qv, "auto", policy) * varphi(j, x2, qv, "auto", policy)

        return abs(_sum_bilateral(term, policy))

    if kind == "dual":
        # the prefactor crushes phi products that individually overflow
        # doubles, so the whole term is assembled in scaled arithmetic
        def term(j: int) -> complex:
            xa = omega * qv ** j
            xb = -(qv ** (-j + 1)) / omega
            pref = _smul(_spow_c(complex(omega), 2 * j), _spow_q(qv, float(j * (j - 1))))
            pa = _smul(varphi_scaled(k, xa, qv, "auto", policy),
                       varphi_scaled(ell, xa, qv, "auto", policy))
            pb = _smul(varphi_scaled(k, xb, qv, "auto", policy),
                       varphi_scaled(ell, xb, qv, "auto", policy))
            return _sto_complex(_smul(pref, _sadd(pa, pb)))

        lhs = _sum_bilateral(term, policy)
        rhs = 2.0 * varphi_norm_sq(omega, qv, "closed_form", policy) if k == ell else 0j
        return abs(lhs - rhs) / (1.0 + abs(rhs))

    raise DomainError(f"unknown og_varphi kind {kind!r}")
