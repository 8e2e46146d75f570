"""Double-precision evaluators for q-series and theta functions.

Every infinite sum or product here is truncated under a :class:`SeriesPolicy`,
and wherever two independent representations of the same quantity exist
(product vs bilateral sum, Mittag-Leffler vs Laurent vs closed form) both are
implemented, so identities between them can be exercised as tests instead of
being trusted.

Conventions
-----------
* ``(a;q)_n`` is the q-Pochhammer symbol ``prod_{k=0}^{n-1} (1 - a q^k)``.
* ``theta_q(x) = (x, q/x; q)_inf``; by the Jacobi triple product this equals
  ``(q;q)_inf^{-1} sum_{n in Z} q^{n(n-1)/2} (-x)^n``.  Zeros exactly at
  ``x in q^Z``.
* ``phi11(b, q, z)`` is the confluent basic hypergeometric series
  ``1phi1(0; b; q, z)``; ``phi11_reg`` is its regularization by ``(b;q)_inf``,
  entire in ``b``.
* ``phi01(q, z)`` is ``0phi1(-; 0; q, z)``; the Ramanujan entire function is
  ``A_q(z) = 0phi1(-; 0; q, -qz)``.

Magnitudes far beyond the double range appear as intermediates in a few
evaluations (regularized series at parameters ``~ q^{-n}`` for large ``n``,
the Ramanujan function at huge arguments).  Those paths run on a scaled
``(mantissa, base-2 exponent)`` representation, exposed through the
``*_scaled`` variants; the plain entry points recombine to ordinary complex
numbers.

All functions are pure: no module-level mutable state, identical inputs give
bit-identical outputs.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Literal

from .errors import DomainError, NonConvergent

__all__ = [
    "QBase",
    "SeriesPolicy",
    "ThetaFour",
    "DEFAULT_POLICY",
    "as_qbase",
    "qpochhammer_finite",
    "qpochhammer_inf",
    "qpochhammer_inf_scaled",
    "theta",
    "theta_scaled",
    "theta_abs_scale",
    "phi11",
    "phi11_reg",
    "phi11_reg_scaled",
    "phi11_upper_q",
    "phi01",
    "ramanujan_entire",
    "ramanujan_entire_scaled",
    "jackson_qbessel3",
    "xi",
    "jacobi_thetas",
]


# --------------------------------------------------------------------------
# Domain types
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class QBase:
    """Base of all q-series, restricted to the open interval (0, 1).

    Values above 0.95 are accepted but flagged with a warning: all series
    still converge, just increasingly slowly as q -> 1-.
    """

    q: float

    def __post_init__(self):
        q = self.q
        if not (isinstance(q, (int, float)) and math.isfinite(q)):
            raise DomainError(f"q must be a finite real, got {q!r}")
        if not 0.0 < q < 1.0:
            raise DomainError(f"q must lie strictly inside (0, 1), got {q}")
        if q > 0.95:
            warnings.warn(
                f"q = {q} is above the recommended operating range [0.05, 0.95]; "
                "series convergence degrades as q -> 1-",
                stacklevel=2,
            )


def as_qbase(q: QBase | float) -> QBase:
    """Coerce a plain float into a validated :class:`QBase`."""
    return q if isinstance(q, QBase) else QBase(float(q))


@dataclass(frozen=True)
class SeriesPolicy:
    """Truncation contract shared by every infinite sum and product.

    A summation terminates successfully only after ``consecutive_small``
    successive terms each satisfy
    ``|term| <= rel_tol * max(|partial|, abs_floor)``; hitting ``max_terms``
    first raises :class:`~qspectra.errors.NonConvergent`.
    """

    rel_tol: float = 1e-14
    abs_floor: float = 1e-300
    max_terms: int = 10000
    consecutive_small: int = 3

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if self.max_terms < 8:
            raise DomainError("max_terms must be at least 8")
        if self.consecutive_small < 1:
            raise DomainError("consecutive_small must be at least 1")


DEFAULT_POLICY = SeriesPolicy()


@dataclass(frozen=True)
class ThetaFour:
    """Values of the four Jacobi theta functions at a common point (z | q)."""

    v1: complex
    v2: complex
    v3: complex
    v4: complex


# --------------------------------------------------------------------------
# Scaled (mantissa, base-2 exponent) arithmetic
#
# Used only where intermediates leave the double range.  Mantissas are kept
# renormalized with |man| in [0.5, 1), so products of two mantissas can never
# overflow before renormalization.
# --------------------------------------------------------------------------

Scaled = tuple[complex, int]

_SZERO: Scaled = (0j, 0)
_SONE: Scaled = (0.5 + 0j, 1)


def _renorm(man: complex, exp2: int) -> Scaled:
    a = abs(man)
    if a == 0.0:
        return _SZERO
    if not math.isfinite(a):
        raise NonConvergent("non-finite mantissa in scaled arithmetic")
    e = math.frexp(a)[1]
    if e:
        man = complex(math.ldexp(man.real, -e), math.ldexp(man.imag, -e))
        exp2 += e
    return man, exp2


def _smul(a: Scaled, b: Scaled) -> Scaled:
    return _renorm(a[0] * b[0], a[1] + b[1])


def _sadd(a: Scaled, b: Scaled) -> Scaled:
    am, ae = a
    bm, be = b
    if am == 0:
        return b
    if bm == 0:
        return a
    d = ae - be
    if d > 106:  # addend below half an ulp of the other operand
        return a
    if d < -106:
        return b
    if d >= 0:
        return _renorm(am + complex(math.ldexp(bm.real, -d), math.ldexp(bm.imag, -d)), ae)
    return _renorm(complex(math.ldexp(am.real, d), math.ldexp(am.imag, d)) + bm, be)


def _slog2(a: Scaled) -> float:
    if a[0] == 0:
        return -math.inf
    return math.log2(abs(a[0])) + a[1]


def _sto_complex(a: Scaled) -> complex:
    man, exp2 = a
    if man == 0:
        return 0j
    if exp2 > 1022:
        raise NonConvergent("value exceeds the double-precision range")
    if exp2 < -1120:
        return 0j
    return complex(math.ldexp(man.real, exp2), math.ldexp(man.imag, exp2))


def _spow_q(q: float, exponent: float) -> Scaled:
    """q**exponent for real q > 0, stable for exponents of either sign and
    arbitrary size (log-space with base-2 exponent bookkeeping)."""
    if abs(exponent) <= 256.0:
        v = q ** exponent
        if v != 0.0 and math.isfinite(v):
            return _renorm(complex(v), 0)
    t = exponent * math.log2(q)
    e = math.floor(t)
    return _renorm(complex(2.0 ** (t - e)), int(e))


def _spow_signed(x: float, n: int) -> Scaled:
    """x**n for real x and integer n, sign tracked exactly."""
    if x == 0.0:
        if n < 0:
            raise DomainError("0 cannot be raised to a negative power")
        return _SONE if n == 0 else _SZERO
    sign = -1.0 if (x < 0.0 and n % 2) else 1.0
    man, exp2 = _spow_q(abs(x), float(n)) if abs(x) < 1.0 else _spow_q(1.0 / abs(x), float(-n))
    return _renorm(sign * man, exp2)


def _spow_c(z: complex, n: int) -> Scaled:
    """z**n for integer n by repeated squaring (no logarithms, so no branch
    cuts on the complex plane)."""
    if n == 0:
        return _SONE
    if z == 0:
        if n < 0:
            raise DomainError("0 cannot be raised to a negative power")
        return _SZERO
    m = abs(n)
    base = _renorm(z, 0)
    acc = _SONE
    while m:
        if m & 1:
            acc = _smul(acc, base)
        base = _smul(base, base)
        m >>= 1
    if n < 0:
        acc = _renorm(1.0 / acc[0], -acc[1])
    return acc


# --------------------------------------------------------------------------
# Generic truncated summation
# --------------------------------------------------------------------------

def _sum_directed(term: Callable[[int], complex], policy: SeriesPolicy,
                  start: int, step: int,
                  state: tuple[complex, complex] = (0j, 0j)) -> tuple[complex, complex]:
    """Sum term(start), term(start+step), ... under the policy stopping rule.

    Accumulation is compensated (Kahan), which matters for heavily cancelling
    theta-type sums whose result is orders of magnitude below the largest
    term.  Returns the (sum, compensation) pair so a second pass can continue
    the same accumulation.
    """
    partial, comp = state
    small = 0
    k = start
    for _ in range(policy.max_terms):
        t = term(k)
        y = t - comp
        acc = partial + y
        comp = (acc - partial) - y
        partial = acc
        if abs(t) <= policy.rel_tol * max(abs(partial), policy.abs_floor):
            small += 1
            if small >= policy.consecutive_small:
                return partial, comp
        else:
            small = 0
        k += step
    raise NonConvergent(f"series did not settle within {policy.max_terms} terms")


def _sum_bilateral(term: Callable[[int], complex], policy: SeriesPolicy) -> complex:
    """Sum term(n) over all integers n, each tail stopped independently."""
    state = _sum_directed(term, policy, 0, +1)
    return _sum_directed(term, policy, -1, -1, state=state)[0]


# --------------------------------------------------------------------------
# q-Pochhammer symbols
# --------------------------------------------------------------------------

def qpochhammer_finite(a: complex, q: QBase | float, n: int) -> complex:
    """Finite q-Pochhammer symbol (a;q)_n = prod_{k=0}^{n-1} (1 - a q^k)."""
    qv = as_qbase(q).q
    if n < 0:
        raise DomainError("qpochhammer_finite requires n >= 0")
    out = 1 + 0j
    p = 1.0
    for _ in range(n):
        out *= 1.0 - a * p
        p *= qv
    return out


def qpochhammer_inf(a: complex, q: QBase | float,
                    policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """Infinite q-Pochhammer symbol (a;q)_inf.

    The product is truncated at the first N with |a| q^N / (1-q) < rel_tol,
    a geometric bound on the log of the discarded tail.
    """
    qv = as_qbase(q).q
    if a == 0:
        return 1 + 0j
    target = policy.rel_tol * (1.0 - qv)
    ratio = abs(a)
    out = 1 + 0j
    p = 1.0
    for _ in range(policy.max_terms):
        if ratio * p < target:
            if not (math.isfinite(out.real) and math.isfinite(out.imag)):
                raise NonConvergent("q-Pochhammer product left the double range")
            return out
        out *= 1.0 - a * p
        p *= qv
    raise NonConvergent(
        f"(a;q)_inf tail bound not reached within {policy.max_terms} factors"
    )


def qpochhammer_inf_scaled(a: complex, q: QBase | float,
                           policy: SeriesPolicy = DEFAULT_POLICY) -> Scaled:
    """(a;q)_inf as (mantissa, base-2 exponent); the partial products for
    |a| ~ q^{-L} reach magnitude q^{-L^2/2}, so the plain variant saturates
    around L ~ 45 at q = 1/2 while this one does not."""
    qv = as_qbase(q).q
    if a == 0:
        return _SONE
    target = policy.rel_tol * (1.0 - qv)
    ratio = abs(a)
    out = _SONE
    p = 1.0
    for _ in range(policy.max_terms):
        if ratio * p < target:
            return out
        out = _smul(out, _renorm(1.0 - a * p, 0))
        p *= qv
    raise NonConvergent(
        f"(a;q)_inf tail bound not reached within {policy.max_terms} factors"
    )


# --------------------------------------------------------------------------
# Theta function
# --------------------------------------------------------------------------

def theta(x: complex, q: QBase | float,
          method: Literal["product", "bilateral_sum"] = "product",
          policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """theta_q(x) = (x, q/x; q)_inf, with zeros exactly on x in q^Z.

    ``product`` multiplies the two infinite Pochhammer factors;
    ``bilateral_sum`` evaluates the Jacobi triple product representation
    ``(q;q)_inf^{-1} sum_{n in Z} q^{n(n-1)/2} (-x)^n`` with symmetric
    truncation.  The two must agree within policy tolerance.
    """
    qv = as_qbase(q).q
    if x == 0:
        raise DomainError("theta_q is singular at x = 0")
    if method == "product":
        return qpochhammer_inf(x, qv, policy) * qpochhammer_inf(qv / x, qv, policy)
    if method == "bilateral_sum":
        # t_n = q^{n(n-1)/2} (-x)^n with incremental ratios
        #   t_{n+1} = -x q^n t_n        (upward from t_0 = 1),
        #   t_{n-1} = -q^{1-n} t_n / x  (downward from t_{-1} = -q/x).
        # Each ratio uses a fresh pow for the q factor, so per-term error
        # stays at a few ulps and, being inherited down the chain, mostly
        # cancels in the alternating sum.  That matters: the sum cancels by
        # a factor ~ (q;q)_inf before the final division restores theta.
        total = 0j
        comp = 0j
        minv = -1.0 / x
        for start_term, start_n, step in ((1 + 0j, 0, 1), (qv * minv, -1, -1)):
            t = start_term
            n = start_n
            small = 0
            for _ in range(policy.max_terms):
                y = t - comp
                acc = total + y
                comp = (acc - total) - y
                total = acc
                if abs(t) <= policy.rel_tol * max(abs(total), policy.abs_floor):
                    small += 1
                    if small >= policy.consecutive_small:
                        break
                else:
                    small = 0
                if step > 0:
                    t *= -x * qv ** n
                else:
                    t *= minv * qv ** (1 - n)
                n += step
            else:
                raise NonConvergent(
                    f"theta bilateral sum did not settle within {policy.max_terms} terms"
                )
        return total / qpochhammer_inf(qv, qv, policy)
    raise DomainError(f"unknown theta method {method!r}")


def theta_scaled(x: complex, q: QBase | float,
                 policy: SeriesPolicy = DEFAULT_POLICY) -> Scaled:
    """theta_q(x) in scaled form via the product route; needed where x is far
    from the unit circle and the value leaves the double range."""
    qv = as_qbase(q).q
    if x == 0:
        raise DomainError("theta_q is singular at x = 0")
    return _smul(qpochhammer_inf_scaled(x, qv, policy),
                 qpochhammer_inf_scaled(qv / x, qv, policy))


def theta_abs_scale(x: complex, q: QBase | float,
                    policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Sum of absolute values of the triple-product series terms of theta_q(x),
    divided by (q;q)_inf.

    This is the natural conditioning scale of a theta evaluation: a computed
    theta value is reliable to roughly eps * theta_abs_scale, which matters
    when residuals are measured at points where theta itself nearly vanishes.
    """
    qv = as_qbase(q).q
    if x == 0:
        raise DomainError("theta_q is singular at x = 0")
    r = abs(x)

    def term(n: int) -> complex:
        return _sto_complex(_smul(_spow_q(qv, n * (n - 1) / 2.0), _spow_q(r, float(n))))

    total = _sum_bilateral(term, policy).real
    return total / abs(qpochhammer_inf(qv, qv, policy))


# --------------------------------------------------------------------------
# Confluent basic hypergeometric series
# --------------------------------------------------------------------------

def _nearest_pole_index(b: complex, qv: float) -> int | None:
    """Index k >= 0 with q^{-k} closest to b in log-modulus, or None."""
    r = abs(b)
    if r <= 0.5 * (1.0 + qv):  # below the smallest pole q^0 = 1
        return None
    k = round(-math.log(r) / math.log(qv))
    return max(k, 0)


def phi11(b: complex, q: QBase | float, z: complex,
          policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """The series 1phi1(0; b; q, z) = sum_k (-1)^k q^{k(k-1)/2} z^k / ((b;q)_k (q;q)_k).

    Poles (of the non-regularized series) at b = q^{-k}, k >= 0, are rejected
    by a relative-distance test; use :func:`phi11_reg` there.
    """
    qv = as_qbase(q).q
    k = _nearest_pole_index(b, qv)
    if k is not None:
        pole = qv ** (-k)
        if abs(b - pole) < 1e-10 * pole:
            raise DomainError(f"1phi1 parameter b = {b} is at/near the pole q^-{k}")
    total = 0j
    t = 1 + 0j
    small = 0
    p = 1.0  # q^k
    for k in range(policy.max_terms):
        total += t
        if abs(t) <= policy.rel_tol * max(abs(total), policy.abs_floor):
            small += 1
            if small >= policy.consecutive_small:
                return total
        else:
            small = 0
        t *= -z * p / ((1.0 - b * p) * (1.0 - qv * p))
        p *= qv
    raise NonConvergent("1phi1 series did not settle")


def phi11_reg_scaled(b: complex, q: QBase | float, z: complex,
                     policy: SeriesPolicy = DEFAULT_POLICY) -> Scaled:
    """Regularized series (b;q)_inf * 1phi1(0;b;q,z) as (mantissa, exponent).

    Computed termwise as sum_k (b q^k; q)_inf (-1)^k q^{k(k-1)/2} z^k/(q;q)_k,
    which is entire in b: the per-term infinite products are obtained from a
    single small-argument tail (b q^K; q)_inf and backward suffix products of
    the factors (1 - b q^j).  The backward direction matters: it reproduces
    exact zeros at b = q^{-j} instead of dividing 0/0 through them.

    Intermediate term magnitudes grow like q^{-L^2/2} for |b| ~ q^{-L}, far
    beyond the double range for moderate L; hence the scaled representation.
    """
    qv = as_qbase(q).q
    if z == 0:
        return _renorm(qpochhammer_inf(b, qv, policy), 0)
    # K large enough that |b| q^K is comfortably inside the unit disk
    lead = 0
    if abs(b) > 1.0:
        lead = int(math.ceil(math.log(abs(b)) / -math.log(qv))) + 2
    cap = policy.max_terms
    if lead + 8 > cap:
        raise NonConvergent("regularized 1phi1 parameter too extreme for max_terms")
    nterms = min(64 + lead, cap)
    while True:
        K = nterms
        tail = qpochhammer_inf(b * qv ** K, qv, policy)
        # suffix products S[k] = prod_{j=k}^{K-1} (1 - b q^j), scaled
        suffix: list[Scaled] = [_SZERO] * (K + 1)
        suffix[K] = _SONE
        qpows = [1.0] * K
        for j in range(1, K):
            qpows[j] = qpows[j - 1] * qv
        for j in range(K - 1, -1, -1):
            suffix[j] = _smul(suffix[j + 1], _renorm(1.0 - b * qpows[j], 0))
        c = _renorm(complex(tail), 0)  # c_k = tail * (-1)^k q^{k(k-1)/2} z^k/(q;q)_k
        partial = _SZERO
        small = 0
        log_small = math.log2(policy.rel_tol)
        floor_log = math.log2(policy.abs_floor)
        for k in range(K):
            t = _smul(suffix[k], c)
            partial = _sadd(partial, t)
            # stop only after the suffix zeros at b = q^{-j} are behind us
            if k >= lead and _slog2(t) <= log_small + max(_slog2(partial), floor_log):
                small += 1
                if small >= policy.consecutive_small:
                    return partial
            else:
                small = 0
            c = _smul(c, _renorm(-z * qpows[k] / (1.0 - qv * qpows[k]), 0))
        if nterms >= cap:
            raise NonConvergent("regularized 1phi1 did not settle within max_terms")
        nterms = min(2 * nterms, cap)


def phi11_reg(b: complex, q: QBase | float, z: complex,
              policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """Regularized confluent series (b;q)_inf * 1phi1(0; b; q, z).

    Finite for every b, including the poles b = q^{-k} of the bare series,
    and symmetric under exchanging b and z.
    """
    return _sto_complex(phi11_reg_scaled(b, q, z, policy))


def phi11_upper_q(b: complex, q: QBase | float, z: complex,
                  policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """The series 1phi1(q; b; q, z) = sum_k (-1)^k q^{k(k-1)/2} z^k / (b;q)_k.

    Specialization with upper parameter q, where (q;q)_k cancels; it appears
    in the constants of the oscillatory large-index expansions.
    """
    qv = as_qbase(q).q
    total = 0j
    t = 1 + 0j
    small = 0
    p = 1.0
    for _ in range(policy.max_terms):
        total += t
        if abs(t) <= policy.rel_tol * max(abs(total), policy.abs_floor):
            small += 1
            if small >= policy.consecutive_small:
                return total
        else:
            small = 0
        denom = 1.0 - b * p
        if denom == 0:
            raise DomainError("1phi1(q; b; q, z) hit a vanishing Pochhammer factor")
        t *= -z * p / denom
        p *= qv
    raise NonConvergent("1phi1(q; b; q, z) series did not settle")


def phi01(q: QBase | float, z: complex,
          policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """The series 0phi1(-; 0; q, z) = sum_k q^{k(k-1)} z^k / (q;q)_k."""
    qv = as_qbase(q).q
    total = 0j
    t = 1 + 0j
    small = 0
    p = 1.0  # q^{2k}
    for k in range(policy.max_terms):
        total += t
        if abs(t) <= policy.rel_tol * max(abs(total), policy.abs_floor):
            small += 1
            if small >= policy.consecutive_small:
                return total
        else:
            small = 0
        t *= z * p / (1.0 - qv ** (k + 1))
        p *= qv * qv
    raise NonConvergent("0phi1 series did not settle")


# --------------------------------------------------------------------------
# Ramanujan entire function and q-Bessel function
# --------------------------------------------------------------------------

def ramanujan_entire_scaled(z: complex, q: QBase | float,
                            policy: SeriesPolicy = DEFAULT_POLICY) -> Scaled:
    """A_q(z) = sum_k (-1)^k q^{k^2} z^k / (q;q)_k as (mantissa, exponent).

    For |z| ~ q^{-2a} the largest term is of order q^{-a^2}, which overflows
    doubles long before the bilateral identities that consume these values
    stop needing them; hence the scaled form.
    """
    qv = as_qbase(q).q
    total = _SZERO
    t = _SONE
    small = 0
    log_small = math.log2(policy.rel_tol)
    floor_log = math.log2(policy.abs_floor)
    p = qv  # q^{2k+1}
    for k in range(policy.max_terms):
        total = _sadd(total, t)
        if _slog2(t) <= log_small + max(_slog2(total), floor_log):
            small += 1
            if small >= policy.consecutive_small:
                return total
        else:
            small = 0
        t = _smul(t, _renorm(-p * z / (1.0 - qv ** (k + 1)), 0))
        p *= qv * qv
    raise NonConvergent("Ramanujan entire function series did not settle")


def ramanujan_entire(z: complex, q: QBase | float,
                     policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """Ramanujan's entire function A_q(z) = 0phi1(-; 0; q, -qz), a q-analogue
    of the Airy function."""
    return _sto_complex(ramanujan_entire_scaled(z, q, policy))


def jackson_qbessel3(n: int, z: complex, q: QBase | float,
                     policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """Third Jackson q-Bessel function of integer order,
    J_n(z;q) = z^n / (q;q)_inf * (q^{n+1};q)_inf 1phi1(0; q^{n+1}; q, qz^2).

    Negative orders go through the same formula; the regularized series is
    entire in its parameter, so q^{n+1} = q^{-k} needs no special casing.
    """
    qv = as_qbase(q).q
    if z == 0:
        return (1 + 0j) if n == 0 else 0j
    series = phi11_reg_scaled(qv ** (n + 1), qv, qv * z * z, policy)
    zn = _spow_c(z, n)
    euler = qpochhammer_inf(qv, qv, policy).real
    return _sto_complex(_smul(_smul(zn, series), _renorm(complex(1.0 / euler), 0)))


# --------------------------------------------------------------------------
# The meromorphic sum xi_q
# --------------------------------------------------------------------------

def _xi_check_pole(z: complex, qv: float) -> None:
    if z == 0:
        raise DomainError("xi_q is singular at z = 0")
    # poles at -q^{n+1/2}: nearest in modulus, then relative distance
    n = round(math.log(abs(z)) / math.log(qv) - 0.5)
    pole = -(qv ** (n + 0.5))
    if abs(z - pole) < 1e-10 * abs(pole):
        raise DomainError(f"xi_q has a pole at z = -q^({n}+1/2)")


def xi(z: complex, q: QBase | float,
       method: Literal["mittag_leffler", "laurent", "closed_form"] = "closed_form",
       policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """The function xi_q(z) = sum_{n in Z} q^{n/2} / (1 + z q^{n-1/2}).

    Three routes, agreeing on the overlap of their domains:

    * ``mittag_leffler`` - the defining bilateral sum (everywhere off poles);
    * ``laurent`` - sum_k q^{(k+1)/2}/(1-q^{k+1/2}) (-z)^k, valid only on the
      annulus q^{1/2} < |z| < q^{-1/2};
    * ``closed_form`` - (q;q)_inf^2/(q^{1/2};q)_inf^2 * theta_q(-z)/theta_q(-q^{-1/2}z),
      the analytic continuation of the Laurent series.

    Simple poles at z in -q^{Z+1/2} raise :class:`DomainError`.
    """
    qv = as_qbase(q).q
    _xi_check_pole(z, qv)
    if method == "mittag_leffler":
        sq = math.sqrt(qv)

        def term(n: int) -> complex:
            return qv ** (n / 2.0) / (1.0 + z * qv ** n / sq)

        return _sum_bilateral(term, policy)
    if method == "laurent":
        if not (math.sqrt(qv) < abs(z) < 1.0 / math.sqrt(qv)):
            raise DomainError(
                "Laurent expansion of xi_q is only valid on q^{1/2} < |z| < q^{-1/2}"
            )

        def term(k: int) -> complex:
            num = _smul(_spow_q(qv, (k + 1) / 2.0), _spow_c(-z, k))
            return _sto_complex(num) / (1.0 - qv ** (k + 0.5))

        return _sum_bilateral(term, policy)
    if method == "closed_form":
        euler = qpochhammer_inf(qv, qv, policy)
        half = qpochhammer_inf(math.sqrt(qv), qv, policy)
        return (euler / half) ** 2 * theta(-z, qv, "product", policy) \
            / theta(-z / math.sqrt(qv), qv, "product", policy)
    raise DomainError(f"unknown xi method {method!r}")


# --------------------------------------------------------------------------
# Jacobi theta quadruple
# --------------------------------------------------------------------------

def jacobi_thetas(z: complex, q: QBase | float,
                  policy: SeriesPolicy = DEFAULT_POLICY) -> ThetaFour:
    """The four Jacobi theta functions at (z | q), q being the nome.

    All four reduce to theta_{q^2} products:

        th1 = i q^{1/4} e^{-iz} (q^2;q^2)_inf theta_{q^2}(e^{2iz})
        th2 =   q^{1/4} e^{-iz} (q^2;q^2)_inf theta_{q^2}(-e^{2iz})
        th3 =            (q^2;q^2)_inf theta_{q^2}(-q e^{2iz})
        th4 =            (q^2;q^2)_inf theta_{q^2}(q e^{2iz})
    """
    qv = as_qbase(q).q
    q2 = qv * qv
    e = cmath.exp(2j * z)
    root4 = qv ** 0.25
    emz = cmath.exp(-1j * z)
    euler2 = qpochhammer_inf(q2, q2, policy)
    v1 = 1j * root4 * emz * euler2 * theta(e, q2, "product", policy)
    v2 = root4 * emz * euler2 * theta(-e, q2, "product", policy)
    v3 = euler2 * theta(-qv * e, q2, "product", policy)
    v4 = euler2 * theta(qv * e, q2, "product", policy)
    return ThetaFour(v1, v2, v3, v4)
