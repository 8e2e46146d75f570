"""Adaptive Simpson quadrature with an evaluation budget."""

from __future__ import annotations

from typing import Callable

from .errors import QuadratureFailure


def adaptive_simpson(f: Callable[[float], float], a: float, b: float,
                     rel_tol: float = 1e-9, abs_tol: float = 0.0,
                     max_evals: int = 500_000) -> float:
    """Integrate f over [a, b] by recursive Simpson with Richardson correction.

    A panel is accepted when |S_fine - S_coarse| <= 15 * tol_panel, where the
    panel tolerance mixes the relative target (against the running whole-
    interval estimate) with an absolute floor apportioned by panel length.
    Exceeding ``max_evals`` raises :class:`~qspectra.errors.QuadratureFailure`.
    """
    if a == b:
        return 0.0
    evals = [0]

    def ev(x: float) -> float:
        evals[0] += 1
        if evals[0] > max_evals:
            raise QuadratureFailure(
                f"adaptive Simpson exceeded its budget of {max_evals} evaluations"
            )
        return f(x)

    fa, fb = ev(a), ev(b)
    m = 0.5 * (a + b)
    fm = ev(m)
    whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0
    scale = max(abs(whole), abs_tol / max(rel_tol, 1e-300))

    def recurse(x0: float, x2: float, f0: float, f1: float, f2: float,
                s: float, tol: float, depth: int) -> float:
        xm = 0.5 * (x0 + x2)
        lm, rm = 0.5 * (x0 + xm), 0.5 * (xm + x2)
        flm, frm = ev(lm), ev(rm)
        h = x2 - x0
        left = h * (f0 + 4.0 * flm + f1) / 12.0
        right = h * (f1 + 4.0 * frm + f2) / 12.0
        s2 = left + right
        err = s2 - s
        if depth > 60 or abs(err) <= 15.0 * tol:
            return s2 + err / 15.0
        half = 0.5 * tol
        return (recurse(x0, xm, f0, flm, f1, left, half, depth + 1)
                + recurse(xm, x2, f1, frm, f2, right, half, depth + 1))

    tol0 = max(rel_tol * scale, abs_tol)
    return recurse(a, b, fa, fm, fb, whole, tol0, 0)
