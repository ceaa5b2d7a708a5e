"""Closed-form inner integrand of the reduced triple integral, and its 2D oracle.

``inner_integrand(a, b)`` is the per-(a, b) integrand of 3*mu_S: a signed sum,
over the horizontal edges of F(a, b), of a logarithmic term in the
half-angle variable tau.  ``inner_oracle(a, b)`` computes the same quantity as
2*pi/(1 - a1 b) times the area integral of Xi^-2 over F(a, b).

Setting the environment variable ``LEVY2D_LITERAL_X=1`` (or passing
``literal_x=True``) switches the x-denominator to the misprinted form
phi_+ * tau_+ tau_- phi_- - a2 b (tau_+ + tau_-).  It exists only as a
negative control for the oracle comparison.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .fundamental_domain import build_F, row_arrays, _check_inputs
from .geometry import DomainError, as_complex, tau_of_c1

SERIES_THRESHOLD = 1e-4


class SingularInputError(DomainError):
    pass


class BudgetExceededError(RuntimeError):
    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


def literal_x_enabled() -> bool:
    return os.environ.get("LEVY2D_LITERAL_X", "").strip().lower() in ("1", "true", "yes", "on")


def xi(a, b, c1, c3):
    """Xi = (1 - a1 b) sqrt(1 - c1^2) - a2 (b c1 - c3)."""
    z = as_complex(a)
    c1 = np.asarray(c1, dtype=float)
    if np.any(np.abs(c1) > 1.0):
        raise DomainError("xi needs |c1| <= 1")
    a1, a2 = np.real(z), np.imag(z)
    out = (1.0 - a1 * b) * np.sqrt(1.0 - c1 * c1) - a2 * (b * c1 - c3)
    return out[()] if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class InnerTerm:
    phi_plus: float
    phi_minus: float
    D: float
    tau_minus: float
    tau_plus: float
    x: float


def x_value(t: InnerTerm, a2b: float, literal: bool | None = None) -> float:
    literal = literal_x_enabled() if literal is None else literal
    den = _x_denominator(t.phi_plus, t.phi_minus, t.tau_plus, t.tau_minus, a2b, literal)
    if den == 0.0:
        raise SingularInputError("zero x-denominator")
    return (t.tau_plus - t.tau_minus) * math.sqrt(t.D) / den


def _x_denominator(pp, pm, tp, tm, a2b, literal):
    if literal:
        return pp * tp * tm * pm - a2b * (tp + tm)
    return pp - tp * tm * pm - a2b * (tp + tm)


def log_kernel(x):
    """(1/x) ln((1-x)/(1+x)) = -2 artanh(x)/x, with the even series near 0."""
    x = np.asarray(x, dtype=float)
    if np.any(~(np.abs(x) < 1.0)):
        raise DomainError("log_kernel needs |x| < 1")
    small = np.abs(x) < SERIES_THRESHOLD
    xs = np.where(small, 0.5, x)
    direct = -2.0 * np.arctanh(xs) / xs
    x2 = x * x
    series = -2.0 * (1.0 + x2 / 3.0 + x2 * x2 / 5.0 + x2 * x2 * x2 / 7.0)
    out = np.where(small, series, direct)
    return out[()] if out.ndim == 0 else out


def inner_terms(a, b: float) -> list[tuple[int, float, InnerTerm]]:
    """(sign, c3, InnerTerm) for every edge row of F(a, b)."""
    z, reg = _check_inputs(a, b)
    a1, a2 = z.real, z.imag
    out = []
    for c3, sign, cm, cp in row_arrays(z, b, int(reg)):
        c3 = float(c3)
        tm, tp = float(tau_of_c1(cm)), float(tau_of_c1(cp))
        pp = 1.0 - a1 * b + a2 * c3
        pm = 1.0 - a1 * b - a2 * c3
        D = (1.0 - a1 * b) ** 2 + a2 * a2 * (b * b - c3 * c3)
        den = _x_denominator(pp, pm, tp, tm, a2 * b, False)
        x = (tp - tm) * math.sqrt(D) / den
        out.append((sign, c3, InnerTerm(pp, pm, D, tm, tp, x)))
    return out


def inner_integrand_arrays(a1, a2, b, region: int, literal_x: bool | None = None):
    """Vectorized integrand of 3*mu_S for arrays of (a1, a2, b) in one region.

    Points are used as given; the region's closed form is analytic across the
    region boundary, so no classification is done here.
    """
    literal = literal_x_enabled() if literal_x is None else literal_x
    a1 = np.asarray(a1, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    b = np.asarray(b, dtype=float)
    one_m = 1.0 - a1 * b
    pref = 2.0 * math.pi / (one_m * one_m + a2 * a2 * b * b)
    total = np.zeros(np.broadcast(a1, a2, b).shape)
    for c3, sign, cm, cp in row_arrays(a1 + 1j * a2, b, region):
        tm, tp = tau_of_c1(cm), tau_of_c1(cp)
        pp = one_m + a2 * c3
        pm = one_m - a2 * c3
        D = one_m * one_m + a2 * a2 * (b * b - c3 * c3)
        den = _x_denominator(pp, pm, tp, tm, a2 * b, literal)
        x = (tp - tm) * np.sqrt(D) / den
        total = total + sign * pref * c3 * (tp - tm) / den * log_kernel(x)
    return total


def inner_integrand(a, b: float, literal_x: bool | None = None) -> float:
    z, reg = _check_inputs(a, b)
    return float(inner_integrand_arrays(z.real, z.imag, b, int(reg), literal_x))


def inner_oracle(a, b: float, tol: float = 1e-10, max_subdivisions: int = 10000) -> float:
    """2 pi/(1 - a1 b) times the integral of Xi^-2 over F(a, b), by adaptive cubature.

    F is split into rectangles; on each, c1 = sin(t) removes the square-root
    endpoint behaviour of Xi at |c1| = 1.
    """
    z, _ = _check_inputs(a, b)
    a1, a2 = z.real, z.imag
    F = build_F(z, b)
    one_m = 1.0 - a1 * b

    def f(x):
        t, c3 = x[:, 0], x[:, 1]
        ct = np.cos(t)
        val = one_m * ct - a2 * (b * np.sin(t) - c3)
        return ct / (val * val)

    total = 0.0
    for x0, x1, y0, y1 in F.rectangles():
        t0 = math.asin(max(-1.0, min(1.0, x0)))
        t1 = math.asin(max(-1.0, min(1.0, x1)))
        res = integrate.cubature(
            f, [t0, y0], [t1, y1], rule="gk21", rtol=tol, atol=0.0, max_subdivisions=max_subdivisions
        )
        if res.status != "converged":
            raise BudgetExceededError(
                "inner_oracle did not reach tolerance", estimate=res.estimate, error=res.error
            )
        total += float(res.estimate)
    return 2.0 * math.pi / one_m * total
