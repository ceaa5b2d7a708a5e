"""Outer integration over the upper base domain and assembly of the constant.

The base domain splits into three curvilinear triangles along the circles
|a - xi| = 1 and |a + xi| = 1.  In polar coordinates about the origin every
boundary arc is a coordinate curve:

    |a| = 1          ->  r = 1
    |a - 1| = 1      ->  r = 2 cos(phi)
    |a - xi| = 1     ->  r = 2 cos(phi - pi/3)
    |a + xi| = 1     ->  r = -2 cos(phi - pi/3)

Regions I and II are covered by five polar pieces phi in [phi0, phi1],
r in [r_lo(phi), r_hi(phi)].  Region III is the upper half of the disk
|a + xi| < 1 and is done in Cartesian form, a1 in [-1, 0] and
a2 in [a2_min, -sqrt(3)/2 + sqrt(1 - (a1 + 1/2)^2)], so that a cutoff a2 >= a2_min
stays a smooth coordinate bound.  Each piece is mapped onto the unit cube together
with b in [0, 1] and integrated by adaptive tensor Gauss-Kronrod cubature.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .geometry import Region
from .integrand import BudgetExceededError, inner_integrand_arrays

PI = math.pi


@dataclass(frozen=True)
class ZetaConstants:
    zeta2: float = PI * PI / 6.0
    zeta3: float = 1.2020569031595942854


# numerals exactly as printed next to the published constant (labels swapped there)
PRINTED_ZETAS = ZetaConstants(zeta2=1.2020569031, zeta3=1.649340668)
PUBLISHED_MU_S3 = 3.49277983865703
PUBLISHED_LEVY = 1.13525697416719


def levy_constant(mu_s3: float, zetas: ZetaConstants = ZetaConstants()) -> float:
    """2 zeta(2) zeta(3) / (3 mu_S); the argument is 3 mu_S itself."""
    if not mu_s3 > 0.0:
        raise ValueError("mu_s3 must be positive")
    return 2.0 * zetas.zeta2 * zetas.zeta3 / mu_s3


@dataclass(frozen=True)
class Piece:
    region: Region
    phi0: float
    phi1: float
    r_lo: Callable[[np.ndarray], np.ndarray]
    r_hi: Callable[[np.ndarray], np.ndarray]

    def map(self, u, v, a2_min: float = 0.0):
        """Unit square -> (a1, a2, jacobian)."""
        dphi = self.phi1 - self.phi0
        phi = self.phi0 + u * dphi
        r0 = self.r_lo(phi)
        r1 = self.r_hi(phi)
        r = r0 + v * (r1 - r0)
        return r * np.cos(phi), r * np.sin(phi), dphi * (r1 - r0) * r


S3 = math.sqrt(3.0) / 2.0


@dataclass(frozen=True)
class HalfDiskPiece:
    """Region III: {|a + xi| < 1, a2 >= a2_min} in Cartesian coordinates."""

    region: Region = Region.III

    def map(self, u, v, a2_min: float = 0.0):
        half_width = math.sqrt(max(0.0, 1.0 - (a2_min + S3) ** 2))
        a1 = -0.5 - half_width + u * 2.0 * half_width
        top = -S3 + np.sqrt(np.maximum(0.0, 1.0 - (a1 + 0.5) ** 2))
        a2 = a2_min + v * (top - a2_min)
        return a1, a2, 2.0 * half_width * (top - a2_min)


def _zero(phi):
    return np.zeros_like(phi)


def _one(phi):
    return np.ones_like(phi)


def _circle_1(phi):
    return 2.0 * np.cos(phi)


def _circle_xi(phi):
    return 2.0 * np.cos(phi - PI / 3.0)


def _circle_mxi(phi):
    return -2.0 * np.cos(phi - PI / 3.0)


PIECES = (
    Piece(Region.I, PI / 3.0, PI / 2.0, _circle_1, _one),
    Piece(Region.I, PI / 2.0, 2.0 * PI / 3.0, _zero, _one),
    Piece(Region.I, 2.0 * PI / 3.0, 5.0 * PI / 6.0, _zero, _circle_xi),
    Piece(Region.II, 2.0 * PI / 3.0, 5.0 * PI / 6.0, _circle_xi, _one),
    Piece(Region.II, 5.0 * PI / 6.0, PI, _circle_mxi, _one),
    HalfDiskPiece(),
)


@dataclass
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int
    max_depth: int
    region_breakdown: dict[str, float] = field(default_factory=dict)
    region_errors: dict[str, float] = field(default_factory=dict)
    converged: bool = True

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "error_estimate": self.error_estimate,
            "evaluations": self.evaluations,
            "max_depth": self.max_depth,
            "region_breakdown": dict(self.region_breakdown),
            "region_errors": dict(self.region_errors),
            "converged": self.converged,
        }


def _piece_integrand(piece, f, a2_min: float, counter: list):
    cut = a2_min if piece.region == Region.III else 0.0

    def g(x):
        a1, a2, jac = piece.map(x[:, 0], x[:, 1], cut)
        b = x[:, 2]
        counter[0] += len(x)
        out = np.zeros(len(x))
        live = jac > 0.0
        if np.any(live):
            out[live] = jac[live] * f(a1[live], a2[live], b[live], piece.region)
        return out

    return g


def _depth(res) -> int:
    depth = 0
    for reg in getattr(res, "regions", []):
        width = float(np.min(np.asarray(reg.b) - np.asarray(reg.a)))
        if width > 0:
            depth = max(depth, int(round(-math.log2(width))))
    return depth


def integrate_outer(
    tol: float = 1e-5,
    budget: int = 2000,
    regions=(Region.I, Region.II, Region.III),
    *,
    a2_min: float = 0.0,
    integrand=None,
    literal_x: bool | None = None,
    workers: int = 1,
) -> QuadratureResult:
    """Adaptive estimate of 3 mu_S = int_{upper base} da int_0^1 db inner_integrand(a, b).

    ``tol`` is an absolute error target shared equally between the pieces;
    ``budget`` caps the subdivisions of each piece.  ``integrand(a1, a2, b,
    region)`` replaces the closed form (used to integrate test functions with
    the same machinery).  ``a2_min`` cuts region III to a2 >= a2_min; regions
    I and II meet the a2 = 0 axis only at the corners 0 and -1, where the
    excluded area is O(a2_min^2), so they are left whole.
    """
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    wanted = {Region(r) for r in regions}
    pieces = [p for p in PIECES if p.region in wanted]
    if integrand is None:

        def integrand(a1, a2, b, region):
            return inner_integrand_arrays(a1, a2, b, int(region), literal_x)

    piece_tol = tol / len(pieces)

    def run(piece):
        counter = [0]
        g = _piece_integrand(piece, integrand, a2_min, counter)
        res = integrate.cubature(
            g, [0.0, 0.0, 0.0], [1.0, 1.0, 1.0], rule="gk21", atol=piece_tol, rtol=0.0,
            max_subdivisions=budget,
        )
        return res, counter[0]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            outcomes = list(ex.map(run, pieces))
    else:
        outcomes = [run(p) for p in pieces]

    breakdown = {r.name: 0.0 for r in sorted(wanted)}
    errors = {r.name: 0.0 for r in sorted(wanted)}
    evals = depth = 0
    converged = True
    # fixed reduction order: pieces in declaration order
    for piece, (res, n) in zip(pieces, outcomes):
        breakdown[piece.region.name] += float(res.estimate)
        errors[piece.region.name] += float(res.error)
        evals += n
        depth = max(depth, _depth(res))
        converged &= res.status == "converged"
    value = 0.0
    for name in breakdown:
        value += breakdown[name]
    result = QuadratureResult(value, sum(errors.values()), evals, depth, breakdown, errors, converged)
    if not converged:
        raise BudgetExceededError(
            f"subdivision budget {budget} exhausted before tol={tol}",
            estimate=result,
            error=result.error_estimate,
        )
    return result


def base_domain_area() -> float:
    """Analytic area of the upper base domain, pi/6 + sqrt(3)/4."""
    return PI / 6.0 + math.sqrt(3.0) / 4.0
