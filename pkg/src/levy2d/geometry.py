"""Planar geometry of the base domain.

Points ``a`` of the base domain are handled as complex numbers ``a1 + 1j*a2``
(scalars or numpy arrays); :class:`ParamPoint` is accepted wherever a point is.
All functions are pure and vectorize over numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Union

import numpy as np

# sixth root of unity in the first quadrant
XI = complex(0.5, math.sqrt(3.0) / 2.0)


class DomainError(ValueError):
    """Input outside the domain where a geometric quantity is defined."""


class Region(IntEnum):
    I = 1
    II = 2
    III = 3


@dataclass(frozen=True)
class ParamPoint:
    a1: float
    a2: float

    @property
    def z(self) -> complex:
        return complex(self.a1, self.a2)

    def in_omega2(self) -> bool:
        return in_omega2(self.z)

    def in_omega2_plus(self) -> bool:
        return in_omega2_plus(self.z)

    @property
    def region(self) -> Region:
        return classify_region(self.z)


PointLike = Union[ParamPoint, complex, np.ndarray]


def as_complex(a):
    if isinstance(a, ParamPoint):
        return a.z
    if isinstance(a, tuple):
        return complex(a[0], a[1])
    if isinstance(a, np.ndarray):
        return a.astype(complex, copy=False)
    return complex(a)


def in_omega2(a):
    a = as_complex(a)
    return (np.abs(a) < 1.0) & (np.abs(a - 1.0) >= 1.0)


def in_omega2_plus(a):
    a = as_complex(a)
    return in_omega2(a) & (np.imag(a) >= 0.0)


def chi(a: PointLike, branch: int = 1):
    """Intersection of the unit circles centred at 0 and at ``a``.

    ``branch=+1`` gives chi_+, ``branch=-1`` gives chi_-.
    """
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    a = as_complex(a)
    r = np.abs(a)
    if np.any(r == 0.0) or np.any(r >= 2.0):
        raise DomainError("chi needs 0 < |a| < 2")
    return a / 2.0 + branch * 1j * (a / r) * np.sqrt(1.0 - r * r / 4.0)


def kappa(a: PointLike):
    """Real part of chi_+(a): a1/2 - (a2/|a|) sqrt(1 - |a|^2/4)."""
    a = as_complex(a)
    r = np.abs(a)
    if np.any(r == 0.0) or np.any(r >= 2.0):
        raise DomainError("kappa needs 0 < |a| < 2")
    return np.real(a) / 2.0 - (np.imag(a) / r) * np.sqrt(1.0 - r * r / 4.0)


def tau_of_c1(c1):
    """Inverse of c1 = 2 tau / (1 + tau^2) on [-1, 1].

    Evaluated as c1 / (1 + sqrt(1 - c1^2)), which is the rationalised form of
    (1 - sqrt(1 - c1^2)) / c1 and is regular at c1 = 0.
    """
    c1 = np.asarray(c1, dtype=float)
    if np.any(np.abs(c1) > 1.0):
        raise DomainError("tau_of_c1 needs |c1| <= 1")
    out = c1 / (1.0 + np.sqrt(1.0 - c1 * c1))
    return out[()] if out.ndim == 0 else out


def c1_of_tau(tau):
    tau = np.asarray(tau, dtype=float)
    out = 2.0 * tau / (1.0 + tau * tau)
    return out[()] if out.ndim == 0 else out


def tau_of_a(a: PointLike):
    """tau(kappa(a)) in closed form.

    With r = |a| and w = sqrt(4 - r^2), 1 - kappa^2 = ((a2 r + a1 w) / 2r)^2, so
    the root sign is sgn(a2 r + a1 w). Rationalized to avoid the cancellation in
    r^2 + 2 s a2.
    """
    a = as_complex(a)
    a1, a2 = np.real(a), np.imag(a)
    r = np.abs(a)
    if np.any(r == 0.0) or np.any(r >= 2.0):
        raise DomainError("tau_of_a needs 0 < |a| < 2")
    w = np.sqrt(4.0 - r * r)
    out = (a1 * r - a2 * w) / (2.0 * r + np.abs(a2 * r + a1 * w))
    return out[()] if np.ndim(out) == 0 else out


def tau_of_a_sgn_a1(a: PointLike):
    """The closed form with sgn(a1) as root sign (sgn(0) = +1).

    Kept for comparison: it picks the wrong root where a1 < 0 < a2 r + a1 w.
    """
    a = as_complex(a)
    a1, a2 = np.real(a), np.imag(a)
    r = np.abs(a)
    s = np.where(a1 >= 0.0, 1.0, -1.0)
    out = (2.0 * a1 - s * r * np.sqrt(4.0 - r * r)) / (r * r + 2.0 * s * a2)
    return out[()] if np.ndim(out) == 0 else out


def region_labels(a):
    """Vectorized region labels (1, 2, 3) without domain checks.

    Region II is closed: points with |a - xi| = 1 or |a + xi| = 1 go to II.
    """
    a = as_complex(a)
    lab = np.full(np.shape(a), int(Region.II))
    lab = np.where(np.abs(a + XI) < 1.0, int(Region.III), lab)
    lab = np.where(np.abs(a - XI) < 1.0, int(Region.I), lab)
    return lab


def classify_region(a: PointLike) -> Region:
    z = as_complex(a)
    if np.ndim(z) != 0:
        raise TypeError("classify_region takes a single point; use region_labels")
    if not in_omega2_plus(z):
        raise DomainError(f"{z} is not in the upper base domain")
    return Region(int(region_labels(z)))


def enumerate_overlapping_translates(a: PointLike, b: float, bound: int = 4) -> set[tuple[int, int]]:
    """All nonzero (m, n), |m|, |n| <= bound, with C_{mu+nv} meeting C_0 in an open set.

    The translate by m*u + n*v has horizontal centre m + n*a and height m*b + n;
    two unit cylinders overlap with nonempty interior iff both offsets are < 2.
    """
    z = as_complex(a)
    if bound < 2:
        raise ValueError("bound must be >= 2")
    out = set()
    for m in range(-bound, bound + 1):
        for n in range(-bound, bound + 1):
            if (m, n) == (0, 0):
                continue
            if abs(m + n * z) < 2.0 and abs(m * b + n) < 2.0:
                out.add((m, n))
    return out


def lemma_translates(a: PointLike) -> set[tuple[int, int]]:
    """The translate set predicted by the cylinder-pair lemma (as (m, n) pairs)."""
    z = as_complex(a)
    base = {(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1), (-1, 1), (1, -1)}
    if abs(2 * z - 1) < 2.0:
        base |= {(-1, 2), (1, -2)}
    return base
