"""The rectilinear fundamental domain F(a, b) in the (c1, c3) plane.

F(a, b) is a bounding rectangle with up to four corner rectangles removed.
The removed corners follow the bracket conventions

    NW(x, y) = [x_min, x) x (y, y_max]     NE(x, y) = (x, x_max] x (y, y_max]
    SW(x, y) = [x_min, x) x [y_min, y)     SE(x, y) = (x, x_max] x [y_min, y)

Besides construction and queries, this module carries two brute-force
oracles: a plane-tiling test and a direct lattice/cylinder membership test.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    XI,
    DomainError,
    Region,
    as_complex,
    kappa,
    region_labels,
)

BOUNDARY_EPS = 1e-12


class DegenerateInputError(DomainError):
    """b in {0, 1}, or a on a region boundary / outside the open base domain."""


@dataclass(frozen=True)
class CornerCut:
    quadrant: str
    x: float
    y: float

    def __post_init__(self):
        if self.quadrant not in ("NW", "NE", "SW", "SE"):
            raise ValueError(f"unknown quadrant {self.quadrant!r}")


@dataclass(frozen=True)
class RectilinearDomain:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    cuts: tuple[CornerCut, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("empty bounding rectangle")
        for c in self.cuts:
            if not (self.x_min <= c.x <= self.x_max and self.y_min <= c.y <= self.y_max):
                raise ValueError(f"cut {c} leaves the bounding rectangle")

    def cut_box(self, cut: CornerCut) -> tuple[float, float, float, float]:
        x0, x1 = (self.x_min, cut.x) if cut.quadrant[1] == "W" else (cut.x, self.x_max)
        y0, y1 = (cut.y, self.y_max) if cut.quadrant[0] == "N" else (self.y_min, cut.y)
        return x0, x1, y0, y1

    def contains(self, c1, c3):
        c1 = np.asarray(c1, dtype=float)
        c3 = np.asarray(c3, dtype=float)
        inside = (c1 >= self.x_min) & (c1 <= self.x_max) & (c3 >= self.y_min) & (c3 <= self.y_max)
        for cut in self.cuts:
            inside &= ~_in_cut(cut.quadrant, cut.x, cut.y, c1, c3, self.x_min, self.x_max, self.y_min, self.y_max)
        return inside[()] if inside.ndim == 0 else inside

    def area(self) -> float:
        total = (self.x_max - self.x_min) * (self.y_max - self.y_min)
        for cut in self.cuts:
            x0, x1, y0, y1 = self.cut_box(cut)
            total -= (x1 - x0) * (y1 - y0)
        return total

    def rectangles(self) -> list[tuple[float, float, float, float]]:
        """Disjoint axis-aligned rectangles (x0, x1, y0, y1) covering the domain.

        Vertical slabs between consecutive breakpoints, each split into its
        maximal c3 intervals.  Cuts are assumed pairwise disjoint.
        """
        xs = sorted({self.x_min, self.x_max, *(c.x for c in self.cuts)})
        out = []
        for x0, x1 in zip(xs[:-1], xs[1:]):
            if x1 <= x0:
                continue
            xm = 0.5 * (x0 + x1)
            holes = []
            for cut in self.cuts:
                cx0, cx1, cy0, cy1 = self.cut_box(cut)
                if cx0 < xm < cx1 and cy1 > cy0:
                    holes.append((cy0, cy1))
            lo = self.y_min
            for h0, h1 in sorted(holes):
                if h0 > lo:
                    out.append((x0, x1, lo, h0))
                lo = max(lo, h1)
            if self.y_max > lo:
                out.append((x0, x1, lo, self.y_max))
        return out

    def vertices(self) -> list[tuple[float, float]]:
        """Boundary vertices in counter-clockwise order (for CSV dumps)."""
        cut = {c.quadrant: c for c in self.cuts}
        pts = []
        # SW corner going east
        if "SW" in cut:
            c = cut["SW"]
            pts += [(self.x_min, c.y), (c.x, c.y), (c.x, self.y_min)]
        else:
            pts.append((self.x_min, self.y_min))
        if "SE" in cut:
            c = cut["SE"]
            pts += [(c.x, self.y_min), (c.x, c.y), (self.x_max, c.y)]
        else:
            pts.append((self.x_max, self.y_min))
        if "NE" in cut:
            c = cut["NE"]
            pts += [(self.x_max, c.y), (c.x, c.y), (c.x, self.y_max)]
        else:
            pts.append((self.x_max, self.y_max))
        if "NW" in cut:
            c = cut["NW"]
            pts += [(c.x, self.y_max), (c.x, c.y), (self.x_min, c.y)]
        else:
            pts.append((self.x_min, self.y_max))
        dedup = []
        for p in pts:
            if not dedup or not np.allclose(p, dedup[-1], atol=0.0, rtol=0.0):
                dedup.append(p)
        if len(dedup) > 1 and dedup[0] == dedup[-1]:
            dedup.pop()
        return dedup


def _in_cut(quadrant, x, y, c1, c3, x_min, x_max, y_min, y_max):
    # literal bracket conventions; x or y may be NaN for an absent cut
    if quadrant[1] == "W":
        in_x = (c1 >= x_min) & (c1 < x)
    else:
        in_x = (c1 > x) & (c1 <= x_max)
    if quadrant[0] == "N":
        in_y = (c3 > y) & (c3 <= y_max)
    else:
        in_y = (c3 >= y_min) & (c3 < y)
    return in_x & in_y


@dataclass(frozen=True)
class EdgeRow:
    c3: float
    sign: int
    c1_minus: float
    c1_plus: float


# --------------------------------------------------------------------------
# vectorized description shared by build_F, edge_rows, Monte Carlo and quadrature


def domain_arrays(a, b, region):
    """Bounding box and corner cuts of F(a, b) for arrays of points in one or many regions.

    Returns a dict with x_min, x_max, y_min, y_max and, for each quadrant
    "NW", "NE", "SW", "SE", a pair (x, y) of arrays (NaN where absent).
    """
    a = np.asarray(as_complex(a), dtype=complex)
    b = np.asarray(b, dtype=float)
    region = np.asarray(region)
    a, b, region = np.broadcast_arrays(a, b, region)
    ab = np.conj(a)
    nan = np.full(a.shape, np.nan)
    is1, is2, is3 = (region == 1), (region == 2), (region == 3)

    def k(z, mask):
        # kappa only where needed; other lanes get a harmless argument
        return np.where(mask, kappa(np.where(mask, z, 1.0)), np.nan)

    k_am1 = k(a - 1.0, is1)
    k_1mab = k(1.0 - ab, is1)
    k_a = k(a, is2 | is3)
    k_mab = k(-ab, is2 | is3)
    k_abp1 = k(ab + 1.0, is3)
    k_mam1 = k(-a - 1.0, is3)

    half = np.full(a.shape, 0.5)
    x_min = np.select([is1, is2, is3], [k_am1, k_a, -half], np.nan)
    x_max = np.where(is1 | is2 | is3, half, np.nan)
    y_min = np.select([is1, is2, is3], [np.zeros(a.shape), -b, -np.ones(a.shape)], np.nan)
    y_max = np.where(is1 | is2 | is3, 1.0, np.nan)
    cuts = {
        "NW": (np.where(is3, k_a, nan), np.where(is3, 0.0, nan)),
        "NE": (np.where(is3, k_abp1, nan), np.where(is3, b, nan)),
        "SW": (
            np.select([is1 | is2, is3], [-half, k_mam1], np.nan),
            np.select([is1 | is2, is3], [1.0 - b, -b], np.nan),
        ),
        "SE": (
            np.select([is1, is2 | is3], [k_1mab, k_mab], np.nan),
            np.select([is1, is2 | is3], [b, np.zeros(a.shape)], np.nan),
        ),
    }
    return {"x_min": x_min, "x_max": x_max, "y_min": y_min, "y_max": y_max, "cuts": cuts}


def contains_arrays(a, b, region, c1, c3):
    """Vectorized membership (c1, c3) in F(a, b); region given per lane."""
    d = domain_arrays(a, b, region)
    c1 = np.asarray(c1, dtype=float)
    c3 = np.asarray(c3, dtype=float)
    inside = (c1 >= d["x_min"]) & (c1 <= d["x_max"]) & (c3 >= d["y_min"]) & (c3 <= d["y_max"])
    for quad, (x, y) in d["cuts"].items():
        inside &= ~_in_cut(quad, x, y, c1, c3, d["x_min"], d["x_max"], d["y_min"], d["y_max"])
    return inside


def _check_inputs(a, b) -> tuple[complex, Region]:
    z = as_complex(a)
    if not (0.0 < b < 1.0):
        raise DegenerateInputError(f"b={b} must lie in the open interval (0, 1)")
    if not (z.imag > 0.0 and abs(z) < 1.0 and abs(z - 1.0) > 1.0):
        raise DegenerateInputError(f"a={z} is not interior to the upper base domain")
    if abs(abs(z - XI) - 1.0) < BOUNDARY_EPS or abs(abs(z + XI) - 1.0) < BOUNDARY_EPS:
        raise DegenerateInputError(f"a={z} lies on a region boundary")
    return z, Region(int(region_labels(z)))


def build_F(a, b: float) -> RectilinearDomain:
    z, reg = _check_inputs(a, b)
    d = domain_arrays(z, b, int(reg))
    cuts = []
    for quad in ("NW", "NE", "SW", "SE"):
        x, y = (float(v) for v in d["cuts"][quad])
        if not math.isnan(x):
            cuts.append(CornerCut(quad, x, y))
    return RectilinearDomain(
        float(d["x_min"]), float(d["x_max"]), float(d["y_min"]), float(d["y_max"]), tuple(cuts)
    )


def contains(F: RectilinearDomain, c1, c3):
    return F.contains(c1, c3)


def area(F: RectilinearDomain) -> float:
    return F.area()


def row_arrays(a, b, region: int):
    """Edge rows for arrays of (a, b) that share one region.

    Returns a list of (c3, sign, c1_minus, c1_plus) with array entries.
    """
    a = np.asarray(as_complex(a), dtype=complex)
    b = np.asarray(b, dtype=float)
    a, b = np.broadcast_arrays(a, b)
    ab = np.conj(a)
    one = np.ones(b.shape)
    half = 0.5 * one
    if region == Region.I:
        k0, k1 = kappa(a - 1.0), kappa(1.0 - ab)
        return [(one, -1, k0, half), (1.0 - b, 1, k0, -half), (b, 1, k1, half)]
    if region == Region.II:
        k0, k1 = kappa(a), kappa(-ab)
        return [(one, -1, k0, half), (1.0 - b, 1, k0, -half), (-b, 1, -half, k1)]
    if region == Region.III:
        ka, kb, kc, kd = kappa(a), kappa(ab + 1.0), kappa(-a - 1.0), kappa(-ab)
        return [(one, -1, ka, kb), (b, -1, kb, half), (-b, 1, -half, kc), (-one, 1, kc, kd)]
    raise ValueError(f"unknown region {region}")


def edge_rows(a, b: float) -> list[EdgeRow]:
    z, reg = _check_inputs(a, b)
    return [EdgeRow(float(c3), s, float(m), float(p)) for c3, s, m, p in row_arrays(z, b, int(reg))]


def _tile_generators(a1: float, b: float, convention: int):
    return np.array([1.0, b]), np.array([convention * a1, 1.0])


def tiling_check(
    a,
    b: float,
    trials: int = 1000,
    seed: int = 0,
    *,
    F: RectilinearDomain | None = None,
    convention: int = 1,
    boundary_eps: float = 1e-9,
) -> bool:
    """True iff every sampled point has exactly one lattice translate in F.

    The lattice is Z(1, b) + Z(convention * a1, 1), and every shift that can
    reach the bounding box is tried.  ``F`` may be supplied to test a modified
    domain.  Points with a translate within ``boundary_eps`` of an edge line
    are redrawn.
    """
    z = as_complex(a)
    F = build_F(z, b) if F is None else F
    e1, e2 = _tile_generators(z.real, b, convention)
    # every lattice shift that can carry a sample point into F's bounding box
    reach = max(2.0 - F.x_min, 2.0 + F.x_max, 2.0 - F.y_min, 2.0 + F.y_max)
    R = int(math.ceil(np.abs(np.linalg.inv(np.column_stack([e1, e2]))).sum(axis=1).max() * reach)) + 1
    shifts = np.array([m * e1 + n * e2 for m in range(-R, R + 1) for n in range(-R, R + 1)])
    rng = np.random.default_rng(seed)
    kept = []
    n_kept = 0
    while n_kept < trials:
        p = rng.uniform(-2.0, 2.0, size=(2 * trials, 2))
        x = p[:, None, 0] + shifts[None, :, 0]
        y = p[:, None, 1] + shifts[None, :, 1]
        ok = ~_near_boundary(F, x, y, boundary_eps).any(axis=1)
        hits = np.count_nonzero(F.contains(x, y), axis=1)[ok]
        kept.append(hits)
        n_kept += len(hits)
    hits = np.concatenate(kept)[:trials]
    return bool(np.all(hits == 1))


def _near_boundary(F: RectilinearDomain, x, y, eps):
    xs = [F.x_min, F.x_max] + [c.x for c in F.cuts]
    ys = [F.y_min, F.y_max] + [c.y for c in F.cuts]
    near = np.zeros(np.shape(x), dtype=bool)
    for v in xs:
        near |= np.abs(x - v) < eps
    for v in ys:
        near |= np.abs(y - v) < eps
    return near


def distance_to_boundary(F: RectilinearDomain, c1: float, c3: float) -> float:
    """Euclidean distance from (c1, c3) to the boundary of F (exact for rectilinear F)."""
    segs = _boundary_segments(F)
    best = math.inf
    for (x0, y0), (x1, y1) in segs:
        if x0 == x1:
            lo, hi = sorted((y0, y1))
            dy = 0.0 if lo <= c3 <= hi else min(abs(c3 - lo), abs(c3 - hi))
            best = min(best, math.hypot(c1 - x0, dy))
        else:
            lo, hi = sorted((x0, x1))
            dx = 0.0 if lo <= c1 <= hi else min(abs(c1 - lo), abs(c1 - hi))
            best = min(best, math.hypot(dx, c3 - y0))
    return best


def _boundary_segments(F):
    v = F.vertices()
    return list(zip(v, v[1:] + v[:1]))


_BOX_COEFFS_CACHE: dict[int, np.ndarray] = {}


def _coeffs(bound: int) -> np.ndarray:
    if bound not in _BOX_COEFFS_CACHE:
        r = range(-bound, bound + 1)
        c = np.array([t for t in itertools.product(r, r, r) if t != (0, 0, 0)], dtype=float)
        _BOX_COEFFS_CACHE[bound] = c
    return _BOX_COEFFS_CACHE[bound]


def lattice_membership_oracle(a, b: float, c1: float, c2: float, c3: float, bound: int = 3) -> bool:
    """Brute-force test that +-u, +-v are the only nonzero lattice points in the unit cylinder.

    u = (1, 0, b), v = (a1, a2, 1), w = (c1, c2, c3); all combinations
    m u + n v + k w with |m|, |n|, |k| <= bound are checked against the closed
    cylinder max(sqrt(x1^2 + x2^2), |x3|) <= 1.
    """
    z = as_complex(a)
    if not (-c2 > math.sqrt(max(0.0, 1.0 - c1 * c1))):
        raise DomainError("need -c2 > sqrt(1 - c1^2)")
    basis = np.array([[1.0, 0.0, b], [z.real, z.imag, 1.0], [c1, c2, c3]])
    coeffs = _coeffs(bound)
    pts = coeffs @ basis
    inside = np.maximum(np.hypot(pts[:, 0], pts[:, 1]), np.abs(pts[:, 2])) <= 1.0
    allowed = (coeffs[:, 2] == 0) & (np.abs(coeffs[:, 0]) + np.abs(coeffs[:, 1]) == 1)
    return not bool(np.any(inside & ~allowed))

