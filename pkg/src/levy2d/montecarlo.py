"""Plain Monte Carlo estimate of mu_S straight from the seven-parameter density.

The angle integral contributes 2 pi, the a2 < 0 half of the base domain
another factor 2, and the c2 integral is done in closed form; what remains is
a five-dimensional integral over (a1, a2, b, c1, c3) of the indicator of
{a in upper base domain, (c1, c3) in F(a, b)} times (4 pi / 3) * tail.

Random numbers come from numpy's Philox (a counter-based generator); block i
uses the i-th child of ``SeedSequence(seed)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .fundamental_domain import contains_arrays, lattice_membership_oracle
from .geometry import DomainError, as_complex, region_labels
from .integrand import xi

# sampling box for (a1, a2, b, c1, c3)
BOX_LO = np.array([-1.0, 0.0, 0.0, -1.0, -1.5])
BOX_HI = np.array([1.0, 1.0, 1.0, 1.0, 1.5])
BOX_VOLUME = float(np.prod(BOX_HI - BOX_LO))
DENSITY_PREFACTOR = 4.0 * math.pi / 3.0

# per-region bounding boxes in (a1, a2) for the stratified variant
REGION_BOXES = {
    1: ((-0.5, 0.5), (0.0, 1.0)),
    2: ((-1.0, 0.0), (0.0, math.sqrt(3.0) / 2.0)),
    3: ((-1.0, 0.0), (0.0, 1.0 - math.sqrt(3.0) / 2.0)),
}


@dataclass
class McEstimate:
    mean: float
    stderr: float
    samples: int
    seed: int
    accepted: int = 0
    diagnostics: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "mean": self.mean,
            "stderr": self.stderr,
            "samples": self.samples,
            "seed": self.seed,
            "accepted": self.accepted,
            "diagnostics": dict(self.diagnostics),
        }


def c2_tail_integral(a, b, c1, c3):
    """int_{sqrt(1-c1^2)}^inf dt / ((1 - a1 b) t - a2 (b c1 - c3))^3 = 1 / (2 (1 - a1 b) Xi^2)."""
    z = as_complex(a)
    x = xi(z, b, c1, c3)
    if np.any(np.asarray(x) <= 0.0):
        raise DomainError("Xi <= 0: point is not in F(a, b)")
    return 1.0 / (2.0 * (1.0 - np.real(z) * b) * x * x)


@dataclass
class _Moments:
    n: int = 0
    mean: float = 0.0
    m2: float = 0.0

    @classmethod
    def of(cls, values: np.ndarray) -> "_Moments":
        n = len(values)
        if n == 0:
            return cls()
        mu = float(np.mean(values))
        return cls(n, mu, float(np.sum((values - mu) ** 2)))

    def merge(self, other: "_Moments") -> "_Moments":
        # Chan et al. pairwise update
        if other.n == 0:
            return self
        if self.n == 0:
            return other
        n = self.n + other.n
        delta = other.mean - self.mean
        mean = self.mean + delta * other.n / n
        m2 = self.m2 + other.m2 + delta * delta * self.n * other.n / n
        return _Moments(n, mean, m2)

    @property
    def variance_of_mean(self) -> float:
        if self.n < 2:
            return math.inf
        return self.m2 / (self.n - 1) / self.n


def _weights(a1, a2, b, c1, c3):
    """(4 pi/3) * tail on accepted points, 0 elsewhere; also returns the acceptance mask."""
    a = a1 + 1j * a2
    ok = (a2 > 0.0) & (np.abs(a) < 1.0) & (np.abs(a - 1.0) >= 1.0)
    reg = region_labels(a)
    ok &= contains_arrays(np.where(ok, a, 0.5j), b, np.where(ok, reg, 2), c1, c3)
    out = np.zeros(a1.shape)
    if np.any(ok):
        one_m = 1.0 - a1[ok] * b[ok]
        x = one_m * np.sqrt(1.0 - c1[ok] ** 2) - a2[ok] * (b[ok] * c1[ok] - c3[ok])
        if np.any(x <= 0.0):
            raise DomainError("Xi <= 0 on an accepted sample")
        out[ok] = DENSITY_PREFACTOR / (2.0 * one_m * x * x)
    return out, ok


def _block_streams(seed: int, blocks: int):
    children = np.random.SeedSequence(seed).spawn(blocks)
    return [np.random.Generator(np.random.Philox(c)) for c in children]


def _audit(rng, a1, a2, b, c1, c3, ok, fraction) -> tuple[int, int]:
    idx = np.flatnonzero(ok)
    if len(idx) == 0 or fraction <= 0.0:
        return 0, 0
    pick = idx[rng.random(len(idx)) < fraction]
    failures = 0
    for i in pick:
        c2 = -(math.sqrt(1.0 - c1[i] ** 2) + rng.uniform(1e-9, 1.0))
        if not lattice_membership_oracle(complex(a1[i], a2[i]), b[i], c1[i], c2, c3[i]):
            failures += 1
    return len(pick), failures


def estimate_mu7(
    samples: int,
    seed: int = 0,
    *,
    block_size: int = 1_000_000,
    audit_fraction: float = 0.0,
) -> McEstimate:
    """Estimate mu_S (not 3 mu_S) with uniform samples from the 5D box."""
    if samples < 2:
        raise ValueError("need at least two samples")
    blocks = -(-samples // block_size)
    total = _Moments()
    accepted = audited = audit_failures = 0
    for i, rng in enumerate(_block_streams(seed, blocks)):
        n = min(block_size, samples - i * block_size)
        u = rng.random((5, n))
        a1, a2, b, c1, c3 = (BOX_LO[:, None] + (BOX_HI - BOX_LO)[:, None] * u)
        w, ok = _weights(a1, a2, b, c1, c3)
        total = total.merge(_Moments.of(BOX_VOLUME * w))
        accepted += int(np.count_nonzero(ok))
        k, f = _audit(rng, a1, a2, b, c1, c3, ok, audit_fraction)
        audited += k
        audit_failures += f
    diag = {"block_size": block_size, "blocks": blocks, "box_volume": BOX_VOLUME}
    if audit_fraction > 0.0:
        diag.update(audited=audited, audit_failures=audit_failures)
    if accepted == 0:
        diag["degenerate"] = True
    return McEstimate(total.mean, math.sqrt(total.variance_of_mean), samples, seed, accepted, diag)


def estimate_mu7_stratified(
    samples: int,
    seed: int = 0,
    *,
    b_strata: int = 4,
    block_size: int = 1_000_000,
) -> McEstimate:
    """Stratified over region (through per-region a-boxes) and equal slices of b.

    Samples are allocated in proportion to stratum volume; each stratum
    estimate is a plain mean within its own box.
    """
    strata = []
    for reg, ((x0, x1), (y0, y1)) in REGION_BOXES.items():
        for j in range(b_strata):
            vol = (x1 - x0) * (y1 - y0) * (1.0 / b_strata) * 2.0 * 3.0
            strata.append((reg, x0, x1, y0, y1, j / b_strata, (j + 1) / b_strata, vol))
    vol_total = sum(s[-1] for s in strata)
    children = np.random.SeedSequence(seed).spawn(len(strata))
    value = var = 0.0
    accepted = 0
    for (reg, x0, x1, y0, y1, b0, b1, vol), child in zip(strata, children):
        rng = np.random.Generator(np.random.Philox(child))
        n_s = max(2, int(round(samples * vol / vol_total)))
        mom = _Moments()
        done = 0
        while done < n_s:
            n = min(block_size, n_s - done)
            a1 = rng.uniform(x0, x1, n)
            a2 = rng.uniform(y0, y1, n)
            b = rng.uniform(b0, b1, n)
            c1 = rng.uniform(-1.0, 1.0, n)
            c3 = rng.uniform(-1.5, 1.5, n)
            w, ok = _weights(a1, a2, b, c1, c3)
            in_reg = region_labels(a1 + 1j * a2) == reg
            w = np.where(in_reg, w, 0.0)
            accepted += int(np.count_nonzero(ok & in_reg))
            mom = mom.merge(_Moments.of(vol * w))
            done += n
        value += mom.mean
        var += mom.variance_of_mean
    return McEstimate(value, math.sqrt(var), samples, seed, accepted, {"strata": len(strata), "b_strata": b_strata})
