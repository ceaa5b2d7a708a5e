"""Best simultaneous approximations by brute-force scan, and empirical Levy constants.

A record is a denominator q whose Euclidean distance ||q theta - p|| to the
nearest integer vector is strictly below that of every smaller q.  The scan
is O(q_max) per theta and runs in numba, in parallel over theta.

Two estimators of lim (1/n) ln q_n are returned:

* ``count`` (the reported mean): records are counted in the fixed window
  q_min < q <= q_max and K = ln(q_max / q_min) / mean(count).  For a
  stationary renewal process the expected number of renewals in a window of
  length L is L / mu exactly, so this has no stopping-time bias.
* ``slope``: the per-theta slope (ln q_N - ln q_m) / (N - m) after discarding
  m = burn_in records, averaged over theta.  It drops the interval that
  straddles q_max and so runs low at accessible q_max.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field

import numba
import numpy as np

# the system TBB is too old for numba and warns on every first parallel call
if "NUMBA_THREADING_LAYER" not in os.environ and "NUMBA_THREADING_LAYER_PRIORITY" not in os.environ:
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

MAX_RECORDS = 512
LEVY_1D = math.pi**2 / (12.0 * math.log(2.0))


@dataclass(frozen=True)
class BestApproxRecord:
    q: int
    p: tuple[int, ...]
    dist: float


@dataclass
class LevyEstimate:
    mean: float
    stderr: float
    thetas: int
    q_max: int
    burn_in: int
    seed: int
    d: int = 2
    q_min: int = 10
    slope_mean: float = math.nan
    slope_stderr: float = math.nan
    resampled: int = 0
    diagnostics: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {k: getattr(self, k) for k in (
            "mean", "stderr", "thetas", "q_max", "burn_in", "seed", "d", "q_min",
            "slope_mean", "slope_stderr", "resampled")}
        out["diagnostics"] = dict(self.diagnostics)
        return out


@numba.njit(cache=True)
def _scan(theta, q_max, qs, ds):
    # squared distances; the second coordinate is only looked at when the first is small enough
    d = theta.shape[0]
    best = np.inf
    n = 0
    for q in range(1, q_max + 1):
        x = q * theta[0]
        e = x - np.rint(x)
        s = e * e
        if s >= best:
            continue
        for j in range(1, d):
            y = q * theta[j]
            f = y - np.rint(y)
            s += f * f
        if s < best:
            best = s
            if n >= qs.shape[0]:
                return -1
            qs[n] = q
            ds[n] = math.sqrt(s)
            n += 1
    return n


@numba.njit(parallel=True, cache=True)
def _batch(thetas, q_max, q_min, burn_in, counts, nrec, slopes):
    for i in numba.prange(thetas.shape[0]):
        qs = np.empty(MAX_RECORDS, dtype=np.int64)
        ds = np.empty(MAX_RECORDS)
        n = _scan(thetas[i], q_max, qs, ds)
        nrec[i] = n
        c = 0
        for k in range(max(n, 0)):
            if qs[k] > q_min:
                c += 1
        counts[i] = c
        if n - burn_in >= 2:
            slopes[i] = (math.log(qs[n - 1]) - math.log(qs[burn_in - 1])) / (n - burn_in)
        else:
            slopes[i] = np.nan


def best_approximations(theta, q_max: int) -> list[BestApproxRecord]:
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if q_max < 2:
        raise ValueError("q_max must be >= 2")
    qs = np.empty(MAX_RECORDS, dtype=np.int64)
    ds = np.empty(MAX_RECORDS)
    n = _scan(theta, int(q_max), qs, ds)
    if n < 0:
        raise RuntimeError("record buffer overflow")
    return [
        BestApproxRecord(int(q), tuple(int(v) for v in np.rint(q * theta)), float(dist))
        for q, dist in zip(qs[:n], ds[:n])
    ]


def _theta_rng(seed: int):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def sample_thetas(d: int, thetas: int, seed: int) -> np.ndarray:
    return _theta_rng(seed).random((thetas, d))


def levy_estimate(
    d: int,
    thetas: int,
    q_max: int,
    burn_in: int = 3,
    seed: int = 0,
    *,
    q_min: int = 10,
    threads: int | None = None,
    return_thetas: bool = False,
):
    """Empirical Levy constant from ``thetas`` uniform random vectors in [0, 1)^d.

    theta with fewer than burn_in + 2 records is replaced by a fresh draw from
    the same stream; both estimators use the final set of theta.
    """
    if d not in (1, 2):
        raise ValueError("d must be 1 or 2")
    if burn_in < 1 or not (1 <= q_min < q_max):
        raise ValueError("need burn_in >= 1 and 1 <= q_min < q_max")
    if threads:
        numba.set_num_threads(int(threads))
    rng = _theta_rng(seed)
    th = rng.random((thetas, d))
    counts = np.empty(thetas, dtype=np.int64)
    nrec = np.empty(thetas, dtype=np.int64)
    slopes = np.empty(thetas)
    _batch(th, int(q_max), int(q_min), int(burn_in), counts, nrec, slopes)
    if np.any(nrec < 0):
        raise RuntimeError("record buffer overflow")
    resampled = 0
    bad = np.flatnonzero(nrec < burn_in + 2)
    while len(bad):
        resampled += len(bad)
        th[bad] = rng.random((len(bad), d))
        c, n, s = np.empty(len(bad), np.int64), np.empty(len(bad), np.int64), np.empty(len(bad))
        _batch(th[bad], int(q_max), int(q_min), int(burn_in), c, n, s)
        counts[bad], nrec[bad], slopes[bad] = c, n, s
        bad = bad[n < burn_in + 2]
    cnt = counts.astype(float)
    L = math.log(q_max / q_min)
    cbar = float(cnt.mean())
    K = L / cbar
    K_se = float(K * cnt.std(ddof=1) / cbar / math.sqrt(thetas))
    est = LevyEstimate(
        K, K_se, thetas, int(q_max), burn_in, seed, d, q_min,
        float(slopes.mean()), float(slopes.std(ddof=1) / math.sqrt(thetas)), int(resampled),
        {"mean_records": float(nrec.mean()), "mean_window_count": cbar, "window_log_length": L},
    )
    return (est, th) if return_thetas else est


def dump_records(path, thetas: np.ndarray, q_max: int) -> None:
    """CSV with columns theta_1[, theta_2], n, q, dist."""
    thetas = np.atleast_2d(thetas)
    d = thetas.shape[1]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"theta_{j + 1}" for j in range(d)] + ["n", "q", "dist"])
        for th in thetas:
            for n, rec in enumerate(best_approximations(th, q_max), start=1):
                w.writerow([repr(float(t)) for t in th] + [n, rec.q, repr(rec.dist)])


def continued_fraction_denominators(theta, q_max: int) -> list[int]:
    """Distinct convergent denominators <= q_max of the exact rational value of a float."""
    from fractions import Fraction

    x = Fraction(float(theta))
    q_prev, q = 0, 1
    out = [1]
    x = x - math.floor(x)
    while x != 0:
        x = 1 / x
        a = math.floor(x)
        x -= a
        q_prev, q = q, a * q + q_prev
        if q > q_max:
            break
        if q != out[-1]:
            out.append(q)
    return out
