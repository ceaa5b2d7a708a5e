import math

import mpmath as mp
import numpy as np
import pytest

from levy2d.geometry import Region, in_omega2_plus, region_labels
from levy2d.integrand import BudgetExceededError
from levy2d.quadrature import (
    PRINTED_ZETAS,
    PIECES,
    PUBLISHED_LEVY,
    PUBLISHED_MU_S3,
    ZetaConstants,
    base_domain_area,
    integrate_outer,
    levy_constant,
)

MU_S3 = 3.4927798386570283  # tol 1e-9 run, error estimate ~4e-12


def _one(a1, a2, b, region):
    return np.ones_like(a1)


def test_published_constant_from_printed_numerals():
    assert levy_constant(PUBLISHED_MU_S3, PRINTED_ZETAS) == pytest.approx(PUBLISHED_LEVY, rel=1e-11)


def test_correct_zetas():
    z = ZetaConstants()
    assert z.zeta2 == pytest.approx(1.6449340668482264, rel=1e-16)
    assert z.zeta3 == pytest.approx(1.2020569031595942, rel=1e-16)
    k = levy_constant(PUBLISHED_MU_S3)
    assert k == pytest.approx(1.1322238684574906, rel=1e-12)
    # the printed numerals differ from the true values in the fifth digit of zeta(2)
    assert abs(k - PUBLISHED_LEVY) / PUBLISHED_LEVY > 2e-3


def test_levy_constant_rejects_nonpositive():
    with pytest.raises(ValueError):
        levy_constant(0.0)


def test_area_of_base_domain():
    res = integrate_outer(1e-12, integrand=_one)
    assert res.value == pytest.approx(base_domain_area(), abs=1e-13)
    cap = (math.pi / 3 - math.sqrt(3) / 2) / 2
    assert res.region_breakdown["III"] == pytest.approx(cap, abs=1e-13)


def test_pieces_map_into_their_regions(rng):
    for piece in PIECES:
        u, v = rng.uniform(1e-3, 1 - 1e-3, (2, 2000))
        a1, a2, jac = piece.map(u, v)
        a = a1 + 1j * a2
        assert np.all(jac > 0)
        assert np.all(in_omega2_plus(a))
        assert np.all(region_labels(a) == piece.region)


def test_moments_against_mpmath():
    mp.mp.dps = 30
    s3 = mp.sqrt(3) / 2
    res = integrate_outer(1e-12, regions=(Region.III,), integrand=lambda a1, a2, b, r: a2 * b)
    ref = mp.quad(lambda t: (-s3 + mp.sqrt(1 - (t + mp.mpf(1) / 2) ** 2)) ** 2 / 2, [-1, 0])
    assert res.value == pytest.approx(float(ref / 2), rel=1e-12)

    res = integrate_outer(1e-12, integrand=lambda a1, a2, b, r: a1 * a1 * b)
    ref = mp.quad(lambda t: t**2 * mp.sqrt(1 - t**2), [-1, 0]) + mp.quad(
        lambda t: t**2 * (mp.sqrt(1 - t**2) - mp.sqrt(1 - (t - 1) ** 2)), [0, 0.5])
    assert res.value == pytest.approx(float(ref / 2), rel=1e-12)


def test_headline_value():
    res = integrate_outer(1e-5)
    assert res.converged
    assert res.value == pytest.approx(PUBLISHED_MU_S3, rel=1e-4)
    assert res.value == pytest.approx(MU_S3, abs=1e-9)
    assert res.error_estimate <= 1e-5
    assert sum(res.region_breakdown.values()) == pytest.approx(res.value, rel=1e-15)
    assert all(v > 0 for v in res.region_breakdown.values())


def test_single_region_equals_breakdown():
    full = integrate_outer(1e-7)
    for reg in Region:
        part = integrate_outer(1e-7, regions=(reg,))
        assert part.value == pytest.approx(full.region_breakdown[reg.name], abs=1e-8)


def test_deterministic():
    assert integrate_outer(1e-6).as_dict() == integrate_outer(1e-6).as_dict()


def test_coarse_tolerance_contract():
    for tol in (1e-2, 1e-5):
        res = integrate_outer(tol)
        assert res.error_estimate <= tol
        assert abs(res.value - MU_S3) <= tol


def test_budget_exceeded_carries_estimate():
    with pytest.raises(BudgetExceededError) as exc:
        integrate_outer(1e-16, budget=1)
    est = exc.value.estimate
    assert not est.converged
    assert est.value == pytest.approx(MU_S3, rel=1e-9)


def test_a2_cutoff_converges_linearly():
    full = integrate_outer(1e-10).value
    gaps = [(full - integrate_outer(1e-10, a2_min=e).value) / e for e in (1e-3, 1e-4)]
    assert all(g > 0 for g in gaps)
    assert gaps[0] == pytest.approx(gaps[1], rel=0.05)


def test_invalid_tolerance():
    with pytest.raises(ValueError):
        integrate_outer(0.0)


def test_threaded_pieces_identical():
    assert integrate_outer(1e-6, workers=3).value == integrate_outer(1e-6).value
