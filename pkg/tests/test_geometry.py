import math

import numpy as np
import pytest
from conftest import FIGURES, params
from hypothesis import given
from hypothesis import strategies as st

from levy2d.geometry import (
    XI,
    DomainError,
    ParamPoint,
    Region,
    as_complex,
    c1_of_tau,
    chi,
    classify_region,
    enumerate_overlapping_translates,
    in_omega2,
    in_omega2_plus,
    kappa,
    lemma_translates,
    region_labels,
    tau_of_a,
    tau_of_a_sgn_a1,
    tau_of_c1,
)

radii = st.floats(1e-3, 2.0 - 1e-3)
angles = st.floats(0.0, 2 * math.pi)


@given(radii, angles, st.sampled_from([1, -1]))
def test_chi_lies_on_both_unit_circles(r, phi, branch):
    a = r * complex(math.cos(phi), math.sin(phi))
    z = chi(a, branch)
    assert abs(abs(z) - 1) < 1e-12
    assert abs(abs(z - a) - 1) < 1e-12


@given(radii, angles)
def test_chi_minus_real_part_is_kappa_of_conjugate(r, phi):
    a = r * complex(math.cos(phi), math.sin(phi))
    assert chi(a, -1).real == pytest.approx(kappa(a.conjugate()), abs=1e-14)
    assert chi(a, 1).real == pytest.approx(kappa(a), abs=1e-15)


def test_chi_examples():
    assert chi(1.0, 1) == pytest.approx(XI, abs=1e-15)
    assert chi(1.0, -1) == pytest.approx(XI.conjugate(), abs=1e-15)
    assert kappa(1.0) == pytest.approx(0.5, abs=1e-15)


@pytest.mark.parametrize("a", [0.0, 2.0, 2.5j, complex(-1.5, -1.5)])
def test_chi_kappa_domain(a):
    with pytest.raises(DomainError):
        chi(a)
    with pytest.raises(DomainError):
        kappa(a)


def test_chi_rejects_bad_branch():
    with pytest.raises(ValueError):
        chi(0.5, 0)


@given(st.floats(-1.0, 1.0))
def test_tau_round_trip(c1):
    t = tau_of_c1(c1)
    assert -1.0 <= t <= 1.0
    assert c1_of_tau(t) == pytest.approx(c1, abs=1e-14)


def test_tau_regular_at_zero():
    assert tau_of_c1(0.0) == 0.0
    eps = np.array([-1e-12, -1e-300, 1e-300, 1e-12])
    assert np.allclose(tau_of_c1(eps), eps / 2, rtol=1e-12, atol=0)
    assert tau_of_c1(1.0) == 1.0 and tau_of_c1(-1.0) == -1.0


def test_tau_monotone():
    g = np.linspace(-1, 1, 10001)
    assert np.all(np.diff(tau_of_c1(g)) > 0)


def test_tau_domain():
    with pytest.raises(DomainError):
        tau_of_c1(1.0000001)


def test_tau_of_a_examples():
    assert tau_of_a(ParamPoint(0.0, 0.5)) == pytest.approx(-0.774597, abs=1e-6)
    assert kappa(0.5j) == pytest.approx(-0.968246, abs=1e-6)
    assert tau_of_a(1 + 0j) == pytest.approx(2 - math.sqrt(3), abs=1e-15)
    a = complex(-0.9, 0.3)
    assert tau_of_a(a) == pytest.approx(tau_of_c1(kappa(a)), abs=1e-14)


@given(params())
def test_tau_of_a_matches_composition(ab):
    a, _ = ab
    assert abs(tau_of_a(a) - tau_of_c1(kappa(a))) < 1e-12


def test_sgn_a1_form_picks_wrong_root_near_imaginary_axis():
    # a1 < 0 but a2 |a| + a1 sqrt(4 - |a|^2) > 0
    a = complex(-0.0164, 0.9864)
    assert classify_region(a) == Region.I
    assert abs(tau_of_a_sgn_a1(a) - tau_of_c1(kappa(a))) > 0.5
    # both forms agree for a1 >= 0
    b = complex(0.3, 0.2)
    assert tau_of_a_sgn_a1(b) == pytest.approx(tau_of_a(b), abs=1e-14)


def test_base_domain_predicates():
    assert in_omega2(complex(-0.5, -0.2)) and not in_omega2_plus(complex(-0.5, -0.2))
    assert in_omega2_plus(0.0)  # |a - 1| = 1 is included
    assert not in_omega2(complex(0.5, 0.0))
    assert not in_omega2(complex(-1.0, 0.0))
    assert ParamPoint(-0.5, 0.2).in_omega2_plus()


def test_figure_regions():
    for a, _, reg in FIGURES:
        assert classify_region(a) == Region(reg)
        assert ParamPoint(a.real, a.imag).region == Region(reg)


def test_region_II_is_closed():
    on_xi = XI + complex(math.cos(3.6), math.sin(3.6))  # on |a - xi| = 1
    assert in_omega2_plus(on_xi)
    assert classify_region(on_xi) == Region.II
    on_mxi = -XI + complex(math.cos(1.2), math.sin(1.2))
    assert in_omega2_plus(on_mxi)
    assert classify_region(on_mxi) == Region.II


def test_classify_region_errors():
    with pytest.raises(DomainError):
        classify_region(complex(0.5, 0.5))
    with pytest.raises(TypeError):
        classify_region(np.array([0.3j, 0.2j]))


def test_region_labels_partition_grid():
    g = np.linspace(-1, 1, 301)
    A, B = np.meshgrid(g, np.linspace(0, 1, 151))
    a = (A + 1j * B).ravel()
    a = a[in_omega2_plus(a)]
    lab = region_labels(a)
    assert set(np.unique(lab)) == {1, 2, 3}
    assert np.all((lab == 1) == (np.abs(a - XI) < 1))
    assert np.all((lab == 3) == (np.abs(a + XI) < 1))


def test_as_complex_inputs():
    assert as_complex((0.1, 0.2)) == complex(0.1, 0.2)
    assert as_complex(ParamPoint(0.1, 0.2)) == complex(0.1, 0.2)
    assert as_complex(np.array([1.0])).dtype == complex


@given(params())
def test_translates_symmetric_and_contain_lemma_set(ab):
    a, b = ab
    got = enumerate_overlapping_translates(a, b)
    assert got == {(-m, -n) for m, n in got}
    assert lemma_translates(a) <= got
    assert ((-1, 2) in got) == (abs(2 * a - 1) < 2)
    # bound 4 already holds everything
    assert got == enumerate_overlapping_translates(a, b, 6)


def test_extra_translates_for_figure_instance():
    # 2u + v overlaps C_0 when |2 + a| < 2 and 2b + 1 < 2
    a, b = complex(-0.9, 0.3), 0.3
    extra = enumerate_overlapping_translates(a, b) - lemma_translates(a)
    assert extra == {(2, 1), (-2, -1)}
    assert enumerate_overlapping_translates(0.3j, 0.3) == lemma_translates(0.3j)


def test_translates_bound_check():
    with pytest.raises(ValueError):
        enumerate_overlapping_translates(0.3j, 0.3, 1)
