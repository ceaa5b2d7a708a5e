import math

import numpy as np
import pytest
from conftest import FIGURES, params
from hypothesis import given
from hypothesis import strategies as st

from levy2d import fundamental_domain as fd
from levy2d.geometry import DomainError, kappa, tau_of_c1
from levy2d.verification import random_params, sample_points_in_F


@given(params())
def test_area(ab):
    a, b = ab
    F = fd.build_F(a, b)
    assert abs(F.area() - (1 - a.real * b)) < 1e-12
    assert fd.area(F) == F.area()


@given(params())
def test_rectangles_are_disjoint_cover(ab):
    a, b = ab
    F = fd.build_F(a, b)
    rects = F.rectangles()
    assert sum((x1 - x0) * (y1 - y0) for x0, x1, y0, y1 in rects) == pytest.approx(F.area(), abs=1e-12)
    rng = np.random.default_rng(0)
    x = rng.uniform(F.x_min, F.x_max, 2000)
    y = rng.uniform(F.y_min, F.y_max, 2000)
    hits = sum(((x > x0) & (x < x1) & (y > y0) & (y < y1)).astype(int) for x0, x1, y0, y1 in rects)
    assert np.all(hits <= 1)
    assert np.array_equal(hits == 1, F.contains(x, y) & (hits == 1))


@given(params())
def test_vertices_counterclockwise_shoelace(ab):
    a, b = ab
    F = fd.build_F(a, b)
    v = np.array(F.vertices())
    x, y = v[:, 0], v[:, 1]
    shoelace = 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
    assert shoelace == pytest.approx(F.area(), abs=1e-12)
    # rectilinear: consecutive vertices share one coordinate
    d = v - np.roll(v, -1, axis=0)
    assert np.all((d[:, 0] == 0) ^ (d[:, 1] == 0))


def test_figure_domains():
    # region I: x in [kappa(a - 1), 1/2], y in [0, 1]
    a, b, _ = FIGURES[0]
    F = fd.build_F(a, b)
    assert (F.x_min, F.x_max) == pytest.approx((kappa(a - 1), 0.5))
    assert F.x_min == pytest.approx(-0.745, abs=5e-4)
    # region II: x in [kappa(a), 1/2], one cut edge at kappa(-conj a)
    a, b, _ = FIGURES[1]
    F = fd.build_F(a, b)
    assert (F.x_min, F.x_max) == pytest.approx((kappa(a), 0.5))
    assert F.x_min == pytest.approx(-0.728, abs=5e-4)
    assert kappa(-a.conjugate()) in [c.x for c in F.cuts]
    # region III: symmetric about c1 = 0 in x extent
    a, b, _ = FIGURES[2]
    F = fd.build_F(a, b)
    assert F.x_min == pytest.approx(-0.5) and F.x_max == pytest.approx(0.5)
    assert {round(c.x, 3) for c in F.cuts} == {-0.346, 0.346, -0.154, 0.154}


def test_cut_brackets():
    F = fd.build_F(*FIGURES[1][:2])
    # left/bottom boundary of the rectangle outside any cut is in F
    assert F.contains(F.x_min, F.y_max)
    for c in F.cuts:
        x0, x1, y0, y1 = F.cut_box(c)
        mx, my = (x0 + x1) / 2, (y0 + y1) / 2
        assert not F.contains(mx, my)
        # the cut's inner vertical edge belongs to F
        assert F.contains(c.x, my)


def test_contains_vectorized_matches_scalar(rng):
    a, b = random_params(rng, 50)
    for z, bb in zip(a, b):
        F = fd.build_F(z, bb)
        x = rng.uniform(-1, 1, 200)
        y = rng.uniform(-1.5, 1.5, 200)
        reg = np.full(200, F.region if hasattr(F, "region") else int(fd._check_inputs(z, bb)[1]))
        vec = fd.contains_arrays(np.full(200, z), np.full(200, bb), reg, x, y)
        assert np.array_equal(vec, F.contains(x, y))
        assert all(bool(fd.contains(F, xi, yi)) == v for xi, yi, v in zip(x[:20], y[:20], vec[:20]))


@pytest.mark.parametrize("a,b", [(0.3j, 0.0), (0.3j, 1.0), (complex(0.5, 0.5), 0.3), (0.3j, -0.1)])
def test_degenerate_inputs(a, b):
    with pytest.raises(fd.DegenerateInputError):
        fd.build_F(a, b)


def test_region_boundary_is_degenerate():
    from levy2d.geometry import XI

    a = XI + complex(math.cos(3.6), math.sin(3.6))
    with pytest.raises(DomainError):
        fd.build_F(a, 0.3)


@given(params())
def test_edge_rows_match_vertical_edges(ab):
    a, b = ab
    F = fd.build_F(a, b)
    rows = fd.edge_rows(a, b)
    xs = {round(v, 12) for v in [F.x_min, F.x_max] + [c.x for c in F.cuts]}
    assert {round(v, 12) for r in rows for v in (r.c1_minus, r.c1_plus)} == xs
    for r in rows:
        assert tau_of_c1(r.c1_minus) < tau_of_c1(r.c1_plus)
        assert r.sign in (1, -1)
        # every horizontal edge lies on an edge of the polygon
        ys = {round(y, 12) for _, y in F.vertices()}
        assert round(r.c3, 12) in ys


def test_edge_row_table_region_II():
    a, b, _ = FIGURES[1]
    rows = fd.edge_rows(a, b)
    got = [(r.c3, r.sign, r.c1_minus, r.c1_plus) for r in rows]
    want = [(1, -1, kappa(a), 0.5), (1 - b, 1, kappa(a), -0.5), (-b, 1, -0.5, kappa(-a.conjugate()))]
    assert np.allclose(np.array(got, dtype=float), np.array(want, dtype=float))


@pytest.mark.parametrize("a,b,reg", FIGURES)
def test_tiling_conventions(a, b, reg):
    assert fd.tiling_check(a, b, 1000, 0)
    # the mirrored lattice only tiles when a1 = 0
    assert fd.tiling_check(a, b, 1000, 0, convention=-1) == (a.real == 0.0)


@given(params(margin=1e-3), st.integers(0, 2**16))
def test_tiling_random(ab, seed):
    a, b = ab
    assert fd.tiling_check(a, b, 300, seed)


def test_tiling_rejects_corrupted_domain():
    a, b, _ = FIGURES[0]
    F = fd.build_F(a, b)
    bad = fd.RectilinearDomain(F.x_min, F.x_max, F.y_min, F.y_max,
                               tuple(fd.CornerCut(c.quadrant, c.x + 0.01, c.y) for c in F.cuts))
    assert not fd.tiling_check(a, b, 1000, 0, F=bad)


def test_tiling_deterministic():
    a, b, _ = FIGURES[2]
    assert fd.tiling_check(a, b, 500, 7) == fd.tiling_check(a, b, 500, 7)


def test_distance_to_boundary():
    F = fd.build_F(*FIGURES[0][:2])
    assert fd.distance_to_boundary(F, F.x_max, 0.5) == 0.0
    assert fd.distance_to_boundary(F, F.x_max - 0.01, 0.9) == pytest.approx(0.01)


def test_lattice_oracle_forward_any_depth(rng):
    a, b = random_params(rng, 300)
    c1, c3 = sample_points_in_F(rng, a, b)
    for z, bb, x, y in zip(a, b, c1, c3):
        F = fd.build_F(z, bb)
        if fd.distance_to_boundary(F, x, y) < 1e-4:
            continue
        c2 = -(math.sqrt(1 - x * x) + rng.uniform(1e-9, 1.0))
        assert fd.lattice_membership_oracle(z, bb, x, c2, y)


def test_lattice_oracle_iff_behind_wall(rng):
    a, b = random_params(rng, 400)
    n = 0
    for z, bb in zip(a, b):
        F = fd.build_F(z, bb)
        x, y = rng.uniform(-1, 1), rng.uniform(-1, 1)
        if fd.distance_to_boundary(F, x, y) < 1e-4:
            continue
        c2 = -(math.sqrt(1 - x * x) + 1e-7)
        assert bool(F.contains(x, y)) == fd.lattice_membership_oracle(z, bb, x, c2, y)
        n += 1
    assert n > 300


def test_lattice_oracle_requires_outside_cylinder():
    a, b, _ = FIGURES[0]
    with pytest.raises(DomainError):
        fd.lattice_membership_oracle(a, b, 0.0, -0.5, 0.0)
