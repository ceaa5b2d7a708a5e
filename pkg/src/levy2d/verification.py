"""Invariant checks shared by ``levy2d verify`` and the acceptance tests.

Every check returns a :class:`Check`; ``gating=False`` marks a check that
records a finding about a published statement rather than a property this
package relies on.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import fundamental_domain as fd
from .geometry import (
    XI,
    Region,
    chi,
    classify_region,
    enumerate_overlapping_translates,
    in_omega2_plus,
    kappa,
    lemma_translates,
    region_labels,
    tau_of_a,
    tau_of_a_sgn_a1,
    tau_of_c1,
    c1_of_tau,
)
from .integrand import inner_integrand, inner_oracle

FIGURE_INSTANCES = ((complex(0.0, 0.3), 0.3), (complex(-0.9, 0.3), 0.3), (complex(-0.5, 0.05), 0.4))
REGION_MARGIN = 1e-6


@dataclass
class Check:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    gating: bool = True
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        if not self.gating:
            tag += " (finding, non-gating)"
        return f"[{tag}] {self.name}: {self.detail}"


def random_params(rng, n: int, region: int | None = None, margin: float = REGION_MARGIN):
    """n points a (complex array) and b, uniform on the upper base domain x (0, 1).

    Points within ``margin`` of a region boundary or the a2 = 0 axis are
    rejected; ``region`` restricts to one region.
    """
    out = []
    got = 0
    while got < n:
        m = 4 * (n - got) + 16
        a = rng.uniform(-1.0, 1.0, m) + 1j * rng.uniform(0.0, 1.0, m)
        ok = (a.imag > margin) & (np.abs(a) < 1.0 - margin) & (np.abs(a - 1.0) > 1.0 + margin)
        ok &= (np.abs(np.abs(a - XI) - 1.0) > margin) & (np.abs(np.abs(a + XI) - 1.0) > margin)
        if region is not None:
            ok &= region_labels(a) == region
        a = a[ok]
        out.append(a)
        got += len(a)
    a = np.concatenate(out)[:n]
    b = rng.uniform(margin, 1.0 - margin, n)
    return a, b


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# ---------------------------------------------------------------------------- geometry


@_timed
def check_chi_circles(n=1000, seed=0) -> Check:
    rng = np.random.default_rng(seed)
    r = rng.uniform(1e-3, 2.0 - 1e-3, n)
    a = r * np.exp(1j * rng.uniform(0, 2 * np.pi, n))
    err = 0.0
    for s in (1, -1):
        z = chi(a, s)
        err = max(err, np.max(np.abs(np.abs(z) - 1)), np.max(np.abs(np.abs(z - a) - 1)))
    conj_err = float(np.max(np.abs(np.real(chi(a, -1)) - kappa(np.conj(a)))))
    kap_err = float(np.max(np.abs(np.real(chi(a, 1)) - kappa(a))))
    ok = err < 1e-12 and conj_err < 1e-12 and kap_err < 1e-15
    return Check("chi_on_both_circles", ok, {"max_err": float(err), "conj_err": conj_err, "kappa_vs_chi": kap_err})


@_timed
def check_tau(n=1000, seed=0) -> Check:
    rng = np.random.default_rng(seed)
    t = rng.uniform(-1, 1, n)
    rt = float(np.max(np.abs(tau_of_c1(c1_of_tau(t)) - t)))
    grid = np.linspace(-1, 1, 20001)
    mono = bool(np.all(np.diff(tau_of_c1(grid)) > 0))
    a, _ = random_params(rng, n)
    cons = float(np.max(np.abs(tau_of_a(a) - tau_of_c1(kappa(a)))))
    ok = rt < 1e-12 and mono and cons < 1e-12
    return Check("tau_identities", ok, {"roundtrip_err": rt, "monotone": mono, "tau_of_a_err": cons})


@_timed
def check_tau_sgn_a1(n=1000, seed=0) -> Check:
    """The closed form with sgn(a1) as root sign, against tau(kappa(a))."""
    rng = np.random.default_rng(seed)
    a, _ = random_params(rng, n)
    err = np.abs(tau_of_a_sgn_a1(a) - tau_of_c1(kappa(a)))
    bad = err > 1e-9
    return Check("tau_of_a_sgn_a1_form", not bad.any(), {
        "samples": n, "disagreements": int(bad.sum()), "max_err": float(err.max()),
        "all_in_region_I_with_a1_negative": bool(np.all((region_labels(a[bad]) == 1) & (a[bad].real < 0)))}, gating=False)


@_timed
def check_region_partition(npts=400) -> Check:
    g = np.linspace(-1, 1, npts)
    A1, A2 = np.meshgrid(g, np.linspace(0, 1, npts // 2))
    a = (A1 + 1j * A2).ravel()
    a = a[in_omega2_plus(a)]
    ind1 = np.abs(a - XI) < 1
    ind2 = (np.abs(a - XI) >= 1) & (np.abs(a + XI) >= 1)
    ind3 = (np.abs(a + XI) < 1) & (a.imag >= 0)
    total = ind1.astype(int) + ind2 + ind3
    lab = region_labels(a)
    agree = bool(np.all((lab == 1) == ind1) and np.all((lab == 2) == ind2) and np.all((lab == 3) == ind3))
    ok = bool(np.all(total == 1)) and agree
    return Check("region_partition", ok, {"points": int(len(a)), "labels_agree": agree})


FIGURE_TICKS = (
    ("fig2 kappa(a-1)", complex(0, 0.3) - 1, -0.745),
    ("fig2 kappa(1-conj a)", 1 - complex(0, -0.3), 0.255),
    ("fig3 kappa(a)", complex(-0.9, 0.3), -0.728),
    ("fig3 kappa(-conj a)", -complex(-0.9, -0.3), 0.172),
    ("fig4 kappa(a)", complex(-0.5, 0.05), -0.346),
    ("fig4 kappa(conj a+1)", complex(-0.5, -0.05) + 1, 0.346),
    ("fig4 kappa(-a-1)", -complex(-0.5, 0.05) - 1, -0.154),
    ("fig4 kappa(-conj a)", -complex(-0.5, -0.05), 0.154),
)


@_timed
def check_figure_ticks(tol=5e-4) -> Check:
    errs = {name: float(kappa(z) - v) for name, z, v in FIGURE_TICKS}
    ok = all(abs(e) <= tol for e in errs.values())
    regions = [classify_region(a).name for a, _ in FIGURE_INSTANCES]
    ok &= regions == ["I", "II", "III"]
    return Check("figure_tick_values", ok, {"max_abs_err": max(abs(e) for e in errs.values()), "regions": regions})


@_timed
def check_lemma1_literal(n=1000, seed=0, bound=4) -> Check:
    """Brute-force translate set versus the published four pairs (+ one conditional pair)."""
    rng = np.random.default_rng(seed)
    a, b = random_params(rng, n)
    mismatch = 0
    extra: dict[str, int] = {}
    for z, bb in zip(a, b):
        got = enumerate_overlapping_translates(z, bb, bound)
        want = lemma_translates(z)
        if got != want:
            mismatch += 1
            for t in sorted(got ^ want):
                extra[str(t)] = extra.get(str(t), 0) + 1
    return Check("lemma1_literal_translate_set", mismatch == 0, {"instances": n, "mismatches": mismatch, "extra_pairs": extra}, gating=False)


def _cylinder_boundary_points(rng, n):
    kind = rng.integers(0, 3, n)
    ph = rng.uniform(0, 2 * np.pi, n)
    rad = np.where(kind == 0, 1.0, np.sqrt(rng.uniform(0, 1, n)))
    z = np.where(kind == 0, rng.uniform(-1, 1, n), np.where(kind == 1, 1.0, -1.0))
    return np.stack([rad * np.cos(ph), rad * np.sin(ph), z], axis=1)


@_timed
def check_lemma1_boundary(n=1000, seed=0, points=20000) -> Check:
    """Translates outside the lemma's set never touch the cylinder boundary outside the lemma's cylinders."""
    rng = np.random.default_rng(seed)
    a, b = random_params(rng, n)
    P = _cylinder_boundary_points(rng, points)
    uncovered = 0
    extras = 0
    conditional_ok = True
    for z, bb in zip(a, b):
        got = enumerate_overlapping_translates(z, bb, 4)
        want = lemma_translates(z)
        conditional_ok &= ((-1, 2) in got) == (abs(2 * z - 1) < 2)
        conditional_ok &= want <= got

        def inside(c):
            return (np.hypot(P[:, 0] - c[0], P[:, 1] - c[1]) < 1) & (np.abs(P[:, 2] - c[2]) < 1)

        cover = np.zeros(len(P), dtype=bool)
        for m, k in want:
            cover |= inside((m + k * z.real, k * z.imag, m * bb + k))
        for m, k in got - want:
            extras += 1
            hit = inside((m + k * z.real, k * z.imag, m * bb + k))
            uncovered += int(np.count_nonzero(hit & ~cover))
    ok = uncovered == 0 and conditional_ok
    return Check("lemma1_boundary_coverage", ok, {"instances": n, "extra_translates": extras, "uncovered_points": uncovered, "conditional_pair_rule": bool(conditional_ok)})


# --------------------------------------------------------------------------- domain


@_timed
def check_area(n=10_000, seed=0) -> Check:
    rng = np.random.default_rng(seed)
    a, b = random_params(rng, n)
    err = max(abs(fd.build_F(z, bb).area() - (1 - z.real * bb)) for z, bb in zip(a, b))
    return Check("area_equals_1_minus_a1b", err < 1e-12, {"samples": n, "max_err": float(err)})


@_timed
def check_tiling(per_region=100, trials=1000, seed=0) -> Check:
    rng = np.random.default_rng(seed)
    counts = {}
    minus_fail = 0
    for reg in Region:
        a, b = random_params(rng, per_region, int(reg), margin=1e-3)
        counts[reg.name] = sum(fd.tiling_check(z, bb, trials, seed + i) for i, (z, bb) in enumerate(zip(a, b)))
        minus_fail += sum(not fd.tiling_check(z, bb, 200, seed + i, convention=-1) for i, (z, bb) in enumerate(zip(a, b)))
    ok = all(v == per_region for v in counts.values())
    return Check("tiling", ok, {"passed_per_region": counts, "lattice": "Z(1,b)+Z(a1,1)",
                                "minus_a1_convention_failures": int(minus_fail), "instances": 3 * per_region})


@_timed
def check_lattice_oracle(n=1000, seed=0, band=1e-4) -> Check:
    """contains <=> oracle just behind the cylinder wall, plus contains => oracle at any depth."""
    rng = np.random.default_rng(seed)
    a, b = random_params(rng, 4 * n)
    shallow_bad = deep_bad = tested = 0
    for z, bb in zip(a, b):
        if tested >= n:
            break
        F = fd.build_F(z, bb)
        c1, c3 = rng.uniform(-1, 1), rng.uniform(-1, 1)
        if fd.distance_to_boundary(F, c1, c3) < band:
            continue
        tested += 1
        inside = bool(F.contains(c1, c3))
        wall = math.sqrt(1 - c1 * c1)
        if inside != fd.lattice_membership_oracle(z, bb, c1, -(wall + rng.uniform(1e-9, 1e-6)), c3):
            shallow_bad += 1
        c3w = rng.uniform(-1.5, 1.5)
        if F.contains(c1, c3w) and fd.distance_to_boundary(F, c1, c3w) >= band:
            if not fd.lattice_membership_oracle(z, bb, c1, -(wall + rng.uniform(1e-9, 1.0)), c3w):
                deep_bad += 1
    ok = shallow_bad == 0 and deep_bad == 0 and tested == n
    return Check("contains_iff_lattice_oracle", ok, {"instances": tested, "iff_mismatches": shallow_bad, "deep_forward_failures": deep_bad})


@_timed
def check_bound_3_vs_5(n=1000, seed=0) -> Check:
    rng = np.random.default_rng(seed)
    a, b = random_params(rng, n)
    diff = 0
    for z, bb in zip(a, b):
        c1, c3 = rng.uniform(-1, 1), rng.uniform(-1.5, 1.5)
        c2 = -(math.sqrt(1 - c1 * c1) + rng.uniform(1e-9, 1.0))
        diff += fd.lattice_membership_oracle(z, bb, c1, c2, c3, 3) != fd.lattice_membership_oracle(z, bb, c1, c2, c3, 5)
    return Check("oracle_bound_3_vs_5", diff == 0, {"instances": n, "differences": int(diff)})


@_timed
def check_width_identities(n=10_000, seed=0) -> Check:
    rng = np.random.default_rng(seed)
    a, _ = random_params(rng, n)
    a2 = a[region_labels(a) == 2]
    a3 = a[region_labels(a) == 3]
    e2 = float(np.max(np.abs(kappa(-np.conj(a2)) - kappa(a2) + a2.real)))
    lhs = (kappa(a3) + 0.5) + (0.5 - kappa(np.conj(a3) + 1))
    e3 = float(np.max(np.abs(lhs - (kappa(-np.conj(a3)) - kappa(-a3 - 1)))))
    return Check("width_identities", e2 < 1e-12 and e3 < 1e-12, {"region_II_err": e2, "region_III_err": e3})


@_timed
def check_edge_endpoints(n=1000, seed=0) -> Check:
    rng = np.random.default_rng(seed)
    a, b = random_params(rng, n)
    bad = 0
    for z, bb in zip(a, b):
        F = fd.build_F(z, bb)
        rows = fd.edge_rows(z, bb)
        ends = {round(v, 12) for r in rows for v in (r.c1_minus, r.c1_plus)}
        verts = {round(v, 12) for v in [F.x_min, F.x_max] + [c.x for c in F.cuts]}
        ordered = all(tau_of_c1(r.c1_minus) < tau_of_c1(r.c1_plus) for r in rows)
        bad += (ends != verts) or not ordered
    return Check("edge_rows_match_vertical_edges", bad == 0, {"instances": n, "mismatches": int(bad)})


def sample_points_in_F(rng, a, b):
    """One uniform point of F(a_i, b_i) per lane (vectorized rejection)."""
    n = len(a)
    reg = region_labels(a)
    d = fd.domain_arrays(a, b, reg)
    c1 = np.empty(n)
    c3 = np.empty(n)
    todo = np.arange(n)
    while len(todo):
        x = rng.uniform(d["x_min"][todo], d["x_max"][todo])
        y = rng.uniform(d["y_min"][todo], d["y_max"][todo])
        ok = fd.contains_arrays(a[todo], b[todo], reg[todo], x, y)
        c1[todo[ok]] = x[ok]
        c3[todo[ok]] = y[ok]
        todo = todo[~ok]
    return c1, c3


@_timed
def check_xi_lower_bound(n=100_000, seed=0) -> Check:
    from .integrand import xi

    rng = np.random.default_rng(seed)
    a, b = random_params(rng, n)
    c1, c3 = sample_points_in_F(rng, a, b)
    m = float(np.min(xi(a, b, c1, c3)))
    return Check("xi_above_1_24", m > 1 / 24, {"samples": n, "min_xi": m})


def _positivity_terms(a, b, c3, tau):
    a1, a2 = a.real, a.imag
    one_m = 1 - a1 * b
    pp, pm = one_m + a2 * c3, one_m - a2 * c3
    D = one_m**2 + a2 * a2 * (b * b - c3 * c3)
    return pp, pm, D


@_timed
def check_log_factor_positivity(n=100_000, seed=0) -> Check:
    """sqrt(D) + a2 b + phi_- tau > 0 at tau = tau(c1), (c1, c3) in F; plus the factorization and D bound."""
    rng = np.random.default_rng(seed)
    a, b = random_params(rng, n)
    c1, c3 = sample_points_in_F(rng, a, b)
    tau = tau_of_c1(c1)
    pp, pm, D = _positivity_terms(a, b, c3, tau)
    a2 = a.imag
    Dlow = a2 * a2 * (1 / np.abs(a) ** 2 - 1)
    pos = np.sqrt(D) + a2 * b + pm * tau
    t = rng.uniform(-1, 1, n)
    lhs = (pp - 2 * a2 * b * t - pm * t * t) * pm
    rhs = (np.sqrt(D) + a2 * b + pm * t) * (np.sqrt(D) - a2 * b - pm * t)
    fact = float(np.max(np.abs(lhs - rhs) / np.maximum(np.abs(lhs), 1e-300)))
    ok = bool(np.all(pos > 0)) and bool(np.all(D >= Dlow)) and fact < 1e-10
    return Check("sqrtD_positivity_and_factorization", ok, {
        "samples": n, "min_sqrtD_term": float(pos.min()), "min_D_minus_bound": float((D - Dlow).min()),
        "max_factorization_relerr": fact})


@_timed
def check_positivity_any_tau(n=100_000, seed=0) -> Check:
    """The same inequality for arbitrary tau in [-1, 1] and c3 from F."""
    rng = np.random.default_rng(seed)
    a, b = random_params(rng, n)
    _, c3 = sample_points_in_F(rng, a, b)
    tau = rng.uniform(-1, 1, n)
    pp, pm, D = _positivity_terms(a, b, c3, tau)
    pos = np.sqrt(D) + a.imag * b + pm * tau
    bad = pos <= 0
    return Check("sqrtD_positivity_any_tau", not bad.any(), {
        "samples": n, "violations": int(bad.sum()), "min": float(pos.min()),
        "violations_have_phi_minus_positive": bool(np.all(pm[bad] > 0))}, gating=False)


# ------------------------------------------------------------------------- integrand


@_timed
def check_inner_oracle(per_region=100, seed=0, tol=1e-10, literal_x=None) -> Check:
    rng = np.random.default_rng(seed)
    cases = list(FIGURE_INSTANCES)
    for reg in Region:
        a, b = random_params(rng, per_region, int(reg), margin=1e-4)
        cases += list(zip(a, b))
    worst = 0.0
    errors = 0
    for z, bb in cases:
        try:
            closed = inner_integrand(z, bb, literal_x=literal_x)
            ref = inner_oracle(z, bb, tol)
            gap = float(abs(closed - ref) / abs(ref))
        except Exception:
            errors += 1
            continue
        worst = max(worst, gap if math.isfinite(gap) else math.inf)
    ok = errors == 0 and worst < 1e-6
    return Check("inner_integrand_vs_oracle", ok, {"instances": len(cases), "max_rel_gap": worst, "evaluation_errors": errors})


def quick_checks(literal_x: bool | None = None) -> list:
    return [
        check_chi_circles, check_tau, check_tau_sgn_a1, check_region_partition, check_figure_ticks,
        lambda: check_lemma1_literal(200), lambda: check_lemma1_boundary(200),
        lambda: check_area(2000), lambda: check_tiling(20, 500), lambda: check_lattice_oracle(300),
        lambda: check_bound_3_vs_5(300), check_width_identities, lambda: check_edge_endpoints(300),
        lambda: check_xi_lower_bound(20_000), lambda: check_log_factor_positivity(20_000), lambda: check_positivity_any_tau(20_000),
        lambda: check_inner_oracle(20, literal_x=literal_x),
    ]


def full_checks(literal_x: bool | None = None) -> list:
    return [
        check_chi_circles, check_tau, check_tau_sgn_a1, check_region_partition, check_figure_ticks,
        check_lemma1_literal, check_lemma1_boundary, check_area, check_tiling,
        check_lattice_oracle, check_bound_3_vs_5, check_width_identities, check_edge_endpoints,
        check_xi_lower_bound, check_log_factor_positivity, check_positivity_any_tau,
        lambda: check_inner_oracle(literal_x=literal_x),
    ]
