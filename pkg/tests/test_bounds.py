import math

import numpy as np
import pytest

from orthobound.bounds import (aczel_check, bessel_counterpart_b1, bessel_counterpart_b2,
                               bessel_difference, compare_b1_b2, companion_abs, companion_bound,
                               gruess_v1, gruess_v2, lemma21_bound)
from orthobound.conditions import BoxBounds, check_re_form
from orthobound.errors import DomainError, HypothesisError
from orthobound.space import OrthonormalFamily, Vector, canonical_family

from conftest import cgauss, make_box, make_family, project_into_ball

S = 1 / math.sqrt(2)
E = OrthonormalFamily([[S, S]])
UNIT_BOX = BoxBounds([-1.0], [1.0])


def witness(m=1.0):
    return Vector([m * S, -m * S]), BoxBounds([-m], [m])


def residual_oracle(x, family):
    """|x - sum <x,e_i> e_i|^2 from an explicit projection."""
    proj = np.zeros_like(x.coords)
    for e in family.members:
        proj += np.vdot(e, x.coords) * e
    r = x.coords - proj
    return float(np.vdot(r, r).real)


def random_setting(rng, mode, n=None, k=None):
    n = n or int(rng.integers(1, 9))
    k = k or int(rng.integers(1, min(n, 4) + 1))
    fam = make_family(rng, n, k, mode)
    return fam, make_box(rng, k, mode), make_box(rng, k, mode)


# -- Bessel difference and the lemma ------------------------------------------

def test_bessel_difference_examples(rng):
    fam = make_family(rng, 4, 2, "complex")
    assert abs(bessel_difference(fam[0], fam)) < 1e-14
    x, _ = witness()
    assert bessel_difference(x, E) == pytest.approx(1.0, rel=1e-14)
    for mode in ("real", "complex"):
        fam, _, _ = random_setting(rng, mode)
        x = Vector(cgauss(rng, fam.dimension, mode), mode)
        assert bessel_difference(x, fam) == pytest.approx(residual_oracle(x, fam),
                                                           rel=1e-10, abs=1e-12)


def test_lemma21_optimal_lambdas_are_tight(rng):
    fam = make_family(rng, 5, 2, "complex")
    x = Vector(cgauss(rng, 5, "complex"), "complex")
    c = fam.members.conj() @ x.coords
    r = math.sqrt(residual_oracle(x, fam))
    rep = lemma21_bound(x, fam, c, r)
    assert rep.refined_bound == pytest.approx(rep.left_value, rel=1e-10)
    assert rep.details["identity_residual"] <= 1e-10 * max(1.0, r * r)


def test_lemma21_witness():
    x, _ = witness()
    rep = lemma21_bound(x, E, [0.0], 1.0)
    assert rep.left_value == pytest.approx(1.0, rel=1e-14)
    assert rep.refined_bound == pytest.approx(1.0, rel=1e-14)
    assert rep.chain_ok


def test_lemma21_random_chain(rng):
    for mode in ("real", "complex"):
        for _ in range(200):
            fam, box, _ = random_setting(rng, mode)
            x = project_into_ball(rng, fam, box, mode)
            rep = lemma21_bound(x, fam, box.midpoints, 0.5 * math.sqrt(box.width_sq))
            assert rep.chain_ok and rep.left_value >= -1e-10 * rep.scale


def test_lemma21_violation_reports_excess():
    x = Vector([3.0, 0.0])
    fam = canonical_family(2, [1])
    with pytest.raises(HypothesisError) as info:
        lemma21_bound(x, fam, [0.0], 1.0)
    assert info.value.excess == pytest.approx(2.0)
    rep = lemma21_bound(x, fam, [0.0], 1.0, force=True)
    assert not rep.hypotheses_satisfied
    assert rep.details["identity_residual"] <= 1e-12 * 9
    with pytest.raises(DomainError):
        lemma21_bound(x, fam, [0.0], 0.0)


# -- the two Bessel counterparts ----------------------------------------------

def test_b1_midpoint_vector(rng):
    fam = make_family(rng, 4, 2, "complex")
    box = make_box(rng, 2, "complex")
    rep = bessel_counterpart_b1(fam.combine(box.midpoints), fam, box)
    assert abs(rep.refined_bound) <= 1e-12 * rep.scale
    assert rep.left_value <= 1e-12 * rep.scale
    assert rep.outer_bound == pytest.approx(box.width_sq / 4)


@pytest.mark.parametrize("k", [0.1, 0.5, S, 0.9, 1.0])
def test_b1_b2_along_the_family_vector(k):
    x = Vector([k * S, k * S])
    assert bessel_counterpart_b1(x, E, UNIT_BOX).refined_bound == pytest.approx(k * k, abs=1e-12)
    assert bessel_counterpart_b2(x, E, UNIT_BOX).refined_bound == pytest.approx(1 - k * k,
                                                                                abs=1e-12)


def test_b2_witness():
    x, box = witness()
    rep = bessel_counterpart_b2(x, E, box)
    assert rep.left_value == pytest.approx(1.0, rel=1e-14)
    assert rep.refined_bound == pytest.approx(1.0, rel=1e-14)
    assert rep.outer_bound == 1.0


@pytest.mark.parametrize("k,b1,b2,tighter", [(0.5, 0.25, 0.75, "B1"), (0.9, 0.81, 0.19, "B2")])
def test_compare(k, b1, b2, tighter):
    res = compare_b1_b2(Vector([k * S, k * S]), E, UNIT_BOX)
    assert res.b1 == pytest.approx(b1, abs=1e-12)
    assert res.b2 == pytest.approx(b2, abs=1e-12)
    assert res.tighter == tighter
    assert res.report.refined_bound == min(res.b1, res.b2)


def test_compare_tie_at_crossover():
    res = compare_b1_b2(Vector([S * S, S * S]), E, UNIT_BOX)
    assert res.tighter == "tie"
    assert abs(res.b1 - res.b2) <= 1e-9


def test_bessel_hypothesis_errors():
    x = Vector([3.0, 0.0])
    with pytest.raises(HypothesisError) as info:
        bessel_counterpart_b2(x, E, UNIT_BOX)
    assert info.value.failed == ("x",)
    rep = bessel_counterpart_b2(x, E, UNIT_BOX, force=True)
    assert not rep.hypotheses_satisfied


@pytest.mark.parametrize("mode", ["real", "complex"])
def test_bessel_random_chains(rng, mode):
    for _ in range(300):
        fam, box, _ = random_setting(rng, mode)
        x = project_into_ball(rng, fam, box, mode)
        r1 = bessel_counterpart_b1(x, fam, box)
        r2 = bessel_counterpart_b2(x, fam, box)
        for rep in (r1, r2):
            assert rep.chain_ok
            assert rep.left_value == pytest.approx(residual_oracle(x, fam), rel=1e-8, abs=1e-10)
        assert r2.refined_bound >= -1e-9 * r2.scale


# -- Grüss refinements --------------------------------------------------------

@pytest.mark.parametrize("fn", [gruess_v1, gruess_v2])
def test_gruess_witness(fn):
    x, box = witness()
    rep = fn(x, x, E, box, box)
    assert rep.left_value == pytest.approx(1.0, rel=1e-14)
    assert rep.refined_bound == pytest.approx(1.0, rel=1e-14)
    assert rep.outer_bound == pytest.approx(1.0, rel=1e-14)


def test_gruess_v1_x_in_span(rng):
    fam = make_family(rng, 4, 2, "complex")
    box_x = make_box(rng, 2, "complex")
    box_y = make_box(rng, 2, "complex")
    x = fam.combine(box_x.midpoints)
    y = project_into_ball(rng, fam, box_y, "complex")
    assert gruess_v1(x, y, fam, box_x, box_y).left_value <= 1e-12


def test_gruess_v1_singleton_matches_direct_formula(rng):
    e = make_family(rng, 3, 1, "complex")
    ev = e.members[0]
    phi, big_phi, gam, big_gam = 0.2 + 1j, 1.5 - 0.5j, -1.0, 0.5 + 2j
    bx, by = BoxBounds([phi], [big_phi]), BoxBounds([gam], [big_gam])
    x = project_into_ball(rng, e, bx, "complex")
    y = project_into_ball(rng, e, by, "complex")
    rx = np.vdot(x.coords - phi * ev, big_phi * ev - x.coords).real
    ry = np.vdot(y.coords - gam * ev, big_gam * ev - y.coords).real
    left = abs(np.vdot(y.coords, x.coords) - np.vdot(ev, x.coords) * np.vdot(y.coords, ev))
    expected = abs(big_phi - phi) * abs(big_gam - gam) / 4 - math.sqrt(rx) * math.sqrt(ry)
    rep = gruess_v1(x, y, e, bx, by)
    assert rep.left_value == pytest.approx(left, rel=1e-10, abs=1e-12)
    assert rep.refined_bound == pytest.approx(expected, rel=1e-10, abs=1e-12)


def test_gruess_v2_singleton_midpoints():
    e = OrthonormalFamily([[0.6, 0.8]])
    bx, by = BoxBounds([-1.0], [3.0]), BoxBounds([0.5], [1.5])
    x = Vector([0.6, 0.8]) * 1.0
    y = Vector([0.6, 0.8]) * 1.0
    rep = gruess_v2(x, y, e, bx, by)
    assert rep.refined_bound == pytest.approx(abs(3.0 + 1.0) * abs(1.5 - 0.5) / 4)
    assert rep.left_value <= 1e-15


def test_gruess_names_failing_vector():
    x, box = witness()
    with pytest.raises(HypothesisError) as info:
        gruess_v2(x, Vector([5.0, 5.0]), E, box, box)
    assert info.value.failed == ("y",)


@pytest.mark.parametrize("mode", ["real", "complex"])
def test_gruess_random_chains(rng, mode):
    for _ in range(300):
        fam, bx, by = random_setting(rng, mode)
        x = project_into_ball(rng, fam, bx, mode)
        y = project_into_ball(rng, fam, by, mode)
        r1 = gruess_v1(x, y, fam, bx, by)
        r2 = gruess_v2(x, y, fam, bx, by)
        assert r1.chain_ok and r2.chain_ok
        assert r1.outer_bound == pytest.approx(r2.outer_bound)


def test_gruess_v2_reduces_to_bessel_when_y_is_x(rng):
    for mode in ("real", "complex"):
        fam, box, _ = random_setting(rng, mode)
        x = project_into_ball(rng, fam, box, mode)
        rg = gruess_v2(x, x, fam, box, box)
        rb = bessel_counterpart_b2(x, fam, box)
        assert rg.left_value == pytest.approx(bessel_difference(x, fam), rel=1e-10, abs=1e-12)
        assert rg.refined_bound >= rb.refined_bound - 1e-9 * rb.scale


# -- Aczél ---------------------------------------------------------------------

def test_aczel_examples():
    res = aczel_check(2.0, 3.0, [], [])
    assert res.lhs == res.rhs == 36.0 and res.holds and res.equality
    res = aczel_check(1.0, 1.0, [S], [S])
    assert res.lhs == pytest.approx(0.25, abs=1e-15)
    assert res.rhs == pytest.approx(0.25, abs=1e-15)
    assert res.equality


def test_aczel_domain():
    with pytest.raises(DomainError):
        aczel_check(1.0, 1.0, [2.0], [0.1])
    with pytest.raises(DomainError):
        aczel_check(1.0, 1.0, [0.0], [0.1])
    with pytest.raises(DomainError):
        aczel_check(-1.0, 1.0, [], [])


def test_aczel_random(rng):
    for _ in range(2000):
        k = int(rng.integers(1, 6))
        a_seq, b_seq = rng.uniform(0.01, 1, k), rng.uniform(0.01, 1, k)
        a = math.sqrt(np.sum(a_seq ** 2)) * rng.uniform(1, 3)
        b = math.sqrt(np.sum(b_seq ** 2)) * rng.uniform(1, 3)
        assert aczel_check(a, b, a_seq, b_seq).holds


# -- companion bounds ---------------------------------------------------------

def test_companion_witness():
    x, box = witness()
    rep = companion_bound(x, x, E, box, 0.5)
    assert rep.left_value == pytest.approx(1.0, rel=1e-14)
    assert rep.outer_bound == pytest.approx(1.0, rel=1e-14)
    assert companion_abs(x, x, E, box, 0.5).left_value == pytest.approx(1.0, rel=1e-14)


def test_companion_midpoint(rng):
    fam = make_family(rng, 4, 2, "complex")
    box = make_box(rng, 2, "complex")
    mid = fam.combine(box.midpoints)
    rep = companion_bound(mid, mid, fam, box, 0.5)
    assert rep.refined_bound == pytest.approx(box.width_sq / 4, rel=1e-12)
    assert rep.outer_bound == pytest.approx(box.width_sq / 4, rel=1e-12)
    assert abs(rep.left_value) <= 1e-12 * rep.scale


def test_companion_half_matches_midpoint_form(rng):
    fam = make_family(rng, 4, 2, "complex")
    box = make_box(rng, 2, "complex")
    z = project_into_ball(rng, fam, box, "complex")
    d = Vector(cgauss(rng, 4, "complex"), "complex")
    x, y = z + d, z - d
    rep = companion_bound(x, y, fam, box, 0.5)
    half = (x + y) * 0.5
    cz = fam.members.conj() @ half.coords
    expected = box.width_sq / 4 - np.sum(np.abs(box.midpoints - cz) ** 2)
    assert rep.refined_bound == pytest.approx(expected, rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("mode", ["real", "complex"])
def test_companion_random(rng, mode):
    for lam in (0.3, 0.5, 0.8):
        for _ in range(150):
            fam, box, _ = random_setting(rng, mode)
            z = project_into_ball(rng, fam, box, mode)
            y = Vector(cgauss(rng, fam.dimension, mode), mode)
            x = (z - (1 - lam) * y) * (1 / lam)
            rep = companion_bound(x, y, fam, box, lam)
            assert rep.chain_ok
            zm = project_into_ball(rng, fam, box, mode)
            xa = (z + zm) * (0.5 / lam)
            ya = (z - zm) * (0.5 / (1 - lam))
            ra = companion_abs(xa, ya, fam, box, lam)
            assert ra.chain_ok and ra.left_value >= 0


def test_companion_abs_with_opposite_vectors(rng):
    fam = make_family(rng, 3, 1)
    box = BoxBounds([-1.0], [1.0])
    x = project_into_ball(rng, fam, box) * 0.5
    rep = companion_abs(x, -x, fam, box, 0.5)
    assert rep.left_value == pytest.approx(bessel_difference(x, fam), rel=1e-10, abs=1e-14)
    assert rep.chain_ok


def test_companion_abs_names_failing_sign():
    x, box = witness()
    y = Vector([0.0, 0.0]) + x * 0.0
    with pytest.raises(HypothesisError) as info:
        companion_abs(x * 1.0, Vector([3.0, -3.0]), E, box, 0.5)
    assert len(info.value.failed) >= 1
    assert companion_abs(x, y, E, box, 0.5, force=True).chain_ok


def test_companion_outer_bound_attained_off_center():
    # Equality in Re<a,b> <= |lam a + (1-lam) b|^2 / (4 lam (1-lam)) needs
    # lam*a = (1-lam)*b; with a, b orthogonal to e this reaches the outer term.
    for lam in (0.2, 0.3, 0.7):
        t = np.array([S, -S]) / (2 * lam * (1 - lam))
        x, y = Vector((1 - lam) * t), Vector(lam * t)
        rep = companion_bound(x, y, E, UNIT_BOX, lam)
        assert rep.ratio == pytest.approx(1.0, rel=1e-12)


def test_companion_lambda_domain():
    x, box = witness()
    with pytest.raises(DomainError):
        companion_bound(x, x, E, box, 1.0)


# -- structural properties ----------------------------------------------------

def test_b2_equals_lemma_at_midpoints(rng):
    for mode in ("real", "complex"):
        fam, box, _ = random_setting(rng, mode)
        x = project_into_ball(rng, fam, box, mode)
        r2 = bessel_counterpart_b2(x, fam, box)
        rl = lemma21_bound(x, fam, box.midpoints, check_re_form(x, fam, box).norm_form_rhs)
        assert rl.refined_bound == pytest.approx(r2.refined_bound, rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("t", [1e-3, 0.37, 12.0])
def test_scaling_covariance(rng, t):
    mode = "complex"
    fam, bx, by = random_setting(rng, mode, 5, 2)
    x = project_into_ball(rng, fam, bx, mode)
    y = project_into_ball(rng, fam, by, mode)
    pairs = [
        (bessel_counterpart_b1(x, fam, bx), bessel_counterpart_b1(x * t, fam, bx.scaled(t))),
        (bessel_counterpart_b2(x, fam, bx), bessel_counterpart_b2(x * t, fam, bx.scaled(t))),
        (gruess_v1(x, y, fam, bx, by), gruess_v1(x * t, y * t, fam, bx.scaled(t), by.scaled(t))),
        (gruess_v2(x, y, fam, bx, by), gruess_v2(x * t, y * t, fam, bx.scaled(t), by.scaled(t))),
    ]
    for base, scaled in pairs:
        for attr in ("left_value", "refined_bound", "outer_bound"):
            assert getattr(scaled, attr) == pytest.approx(t * t * getattr(base, attr),
                                                          rel=1e-10, abs=1e-14 * t * t)
