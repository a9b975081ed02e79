"""Decay profiles, coefficient verdicts, cross-checks, and interval means."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vanishkit.analysis import (
    NOT_VANISHING,
    VANISHING,
    coefficients_vanishing,
    decay_profile,
    discrete_support_crosscheck,
    mean_abs,
    min_gap,
    vanishing_verdict,
)
from vanishkit.constructions import build_example
from vanishkit.measures import (
    FiniteAtoms,
    LatticeComb,
    PurePoint,
    Scale,
)
from vanishkit.testfunctions import Window, tf_hat


HAT = tf_hat(0.0, 0.25, 1.0)


def _harmonic(n):
    return (1.0 / (1.0 + np.abs(n))).astype(np.complex128)


def test_decay_profile_offset_pairs():
    mu = build_example("ex_a")
    prof = decay_profile(mu, HAT, [10.0, 100.0], epsilon=0.05, annulus_step=0.002)
    assert prof.sups[0] == pytest.approx(0.4, abs=1e-9)
    assert prof.sups[1] == pytest.approx(0.04, abs=1e-9)
    assert prof.verdict == VANISHING
    assert prof.k_eps_estimate == 100.0


def test_decay_profile_finite_measure_vanishes():
    mu = PurePoint(FiniteAtoms([(0.0, 1.0), (2.0, -3.0)]))
    prof = decay_profile(mu, HAT, [4.0, 8.0], epsilon=0.05, annulus_step=0.01)
    assert prof.sups == (0.0, 0.0)
    assert prof.verdict == VANISHING
    assert prof.k_eps_estimate == 4.0


def test_decay_profile_comb_plateau():
    comb = PurePoint(LatticeComb(1.0, 0.0, None))
    prof = decay_profile(comb, HAT, [8.0, 16.0], epsilon=0.05, annulus_step=0.01)
    assert prof.sups[0] == pytest.approx(1.0, abs=1e-9)
    assert prof.verdict == NOT_VANISHING
    assert prof.k_eps_estimate is None


def test_decay_profile_scans_negative_axis():
    # all the action sits on the negative half line
    mu = PurePoint(FiniteAtoms([(-12.0, 5.0)]))
    prof = decay_profile(mu, HAT, [10.0, 20.0], epsilon=0.05, annulus_step=0.01)
    assert prof.sups[0] == pytest.approx(5.0, abs=1e-9)


def test_riemann_comb_plateau_not_vanishing():
    mu = build_example("ex_nu")
    f = tf_hat(0.5, 0.5, 1.0)
    prof = decay_profile(mu, f, [50.0, 100.0], epsilon=0.1, annulus_step=0.01)
    assert prof.verdict == NOT_VANISHING
    assert prof.sups[-1] == pytest.approx(0.5, abs=1e-3)


def test_coefficients_harmonic_comb():
    cv = coefficients_vanishing(LatticeComb(1.0, 0.0, _harmonic), 0.05, r_max=200.0)
    assert cv.verdict == VANISHING
    assert cv.radius == pytest.approx(19.0)
    assert cv.scanned == 401


def test_coefficients_unit_comb():
    cv = coefficients_vanishing(LatticeComb(1.0, 0.0, None), 0.05, r_max=200.0)
    assert cv.verdict == NOT_VANISHING
    assert cv.radius == pytest.approx(200.0)


def test_coefficients_finite_list_all_small():
    cv = coefficients_vanishing(FiniteAtoms([(0.0, 1.0), (3.0, 0.2)]), 0.3, r_max=100.0)
    # the large weight sits at the origin, radius 0; nothing violates farther out
    assert cv.verdict == VANISHING
    assert cv.radius == 0.0


def test_coefficients_riemann_comb_radius():
    mu = build_example("ex_nu")
    cv = coefficients_vanishing(mu.source, 0.01, r_max=1000.0)
    assert cv.verdict == VANISHING
    # last atom of the n = 100 block is the outermost weight >= 0.01
    assert cv.radius == pytest.approx(100.99, abs=1e-9)


def test_min_gap_riemann_comb():
    mu = build_example("ex_nu")
    assert min_gap(mu.source, Window(0.0, 101.0)) == pytest.approx(0.01, abs=1e-12)


def test_min_gap_few_atoms_infinite():
    assert min_gap(FiniteAtoms([(0.0, 1.0)]), Window(-1.0, 1.0)) == np.inf


def test_crosscheck_agreement_both_ways():
    f = tf_hat(0.0, 0.2, 1.0, step=0.002)
    rep_v = discrete_support_crosscheck(
        LatticeComb(1.0, 0.0, _harmonic), f, epsilon=0.05, r_max=120.0,
        gap_floor=0.5, annulus_step=0.01,
    )
    assert rep_v.applicable and rep_v.agree
    assert rep_v.coefficient_verdict == VANISHING and rep_v.decay_verdict == VANISHING
    rep_n = discrete_support_crosscheck(
        LatticeComb(1.0, 0.0, None), f, epsilon=0.05, r_max=120.0,
        gap_floor=0.5, annulus_step=0.01,
    )
    assert rep_n.applicable and rep_n.agree
    assert rep_n.coefficient_verdict == NOT_VANISHING
    assert rep_n.decay_verdict == NOT_VANISHING


def test_crosscheck_dense_support_not_applicable():
    rep = discrete_support_crosscheck(
        LatticeComb(0.3, 0.0, None), tf_hat(0.0, 0.2, 1.0), epsilon=0.05,
        r_max=60.0, gap_floor=0.5, annulus_step=0.01,
    )
    assert not rep.applicable
    assert rep.coefficient_verdict is None


def test_mean_abs_unit_comb_exact():
    comb = PurePoint(LatticeComb(1.0, 0.0, None))
    trace = mean_abs(comb, HAT, [10, 50])
    # |comb * hat| integrates to the hat mass once per unit cell
    for _, avg in trace.entries:
        assert avg == pytest.approx(0.25, abs=1e-12)


def test_mean_abs_offset_pairs_shrinks():
    mu = build_example("ex_a")
    trace = mean_abs(mu, HAT, [100, 1000])
    m100 = trace.entries[0][1]
    m1000 = trace.entries[1][1]
    assert m100 == pytest.approx(0.0709, abs=2e-3)
    assert m1000 < m100
    assert m1000 <= 0.05


def test_vanishing_verdict_finite_vs_comb():
    fin = PurePoint(FiniteAtoms([(0.0, 2.0)]))
    rep = vanishing_verdict(fin, epsilon=0.05, r_max=64.0)
    assert rep.verdict == VANISHING
    comb = PurePoint(LatticeComb(1.0, 0.0, None))
    rep2 = vanishing_verdict(comb, epsilon=0.05, r_max=64.0)
    assert rep2.verdict == NOT_VANISHING
    assert rep2.worst_sup >= 0.05


@settings(max_examples=15, deadline=None)
@given(scale=st.floats(0.1, 5.0))
def test_decay_sups_scale_equivariant(scale):
    mu = build_example("ex_a")
    base = decay_profile(mu, HAT, [10.0], epsilon=0.05, annulus_step=0.02)
    scaled = decay_profile(Scale(scale, mu), HAT, [10.0], epsilon=0.05, annulus_step=0.02)
    assert scaled.sups[0] == pytest.approx(scale * base.sups[0], rel=1e-9)


@settings(max_examples=10, deadline=None)
@given(r_extra=st.floats(1.0, 4.0))
def test_coefficient_radius_stable_under_longer_scan(r_extra):
    src = LatticeComb(1.0, 0.0, _harmonic)
    small = coefficients_vanishing(src, 0.05, r_max=100.0)
    large = coefficients_vanishing(src, 0.05, r_max=100.0 * r_extra)
    assert small.verdict == large.verdict == VANISHING
    assert small.radius == large.radius
