"""Transforms, spectral densities, the Bessel identity, and cross-checks."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vanishkit.errors import InvalidArgument, TruncationTailError
from vanishkit.fourier import (
    bessel_j0,
    bessel_j0_check,
    bessel_j0_vec,
    exp_sum,
    ft_compact,
    rajchman_check,
    rl_crosscheck,
    series_density,
    sinc,
    sinc_autocorr_density,
    spectral_series,
    spectral_sinc_sq,
)
from vanishkit.analysis import NOT_VANISHING
from vanishkit.measures import (
    AbsCont,
    ConstantDensity,
    LatticeComb,
    PurePoint,
    TriangleDensity,
)
from vanishkit.testfunctions import tf_convolve, tf_hat, tf_indicator, tf_reflect_conj


def test_sinc_basics():
    assert sinc(0.0) == 1.0
    assert abs(sinc(np.pi)) < 1e-15
    u = np.linspace(0.01, 3.0, 50)
    assert np.allclose(sinc(u), np.sin(u) / u, atol=1e-15)


def test_exp_sum_riemann_block():
    # block of three equal atoms at 3, 10/3, 11/3 evaluated at k = 3/2
    atoms = [(3.0 + k / 3.0, 1.0 / 3.0) for k in range(3)]
    assert exp_sum(atoms, 1.5) == pytest.approx(-1.0 / 3.0, abs=1e-12)


def test_exp_sum_single_atom_modulus_one():
    ks = np.linspace(-4.0, 4.0, 33)
    vals = exp_sum([(0.0, 1.0)], ks)
    assert np.allclose(vals, 1.0, atol=1e-15)


@settings(max_examples=30, deadline=None)
@given(k=st.floats(-10, 10))
def test_exp_sum_conjugate_symmetry_real_weights(k):
    atoms = [(0.3, 1.0), (-1.7, 2.5), (4.0, -0.5)]
    assert exp_sum(atoms, -k) == pytest.approx(np.conj(exp_sum(atoms, k)), abs=1e-13)


def test_ft_hat_closed_form():
    # unit hat of halfwidth a transforms to a * sinc^2(pi k a)
    a = 0.5
    f = tf_hat(0.0, a, 1.0)
    ks = np.linspace(-6.0, 6.0, 121)
    got = ft_compact(f, ks)
    want = a * sinc(np.pi * ks * a) ** 2
    assert np.max(np.abs(got - want)) < 1e-12


def test_ft_translated_hat_picks_up_phase():
    f = tf_hat(2.0, 0.5, 1.0)
    ks = np.linspace(-3.0, 3.0, 61)
    got = ft_compact(f, ks)
    want = 0.5 * sinc(np.pi * ks * 0.5) ** 2 * np.exp(-2j * np.pi * ks * 2.0)
    assert np.max(np.abs(got - want)) < 1e-12


def test_ft_indicator_values():
    # the edge ramps add one step of mass, so tolerances sit at 2 steps
    f = tf_indicator(0.0, 1.0)
    assert abs(ft_compact(f, np.array([0.0]))[0] - 1.0) < 2e-3
    assert abs(ft_compact(f, np.array([1.0]))[0]) < 2e-3
    assert abs(ft_compact(f, np.array([0.5]))[0]) == pytest.approx(2.0 / np.pi, abs=2e-3)


def test_ft_inverse_is_forward_at_negated_frequency():
    f = tf_hat(1.0, 0.5, 1.0)
    ks = np.linspace(-2.0, 2.0, 41)
    fwd = ft_compact(f, -ks)
    inv = ft_compact(f, ks, direction="inverse")
    assert np.allclose(fwd, inv, atol=1e-14)


def test_ft_density_matches_test_function_route():
    dens = TriangleDensity(0.0, 1.0, 1.0)
    ks = np.linspace(-4.0, 4.0, 81)
    via_quad = ft_compact(dens, ks)
    want = sinc(np.pi * ks) ** 2
    assert np.max(np.abs(via_quad - want)) < 1e-10


def test_ft_rejects_unbounded_or_bad_direction():
    with pytest.raises(InvalidArgument):
        ft_compact(ConstantDensity(1.0), np.array([0.0]))
    with pytest.raises(InvalidArgument):
        ft_compact(tf_hat(0.0, 0.5, 1.0), np.array([0.0]), direction="sideways")


def test_plancherel_for_hats():
    ks = np.linspace(-8.0, 8.0, 321)
    for hw in (0.125, 0.25, 0.5):
        f = tf_hat(0.0, hw, 1.0)
        auto = tf_convolve(f, tf_reflect_conj(f))
        lhs = ft_compact(auto, ks)
        rhs = np.abs(ft_compact(f, ks)) ** 2
        assert np.max(np.abs(lhs - rhs)) <= 1e-8


def test_sinc_autocorr_closed_form_is_squared_modulus():
    xs = np.linspace(-4.0, 4.0, 801)
    for n in (0, 1, 3):
        s = sinc(np.pi * xs)
        direct = np.abs(1.0 + np.exp(-1j * np.pi * xs * (2 * n + 1)) * s) ** 2
        assert np.max(np.abs(sinc_autocorr_density(n, xs) - direct)) < 1e-13


def test_series_density_values():
    assert series_density(np.array([0.0]), 5)[0] == pytest.approx(7.875, abs=1e-12)
    assert series_density(np.array([1.0]), 5)[0] == pytest.approx(1.96875, abs=1e-12)
    assert series_density(np.array([0.0]), 20)[0] == pytest.approx(8.0 - 2.0 ** -18, abs=1e-12)


def test_series_density_nonnegative():
    ks = np.linspace(0.0, 3.0, 30001)
    assert float(np.min(series_density(ks, 40))) >= 0.0


def test_spectral_series_metadata():
    dens = spectral_series(20)
    assert dens.sup_bound == pytest.approx(8.0)
    assert dens.tail_bound == pytest.approx(2.0 ** -18)
    assert dens(np.array([0.25]))[0] == pytest.approx(series_density(np.array([0.25]), 20)[0])


def test_bessel_j0_against_scipy():
    scipy_special = pytest.importorskip("scipy.special")
    xs = np.linspace(0.0, 30.0, 601)
    got = bessel_j0_vec(xs)
    want = scipy_special.j0(xs)
    assert np.max(np.abs(got - want)) < 5e-12
    for x in (0.5, 7.3, 13.9, 14.1, 25.0):
        assert bessel_j0(x) == pytest.approx(float(scipy_special.j0(x)), abs=5e-12)


def test_bessel_identity_small_radii():
    for r in (0.0, 0.7, 3.3):
        lhs, rhs = bessel_j0_check(r, quad_points=512)
        assert lhs == pytest.approx(rhs, abs=1e-10)


def test_rl_crosscheck_triangle_vs_sinc_sq():
    mu = AbsCont(TriangleDensity(0.0, 1.0, 1.0))
    f = tf_hat(0.0, 0.5, 1.0)
    xs = np.linspace(-2.0, 2.0, 41)
    report = rl_crosscheck(mu, spectral_sinc_sq(), f, xs, tolerance=1e-5)
    assert report.max_deviation <= 1e-5


def test_rl_crosscheck_rejects_fat_truncation_tail():
    mu = AbsCont(TriangleDensity(0.0, 1.0, 1.0))
    f = tf_hat(0.0, 0.5, 1.0)
    with pytest.raises(TruncationTailError):
        rl_crosscheck(mu, spectral_series(6), f, np.linspace(-1.0, 1.0, 11), tolerance=1e-5)


def test_rajchman_comb_autocorrelation_plateau():
    comb = PurePoint(LatticeComb(1.0, 0.0, None))
    f = tf_hat(0.0, 0.25, 1.0)
    prof = rajchman_check(comb, f, [4.0, 8.0], epsilon=0.05, annulus_step=0.01)
    assert prof.verdict == NOT_VANISHING
    # hat autocorrelation at integer offsets contributes g(0) = 1/6
    assert prof.sups[0] == pytest.approx(1.0 / 6.0, abs=1e-6)
