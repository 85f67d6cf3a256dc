import cmath
import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from indicial_lab.expansion import special_exponents
from indicial_lab.scattering import (DegenerateProfile, PoleAtNonpositiveInteger, gamma, gamma_phase,
                                     log_gamma, log_spaced, phase, product_phase, real_profile_check,
                                     scattering_prefactor)

ALPHAS = [special_exponents()[f"theta{i}+"].imag for i in (1, 2, 3)]


def test_log_gamma_known_values():
    assert abs(log_gamma(1)) < 1e-15
    assert abs(log_gamma(0.5) - math.log(math.sqrt(math.pi))) < 1e-14
    assert abs(log_gamma(5) - math.log(24)) < 1e-13


def test_modulus_identity():
    a = 1.0
    assert abs(abs(gamma(1j * a)) ** 2 - math.pi / (a * math.sinh(math.pi * a))) < 1e-10


def test_poles():
    for z in (0, -1, -7):
        with pytest.raises(PoleAtNonpositiveInteger):
            log_gamma(z)


@settings(max_examples=300, deadline=None)
@given(st.floats(0.5, 60), st.floats(-60, 60))
def test_log_gamma_vs_mpmath_right_half(x, y):
    z = complex(x, y)
    ref = complex(mpmath.loggamma(mpmath.mpc(x, y)))
    got = log_gamma(z)
    # relative accuracy of Gamma itself, and principal branch of the imaginary part
    assert abs(got.real - ref.real) <= 1e-12 * max(1.0, abs(ref.real))
    assert -math.pi < got.imag <= math.pi
    assert abs(cmath.exp(1j * (got.imag - ref.imag)) - 1) <= 1e-11 * max(1.0, abs(ref))


@settings(max_examples=200, deadline=None)
@given(st.floats(-20, 0.49), st.floats(-20, 20))
def test_gamma_reflection_region(x, y):
    z = complex(x, y)
    if y == 0 and x == math.floor(x):
        return
    ref = complex(mpmath.gamma(mpmath.mpc(x, y)))
    if abs(ref) < 1e-250 or abs(ref) > 1e250:
        return
    assert abs(gamma(z) - ref) <= 1e-10 * abs(ref)


def test_phase_unimodular_and_oracle():
    for a in ALPHAS:
        for k in range(51):
            smp = phase(k, a)
            assert abs(abs(smp.phase2) - 1) <= 1e-10
            assert abs(smp.phase2 - product_phase(k, a)) <= 1e-10
            assert smp.lambda6 == k * (k + 5)
            assert abs(smp.s_value - scattering_prefactor(a) * smp.phase2) <= 1e-15


def test_phase_vs_mpmath_gamma_ratio():
    for a in ALPHAS:
        for k in (0, 7, 50):
            ia = mpmath.mpc(0, a)
            ref = (mpmath.gamma(-ia) / mpmath.gamma(ia)
                   * mpmath.gamma(k + 3 + ia) / mpmath.gamma(k + 3 - ia))
            assert abs(phase(k, a).phase2 - complex(ref)) <= 1e-12


def test_small_alpha_limit():
    assert abs(phase(0, 1e-6).phase2 + 1) < 1e-5


def test_conjugation_under_alpha_flip():
    for a in ALPHAS:
        for k in (0, 3, 20):
            assert abs(gamma_phase(k, -a) - gamma_phase(k, a).conjugate()) <= 1e-12


def test_phase_preconditions():
    with pytest.raises(ValueError):
        phase(-1, 1.0)
    with pytest.raises(ValueError):
        phase(0, 0.0)


def test_realness():
    xs = log_spaced(1e-4, 1, 50)
    assert len(xs) == 50 and xs[0] == pytest.approx(1e-4) and xs[-1] == pytest.approx(1)
    for a in ALPHAS:
        for k in (0, 1, 10):
            assert real_profile_check(a, phase(k, a).phase2, xs) <= 1e-8


def test_realness_trivial_symmetric_phase():
    xs = log_spaced(1e-3, 0.9, 20)
    assert real_profile_check(1.3, 1 + 0j, xs) <= 1e-12


def test_realness_negative_control():
    xs = log_spaced(1e-4, 1, 50)
    bad = 0.9 * phase(0, ALPHAS[1]).phase2
    assert real_profile_check(ALPHAS[1], bad, xs) > 1e-3


def test_realness_errors():
    with pytest.raises(ValueError):
        real_profile_check(1.0, 1 + 0j, [])
    with pytest.raises(ValueError):
        real_profile_check(1.0, 1 + 0j, [2.0])
    # choose x so that x^{ia} + 2^{-2ia} * p * x^{-ia} vanishes: p = -x^{2ia} 2^{2ia}
    a, x = 1.0, 0.5
    p = -cmath.exp(2j * a * math.log(x)) / scattering_prefactor(a)
    with pytest.raises(DegenerateProfile):
        real_profile_check(a, p, [x])
