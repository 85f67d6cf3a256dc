"""Hyperbolic scattering phase on S^6 eigenspaces.

For s = 3 + i*alpha on H^7 the scattering value on the k-th S^6 mode is

    S(3 + i alpha) = 2^{-2 i alpha} * e^{2 i theta},
    e^{2 i theta}  = G(-i a)/G(i a) * G(k + 3 + i a)/G(k + 3 - i a),

since sqrt(k(k+5) + 25/4) + 1/2 = k + 3.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

# Lanczos approximation, g = 7, nine terms (Godfrey's coefficient set).
LANCZOS_G = 7.0
LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)
_LOG_PI = math.log(math.pi)

UNIMODULAR_TOL = 1e-10
PROFILE_TOL = 1e-8


class PoleAtNonpositiveInteger(ValueError):
    pass


class DegenerateProfile(ArithmeticError):
    pass


def _wrap(z: complex) -> complex:
    im = math.remainder(z.imag, 2 * math.pi)
    if im == -math.pi:
        im = math.pi
    return complex(z.real, im)


def _lanczos(z: complex) -> complex:
    z = z - 1
    x = LANCZOS_COEFFS[0]
    for i, c in enumerate(LANCZOS_COEFFS[1:], start=1):
        x += c / (z + i)
    t = z + LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def log_gamma(z) -> complex:
    """Principal value of log Gamma(z), imaginary part in (-pi, pi].

    Lanczos for Re z >= 1/2, reflection formula otherwise.
    """
    z = complex(z)
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise PoleAtNonpositiveInteger(f"Gamma has a pole at {z.real:g}")
    if z.real < 0.5:
        val = _LOG_PI - cmath.log(cmath.sin(math.pi * z)) - log_gamma(1 - z)
    else:
        val = _lanczos(z)
    return _wrap(val)


def gamma(z) -> complex:
    return cmath.exp(log_gamma(z))


@dataclass(frozen=True)
class ScatteringSample:
    k: int
    lambda6: int
    alpha: float
    phase2: complex
    s_value: complex

    @property
    def theta(self) -> float:
        """Real phase theta with e^{2 i theta} = phase2, theta in (-pi/2, pi/2]."""
        return cmath.phase(self.phase2) / 2


def gamma_phase(k: int, alpha: float) -> complex:
    """e^{2 i theta} from the Gamma ratios; defined for any real nonzero alpha."""
    shift = k + 3
    ia = 1j * alpha
    return cmath.exp(log_gamma(-ia) - log_gamma(ia)
                     + log_gamma(shift + ia) - log_gamma(shift - ia))


def product_phase(k: int, alpha: float) -> complex:
    """Same quantity via Gamma(z+1) = z Gamma(z): -prod_{j=1}^{k+2} (j + i a)/(j - i a)."""
    out = -1 + 0j
    for j in range(1, k + 3):
        out *= (j + 1j * alpha) / (j - 1j * alpha)
    return out


def phase(k: int, alpha: float) -> ScatteringSample:
    if k < 0:
        raise ValueError("mode index k must be nonnegative")
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    lam6 = k * (k + 5)
    assert (2 * k + 5) ** 2 == 4 * lam6 + 25
    p2 = gamma_phase(k, alpha)
    return ScatteringSample(k, lam6, float(alpha), p2, scattering_prefactor(alpha) * p2)


def scattering_prefactor(alpha: float) -> complex:
    """2^{n - 2s} at n = 6, s = 3 + i alpha."""
    return cmath.exp(-2j * alpha * math.log(2))


def leading_profile(alpha: float, phase2: complex, x: float) -> complex:
    """x^{i a} + 2^{-2 i a} e^{2 i theta} x^{-i a}  (the common x^3 factor dropped)."""
    lx = math.log(x)
    return cmath.exp(1j * alpha * lx) + scattering_prefactor(alpha) * phase2 * cmath.exp(-1j * alpha * lx)


def real_profile_check(alpha: float, phase2: complex, xs: Sequence[float],
                       min_modulus: float = 1e-12) -> float:
    """Largest relative imaginary part of the leading profile after removing one constant phase.

    The phase is fixed at ``xs[0]``; a unimodular ``phase2`` makes the
    profile a constant phase times a real function, so the result is at
    rounding level.  A non-unimodular ``phase2`` gives an O(1) result.
    """
    if not len(xs):
        raise ValueError("xs must be nonempty")
    hs = []
    for x in xs:
        if not 0 < x <= 1:
            raise ValueError(f"sample point {x} outside (0, 1]")
        h = leading_profile(alpha, phase2, x)
        if abs(h) < min_modulus:
            raise DegenerateProfile(f"|h(x)| < {min_modulus:g} at x={x}; shift the sample points")
        hs.append(h)
    rot = abs(hs[0]) / hs[0]
    return max(abs((rot * h).imag) / abs(h) for h in hs)


def log_spaced(lo: float, hi: float, n: int) -> list[float]:
    if n == 1:
        return [lo]
    a, b = math.log(lo), math.log(hi)
    return [math.exp(a + (b - a) * i / (n - 1)) for i in range(n)]
