"""Indicial polynomials of the Hodge sectors of the linearized operator.

Every sector reduces, for a fixed S^4 eigenvalue ``lam``, to a polynomial in
the exponent ``s``. The hyperbolic Laplacian on functions enters through its
indicial polynomial ``Delta_H -> s(6 - s)``.
"""
from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from fractions import Fraction

from ._parallel import parallel_map
from .polynomials import BivariatePoly, GaussianRational, I, UniPoly, determinant4
from .spectrum import FormKind, eigenvalues


class InadmissibleLambda(ValueError):
    def __init__(self, sector: "SectorId", lam: int):
        self.sector, self.lam = sector, lam
        super().__init__(f"lambda={lam} is not admissible for sector {sector.label}")


class SectorId(enum.Enum):
    # value: (label, star6 sign or None)
    TTH7 = ("TTH7", None)
    TTS4 = ("TTS4", None)
    H40_PLUS = ("H40Harmonic(+i)", 1)
    H40_MINUS = ("H40Harmonic(-i)", -1)
    SCALAR4X4 = ("ScalarSystem4x4", None)
    H31H40_PLUS = ("H31H40Closed(+i)", 1)
    H31H40_MINUS = ("H31H40Closed(-i)", -1)
    COCLOSED = ("CoclosedSystem", None)
    H22H31 = ("H22H31", None)

    @property
    def label(self) -> str:
        return self.value[0]

    @property
    def star6sign(self) -> int | None:
        return self.value[1]

    @property
    def order(self) -> int:
        return list(SectorId).index(self)

    @property
    def family(self) -> str:
        """Label with the star6 sign removed; conjugate pairs share a family."""
        return self.label.split("(")[0]

    @property
    def lambda_kinds(self) -> frozenset[FormKind]:
        return _LAMBDA_KINDS[self]

    @classmethod
    def from_label(cls, label: str) -> "SectorId":
        for sid in cls:
            if sid.label == label or sid.name == label:
                return sid
        raise ValueError(f"unknown sector {label!r}")


_LAMBDA_KINDS = {
    SectorId.TTH7: frozenset({FormKind.FUNCTION4}),
    # trace-free S^4 tensors: lam is an opaque input, indexed like functions
    SectorId.TTS4: frozenset({FormKind.FUNCTION4}),
    SectorId.H40_PLUS: frozenset({FormKind.FUNCTION4}),
    SectorId.H40_MINUS: frozenset({FormKind.FUNCTION4}),
    SectorId.SCALAR4X4: frozenset({FormKind.CLOSED1FORM4}),
    SectorId.H31H40_PLUS: frozenset({FormKind.CLOSED1FORM4}),
    SectorId.H31H40_MINUS: frozenset({FormKind.CLOSED1FORM4}),
    SectorId.COCLOSED: frozenset({FormKind.COCLOSED1FORM4}),
    SectorId.H22H31: frozenset({FormKind.CLOSED1FORM4, FormKind.COCLOSED1FORM4}),
}

_EXPECTED_DEGREE = {
    SectorId.TTH7: 2, SectorId.TTS4: 2,
    SectorId.H40_PLUS: 1, SectorId.H40_MINUS: 1,
    SectorId.SCALAR4X4: 8,
    SectorId.H31H40_PLUS: 2, SectorId.H31H40_MINUS: 2,
    SectorId.COCLOSED: 4, SectorId.H22H31: 2,
}


@dataclass(frozen=True)
class SectorPolynomial:
    sector: SectorId
    lam: int
    poly: UniPoly
    lambda_kinds: frozenset[FormKind]

    @property
    def sort_key(self) -> tuple[int, int]:
        return (self.sector.order, self.lam)


# ---------------------------------------------------------------------------
# The coupled (sigma, tau, xi, delta_H w) system
# ---------------------------------------------------------------------------

# Constant in the (4,4) entry "c + lam + Delta_H".  The matrix as typeset has
# c = 12; its determinant does not reproduce the displayed degree-8
# polynomial nor any root on Re s = 3.  c = 6 reproduces the displayed
# polynomial exactly (up to overall sign).
MATRIX_VARIANTS = {"corrected": 6, "as_printed": 12}
DEFAULT_MATRIX_VARIANT = "corrected"


def hyperbolic_laplacian_indicial() -> BivariatePoly:
    """Indicial polynomial of the positive Laplacian on functions on H^7: s(6 - s)."""
    s = BivariatePoly.s()
    return s * (6 - s)


def scalar_system_matrix(variant: str = DEFAULT_MATRIX_VARIANT) -> list[list[BivariatePoly]]:
    try:
        c44 = MATRIX_VARIANTS[variant]
    except KeyError:
        raise ValueError(f"unknown matrix variant {variant!r}") from None
    lam = BivariatePoly.lam()
    dh = hyperbolic_laplacian_indicial()
    z = BivariatePoly()
    return [
        [12 + lam + dh, BivariatePoly.constant(-48), -4 * lam, z],
        [z, 72 + lam + dh, 8 * lam, z],
        [BivariatePoly.constant(21), BivariatePoly.constant(-12), -lam - dh,
         BivariatePoly.constant(-6)],
        [z, z, 6 * dh, c44 + lam + dh],
    ]


@functools.lru_cache(maxsize=None)
def scalar_system_determinant(variant: str = DEFAULT_MATRIX_VARIANT) -> BivariatePoly:
    """Determinant of the coupled system, sign-normalized so ``s^8`` has coefficient +1."""
    det = determinant4(scalar_system_matrix(variant))
    return -det if det.terms.get((8, 0), 0) < 0 else det


def _printed_terms() -> dict[tuple[int, int], int]:
    # (power of s, power of lam) -> coefficient, transcribed term by term;
    # "S*lam" in the typeset text is the product S*lam.
    return {
        (0, 4): 1,
        (2, 3): -4, (1, 3): 24, (0, 3): -90,
        (4, 2): 6, (3, 2): -72, (2, 2): 342, (1, 2): -756, (0, 2): 1152,
        (6, 1): -4, (5, 1): 72, (4, 1): -414, (3, 1): 648, (2, 1): 1152,
        (1, 1): -3024, (0, 1): 10368,
        (8, 0): 1, (7, 0): -24, (6, 0): 162, (5, 0): 108, (4, 0): -6192,
        (3, 0): 31536, (2, 0): -33696, (1, 0): -155520,
    }


PRINTED_SCALAR_DETERMINANT = BivariatePoly(_printed_terms())


def compare_with_printed(det: BivariatePoly | None = None) -> dict[tuple[int, int], tuple[Fraction, Fraction]]:
    """Coefficient mismatches ``{(i, j): (computed, printed)}``; empty when they agree."""
    det = scalar_system_determinant() if det is None else det
    keys = sorted(set(det.terms) | set(PRINTED_SCALAR_DETERMINANT.terms))
    out = {}
    for key in keys:
        a = det.terms.get(key, Fraction(0))
        b = PRINTED_SCALAR_DETERMINANT.terms.get(key, Fraction(0))
        if a != b:
            out[key] = (a, b)
    return out


# ---------------------------------------------------------------------------
# Per-sector polynomials
# ---------------------------------------------------------------------------

def _s() -> UniPoly:
    return UniPoly.s()


def _build(sector: SectorId, lam: int, variant: str) -> UniPoly:
    s = _s()
    if sector is SectorId.TTH7:
        return lam - s * s + 6 * s
    if sector is SectorId.TTS4:
        return lam - s * s + 6 * s + 8
    if sector in (SectorId.H40_PLUS, SectorId.H40_MINUS):
        # (s - 3) *6 N - 6 N = 0 with *6 N = +-i N
        return GaussianRational(0, sector.star6sign) * (s - 3) - 6
    if sector is SectorId.SCALAR4X4:
        return scalar_system_determinant(variant).specialize_lam(lam)
    if sector in (SectorId.H31H40_PLUS, SectorId.H31H40_MINUS):
        u = s - 3
        return u * u + sector.star6sign * 6 * I * u - lam
    if sector is SectorId.COCLOSED:
        a = (s - 1) * (s - 5)
        return (UniPoly.constant(lam * lam)
                - (36 + a + s * s - 6 * s - 1) * lam
                - a * (-(s * s) + 6 * s + 1))
    if sector is SectorId.H22H31:
        return lam - (2 - s) * (4 - s)
    raise AssertionError(sector)


def is_admissible(sector: SectorId, lam: int) -> bool:
    if sector in (SectorId.H40_PLUS, SectorId.H40_MINUS):
        return lam == 0
    return lam in eigenvalues(sector.lambda_kinds, lam)


def indicial_poly(sector: SectorId, lam: int, variant: str = DEFAULT_MATRIX_VARIANT) -> SectorPolynomial:
    if not isinstance(lam, int) or not is_admissible(sector, lam):
        raise InadmissibleLambda(sector, lam)
    poly = _build(sector, lam, variant)
    assert poly.degree == _EXPECTED_DEGREE[sector], (sector, poly.degree)
    return SectorPolynomial(sector, lam, poly, sector.lambda_kinds)


def sector_lambdas(sector: SectorId, lambda_max: int) -> list[int]:
    if sector in (SectorId.H40_PLUS, SectorId.H40_MINUS):
        return [0] if lambda_max >= 0 else []
    return eigenvalues(sector.lambda_kinds, lambda_max)


def sector_sweep(lambda_max: int, variant: str = DEFAULT_MATRIX_VARIANT,
                 sectors=None, threads: int | None = None) -> list[SectorPolynomial]:
    """Every admissible (sector, lam) with lam <= lambda_max, ordered by (sector, lam)."""
    chosen = list(SectorId) if sectors is None else sorted(sectors, key=lambda x: x.order)
    pairs = [(sid, lam) for sid in chosen for lam in sector_lambdas(sid, lambda_max)]
    return parallel_map(lambda p: indicial_poly(p[0], p[1], variant), pairs, threads)
