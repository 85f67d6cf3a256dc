"""Exact polynomial arithmetic and complex root extraction.

Univariate polynomials carry Gaussian-rational coefficients (needed for the
``*6 N = +-i N`` sectors); bivariate polynomials in ``(s, lam)`` carry plain
rationals. Floating point only enters in :func:`solve_roots`.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence, Union

ROOT_RESIDUAL_TOL = 1e-10
PAIRING_TOL = 1e-9
MAX_NEWTON_ITER = 100

_EPS = 2.0 ** -52


class NonConvergence(ArithmeticError):
    """Root extraction failed; usually a sign of ill-conditioning."""

    def __init__(self, index: int, message: str = ""):
        self.index = index
        super().__init__(message or f"root {index} did not converge")


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


class GaussianRational:
    """Exact complex number ``re + i*im`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    _OPERANDS = (int, Fraction, float, complex)

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        return cls(x, 0)

    def __add__(self, other):
        if not isinstance(other, (GaussianRational, *self._OPERANDS)):
            return NotImplemented
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        if not isinstance(other, (GaussianRational, *self._OPERANDS)):
            return NotImplemented
        return self + (-GaussianRational.coerce(other))

    def __rsub__(self, other):
        if not isinstance(other, (GaussianRational, *self._OPERANDS)):
            return NotImplemented
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (GaussianRational, *self._OPERANDS)):
            return NotImplemented
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (GaussianRational, *self._OPERANDS)):
            return NotImplemented
        o = GaussianRational.coerce(other)
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational((self.re * o.re + self.im * o.im) / n,
                                (self.im * o.re - self.re * o.im) / n)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"


I = GaussianRational(0, 1)

Scalar = Union[int, Fraction, GaussianRational]


class UniPoly:
    """Polynomial in ``s`` with Gaussian-rational coefficients, lowest power first."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable = ()):
        coeffs = [GaussianRational.coerce(c) for c in coefficients]
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    @classmethod
    def s(cls) -> "UniPoly":
        return cls([0, 1])

    @classmethod
    def constant(cls, c) -> "UniPoly":
        return cls([c])

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def is_real(self) -> bool:
        return all(c.is_real() for c in self.coefficients)

    @property
    def leading(self) -> GaussianRational:
        if not self.coefficients:
            return GaussianRational(0)
        return self.coefficients[-1]

    @staticmethod
    def _coerce(other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        return UniPoly([other])

    def __add__(self, other):
        o = UniPoly._coerce(other)
        a, b = self.coefficients, o.coefficients
        n = max(len(a), len(b))
        zero = GaussianRational(0)
        return UniPoly([(a[i] if i < len(a) else zero) + (b[i] if i < len(b) else zero)
                        for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coefficients])

    def __sub__(self, other):
        return self + (-UniPoly._coerce(other))

    def __rsub__(self, other):
        return UniPoly._coerce(other) - self

    def __mul__(self, other):
        o = UniPoly._coerce(other)
        a, b = self.coefficients, o.coefficients
        if not a or not b:
            return UniPoly()
        out = [GaussianRational(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x.is_zero():
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = UniPoly([1])
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coefficients == other.coefficients
        return NotImplemented

    def __hash__(self):
        return hash(self.coefficients)

    def derivative(self) -> "UniPoly":
        return UniPoly([c * k for k, c in enumerate(self.coefficients)][1:])

    def conjugate(self) -> "UniPoly":
        return UniPoly([c.conjugate() for c in self.coefficients])

    def eval(self, x):
        """Evaluate by Horner's rule.

        Exact (int, Fraction, GaussianRational) arguments give an exact
        GaussianRational; float/complex arguments give a complex double.
        """
        if isinstance(x, (int, Fraction, GaussianRational)):
            acc = GaussianRational(0)
            for c in reversed(self.coefficients):
                acc = acc * x + c
            return acc
        z = complex(x)
        acc = 0j
        for c in self.complex_coefficients()[::-1]:
            acc = acc * z + c
        return acc

    __call__ = eval

    def complex_coefficients(self) -> list[complex]:
        return [complex(c) for c in self.coefficients]

    def norm(self) -> float:
        """Max coefficient magnitude."""
        return max((abs(c) for c in self.complex_coefficients()), default=0.0)

    def __repr__(self):
        return f"UniPoly({[str(c) for c in self.coefficients]})"

    def __str__(self):
        if not self.coefficients:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coefficients[k]
            if c.is_zero():
                continue
            mono = "" if k == 0 else ("s" if k == 1 else f"s^{k}")
            if mono and c == 1:
                parts.append(mono)
            elif mono and c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(parts).replace("+ -", "- ")


class BivariatePoly:
    """Polynomial in ``(s, lam)`` with rational coefficients.

    ``terms`` maps ``(power of s, power of lam)`` to a nonzero Fraction and is
    iterated in sorted key order.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        clean = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError("negative exponent")
            c = _frac(c)
            if c != 0:
                clean[(int(i), int(j))] = c
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    def __setattr__(self, name, value):
        raise AttributeError("BivariatePoly is immutable")

    @classmethod
    def s(cls) -> "BivariatePoly":
        return cls({(1, 0): 1})

    @classmethod
    def lam(cls) -> "BivariatePoly":
        return cls({(0, 1): 1})

    @classmethod
    def constant(cls, c) -> "BivariatePoly":
        return cls({(0, 0): c})

    @staticmethod
    def _coerce(other) -> "BivariatePoly":
        if isinstance(other, BivariatePoly):
            return other
        return BivariatePoly.constant(other)

    def is_zero(self) -> bool:
        return not self.terms

    def degree_s(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    def degree_lam(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    def __add__(self, other):
        o = BivariatePoly._coerce(other)
        out = dict(self.terms)
        for k, c in o.terms.items():
            out[k] = out.get(k, 0) + c
        return BivariatePoly(out)

    __radd__ = __add__

    def __neg__(self):
        return BivariatePoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-BivariatePoly._coerce(other))

    def __rsub__(self, other):
        return BivariatePoly._coerce(other) - self

    def __mul__(self, other):
        o = BivariatePoly._coerce(other)
        out: dict[tuple[int, int], Fraction] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in o.terms.items():
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, 0) + c1 * c2
        return BivariatePoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = BivariatePoly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, BivariatePoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == BivariatePoly.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def eval(self, s, lam):
        """Exact for rational arguments; complex double otherwise."""
        exact = all(isinstance(v, (int, Fraction)) for v in (s, lam))
        if exact:
            return sum((c * Fraction(s) ** i * Fraction(lam) ** j
                        for (i, j), c in self.terms.items()), Fraction(0))
        s, lam = complex(s), complex(lam)
        # Horner in s over lam-polynomial coefficients
        acc = 0j
        for i in range(self.degree_s(), -1, -1):
            ci = 0j
            for j in range(self.degree_lam(), -1, -1):
                ci = ci * lam + float(self.terms.get((i, j), 0))
            acc = acc * s + ci
        return acc

    def specialize_lam(self, lam) -> UniPoly:
        """Substitute an exact value for ``lam``; returns a polynomial in ``s``."""
        lam = _frac(lam)
        coeffs = [Fraction(0)] * (self.degree_s() + 1)
        for (i, j), c in self.terms.items():
            coeffs[i] += c * lam ** j
        return UniPoly(coeffs)

    def substitute_s(self, poly_s: "BivariatePoly") -> "BivariatePoly":
        """Replace ``s`` by a bivariate polynomial (composition)."""
        out = BivariatePoly()
        for (i, j), c in self.terms.items():
            out = out + c * poly_s ** i * BivariatePoly.lam() ** j
        return out

    def __repr__(self):
        return f"BivariatePoly({ {k: str(v) for k, v in self.terms.items()} })"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self.terms.items(), key=lambda kv: (-kv[0][0], -kv[0][1])):
            mono = "*".join(m for m in (
                "" if i == 0 else ("s" if i == 1 else f"s^{i}"),
                "" if j == 0 else ("lam" if j == 1 else f"lam^{j}")) if m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def determinant(m: Sequence[Sequence]) -> BivariatePoly:
    """Cofactor-expansion determinant of a square matrix of BivariatePoly."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("matrix must be square")
    rows = [[BivariatePoly._coerce(x) for x in row] for row in m]
    return _cofactor(rows)


def _cofactor(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    # expand along the row with most zeros
    r = max(range(n), key=lambda i: sum(x.is_zero() for x in rows[i]))
    total = BivariatePoly()
    for c in range(n):
        entry = rows[r][c]
        if entry.is_zero():
            continue
        minor = [row[:c] + row[c + 1:] for k, row in enumerate(rows) if k != r]
        term = entry * _cofactor(minor)
        total = total + term if (r + c) % 2 == 0 else total - term
    return total


def determinant4(m: Sequence[Sequence]) -> BivariatePoly:
    if len(m) != 4:
        raise ValueError("determinant4 expects a 4x4 matrix")
    return determinant(m)


# ---------------------------------------------------------------------------
# Root finding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComplexRoot:
    value: complex
    residual: float
    multiplicity_hint: int = 1


def _balance(a: list[list[complex]]) -> None:
    """Parlett-Reinsch balancing in place, radix 2."""
    n = len(a)
    radix = 2.0
    done = False
    while not done:
        done = True
        for i in range(n):
            c = sum(abs(a[j][i]) for j in range(n) if j != i)
            r = sum(abs(a[i][j]) for j in range(n) if j != i)
            if c == 0.0 or r == 0.0:
                continue
            g = r / radix
            f = 1.0
            s = c + r
            while c < g:
                f *= radix
                c *= radix * radix
            g = r * radix
            while c > g:
                f /= radix
                c /= radix * radix
            if (c + r) / f < 0.95 * s:
                done = False
                g = 1.0 / f
                for j in range(n):
                    a[i][j] *= g
                for j in range(n):
                    a[j][i] *= f


def _hessenberg_eigenvalues(h: list[list[complex]], max_iter_per_root: int = 60) -> list[complex]:
    """Eigenvalues of an upper Hessenberg matrix by shifted complex QR.

    Single Wilkinson shift with Givens rotations; deflates from the bottom.
    ``h`` is destroyed.
    """
    n = len(h)
    eigs: list[complex] = []
    hi = n - 1
    its = 0
    while hi >= 0:
        if hi == 0:
            eigs.append(h[0][0])
            break
        lo = hi
        while lo > 0:
            scale = abs(h[lo - 1][lo - 1]) + abs(h[lo][lo])
            if scale == 0.0:
                scale = 1.0
            if abs(h[lo][lo - 1]) <= _EPS * scale:
                h[lo][lo - 1] = 0j
                break
            lo -= 1
        if lo == hi:
            eigs.append(h[hi][hi])
            hi -= 1
            its = 0
            continue
        its += 1
        if its > max_iter_per_root:
            raise NonConvergence(len(eigs), "QR iteration failed to deflate")

        a, b = h[hi - 1][hi - 1], h[hi - 1][hi]
        c, d = h[hi][hi - 1], h[hi][hi]
        if its % 11 == 0:
            # exceptional shift to break cycles
            mu = d + 0.75 * abs(c) * cmath.exp(1j * its)
        else:
            half = (a - d) / 2
            disc = cmath.sqrt(half * half + b * c)
            m1, m2 = (a + d) / 2 + disc, (a + d) / 2 - disc
            mu = m1 if abs(m1 - d) < abs(m2 - d) else m2

        for k in range(lo, hi + 1):
            h[k][k] -= mu
        rots = []
        for k in range(lo, hi):
            x, y = h[k][k], h[k + 1][k]
            r = math.hypot(abs(x), abs(y))
            if r == 0.0:
                rots.append((1.0 + 0j, 0j))
                continue
            cr, sr = x / r, y / r
            ccr, csr = cr.conjugate(), sr.conjugate()
            for j in range(k, hi + 1):
                u, v = h[k][j], h[k + 1][j]
                h[k][j] = ccr * u + csr * v
                h[k + 1][j] = -sr * u + cr * v
            rots.append((cr, sr))
        for k, (cr, sr) in zip(range(lo, hi), rots):
            ccr, csr = cr.conjugate(), sr.conjugate()
            for i in range(lo, min(k + 2, hi) + 1):
                u, v = h[i][k], h[i][k + 1]
                h[i][k] = cr * u + sr * v
                h[i][k + 1] = -csr * u + ccr * v
        for k in range(lo, hi + 1):
            h[k][k] += mu
    return eigs


def companion_eigenvalues(coeffs: Sequence[complex]) -> list[complex]:
    """Roots of ``sum coeffs[k] s^k`` as eigenvalues of the balanced companion matrix."""
    n = len(coeffs) - 1
    lead = complex(coeffs[-1])
    if n < 1:
        return []
    a = [[0j] * n for _ in range(n)]
    for j in range(n):
        a[0][j] = -complex(coeffs[n - 1 - j]) / lead
    for i in range(1, n):
        a[i][i - 1] = 1.0 + 0j
    _balance(a)
    return _hessenberg_eigenvalues(a)


def _horner_with_derivative(coeffs: Sequence[complex], z: complex) -> tuple[complex, complex]:
    p = 0j
    dp = 0j
    for c in reversed(coeffs):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _polish(coeffs: Sequence[complex], z: complex, index: int, tol: float) -> tuple[complex, float]:
    norm = max(abs(c) for c in coeffs)
    p, dp = _horner_with_derivative(coeffs, z)
    best, best_res = z, abs(p) / norm
    for _ in range(MAX_NEWTON_ITER):
        if p == 0 or dp == 0:
            break
        step = p / dp
        z_new = z - step
        p_new, dp_new = _horner_with_derivative(coeffs, z_new)
        res_new = abs(p_new) / norm
        if res_new < best_res:
            best, best_res = z_new, res_new
        if abs(step) <= 4 * _EPS * max(abs(z_new), 1.0) or res_new >= best_res and best_res <= tol:
            break
        z, p, dp = z_new, p_new, dp_new
    if not best_res <= tol:
        raise NonConvergence(index, f"root {index} residual {best_res:.3e} exceeds {tol:.1e}")
    return best, best_res


def _snap_exact(poly: UniPoly, z: complex, max_den: int = 64) -> complex | None:
    """Return ``z`` rounded to a small-denominator Gaussian rational if that is an exact root."""
    try:
        cand = GaussianRational(Fraction(z.real).limit_denominator(max_den),
                                Fraction(z.imag).limit_denominator(max_den))
    except (OverflowError, ValueError):
        return None
    # a cluster of multiple roots spreads like eps^(1/m); exact evaluation certifies
    if abs(complex(cand) - z) > 1e-3 * max(1.0, abs(z)):
        return None
    if poly.eval(cand).is_zero():
        return complex(cand)
    return None


def _realify(coeffs, roots, tol):
    """For real coefficients: make near-real roots real and pair the rest exactly."""
    real_coeffs = [c.real for c in coeffs]
    norm = max(abs(c) for c in real_coeffs)
    out = []
    for z, res in roots:
        if z.imag != 0 and abs(z.imag) <= 1e-5 * max(1.0, abs(z)):
            x = z.real
            for _ in range(MAX_NEWTON_ITER):
                p, dp = _horner_with_derivative(real_coeffs, x)
                if p == 0 or dp == 0:
                    break
                step = p / dp
                x -= step
                if abs(step) <= 4 * _EPS * max(abs(x), 1.0):
                    break
            r_res = abs(_horner_with_derivative(real_coeffs, x)[0]) / norm
            if r_res <= tol:
                z, res = complex(x, 0.0), r_res
        out.append((z, res))
    upper = [i for i, (z, _) in enumerate(out) if z.imag > 0]
    lower = [i for i, (z, _) in enumerate(out) if z.imag < 0]
    for i in upper:
        if not lower:
            break
        z = out[i][0]
        j = min(lower, key=lambda k: abs(out[k][0] - z.conjugate()))
        lower.remove(j)
        out[j] = (z.conjugate(), out[i][1])
    return out


def solve_roots(p: UniPoly | Sequence, tol: float = ROOT_RESIDUAL_TOL,
                cluster_tol: float = 1e-6) -> list[ComplexRoot]:
    """All complex roots of ``p``, with multiplicity, sorted by (Re, Im).

    Eigenvalues of the balanced companion matrix are refined by Newton's
    method on the original coefficients until ``|p(z)| / max|coeff| <= tol``.
    For exact input, roots that are small-denominator Gaussian rationals are
    certified by exact evaluation and returned exactly.

    Raises
    ------
    NonConvergence
        If QR deflation stalls or a root cannot be polished to ``tol``.
    """
    exact = p if isinstance(p, UniPoly) else None
    coeffs = p.complex_coefficients() if isinstance(p, UniPoly) else [complex(c) for c in p]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    n = len(coeffs) - 1
    if n < 1:
        raise ValueError("solve_roots needs degree >= 1")
    if abs(coeffs[-1]) <= 1e-300:
        raise ValueError("leading coefficient is too small")

    # factor out s^m exactly
    zeros = 0
    while coeffs[zeros] == 0:
        zeros += 1
    reduced = coeffs[zeros:]
    values = [0j] * zeros
    if len(reduced) > 1:
        values += companion_eigenvalues(reduced)

    roots = []
    for idx, z in enumerate(values):
        if idx < zeros:
            roots.append((0j, 0.0))
            continue
        z, res = _polish(coeffs, z, idx, tol)
        if exact is not None:
            snapped = _snap_exact(exact, z)
            if snapped is not None:
                z, res = snapped, 0.0
        roots.append((z, res))
    if all(c.imag == 0 for c in coeffs):
        roots = _realify(coeffs, roots, tol)
    roots.sort(key=lambda r: (r[0].real, r[0].imag))
    out = []
    for z, res in roots:
        mult = sum(1 for w, _ in roots if abs(w - z) <= cluster_tol * max(1.0, abs(z)))
        out.append(ComplexRoot(z, res, mult))
    return out


def conjugate_closed(values: Sequence[complex], tol: float = PAIRING_TOL) -> bool:
    """True if the multiset is closed under complex conjugation within ``tol``."""
    remaining = list(values)
    for z in values:
        target = z.conjugate()
        j = min(range(len(remaining)), key=lambda k: abs(remaining[k] - target), default=None)
        if j is None or abs(remaining[j] - target) > tol * max(1.0, abs(z)):
            return False
        remaining.pop(j)
    return True
