import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from indicial_lab.polynomials import (I, BivariatePoly, GaussianRational, NonConvergence, UniPoly,
                                      conjugate_closed, determinant, determinant4, solve_roots)
from indicial_lab.sectors import hyperbolic_laplacian_indicial

S = UniPoly.s()


def test_gaussian_rational_canonical():
    z = GaussianRational(Fraction(2, 4), Fraction(-6, 9))
    assert z.re == Fraction(1, 2) and z.im == Fraction(-2, 3)
    assert z.re.denominator > 0
    assert (I * I) == -1
    assert GaussianRational(1, 2) * GaussianRational(1, -2) == 5
    assert GaussianRational(3, 4) / GaussianRational(3, 4) == 1
    with pytest.raises(ZeroDivisionError):
        GaussianRational(1) / 0


def test_hand_expansion():
    assert (S ** 2 + 1) * (S - 1) == S ** 3 - S ** 2 + S - 1


def test_eval_exact_and_zero():
    p = S ** 2 - 6 * S
    assert p.eval(0) == 0
    assert p.eval(Fraction(1, 2)) == Fraction(1, 4) - 3
    assert p.eval(GaussianRational(3, 1)) == -10
    assert abs(p.eval(3 + 1j) - (-10)) < 1e-14


def test_trim_and_degree():
    assert UniPoly([1, 2, 0, 0]).degree == 1
    assert UniPoly([]).is_zero
    assert UniPoly([0]).is_zero


def test_bivariate_product_random_points():
    lam, d = BivariatePoly.lam(), hyperbolic_laplacian_indicial()
    prod = (12 + lam + d) * (72 + lam + d)
    rng = random.Random(7)
    for _ in range(20):
        s = Fraction(rng.randint(-50, 50), rng.randint(1, 20))
        l = Fraction(rng.randint(-50, 50), rng.randint(1, 20))
        dv = s * (6 - s)
        assert prod.eval(s, l) == (12 + l + dv) * (72 + l + dv)


def test_bivariate_sorted_terms_no_zeros():
    p = BivariatePoly({(2, 0): 1, (0, 1): 3, (1, 1): 0})
    assert list(p.terms) == sorted(p.terms)
    assert (1, 1) not in p.terms
    assert (p - p).is_zero


def test_determinant_trivial():
    one, zero = BivariatePoly.constant(1), BivariatePoly.constant(0)
    ident = [[one if i == j else zero for j in range(4)] for i in range(4)]
    assert determinant4(ident) == BivariatePoly.constant(1)
    a, b, c, d = (BivariatePoly.constant(v) for v in (2, 3, Fraction(1, 5), -7))
    diag = [[a, zero, zero, zero], [zero, b, zero, zero], [zero, zero, c, zero], [zero, zero, zero, d]]
    assert determinant4(diag) == BivariatePoly.constant(Fraction(-42, 5))
    sv, lv = BivariatePoly.s(), BivariatePoly.lam()
    assert determinant([[sv, lv], [lv, sv]]) == sv * sv - lv * lv


def test_determinant4_vs_numpy_1000_random():
    rng = random.Random(2024)
    sv, lv = BivariatePoly.s(), BivariatePoly.lam()

    def rand_entry():
        # random affine/quadratic entries with rational coefficients
        c = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(4)]
        return c[0] + c[1] * sv + c[2] * lv + c[3] * sv * lv

    for _ in range(1000):
        m = [[rand_entry() for _ in range(4)] for _ in range(4)]
        det = determinant4(m)
        s0, l0 = rng.uniform(-3, 3), rng.uniform(-3, 3)
        num = np.array([[float(e.eval(s0, l0).real) for e in row] for row in m])
        want = np.linalg.det(num)
        got = det.eval(s0, l0)
        scale = max(1.0, float(np.prod(np.linalg.norm(num, axis=1))))
        assert abs(got - want) <= 1e-10 * scale


def test_roots_basic():
    r = solve_roots(S ** 2 - 6 * S)
    assert [z.value for z in r] == [0, 6]
    r = solve_roots(S ** 2 + 36)
    assert [z.value for z in r] == [-6j, 6j]


def test_roots_sorted_complete_and_polished():
    p = (S - 1) * (S - 2) ** 2 * (S ** 2 + 2 * S + 5)
    roots = solve_roots(p)
    assert len(roots) == p.degree
    vals = [z.value for z in roots]
    assert vals == sorted(vals, key=lambda z: (z.real, z.imag))
    for z in roots:
        assert z.residual <= 1e-10
        assert abs(p.eval(z.value)) / p.norm() <= 1e-10
    assert conjugate_closed(vals)


def test_roots_gaussian_coefficients():
    p = I * (S - 3) - 6
    (r,) = solve_roots(p)
    assert abs(r.value - (3 - 6j)) < 1e-14


def test_roots_reject_constant():
    with pytest.raises(ValueError):
        solve_roots(UniPoly([5]))


def test_nonconvergence_is_arithmetic_error_with_index():
    e = NonConvergence(3, "x")
    assert e.index == 3 and isinstance(e, ArithmeticError)


coord = st.integers(-300, 300).map(lambda n: n / 100)


@settings(max_examples=150, deadline=None)
@given(st.lists(st.tuples(coord, coord), min_size=1, max_size=8))
def test_roots_match_numpy(pts):
    want = [complex(a, b) for a, b in pts]
    coeffs = np.poly(want)[::-1]
    got = [z.value for z in solve_roots(list(coeffs))]
    assert len(got) == len(want)
    ref = list(np.roots(coeffs[::-1]))
    for z in got:
        j = min(range(len(ref)), key=lambda k: abs(ref[k] - z))
        # clustered roots are ill-conditioned; compare loosely and rely on residuals
        assert abs(ref.pop(j) - z) < 1e-3


@settings(max_examples=150, deadline=None)
@given(st.lists(st.tuples(st.integers(-9, 9), st.integers(0, 9)), min_size=1, max_size=4))
def test_real_input_is_conjugate_closed(pairs):
    p = UniPoly([1])
    for a, b in pairs:
        p = p * (S ** 2 - 2 * a * S + (a * a + b * b))
    vals = [z.value for z in solve_roots(p)]
    assert len(vals) == p.degree
    assert conjugate_closed(vals, 1e-9)
