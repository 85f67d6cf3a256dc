from math import comb

import pytest

from indicial_lab.spectrum import (FormKind, IndexBelowMinimum, eigenvalue, harmonic_dim,
                                   multiplicity, spectrum_table, unit_sphere_eigenvalue)


@pytest.mark.parametrize("kind,k,lam", [
    (FormKind.FUNCTION4, 1, 16),
    (FormKind.FUNCTION4, 0, 0),
    (FormKind.COCLOSED1FORM4, 1, 24),
    (FormKind.FUNCTION6, 1, 6),
    (FormKind.CLOSED1FORM4, 2, 40),
])
def test_eigenvalue_examples(kind, k, lam):
    assert eigenvalue(kind, k) == lam


@pytest.mark.parametrize("kind,k,m", [
    (FormKind.CLOSED1FORM4, 1, 5),
    (FormKind.CLOSED1FORM4, 2, 14),
    (FormKind.FUNCTION4, 0, 1),
    (FormKind.FUNCTION4, 3, 30),
    (FormKind.FUNCTION6, 1, 7),
])
def test_multiplicity_examples(kind, k, m):
    assert multiplicity(kind, k) == m


def test_below_minimum():
    with pytest.raises(IndexBelowMinimum):
        eigenvalue(FormKind.CLOSED1FORM4, 0)
    with pytest.raises(IndexBelowMinimum):
        multiplicity(FormKind.COCLOSED1FORM4, 0)
    with pytest.raises(IndexBelowMinimum):
        eigenvalue(FormKind.FUNCTION4, -1)


@pytest.mark.parametrize("kind", list(FormKind))
def test_monotone_and_scaled(kind):
    vals = [eigenvalue(kind, k) for k in range(kind.k_min, kind.k_min + 30)]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    factor = 1 if kind is FormKind.FUNCTION6 else 4
    for k in range(kind.k_min, kind.k_min + 30):
        assert eigenvalue(kind, k) == factor * unit_sphere_eigenvalue(kind, k)


def test_function_multiplicity_is_harmonic_dimension():
    for k in range(40):
        assert multiplicity(FormKind.FUNCTION4, k) == harmonic_dim(5, k)
        assert multiplicity(FormKind.FUNCTION6, k) == harmonic_dim(7, k) == comb(k + 6, 6) - comb(k + 4, 6)


def test_coclosed_multiplicity_brute_force():
    # 1-forms with coefficients in degree-k harmonics: 5 h(k) = closed(k+1) + coclosed(k) + closed-part(k-1)
    for k in range(1, 40):
        h = lambda n: harmonic_dim(5, n) if n >= 0 else 0
        assert multiplicity(FormKind.COCLOSED1FORM4, k) == 5 * h(k) - h(k + 1) - h(k - 1)


def test_spectrum_tables():
    assert [(e.k, e.lam) for e in spectrum_table(FormKind.FUNCTION4, 40)] == [(0, 0), (1, 16), (2, 40)]
    assert spectrum_table(FormKind.CLOSED1FORM4, 15) == []
    assert [(e.k, e.lam) for e in spectrum_table(FormKind.COCLOSED1FORM4, 50)] == [(1, 24), (2, 48)]
    table = spectrum_table(FormKind.FUNCTION6, 400)
    assert [e.lam for e in table] == sorted(e.lam for e in table)


def test_parse():
    assert FormKind.parse("closed1") is FormKind.CLOSED1FORM4
    with pytest.raises(ValueError):
        FormKind.parse("twoform")
