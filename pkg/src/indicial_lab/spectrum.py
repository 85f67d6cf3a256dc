"""Laplace eigenvalues and multiplicities on (1/4) g_{S^4} and on the round S^6."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from math import comb


class IndexBelowMinimum(ValueError):
    pass


class FormKind(enum.Enum):
    FUNCTION4 = "function4"
    CLOSED1FORM4 = "closed1"
    COCLOSED1FORM4 = "coclosed1"
    FUNCTION6 = "function6"

    @property
    def k_min(self) -> int:
        return _K_MIN[self]

    @classmethod
    def parse(cls, name: str) -> "FormKind":
        key = name.strip().lower()
        for kind in cls:
            if key in (kind.value, kind.name.lower()):
                return kind
        raise ValueError(f"unknown form kind {name!r}; expected one of "
                         + ", ".join(k.value for k in cls))


# Coclosed 1-forms start at k=1 (eigenvalue 24); k=0 would give 8, which the
# sector computations never use.
_K_MIN = {
    FormKind.FUNCTION4: 0,
    FormKind.CLOSED1FORM4: 1,
    FormKind.COCLOSED1FORM4: 1,
    FormKind.FUNCTION6: 0,
}


@dataclass(frozen=True, order=True)
class EigenEntry:
    lam: int
    k: int
    kind: FormKind
    multiplicity: int

    def as_row(self) -> dict:
        return {"kind": self.kind.value, "k": self.k, "lambda": self.lam,
                "multiplicity": self.multiplicity}


def _check(kind: FormKind, k: int) -> None:
    if k < kind.k_min:
        raise IndexBelowMinimum(f"{kind.value}: k={k} below minimum {kind.k_min}")


def unit_sphere_eigenvalue(kind: FormKind, k: int) -> int:
    """Eigenvalue on the unit-radius sphere (no 1/4 scaling)."""
    _check(kind, k)
    if kind in (FormKind.FUNCTION4, FormKind.CLOSED1FORM4):
        return k * (k + 3)
    if kind is FormKind.COCLOSED1FORM4:
        return (k + 1) * (k + 2)
    return k * (k + 5)


def eigenvalue(kind: FormKind, k: int) -> int:
    """Hodge Laplace eigenvalue for mode ``k``.

    S^4 kinds refer to the metric (1/4) g_{S^4}, hence 4x the unit-sphere
    value; FUNCTION6 is the unscaled round S^6.
    """
    base = unit_sphere_eigenvalue(kind, k)
    return base if kind is FormKind.FUNCTION6 else 4 * base


def harmonic_dim(n_vars: int, k: int) -> int:
    """Dimension of degree-k harmonic polynomials in ``n_vars`` variables."""
    if k < 0:
        return 0
    return comb(k + n_vars - 1, n_vars - 1) - comb(k + n_vars - 3, n_vars - 1)


def multiplicity(kind: FormKind, k: int) -> int:
    _check(kind, k)
    if kind in (FormKind.FUNCTION4, FormKind.CLOSED1FORM4):
        # closed 1-forms are d of degree-k spherical harmonics
        return (2 * k + 3) * (k + 1) * (k + 2) // 6
    if kind is FormKind.FUNCTION6:
        return comb(k + 6, 6) - comb(k + 4, 6)
    # SO(5) irrep with highest weight (k, 1); informational only
    return k * (k + 3) * (2 * k + 3) // 2


def spectrum_table(kind: FormKind, lambda_max: int) -> list[EigenEntry]:
    if lambda_max < 0:
        return []
    out = []
    k = kind.k_min
    while (lam := eigenvalue(kind, k)) <= lambda_max:
        out.append(EigenEntry(lam, k, kind, multiplicity(kind, k)))
        k += 1
    return out


def eigenvalues(kinds, lambda_max: int) -> list[int]:
    """Sorted distinct eigenvalues of the given kinds up to ``lambda_max``."""
    return sorted({e.lam for kind in kinds for e in spectrum_table(kind, lambda_max)})
