"""Leading-order boundary expansion of (k, H) from boundary data (v1, v2, v3).

Each special pair theta_i^{+-} contributes an outgoing term v_i x^{theta_i^+}
and an incoming term S_i(v_i) x^{theta_i^-}.  The scattering operators act
diagonally on S^6 modes, so S_i is a complex number here.  Operator prefixes
(delta_S, d_H, *_S, ...) are bookkeeping tags only.
"""
from __future__ import annotations

import functools
import json
from dataclasses import dataclass

from .roots import SPECIAL_SOURCES, special_roots, tabulate
from .sectors import DEFAULT_MATRIX_VARIANT, SectorId, indicial_poly

UNIMODULAR_TOL = 1e-8
RESIDUAL_TOL = 1e-8
DEFAULT_DELTA = 0.5

# component, operator tag, numeric factor, display name, feeding pairs
COMPONENTS = (
    ("H40", "dx/x∧", 1, "H_(4,0)", (1,)),
    ("TrH_k", "7 δ_S", 7, "Tr_H k", (2, 3)),
    ("TrS_k", "4 δ_S", 4, "Tr_S k", (2, 3)),
    ("k11", "d_H δ_S", 1, "k_(1,1)", (2, 3)),
    ("H13", "d_H ∗_S", 1, "H_(1,3)", (2, 3)),
    ("H04", "d_S ∗_S", 1, "H_(0,4)", (2, 3)),
)
EIGENFORM_TAGS = {2: 16, 3: 40}


class BadDelta(ValueError):
    pass


@dataclass(frozen=True)
class BoundaryData:
    """Amplitudes of the outgoing data; v2, v3 carry the lambda = 16, 40 closed-form tags."""

    v1: complex = 0j
    v2: complex = 0j
    v3: complex = 0j
    star6sign: int = 1
    labels: tuple[str, str, str] = ("v1", "v2", "v3")

    def __post_init__(self):
        if self.star6sign not in (1, -1):
            raise ValueError("star6sign must be +1 or -1 (for *v1 = +-i v1)")

    def amplitude(self, pair: int) -> complex:
        return complex((self.v1, self.v2, self.v3)[pair - 1])

    @classmethod
    def from_dict(cls, d: dict | None) -> "BoundaryData":
        d = d or {}

        def amp(v):
            if v is None:
                return 0j
            if isinstance(v, dict):
                return complex(float(v.get("re", 0)), float(v.get("im", 0)))
            if isinstance(v, (list, tuple)):
                return complex(float(v[0]), float(v[1]))
            return complex(v)

        sign = d.get("star6sign", "+i")
        sign = {"+i": 1, "-i": -1, "+": 1, "-": -1, 1: 1, -1: -1}.get(sign)
        if sign is None:
            raise ValueError(f"bad star6sign {d.get('star6sign')!r}")
        return cls(amp(d.get("v1")), amp(d.get("v2")), amp(d.get("v3")), sign)


@dataclass(frozen=True)
class ExpansionTerm:
    component: str
    operator_tag: str
    exponent: complex
    coefficient: complex
    label: str
    pair: int
    branch: str  # "+" outgoing, "-" incoming

    def to_dict(self) -> dict:
        return {
            "component": self.component,
            "operator_tag": self.operator_tag,
            "exponent": {"re": self.exponent.real, "im": self.exponent.imag},
            "coefficient": {"re": self.coefficient.real, "im": self.coefficient.imag},
            "label": self.label,
            "pair": self.pair,
            "branch": self.branch,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExpansionTerm":
        return cls(d["component"], d["operator_tag"],
                   complex(d["exponent"]["re"], d["exponent"]["im"]),
                   complex(d["coefficient"]["re"], d["coefficient"]["im"]),
                   d["label"], int(d["pair"]), d["branch"])


@dataclass(frozen=True)
class ExpansionSpec:
    terms: tuple[ExpansionTerm, ...]
    delta: float = DEFAULT_DELTA
    star6sign: int = 1

    @property
    def remainder_order(self) -> float:
        return 3 + self.delta

    def component_terms(self, component: str) -> list[ExpansionTerm]:
        return [t for t in self.terms if t.component == component]

    def to_dict(self) -> dict:
        return {"delta": self.delta,
                "star6sign": "+i" if self.star6sign > 0 else "-i",
                "terms": [t.to_dict() for t in self.terms]}

    @classmethod
    def from_dict(cls, d: dict) -> "ExpansionSpec":
        sign = -1 if d.get("star6sign") == "-i" else 1
        return cls(tuple(ExpansionTerm.from_dict(t) for t in d.get("terms", [])),
                   float(d["delta"]), sign)


@functools.lru_cache(maxsize=None)
def special_exponents(variant: str = DEFAULT_MATRIX_VARIANT) -> dict[str, complex]:
    """theta_i^{+-} computed from their sector polynomials."""
    polys = sorted({(sid, lam) for sid, lam in SPECIAL_SOURCES.values()}, key=lambda p: (p[0].order, p[1]))
    table = tabulate([indicial_poly(sid, lam, variant) for sid, lam in polys], threads=1)
    found = special_roots(table)
    missing = set(SPECIAL_SOURCES) - set(found)
    if missing:
        raise ValueError(f"special exponents not found for matrix variant {variant!r}: {sorted(missing)}")
    return found


def build_expansion(data: BoundaryData, s1: complex, s2: complex, s3: complex,
                    delta: float = DEFAULT_DELTA, thetas: dict[str, complex] | None = None) -> ExpansionSpec:
    """Leading terms for every populated component.

    ``s1, s2, s3`` are the scattering values acting on the respective data;
    they must be unimodular.
    """
    if not 0 < delta < 1:
        raise BadDelta(f"delta must lie in (0, 1), got {delta}")
    svals = {1: complex(s1), 2: complex(s2), 3: complex(s3)}
    for i, sv in svals.items():
        if abs(abs(sv) - 1) > UNIMODULAR_TOL:
            raise ValueError(f"S{i} = {sv} is not unimodular")
    thetas = special_exponents() if thetas is None else thetas

    terms = []
    for comp, tag, factor, _, pairs in COMPONENTS:
        for i in pairs:
            amp = data.amplitude(i)
            if amp == 0:
                continue
            name = data.labels[i - 1]
            terms.append(ExpansionTerm(comp, tag, thetas[f"theta{i}+"], factor * amp, name, i, "+"))
            terms.append(ExpansionTerm(comp, tag, thetas[f"theta{i}-"], factor * svals[i] * amp,
                                       f"S{i}({name})", i, "-"))
    return ExpansionSpec(tuple(terms), float(delta), data.star6sign)


@dataclass(frozen=True)
class TermResidual:
    term: ExpansionTerm
    sector: SectorId
    lam: int
    residual: float

    @property
    def certified(self) -> bool:
        return self.residual <= RESIDUAL_TOL


def residual_order(spec: ExpansionSpec, sector_polys: dict | None = None,
                   variant: str = DEFAULT_MATRIX_VARIANT) -> list[TermResidual]:
    """|p(theta)| for each term, p the indicial polynomial its exponent must annihilate.

    ``sector_polys`` optionally maps ``(SectorId, lam)`` to a UniPoly.
    """
    out = []
    for t in spec.terms:
        sector, lam = SPECIAL_SOURCES[f"theta{t.pair}{t.branch}"]
        if sector_polys is not None and (sector, lam) in sector_polys:
            poly = sector_polys[(sector, lam)]
        else:
            poly = indicial_poly(sector, lam, variant).poly
        out.append(TermResidual(t, sector, lam, abs(poly.eval(t.exponent))))
    return out


def format_exponent(z: complex) -> str:
    re = f"{z.real:.12g}"
    im = f"{abs(z.imag):.12g}"
    if im == "0":
        return re
    sign = "+" if z.imag > 0 else "−"
    return f"{re}{sign}{'' if im == '1' else im}i"


def render_text(spec: ExpansionSpec) -> str:
    lines = []
    for comp, tag, _, display, _ in COMPONENTS:
        terms = spec.component_terms(comp)
        if not terms:
            continue
        inner = " + ".join(f"{t.label} x^{{{format_exponent(t.exponent)}}}" for t in terms)
        if tag.endswith("∧"):
            body = f"{tag[:-1]} ∧ ({inner})"
        else:
            body = f"{tag}({inner})"
        lines.append(f"{display} = {body} + O(x^{{3+δ}})")
    if not lines:
        return "all components O(x^{3+δ})\n"
    return "\n".join(lines) + "\n"


def render_json(spec: ExpansionSpec) -> str:
    return json.dumps(spec.to_dict(), indent=2, ensure_ascii=False) + "\n"


def render(spec: ExpansionSpec, format: str = "text") -> str:
    if format == "text":
        return render_text(spec)
    if format == "json":
        return render_json(spec)
    raise ValueError(f"unknown format {format!r}")


def parse_json(text: str) -> ExpansionSpec:
    return ExpansionSpec.from_dict(json.loads(text))
