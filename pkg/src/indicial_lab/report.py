"""Serialization of root tables, scattering samples and figures.

Everything here is a pure function of its inputs so reruns are byte-identical.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Iterable, Mapping

from .roots import RootTable, compare_special, gap_scan, symmetry_check
from .scattering import ScatteringSample, product_phase
from .spectrum import EigenEntry

GAP_BOUND = 1.0
GAP_SLACK = 1e-9
EXPECTED_SPECIAL = 6


def _clean(obj):
    """Make floats JSON-safe: complex -> {re, im}, non-finite -> None."""
    if isinstance(obj, complex):
        return {"re": _clean(obj.real), "im": _clean(obj.imag)}
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, Mapping):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def dumps(obj) -> str:
    # repr-based float output is shortest round-trip
    return json.dumps(_clean(obj), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def spectrum_csv(entries: Iterable[EigenEntry]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "k", "lambda", "multiplicity"])
    for e in entries:
        w.writerow([e.kind.value, e.k, e.lam, e.multiplicity])
    return buf.getvalue()


def scattering_rows(samples: Iterable[tuple[str, ScatteringSample]]) -> list[dict]:
    rows = []
    for label, smp in samples:
        oracle = product_phase(smp.k, smp.alpha)
        rows.append({
            "k": smp.k,
            "lambda6": smp.lambda6,
            "alpha_label": label,
            "alpha": smp.alpha,
            "phase_re": smp.phase2.real,
            "phase_im": smp.phase2.imag,
            "s_re": smp.s_value.real,
            "s_im": smp.s_value.imag,
            "modulus_dev": abs(abs(smp.phase2) - 1),
            "oracle_dev": abs(smp.phase2 - oracle),
        })
    return rows


def scattering_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    fields = ["k", "lambda6", "alpha_label", "alpha", "phase_re", "phase_im", "s_re", "s_im",
              "modulus_dev", "oracle_dev"]
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Claims
# ---------------------------------------------------------------------------

def verify_claims(table: RootTable, radical_tol: float) -> dict:
    """Check the root table against the structural claims.

    Returns a summary dict; ``summary["failures"]`` is empty iff every claim holds.
    """
    failures = []
    special = table.special()
    if len(special) != EXPECTED_SPECIAL:
        failures.append(f"expected {EXPECTED_SPECIAL} roots on Re s = 3, found {len(special)}")

    matches = compare_special(table)
    for m in matches:
        tol = 0.0 if m.label.startswith("theta1") else radical_tol
        if not m.deviation <= tol:
            failures.append(f"{m.label}: computed {m.computed} vs printed {m.printed} "
                            f"(deviation {m.deviation:.3e} > {tol:.1e})")

    gap = gap_scan(table)
    if not gap.min_distance >= GAP_BOUND - GAP_SLACK:
        failures.append(f"gap {gap.min_distance:.6g} < {GAP_BOUND} at "
                        f"{gap.record.sector.label} lambda={gap.record.lam}")

    violations = symmetry_check(table, table.metadata.get("pairing_tol", 1e-9))
    if violations:
        failures.append(f"{len(violations)} symmetry violations")

    return {
        "special_roots": [
            {"label": m.label, "computed": m.computed, "printed": m.printed,
             "deviation": m.deviation}
            for m in matches
        ],
        "special_count": len(special),
        "radical_tol": radical_tol,
        "min_gap": gap.min_distance,
        "min_gap_record": None if gap.record is None else gap.record.to_dict(),
        "symmetry_violations": [
            {"family": v.family, "lambda": v.lam, "root": v.root,
             "nearest_mirror": v.nearest_mirror, "distance": v.distance}
            for v in violations
        ],
        "failures": failures,
    }


def gap_report(table: RootTable) -> dict:
    gap = gap_scan(table)
    return {"bound": GAP_BOUND, "min_distance": gap.min_distance,
            "record": None if gap.record is None else gap.record.to_dict(),
            "holds": gap.min_distance >= GAP_BOUND - GAP_SLACK}


def symmetry_report(table: RootTable) -> dict:
    v = symmetry_check(table, table.metadata.get("pairing_tol", 1e-9))
    return {"center": 3.0, "violations": [
        {"family": x.family, "lambda": x.lam, "root": x.root,
         "nearest_mirror": x.nearest_mirror, "distance": x.distance} for x in v]}


# ---------------------------------------------------------------------------
# SVG scatter of the roots
# ---------------------------------------------------------------------------

SVG_W, SVG_H = 800, 600
_MARGIN = 60


def _nice_step(span: float) -> float:
    raw = span / 8
    mag = 10 ** math.floor(math.log10(raw))
    for m in (1, 2, 5, 10):
        if raw <= m * mag:
            return m * mag
    return 10 * mag


def roots_svg(table: RootTable, title: str = "Indicial roots in the complex s-plane") -> str:
    pts = [r.s for r in table]
    if pts:
        x0 = min(min(z.real for z in pts), 3.0) - 1
        x1 = max(max(z.real for z in pts), 3.0) + 1
        ymax = max(max(abs(z.imag) for z in pts), 1.0) * 1.15
    else:
        x0, x1, ymax = -1.0, 7.0, 1.0
    y0, y1 = -ymax, ymax
    pw, ph = SVG_W - 2 * _MARGIN, SVG_H - 2 * _MARGIN

    def px(x):
        return _MARGIN + (x - x0) / (x1 - x0) * pw

    def py(y):
        return _MARGIN + (y1 - y) / (y1 - y0) * ph

    f = "{:.3f}".format
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SVG_W} {SVG_H}" '
        f'width="{SVG_W}" height="{SVG_H}">',
        "<style>.axis{stroke:#000;stroke-width:1}.tick{font:11px sans-serif}"
        ".l2-line{stroke:#1f77b4;stroke-dasharray:6 4;stroke-width:1.5}"
        ".root{fill:#555;stroke:none}.root.special{fill:#d62728;stroke:#000;stroke-width:0.8}"
        ".title{font:15px sans-serif}</style>",
        f'<rect x="0" y="0" width="{SVG_W}" height="{SVG_H}" fill="#fff"/>',
        f'<text class="title" x="{SVG_W / 2}" y="28" text-anchor="middle">{title}</text>',
        f'<rect class="axis" x="{_MARGIN}" y="{_MARGIN}" width="{pw}" height="{ph}" fill="none"/>',
    ]
    if y0 <= 0 <= y1:
        out.append(f'<line class="axis" x1="{f(px(x0))}" y1="{f(py(0))}" x2="{f(px(x1))}" y2="{f(py(0))}"/>')
    step = _nice_step(x1 - x0)
    t = math.ceil(x0 / step) * step
    while t <= x1 + 1e-12:
        out.append(f'<text class="tick" x="{f(px(t))}" y="{SVG_H - _MARGIN + 16}" '
                   f'text-anchor="middle">{t:g}</text>')
        t += step
    step = _nice_step(y1 - y0)
    t = math.ceil(y0 / step) * step
    while t <= y1 + 1e-12:
        out.append(f'<text class="tick" x="{_MARGIN - 6}" y="{f(py(t) + 4)}" '
                   f'text-anchor="end">{t:g}</text>')
        t += step
    out.append(f'<text class="tick" x="{SVG_W - _MARGIN}" y="{SVG_H - 20}" text-anchor="end">Re s</text>')
    out.append(f'<text class="tick" x="16" y="{_MARGIN - 10}">Im s</text>')
    out.append(f'<line class="l2-line" x1="{f(px(3))}" y1="{_MARGIN}" x2="{f(px(3))}" '
               f'y2="{SVG_H - _MARGIN}"/>')
    for r in table:
        cls = "root special" if r.special else "root"
        rad = 6 if r.special else 3.5
        out.append(f'<circle class="{cls}" cx="{f(px(r.s.real))}" cy="{f(py(r.s.imag))}" r="{rad}">'
                   f'<title>{r.sector.label} lambda={r.lam} s={r.s.real:.6g}{r.s.imag:+.6g}i</title></circle>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

def write_bundle(files: Mapping[str, str], out_dir: str | os.PathLike) -> list[Path]:
    """Write all files into ``out_dir``; each is staged then moved into place."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    written = []
    with tempfile.TemporaryDirectory(dir=out, prefix=".staging-") as tmp:
        staged = []
        for name, text in sorted(files.items()):
            p = Path(tmp) / name
            p.write_text(text, encoding="utf-8", newline="\n")
            staged.append((p, out / name))
        for src, dst in staged:
            try:
                os.replace(src, dst)
            except OSError as exc:
                raise OSError(f"cannot write {dst}: {exc}") from exc
            written.append(dst)
    return written
