"""indicial-lab command line.

Exit codes: 0 all claims verified, 2 usage error, 3 claim violated,
4 numeric non-convergence.

    indicial-lab spectrum --kind function4 --max 40
    indicial-lab roots --out report/
    indicial-lab figure --out report/
    indicial-lab scattering --auto --kmax 50
    indicial-lab expansion --v1 1 --v2 1
    indicial-lab all --out report/
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import report
from .config import Config, ConfigError, load_config
from .expansion import BoundaryData, build_expansion, render_json, render_text, special_exponents
from .polynomials import NonConvergence
from .roots import MIN_LAMBDA_MAX, RootTable, build_table
from .scattering import phase
from .spectrum import FormKind, spectrum_table

EXIT_OK, EXIT_USAGE, EXIT_CLAIM, EXIT_NUMERIC = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _complex_arg(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _add_config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value TOML file; flags override it")
    p.add_argument("--lambda-max", type=int)
    p.add_argument("--line-tol", type=float)
    p.add_argument("--root-residual-tol", type=float)
    p.add_argument("--pairing-tol", type=float)
    p.add_argument("--radical-tol", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--matrix-variant", choices=["corrected", "as_printed"])
    p.add_argument("--threads", type=int)
    p.add_argument("--out", dest="output_dir", help="output directory")


def _config(args) -> Config:
    cfg = load_config(getattr(args, "config", None))
    return cfg.replace(
        lambda_max=getattr(args, "lambda_max", None),
        line_tol=getattr(args, "line_tol", None),
        root_residual_tol=getattr(args, "root_residual_tol", None),
        pairing_tol=getattr(args, "pairing_tol", None),
        radical_tol=getattr(args, "radical_tol", None),
        delta=getattr(args, "delta", None),
        matrix_variant=getattr(args, "matrix_variant", None),
        threads=getattr(args, "threads", None),
        output_dir=getattr(args, "output_dir", None),
        k_max=getattr(args, "kmax", None),
    )


def _table(cfg: Config) -> RootTable:
    if cfg.lambda_max < MIN_LAMBDA_MAX:
        raise UsageError(f"lambda_max must be >= {MIN_LAMBDA_MAX} (the lambda = 40 sector "
                         f"carries the third special pair); got {cfg.lambda_max}")
    return build_table(cfg.lambda_max, cfg.line_tol, cfg.root_residual_tol, cfg.pairing_tol,
                       cfg.matrix_variant, cfg.threads)


def _emit(text: str, output: str | None) -> None:
    if output:
        report.write_bundle({Path(output).name: text}, Path(output).parent or ".")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Bundle pieces
# ---------------------------------------------------------------------------

def roots_files(table: RootTable, cfg: Config) -> tuple[dict[str, str], dict]:
    summary = report.verify_claims(table, cfg.radical_tol)
    doc = table.to_dict()
    doc["summary"] = summary
    files = {
        "roots.json": report.dumps(doc),
        "gap.json": report.dumps(report.gap_report(table)),
        "symmetry.json": report.dumps(report.symmetry_report(table)),
    }
    return files, summary


def scattering_samples(alphas: list[tuple[str, float]], k_max: int):
    return [(label, phase(k, a)) for label, a in alphas for k in range(k_max + 1)]


def auto_alphas(variant: str) -> list[tuple[str, float]]:
    th = special_exponents(variant)
    return [(f"theta{i}", th[f"theta{i}+"].imag) for i in (1, 2, 3)]


def expansion_doc(data: BoundaryData, cfg: Config, mode: int = 0, s1: complex = 1 + 0j):
    th = special_exponents(cfg.matrix_variant)
    s2 = phase(mode, th["theta2+"].imag).s_value
    s3 = phase(mode, th["theta3+"].imag).s_value
    return build_expansion(data, s1, s2, s3, cfg.delta, th)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_spectrum(args) -> int:
    try:
        kind = FormKind.parse(args.kind)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.max < 0:
        raise UsageError("--max must be nonnegative")
    _emit(report.spectrum_csv(spectrum_table(kind, args.max)), args.output)
    return EXIT_OK


def _summary_line(summary: dict) -> str:
    lines = [f"special roots on Re s = 3: {summary['special_count']}"]
    for m in summary["special_roots"]:
        z = m["computed"]
        zs = "missing" if z is None else f"{z.real:.15g}{z.imag:+.15g}i"
        lines.append(f"  {m['label']:8s} {zs}  |computed - printed| = {m['deviation']:.3e}")
    lines.append(f"min distance of other roots to Re s = 3: {summary['min_gap']:.12g}")
    lines.append(f"symmetry violations: {len(summary['symmetry_violations'])}")
    for f in summary["failures"]:
        lines.append(f"FAILED: {f}")
    return "\n".join(lines) + "\n"


def cmd_roots(args) -> int:
    cfg = _config(args)
    table = _table(cfg)
    files, summary = roots_files(table, cfg)
    report.write_bundle(files, cfg.output_dir)
    sys.stdout.write(_summary_line(summary))
    return EXIT_CLAIM if summary["failures"] else EXIT_OK


def cmd_figure(args) -> int:
    cfg = _config(args)
    table = _table(cfg)
    report.write_bundle({"roots.svg": report.roots_svg(table)}, cfg.output_dir)
    return EXIT_OK


def cmd_scattering(args) -> int:
    cfg = _config(args)
    if args.auto:
        alphas = auto_alphas(cfg.matrix_variant)
    elif args.alpha:
        alphas = [(f"alpha{i}", a) for i, a in enumerate(args.alpha, start=1)]
    else:
        raise UsageError("give --auto or at least one --alpha")
    if any(not a > 0 for _, a in alphas):
        raise UsageError("alpha values must be positive")
    rows = report.scattering_rows(scattering_samples(alphas, cfg.k_max))
    _emit(report.scattering_csv(rows), args.output)
    bad = [r for r in rows if r["modulus_dev"] > 1e-10 or r["oracle_dev"] > 1e-10]
    return EXIT_CLAIM if bad else EXIT_OK


def _read_data(args) -> BoundaryData:
    raw: dict = {}
    if args.data:
        try:
            text = Path(args.data).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read {args.data}: {exc}") from None
        if text.strip():
            try:
                raw = json.loads(text)
            except json.JSONDecodeError as exc:
                raise UsageError(f"{args.data}: invalid JSON ({exc})") from None
    for name in ("v1", "v2", "v3"):
        v = getattr(args, name)
        if v is not None:
            raw[name] = v
    if args.star6:
        raw["star6sign"] = args.star6
    try:
        return BoundaryData.from_dict(raw)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad boundary data: {exc}") from None


def cmd_expansion(args) -> int:
    cfg = _config(args)
    data = _read_data(args)
    spec = expansion_doc(data, cfg, args.mode, args.s1)
    text, js = render_text(spec), render_json(spec)
    if args.output_dir:
        report.write_bundle({"expansion.txt": text, "expansion.json": js}, cfg.output_dir)
    sys.stdout.write(js if args.format == "json" else text)
    return EXIT_OK


def cmd_all(args) -> int:
    cfg = _config(args)
    table = _table(cfg)
    files, summary = roots_files(table, cfg)
    files["roots.svg"] = report.roots_svg(table)
    files["spectrum.csv"] = report.spectrum_csv(
        e for kind in FormKind for e in spectrum_table(kind, cfg.lambda_max))
    rows = report.scattering_rows(scattering_samples(auto_alphas(cfg.matrix_variant), cfg.k_max))
    files["scattering.csv"] = report.scattering_csv(rows)
    spec = expansion_doc(BoundaryData(v1=1, v2=1, v3=1), cfg)
    files["expansion.txt"] = render_text(spec)
    files["expansion.json"] = render_json(spec)
    files["config.json"] = report.dumps({k: v for k, v in vars(cfg).items() if k != "output_dir"})
    report.write_bundle(files, cfg.output_dir)
    sys.stdout.write(_summary_line(summary))
    return EXIT_CLAIM if summary["failures"] else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="indicial-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="S^4 / S^6 eigenvalue table as CSV")
    p.add_argument("--kind", required=True, help="function4 | closed1 | coclosed1 | function6")
    p.add_argument("--max", type=int, required=True, help="largest eigenvalue to list")
    p.add_argument("--output", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("roots", help="root table, gap and symmetry reports")
    _add_config_args(p)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("figure", help="SVG scatter of the indicial roots")
    _add_config_args(p)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("scattering", help="scattering phase table as CSV")
    _add_config_args(p)
    p.add_argument("--auto", action="store_true", help="use alpha = Im theta_i+ for i = 1, 2, 3")
    p.add_argument("--alpha", type=float, action="append")
    p.add_argument("--kmax", type=int)
    p.add_argument("--output", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_scattering)

    p = sub.add_parser("expansion", help="leading-order boundary expansion")
    _add_config_args(p)
    p.add_argument("--data", help="JSON file with v1, v2, v3 amplitudes and star6sign")
    p.add_argument("--v1", type=_complex_arg)
    p.add_argument("--v2", type=_complex_arg)
    p.add_argument("--v3", type=_complex_arg)
    p.add_argument("--star6", choices=["+i", "-i"])
    p.add_argument("--mode", type=int, default=0, help="S^6 mode index used for S2, S3")
    p.add_argument("--s1", type=_complex_arg, default=1 + 0j,
                   help="unimodular scattering value for the 3-form data")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_expansion)

    p = sub.add_parser("all", help="write the full report bundle")
    _add_config_args(p)
    p.add_argument("--kmax", type=int)
    p.set_defaults(func=cmd_all)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"indicial-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonConvergence as exc:
        print(f"indicial-lab: numeric non-convergence: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"indicial-lab: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
