"""Command-line front end.

Every command echoes its resolved configuration: CSV outputs start with
``# key=value`` lines, JSON outputs carry a ``config`` object. Exit codes are
0 on success, 2 for configuration errors, 3 for numeric or precision errors
and 4 for missing data files.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .errors import AutodistError, MissingDataFile, ParseError
from .evaluation import GridSpec, grid_csv, grid_eval, kernel_l1
from .series import (BUILTINS, eta_translates, langlands_convert, load_series, maass_sample,
                     theta_translates)

OUTPUT_ENV = "AUTODIST_OUTPUT_DIR"

# preset: (source, antiderivative k, plotted part, x range)
FIGURES = {
    "fig1": ("maass", 0, "re", (0.0, 1.0)),
    "fig2": ("maass", 0, "abs", (0.0, 1.0)),
    "fig3": ("maass", 0, "abs", (-0.05, 0.05)),
    "fig4": ("weight_one_23", 0, "re", (0.0, 1.0)),
    "fig5": ("weight_one_23", 0, "re", (-0.05, 0.05)),
    "fig6": ("eta_product_11", 1, "im", (0.0, 1.0)),
}

MAASS_FORMAT = ("a coefficient file with 'key = value' header lines (lambda_re, lambda_im, "
                "delta, period, cuspidal, normalization, truncation) followed by 'n re im' rows; "
                "pass --maass-file PATH, or --maass-file sample for the bundled synthetic table")


class ConfigError(AutodistError):
    exit_code = 2


# -- helpers ----------------------------------------------------------------

def _series(args, M=None):
    """Resolve ``--builtin`` / ``--file`` and record the truncation in ``args``."""
    s = _load(args, M)
    args.truncation = s.truncation
    if getattr(args, "N", "absent") is None:
        args.N = s.truncation
    return s


def _load(args, M=None):
    if getattr(args, "file", None):
        path = Path(args.file)
        if not path.exists():
            raise MissingDataFile(f"coefficient file {path} not found")
        return load_series(path)
    name = args.builtin
    if name == "maass_sample":
        return maass_sample()
    if name not in BUILTINS:
        raise ConfigError(f"unknown builtin {name!r}; choose from {sorted(BUILTINS)}")
    M = M or getattr(args, "M", None) or getattr(args, "N", None) or _default_truncation(args)
    return BUILTINS[name](int(M))


# lacunary tables stay small at large truncation; the rational expansion
# needs the large one for its residual to drop below the remainder bound
LACUNARY = ("theta", "eta")


def _default_truncation(args) -> int:
    if args.builtin in LACUNARY:
        return 10 ** 10 if args.command == "rational" else 10 ** 6
    return 10 ** 5


def _sweep(text: str) -> list[int]:
    """``a:b`` means the powers ``2^a..2^b``; otherwise a comma list."""
    try:
        if ":" in text:
            a, b = (int(v) for v in text.split(":"))
            return [2 ** j for j in range(a, b + 1)]
        return [int(float(v)) for v in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"cannot read sweep {text!r}") from exc


def _scales(text: str | None):
    if text is None:
        return None
    try:
        if ":" in text:
            a, b = (int(v) for v in text.split(":"))
            return [2.0 ** -j for j in range(a, b + 1)]
        return [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"cannot read scales {text!r}") from exc


def _x0(text: str):
    from .diophantine import GOLDEN, SQRT2
    named = {"sqrt2": SQRT2, "golden": GOLDEN}
    if text in named:
        return named[text]
    return text  # decimal digit string, precision taken from its length


def _config(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    cfg["version"] = __version__
    return cfg


def _emit(args, text: str, default_name: str):
    out = args.output
    if out is None and os.environ.get(OUTPUT_ENV):
        out = str(Path(os.environ[OUTPUT_ENV]) / default_name)
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    print(f"wrote {path}", file=sys.stderr)


def _json(args, payload: dict) -> str:
    return json.dumps({"config": _config(args), **payload}, indent=2, default=str) + "\n"


def _csv_rows(cfg: dict, columns, rows) -> str:
    lines = [f"# {k}={v}" for k, v in cfg.items()]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(f"{v:.15g}" if isinstance(v, float) else str(v) for v in row))
    return "\n".join(lines) + "\n"


def _part(values, part):
    return {"re": np.real, "im": np.imag, "abs": np.abs}[part](values)


# -- commands ---------------------------------------------------------------

def cmd_coeffs(args):
    s = _series(args, M=args.M)
    if args.langlands:
        s = langlands_convert(s, "c_to_a")
    if args.format == "json":
        payload = {"metadata": s.metadata(), "c0": [s.c0.real, s.c0.imag],
                   "coefficients": [[int(n), float(v.real), float(v.imag)]
                                    for n, v in zip(s.indices, s.values)]}
        return _emit(args, _json(args, payload), "coeffs.json")
    rows = [(int(n), float(v.real), float(v.imag)) for n, v in zip(s.indices, s.values)]
    if s.c0 != 0:
        rows.insert(0, (0, float(s.c0.real), float(s.c0.imag)))
    _emit(args, _csv_rows({**_config(args), **s.metadata()}, ("n", "re", "im"), rows),
          "coeffs.csv")


def cmd_eval(args):
    s = _series(args)
    N = args.N or s.truncation
    g = GridSpec(args.x_start, args.x_end, args.points)
    vals = grid_eval(s, args.antiderivative, g, N, mode=args.mode)
    _emit(args, grid_csv(g.nodes(), vals, _config(args)), "eval.csv")


def _translates(s, name, pt):
    from .series import TranslateTable
    if name == "eta":
        return eta_translates(s)
    if name == "theta":
        return theta_translates(s, [pt])
    if name in BUILTINS:
        # higher-level forms: no translates are shipped
        return TranslateTable(base=s, rule="file")
    # level-one tables (the Maass sample, user files) are invariant under every gamma
    return TranslateTable(base=s, rule="identity")


def cmd_rational(args):
    from .rational import RationalPoint, expansion_report, rational_class
    s = _series(args)
    N = args.N or s.truncation
    pt = RationalPoint.parse(args.point)
    t = _translates(s, args.builtin, pt)
    x = pt.value + Fraction(args.offset)
    rep = expansion_report(s, t, pt, x, args.order, N)
    cls = rational_class(s, t, pt, part=args.part)
    payload = {"report": rep.to_dict(),
               "classification": {"differentiable": cls.differentiable, "value": cls.value,
                                  "reason": cls.reason},
               "residual_within_bound": rep.residual <= rep.remainder_bound}
    _emit(args, _json(args, payload), "rational.json")


def cmd_irrational(args):
    from .diophantine import convergents, convergents_csv, measure_proxy
    from .hoelder import violation_scan
    x0 = _x0(args.x0)
    if args.alpha is None:
        cs = convergents(x0, depth=args.depth)
        head = "".join(f"# {k}={v}\n" for k, v in _config(args).items())
        head += f"# measure_proxy={measure_proxy(cs):.6g}\n" if len(cs) >= 5 else ""
        return _emit(args, head + convergents_csv(cs), "convergents.csv")
    s = _series(args)
    rep = violation_scan(s, None, x0, args.alpha, args.depth, resolution=args.resolution)
    head = "".join(f"# {k}={v}\n" for k, v in _config(args).items())
    _emit(args, head + rep.to_csv(), "violation.csv")


def cmd_hoelder(args):
    from .hoelder import estimate_csv, global_exponent, pointwise_exponent, predict_regularity
    s = _series(args)
    N = args.N or s.truncation
    scales = _scales(args.scales)
    if args.mode == "global":
        G = args.grid or 1 << math.ceil(math.log2(4 * int(np.abs(s.window(N)[0]).max())))
        est = global_exponent(s, args.antiderivative, scales, G, N,
                              difference_order=args.difference_order, gate=not args.no_gate)
    else:
        if args.x0 is None:
            raise ConfigError("pointwise mode needs --x0")
        x0 = _x0(args.x0)
        if callable(x0):
            x0 = x0(40)
        elif "/" in args.x0:
            x0 = Fraction(args.x0)
        est = pointwise_exponent(s, args.antiderivative, x0, scales, N)
    est.meta.update(_config(args))
    est.meta["stable"] = est.stable
    try:
        est.meta["predicted_class"] = str(predict_regularity(s.params))
    except AutodistError as exc:
        est.meta["predicted_class"] = f"unavailable: {exc}"
    _emit(args, estimate_csv(est), "hoelder.csv")


def cmd_cancel(args):
    from .hoelder import criteria_exponent
    Ns = _sweep(args.N_sweep)
    s = _series(args, M=max(Ns))
    if args.langlands:
        s = langlands_convert(s, "c_to_a")
    slope, fr, sups = criteria_exponent(s, args.k, Ns, sign=args.sign, return_fit=True)
    cfg = {**_config(args), "slope": f"{slope:.6g}", "fit_residual": f"{fr:.6g}",
           "implied_index": f"{args.k - slope:.6g}"}
    _emit(args, _csv_rows(cfg, ("N", "sup"), [(N, float(v)) for N, v in zip(Ns, sups)]),
          "cancel.csv")


def cmd_kernels(args):
    Ns = _sweep(args.N_sweep)
    rows = []
    for N in Ns:
        l1 = kernel_l1(N, max(args.quadrature_factor * N, 50 * N))
        rows.append((N, float(l1), float(l1 / math.log(N))))
    _emit(args, _csv_rows(_config(args), ("N", "l1", "l1_over_logN"), rows), "kernels.csv")


def cmd_figure(args):
    source, k, part, (a, b) = FIGURES[args.preset]
    if source == "maass":
        if args.maass_file is None:
            raise MissingDataFile(f"{args.preset} needs Maass coefficients: {MAASS_FORMAT}")
        if args.maass_file == "sample":
            s = maass_sample()
        else:
            path = Path(args.maass_file)
            if not path.exists():
                raise MissingDataFile(f"{path} not found; expected {MAASS_FORMAT}")
            s = load_series(path)
    else:
        s = BUILTINS[source](args.N)
    N = min(args.N, s.truncation)
    g = GridSpec(a, b, args.grid)
    vals = _part(grid_eval(s, k, g, N), part)
    cfg = {**_config(args), "source": source, "antiderivative_k": k, "part": part,
           "x_start": a, "x_end": b, "N_used": N}
    rows = [(float(x), float(v)) for x, v in zip(g.nodes(), vals)]
    _emit(args, _csv_rows(cfg, ("x", part), rows), f"{args.preset}.csv")


# -- parser -----------------------------------------------------------------

def _add_source(p, required=True):
    grp = p.add_mutually_exclusive_group(required=required)
    grp.add_argument("--builtin", choices=sorted(BUILTINS) + ["maass_sample"])
    grp.add_argument("--file", help="coefficient file")
    p.add_argument("--M", type=int, help="truncation of a builtin table (default depends on it)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="autodist", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--output", "-o", help="output path (default stdout or $%s)" % OUTPUT_ENV)
        p.set_defaults(func=func)
        return p

    p = add("coeffs", cmd_coeffs, "write a coefficient table")
    _add_source(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--langlands", action="store_true", help="emit a_n = |n|^(lambda/2) c_n")

    p = add("eval", cmd_eval, "evaluate on a uniform grid")
    _add_source(p)
    p.add_argument("--N", type=int)
    p.add_argument("--antiderivative", "-k", type=int, default=0,
                   help="k = 0 is phi, k = 1 its antiderivative, ...")
    p.add_argument("--mode", choices=("antiderivative", "sum"), default="antiderivative")
    p.add_argument("--x-start", type=float, default=0.0)
    p.add_argument("--x-end", type=float, default=1.0)
    p.add_argument("--points", type=int, default=1001)

    p = add("rational", cmd_rational, "expansion report and classification at p/q")
    _add_source(p)
    p.add_argument("--N", type=int)
    p.add_argument("--point", required=True, help="p/q")
    p.add_argument("--order", type=int, default=0)
    p.add_argument("--offset", type=float, default=1e-3, help="x - p/q")
    p.add_argument("--part", choices=("real", "imag"), default="real")

    p = add("irrational", cmd_irrational, "convergents, or a violation scan with --alpha")
    _add_source(p, required=False)
    p.add_argument("--N", type=int)
    p.add_argument("--x0", required=True, help="sqrt2, golden or a decimal digit string")
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--alpha", type=float)
    p.add_argument("--resolution", type=float, default=100.0)

    p = add("hoelder", cmd_hoelder, "global or pointwise Hoelder exponent")
    _add_source(p)
    p.add_argument("--N", type=int)
    p.add_argument("--mode", choices=("global", "pointwise"), default="global")
    p.add_argument("--antiderivative", "-k", type=int, default=0)
    p.add_argument("--scales", help="a:b for 2^-a..2^-b, or a comma list")
    p.add_argument("--grid", type=int, help="grid points per period (global mode)")
    p.add_argument("--difference-order", type=int, default=1)
    p.add_argument("--no-gate", action="store_true")
    p.add_argument("--x0")

    p = add("cancel", cmd_cancel, "growth slope of sup |partial sums|")
    _add_source(p)
    p.add_argument("--N-sweep", default="6:13")
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--sign", type=int, choices=(-1, 0, 1), default=0)
    p.add_argument("--langlands", action="store_true")

    p = add("kernels", cmd_kernels, "L1 norms of the Dirichlet kernel")
    p.add_argument("--N-sweep", default="4:12")
    p.add_argument("--quadrature-factor", type=int, default=64)

    p = add("figure", cmd_figure, "figure presets fig1..fig6")
    p.add_argument("preset", choices=sorted(FIGURES))
    p.add_argument("--N", type=int, default=20000)
    p.add_argument("--grid", type=int, default=4000)
    p.add_argument("--maass-file")
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.command == "irrational" and args.alpha is not None and \
                args.builtin is None and args.file is None:
            raise ConfigError("a violation scan needs --builtin or --file")
        args.func(args)
    except (ParseError, ConfigError) as exc:
        print(f"autodist {args.command}: configuration error: {exc}", file=sys.stderr)
        return 2
    except AutodistError as exc:
        print(f"autodist {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except FileNotFoundError as exc:
        print(f"autodist {args.command}: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
