"""Command-line front end: ``fracgreen {ml,profile,pi-error,zeros,verify}``.

Every data subcommand writes a table (CSV with a header row, or JSON) to
standard output or ``--output``.  Exit codes: 0 success, 1 verification
failure, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass
from typing import Any, Sequence

import numpy as np

from . import __version__
from .errors import DomainError, FracGreenError
from .green import GreenParams, PiMethod, c_alpha, green_at_pi, profile
from .mittag_leffler import MLQuery, ml_eval_array
from .quadrature import QuadConfig
from .zeros import (C_MAX_CAP, C_MIN, scan_pi_zeros, transcendental_roots_alpha4,
                    zero_curves)

__all__ = ["OutputSpec", "Table", "main", "parse_range", "format_csv", "parse_csv"]

ALPHA4_C_MAX = 3000.0


@dataclass(frozen=True)
class OutputSpec:
    format: str = "csv"
    path: str | None = None
    precision: int = 12

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise DomainError(f"unknown format {self.format!r}")
        if not 1 <= int(self.precision) <= 17:
            raise DomainError(f"precision must lie in [1, 17], got {self.precision}")


@dataclass
class Table:
    columns: list[str]
    rows: list[list[Any]]


def parse_range(text: str) -> np.ndarray:
    """``lo:hi:count`` to ``count`` equispaced points including both ends."""
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"range must be lo:hi:count, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise DomainError(f"bad range {text!r}: {exc}") from None
    if n < 1 or not (math.isfinite(lo) and math.isfinite(hi)) or (n > 1 and not hi > lo):
        raise DomainError(f"range needs finite lo < hi and count >= 1, got {text!r}")
    if n == 1:
        return np.array([lo])
    return np.linspace(lo, hi, n)


def _cell(v: Any, precision: int) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "" if not math.isfinite(v) else f"{float(v):.{precision}e}"
    return str(v)


def format_csv(table: Table, precision: int) -> str:
    """CSV text with a header row; floats in scientific notation, NaN as an empty field.

    ``precision`` is the number of digits after the decimal point.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow([_cell(v, precision) for v in row])
    return buf.getvalue()


def parse_csv(text: str) -> Table:
    """Inverse of :func:`format_csv` (numbers come back as int or float, empties as None)."""
    reader = csv.reader(io.StringIO(text))
    columns = next(reader)
    rows = []
    for raw in reader:
        row: list[Any] = []
        for s in raw:
            if s == "":
                row.append(None)
                continue
            try:
                row.append(int(s))
            except ValueError:
                try:
                    row.append(float(s))
                except ValueError:
                    row.append(s)
        rows.append(row)
    return Table(columns, rows)


def _json_value(v: Any, precision: int) -> Any:
    if v is None:
        return None
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(f"{float(v):.{precision}e}") if math.isfinite(v) else None
    return str(v)


def format_json(table: Table, precision: int) -> str:
    recs = [{c: _json_value(v, precision) for c, v in zip(table.columns, row)}
            for row in table.rows]
    return json.dumps(recs, indent=1) + "\n"


def _emit(table: Table, out: OutputSpec) -> None:
    text = format_csv(table, out.precision) if out.format == "csv" else format_json(table, out.precision)
    if out.path is None or out.path == "-":
        sys.stdout.write(text)
    else:
        with open(out.path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _workers() -> int:
    env = os.environ.get("FRACGREEN_THREADS")
    default = min(4, os.cpu_count() or 1)
    if env is None or env == "":
        return default
    try:
        n = int(env)
    except ValueError:
        raise DomainError(f"FRACGREEN_THREADS must be a positive integer, got {env!r}") from None
    if n < 1:
        raise DomainError(f"FRACGREEN_THREADS must be a positive integer, got {env!r}")
    return n


# ---------------------------------------------------------------------------
# subcommands; each returns (table, provenance settings)

def cmd_ml(args) -> tuple[Table, dict]:
    if (args.x is None) == (args.x_range is None):
        raise DomainError("give exactly one of --x or --x-range")
    MLQuery(args.alpha, args.beta, 0.0)
    if args.x_range is not None:
        xs = parse_range(args.x_range)
        neg_power = True
    else:
        xs = np.array(args.x, dtype=float)
        neg_power = args.neg_power
    if neg_power:
        if np.any(xs < 0):
            raise DomainError("with a power map the grid must be non-negative")
        z = -xs ** args.alpha
    else:
        z = xs
    vals, methods = ml_eval_array(args.alpha, args.beta, z, return_methods=True)
    rows = [[float(x), float(zz), float(v), m.name] for x, zz, v, m in zip(xs, z, vals, methods)]
    return Table(["x", "argument", "value", "method"], rows), {
        "alpha": args.alpha, "beta": args.beta, "argument": "-x**alpha" if neg_power else "x",
        "grid": args.x_range if args.x_range is not None else list(map(float, xs)),
    }


def cmd_profile(args) -> tuple[Table, dict]:
    if args.n < 2:
        raise DomainError("--n must be >= 2")
    p = GreenParams(args.c, args.alpha)
    # integer numerators keep x = 0 and x = +-pi exact (the series needs ~60/|x| terms)
    i = np.arange(args.n)
    xs = (2 * i - (args.n - 1)) / (args.n - 1) * math.pi
    cfg = QuadConfig()
    samples = profile(p, xs, args.method, cfg, workers=_workers())
    rows = [[s.x, s.g, s.method.name] for s in samples]
    return Table(["x", "G", "method"], rows), {
        "c": args.c, "alpha": args.alpha, "n": args.n, "method": args.method,
        "grid": f"{-math.pi}:{math.pi}:{args.n}", "quad": asdict(cfg),
    }


def cmd_pi_error(args) -> tuple[Table, dict]:
    if not args.alpha > 2:
        raise DomainError(f"pi-error needs alpha > 2, got {args.alpha}")
    cs = parse_range(args.c_range)
    if np.any(cs <= 0):
        raise DomainError("c must be positive")
    ca = c_alpha(args.alpha)
    cfg = QuadConfig()
    rows = []
    for c in cs:
        p = GreenParams(float(c), args.alpha)
        g_s = green_at_pi(p, PiMethod.Series)
        if c < ca:
            g_m = green_at_pi(p, PiMethod.MLIntegral, cfg)
            rows.append([float(c), g_s, g_m, abs(g_s - g_m), True])
        else:
            rows.append([float(c), g_s, None, None, False])
    return Table(["c", "G_series", "G_ml_integral", "abs_diff", "valid"], rows), {
        "alpha": args.alpha, "c_range": args.c_range, "c_alpha": ca, "quad": asdict(cfg),
    }


def cmd_zeros(args) -> tuple[Table, dict]:
    if (args.alpha is None) == (args.alpha_range is None):
        raise DomainError("give exactly one of --alpha or --alpha-range")
    if args.k_max < 1:
        raise DomainError("--k-max must be >= 1")
    if args.alpha is not None:
        a = args.alpha
        if not a > 2:
            raise DomainError(f"zeros needs alpha > 2, got {a}")
        if args.alpha4_check and a != 4.0:
            raise DomainError("--alpha4-check requires --alpha 4")
        c_max = args.c_max
        if c_max is None:
            c_max = ALPHA4_C_MAX if args.alpha4_check else min(4.0 * c_alpha(a), C_MAX_CAP)
        if not c_max > C_MIN:
            raise DomainError(f"--c-max must exceed {C_MIN}")
        recs = scan_pi_zeros(a, c_max, n_grid=args.n_grid, tol=args.tol)[: args.k_max]
        cols = ["index", "alpha", "c", "bracket_lo", "bracket_hi"]
        rows = [[r.index, r.alpha, r.c, r.bracket[0], r.bracket[1]] for r in recs]
        if args.alpha4_check:
            cols += ["a_transcendental", "c_transcendental", "abs_diff"]
            tr = transcendental_roots_alpha4(max(len(recs), 1))
            for row, (an, cn) in zip(rows, tr):
                row += [an, cn, abs(row[2] - cn)]
        prov = {"alpha": a, "c_max": c_max, "n_grid": args.n_grid, "tol": args.tol,
                "k_max": args.k_max, "c_min": C_MIN}
        return Table(cols, rows), prov
    alphas = parse_range(args.alpha_range)
    if np.any(alphas <= 2):
        raise DomainError("alpha range must lie in (2, inf)")
    cap = args.c_max if args.c_max is not None else C_MAX_CAP
    tol = args.tol if args.tol_given else 1e-10
    lo, hi, n = float(alphas[0]), float(alphas[-1]), len(alphas)
    curves = zero_curves(lo, hi, n, args.k_max, c_max_cap=cap, n_grid=args.n_grid, tol=tol,
                         workers=_workers())
    rows = []
    for i, a in enumerate(curves[0].alphas):
        rows.append([float(a)] + [float(cv.c[i]) for cv in curves])
    cols = ["alpha"] + [f"c{k}" for k in range(1, args.k_max + 1)]
    return Table(cols, rows), {"alpha_range": args.alpha_range, "c_max_cap": cap,
                               "n_grid": args.n_grid, "tol": tol, "k_max": args.k_max}


def cmd_verify(args) -> int:
    from .verify import run_suite

    results = run_suite(args.suite, emit=lambda s: print(s, flush=True))
    n_fail = sum(not r.passed for r in results)
    print(f"{len(results) - n_fail}/{len(results)} properties passed")
    return 0 if n_fail == 0 else 1


# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):  # one-line diagnostic, exit 2
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--format", choices=["csv", "json"], default="csv")
    out.add_argument("--output", "-o", default=None, help="file path (default: standard output)")
    out.add_argument("--precision", type=int, default=12, help="digits after the decimal point, 1..17")
    out.add_argument("--provenance", default=None, metavar="PATH",
                     help="write a JSON sidecar with every setting used")

    ap = _Parser(prog="fracgreen", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ml", parents=[out], help="Mittag-Leffler function E_{alpha,beta}")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--x", type=float, nargs="+", help="arguments of E (used as given)")
    p.add_argument("--x-range", help="lo:hi:count grid t; evaluates E(-t**alpha)")
    p.add_argument("--neg-power", action="store_true",
                   help="also map --x values t to -t**alpha")
    p.set_defaults(func=cmd_ml)

    p = sub.add_parser("profile", parents=[out], help="G on a uniform grid of [-pi, pi]")
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n", type=int, default=401)
    p.add_argument("--method", choices=["auto", "fourier", "integral", "closed"], default="auto")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("pi-error", parents=[out],
                       help="|G_series(pi) - G_ML_integral(pi)| over a c range")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--c-range", required=True, help="lo:hi:count")
    p.set_defaults(func=cmd_pi_error)

    p = sub.add_parser("zeros", parents=[out], help="zeros of c -> G(pi; c, alpha)")
    p.add_argument("--alpha", type=float)
    p.add_argument("--alpha-range", help="lo:hi:count")
    p.add_argument("--c-max", type=float, default=None)
    p.add_argument("--k-max", type=int, default=5)
    p.add_argument("--n-grid", type=int, default=400)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--alpha4-check", action="store_true",
                   help="compare with the roots of tanh(pi a) + tan(pi a) = 0")
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("verify", help="run the property suites")
    p.add_argument("suite", nargs="?", default="all",
                   choices=["ml", "green", "zeros", "asymptotics", "all"])
    p.set_defaults(func=None)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "zeros":
            args.tol_given = args.tol is not None
            if args.tol is None:
                args.tol = 1e-12
        spec = OutputSpec(args.format, args.output, args.precision)
        table, settings = args.func(args)
        _emit(table, spec)
        if args.provenance:
            prov = {"fracgreen": __version__, "command": args.command,
                    "argv": list(sys.argv[1:] if argv is None else argv),
                    "output": asdict(spec), "settings": settings}
            with open(args.provenance, "w", encoding="utf-8") as fh:
                json.dump(prov, fh, indent=1, default=str)
                fh.write("\n")
        return 0
    except (FracGreenError, ValueError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"fracgreen {args.command}: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
