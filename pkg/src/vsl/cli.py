"""Command-line front end: ``vsl <command> --config problem.json [options]``.

Exit codes: 0 success, 1 verification failure, 2 configuration or input
error, 3 ambiguous boundary geometry, 4 uncertified eigenvalue range,
5 inconsistent spectral data.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .errors import (ClusterAmbiguity, ConfigError, DegenerateZ, DimensionMismatch, NearPole,
                     RankMismatch, VSLError)
from .geometry import decompose
from .linalg import DEFAULT_RANK_TOL
from .problem import load_problem
from .spectrum import (find_eigenvalues, fingerprint_distance, first_eigenvalues, m_function,
                       spectral_triplet, triplet_via_derivative)
from .verify import DEFAULT_SEED, SUITES, run_suite

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_GEOMETRY, EXIT_UNCERTIFIED, EXIT_SPECTRAL = range(6)


# -- formatting ---------------------------------------------------------------

def num(x) -> str:
    """15 significant digits, lowercase scientific."""
    return f"{float(x):.14e}"


def jsonable(obj):
    """Nested lists with floats rounded to 15 significant digits; complex as [re, im]."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)) or obj is None or isinstance(obj, str):
        return bool(obj) if isinstance(obj, np.bool_) else obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [jsonable(obj.real), jsonable(obj.imag)]
    x = float(obj)
    if not np.isfinite(x):
        return str(x)
    return float(f"{x:.14e}")


def _cell(v) -> str:
    if isinstance(v, (float, np.floating)):
        return num(v)
    if isinstance(v, (complex, np.complexfloating)):
        return f"[{num(v.real)}, {num(v.imag)}]"
    return "" if v is None else str(v)


def _table(rows: list[dict], fmt: str) -> str:
    if not rows:
        return "" if fmt == "csv" else "(no rows)\n"
    cols = list(rows[0])
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([_cell(r[c]) for c in cols])
        return buf.getvalue()
    cells = [[_cell(r[c]) for c in cols] for r in rows]
    width = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, width))]
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, width)) for row in cells]
    return "\n".join(lines) + "\n"


def _emit(args, payload, rows: list[dict] | None = None, text: str | None = None):
    if args.format == "json":
        out = json.dumps(jsonable(payload), indent=2) + "\n"
    elif args.format == "text" and text is not None:
        out = text
    else:
        out = _table(rows if rows is not None else [], args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


# -- commands -----------------------------------------------------------------

def cmd_decompose(args) -> int:
    p = load_problem(args.config)
    g = decompose(p.bc.Tm, p.bc.Tp)
    rows = [{"block": k, "dim": v} for k, v in g.dims.items() if k != "twisted"]
    rows += [{"block": f"twisted({i})", "dim": b.dim, "gamma": b.gamma}
             for i, b in enumerate(g.twisted, 1)]
    for r in rows:
        r.setdefault("gamma", None)
    _emit(args, g.to_dict(), rows)
    if args.out:
        sys.stdout.write(_table(rows, "text"))
    return EXIT_OK


def cmd_spectrum(args) -> int:
    if args.lambda_max is None:
        raise ConfigError("spectrum needs --lambda-max")
    p = load_problem(args.config)
    recs = find_eigenvalues(p, args.lambda_max, args.rank_tol) if args.lambda_max > 0 else []
    unc = list(getattr(recs, "uncertified", []))
    rows = [{"lambda": r.lam, "multiplicity": r.multiplicity, "series_tag": r.series_tag,
             "interval_lo": r.enclosing_interval[0], "interval_hi": r.enclosing_interval[1],
             "cluster": r.cluster} for r in recs]
    payload = {"eigenvalues": rows, "certified": not unc, "uncertified": [list(u) for u in unc]}
    _emit(args, payload, rows)
    if unc:
        print(f"warning: {len(unc)} uncertified range(s): {unc}", file=sys.stderr)
        return EXIT_UNCERTIFIED
    return EXIT_OK


def cmd_spectral_data(args) -> int:
    p = load_problem(args.config)
    recs = first_eigenvalues(p, args.count, args.rank_tol)
    out, rows = [], []
    for r in recs:
        t = spectral_triplet(p, r, args.rank_tol)
        td = triplet_via_derivative(p, r, args.rank_tol)
        res = float(np.linalg.norm(t.G - td.G, 2) / np.linalg.norm(t.G, 2))
        d = t.to_dict()
        d["dual_route_residual"] = res
        out.append(d)
        rows.append({"lambda": t.lam, "multiplicity": t.multiplicity,
                     "trace_G": float(np.trace(t.G).real), "dual_route_residual": res})
    _emit(args, out, rows)
    return EXIT_OK


def _parse_lambda(s: str) -> complex:
    try:
        return complex(s.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise ConfigError(f"cannot parse --lambda {s!r}; use e.g. 2.5, -1, or 3+0.5j") from None


def cmd_mfunction(args) -> int:
    if args.lam is None:
        raise ConfigError("mfunction needs --lambda")
    p = load_problem(args.config)
    w = m_function(p, _parse_lambda(args.lam))
    payload = {"lambda": w.lam, "m": w.m, "symmetry_residual": w.symmetry_residual}
    rows = [{"row": i, "col": j, "m": complex(w.m[i, j])}
            for i in range(w.m.shape[0]) for j in range(w.m.shape[1])]
    _emit(args, payload, rows)
    return EXIT_OK


def cmd_verify(args) -> int:
    p = load_problem(args.config)
    rep = run_suite(p, args.suite, args.seed)
    rows = [c.to_dict() for c in rep.checks]
    _emit(args, rep.to_dict(), rows, rep.to_text() + "\n")
    return EXIT_OK if rep.passed else EXIT_VERIFY


def cmd_distinguish(args) -> int:
    if not args.config_b:
        raise ConfigError("distinguish needs --config-b")
    pa, pb = load_problem(args.config), load_problem(args.config_b)
    try:
        res = fingerprint_distance(pa, pb, args.count, args.rank_tol)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    rows = [{"positions": " ".join(map(str, t["positions"])), "eigenvalue": t["eigenvalue"],
             "projector": t["projector"], "G": t["G"]} for t in res.terms]
    payload = {"distance": res.distance, "misaligned": res.misaligned, "terms": res.terms}
    text = f"distance {num(res.distance)}\n" + _table(rows, "text")
    _emit(args, payload, rows, text)
    return EXIT_OK


COMMANDS = {
    "decompose": cmd_decompose,
    "spectrum": cmd_spectrum,
    "spectral-data": cmd_spectral_data,
    "mfunction": cmd_mfunction,
    "verify": cmd_verify,
    "distinguish": cmd_distinguish,
}


def _hex(s: str) -> int:
    try:
        return int(s, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a hexadecimal seed: {s!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vsl", description="Spectral toolkit for vector Sturm-Liouville problems.")
    ap.add_argument("command", choices=list(COMMANDS))
    ap.add_argument("--config", required=True, help="problem JSON file")
    ap.add_argument("--config-b", help="second problem JSON file (distinguish)")
    ap.add_argument("--lambda-max", type=float, help="upper end of the eigenvalue scan")
    ap.add_argument("--count", type=int, default=5, help="number of eigenvalues (with multiplicity)")
    ap.add_argument("--suite", default="all", choices=list(SUITES) + ["all"])
    ap.add_argument("--format", default="json", choices=["json", "csv", "text"])
    ap.add_argument("--out", help="write output here instead of stdout")
    ap.add_argument("--seed", type=_hex, default=DEFAULT_SEED, help="hex seed for random probes")
    ap.add_argument("--rank-tol", type=float, default=DEFAULT_RANK_TOL)
    ap.add_argument("--lambda", dest="lam", help="spectral parameter for mfunction, e.g. 3+0.5j")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.count < 1:
        print("error: --count must be at least 1", file=sys.stderr)
        return EXIT_CONFIG
    if args.rank_tol <= 0:
        print("error: --rank-tol must be positive", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, DimensionMismatch, NearPole, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ClusterAmbiguity as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except (RankMismatch, DegenerateZ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPECTRAL
    except VSLError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
