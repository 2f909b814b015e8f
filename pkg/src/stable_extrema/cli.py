"""Command-line interface: ``stable-extrema <command> ...``.

Every command writes either CSV (comma separated, header row, '#'
provenance lines) or one JSON object with "config", "data" and
"diagnostics".  The provenance records the package version, the full run
configuration and a wall-clock line; the wall-clock line is the only one
that changes between identical runs.

Exit codes: 0 success, 1 validation failure, 2 domain error,
3 numerical failure.  Errors are also reported as JSON on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
import warnings
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

import numpy as np
from mpmath import mp

from . import __version__
from . import diophantine as dio
from . import experiments
from .errors import DomainError, RationalAlphaError, StableExtremaError
from .exact import default_dps, parse_real
from .inversion import QuadConfig, invert_mellin, mellin_samples
from .oracle_mc import McConfig, sample_sup
from .params import StableParams
from .series import ASYMPTOTIC, CONVERGENT, DEFAULT_TRUNC, density_series

EXIT_OK, EXIT_VALIDATION, EXIT_DOMAIN, EXIT_NUMERIC = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    arguments: dict
    precision_digits: int = 34
    truncation: dict = field(default_factory=lambda: {k: list(v) for k, v in DEFAULT_TRUNC.items()})
    quadrature: dict = field(default_factory=lambda: QuadConfig().to_dict())
    seeds: dict = field(default_factory=dict)
    output_format: str = "csv"
    output_path: str | None = None
    version: str = __version__

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, default=str)


# output -------------------------------------------------------------------------

def _jsonable(v):
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    return str(v)


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def emit(run: RunConfig, columns, rows, diagnostics=None, started=None):
    """Write rows in the configured format to the output path (or stdout)."""
    elapsed = time.perf_counter() - started if started else 0.0
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    buf = io.StringIO()
    if run.output_format == "json":
        obj = {"config": asdict(run),
               "data": [dict(zip(columns, _jsonable(list(r)))) for r in rows],
               "diagnostics": _jsonable(diagnostics or {})}
        text = json.dumps(obj, indent=1, sort_keys=True, default=str)
        # keep the wall-clock on a line of its own
        buf.write(text[:-1].rstrip() + f',\n "wall_clock": "{stamp} ({elapsed:.3f} s)"\n}}\n')
    else:
        buf.write(f"# stable_extrema {run.version}\n")
        buf.write(f"# config: {run.to_json()}\n")
        if diagnostics:
            buf.write(f"# diagnostics: {json.dumps(_jsonable(diagnostics), sort_keys=True)}\n")
        buf.write(f"# wall_clock: {stamp} ({elapsed:.3f} s)\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(v) for v in r])
    if run.output_path:
        with open(run.output_path, "w") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())


def _params(args) -> StableParams:
    return StableParams(parse_real(args.alpha), parse_real(args.rho))


def _quad(args) -> QuadConfig:
    return QuadConfig(u_max=args.u_max, panels=args.panels)


def _run(args, **extra) -> RunConfig:
    arguments = {k: v for k, v in sorted(vars(args).items())
                 if k not in ("func", "output", "format")}
    return RunConfig(command=args.command, arguments=arguments, precision_digits=default_dps(),
                     output_format=args.format, output_path=args.output, **extra)


# commands -------------------------------------------------------------------------

def cmd_density(args) -> int:
    t0 = time.perf_counter()
    params = _params(args)
    xs = np.linspace(args.x_min, args.x_max, args.points)
    method = args.method
    if method == "auto":
        method = "mellin" if params.alpha_rational is not None else "series"
    run = _run(args, quadrature=_quad(args).to_dict(), seeds={"mc": args.seed})
    if method == "mellin":
        curve = invert_mellin(params, xs, _quad(args))
        diag = curve.diagnostics["error"]
    elif method == "series":
        trunc = tuple(args.trunc) if args.trunc else None
        curve = density_series(params, xs, args.role, trunc)
        diag = curve.diagnostics["error"]
    else:
        cfg = McConfig(paths=args.paths, grid_steps=args.grid_steps, seed=args.seed)
        sup = sample_sup(params, cfg)
        edges = np.linspace(args.x_min, args.x_max, args.points + 1)
        counts, _ = np.histogram(sup, bins=edges)
        width = np.diff(edges)
        xs = (edges[:-1] + edges[1:]) / 2
        ps = counts / (len(sup) * width)
        diag = np.sqrt(counts) / (len(sup) * width)
        emit(run, ["x", "p", "diag"], zip(xs, ps, diag),
             {"method": "mc", "note": "histogram; diag is the standard error"}, t0)
        return EXIT_OK
    emit(run, ["x", "p", "diag"], zip(curve.xs, curve.ps, diag), {"method": curve.method}, t0)
    return EXIT_OK


def cmd_mellin(args) -> int:
    t0 = time.perf_counter()
    params = _params(args)
    cfg = QuadConfig(u_max=args.u_max, panels=args.panels)
    u, f = mellin_samples(params, cfg, c=args.c)
    run = _run(args, quadrature=cfg.to_dict())
    emit(run, ["u", "re", "im"], zip(u, f.real, f.imag), {"tail_abs": float(abs(f[-1]))}, t0)
    return EXIT_OK


def cmd_validate(args) -> int:
    t0 = time.perf_counter()
    if args.experiment == "fig3":
        res = experiments.fig3()
    elif args.experiment == "fig4":
        res = experiments.fig4()
    elif args.experiment == "moments":
        res = experiments.moments(args.w)
    elif args.experiment == "fig2":
        res = experiments.fig2()
    elif args.experiment == "witness":
        res = experiments.witness()
    else:
        res = experiments.mc(McConfig(paths=args.paths, grid_steps=args.grid_steps,
                                      seed=args.seed))
    status = "PASS" if res["passed"] else "FAIL"
    summary = {k: v for k, v in res.items() if not isinstance(v, list)}
    timing = summary.pop("seconds", None)
    print(f"{status} {args.experiment} ({timing:.1f} s): "
          + json.dumps(_jsonable(summary), sort_keys=True), file=sys.stderr)
    run = _run(args, seeds={"mc": args.seed})
    emit(run, ["quantity", "value"], sorted((k, v) for k, v in _jsonable(summary).items()),
         None, t0)
    return EXIT_OK if res["passed"] else EXIT_VALIDATION


def cmd_curves(args) -> int:
    t0 = time.perf_counter()
    rows = dio.curves(args.N, (args.alpha_min, args.alpha_max), (args.rho_min, args.rho_max),
                      args.n_alpha)
    emit(_run(args), ["alpha", "l", "rho"], rows, None, t0)
    return EXIT_OK


def cmd_dio(args) -> int:
    t0 = time.perf_counter()
    run = _run(args)
    sub = args.dio_command
    if sub == "expand":
        cf = dio.cf_expand(parse_real(args.value), args.depth, strict=False)
        rows = [(i, a, p, q) for i, (a, (p, q)) in
                enumerate(zip([cf.a0] + cf.quotients, cf.convergents))]
        emit(run, ["n", "a", "p", "q"], rows, {"cf": str(cf), "exhausted": cf.exhausted}, t0)
    elif sub == "ltilde":
        cf = dio.construct_L_tilde(parse_real(args.b), args.eps, args.levels)
        rows = [(i, a, p, q) for i, (a, (p, q)) in
                enumerate(zip([cf.a0] + cf.quotients, cf.convergents))]
        emit(run, ["n", "a", "p", "q"], rows, {"cf": str(cf)}, t0)
    elif sub == "witness":
        cf = dio.construct_L_tilde(parse_real(args.b), args.eps, args.levels)
        cf = cf.reflect(2) if args.transform == "reflect" else cf.shift(1)
        w = dio.divergence_witness(cf, parse_real(args.rho), parse_real(args.x), args.level)
        d = w.to_dict()
        print(d["lower_bound"], file=sys.stderr)
        emit(run, ["quantity", "value"], sorted(d.items()), {"alpha": str(cf)}, t0)
    elif sub == "doney":
        params = _params(args)
        kl = dio.doney_search(params, args.bound, args.bound)
        rows = [] if kl is None else [kl]
        emit(run, ["k", "l"], rows, {"found": kl is not None}, t0)
    elif sub == "approx":
        l, frac, err = dio.inhom_approx(parse_real(args.alpha), parse_real(args.rho), args.q_bound)
        emit(run, ["l", "frac_l_over_alpha", "error"],
             [(l, mp.nstr(frac, 20), mp.nstr(err, 10))], None, t0)
    return EXIT_OK


# parser -------------------------------------------------------------------------

def _common(p):
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output", "-o", default=None, help="output file (default stdout)")


def _ar(p, alpha_default=None, rho_default=None):
    p.add_argument("--alpha", required=alpha_default is None, default=alpha_default,
                   help='exact rational "3/2", surd "3/2+sqrt(2)/50" or decimal')
    p.add_argument("--rho", required=rho_default is None, default=rho_default)


def _quad_args(p):
    p.add_argument("--u-max", type=float, default=QuadConfig.u_max)
    p.add_argument("--panels", type=int, default=QuadConfig.panels)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stable-extrema",
                                 description="Density of the supremum of a stable process.")
    ap.add_argument("--version", action="version", version=__version__)
    sp = ap.add_subparsers(dest="command", required=True)

    p = sp.add_parser("density", help="density p(x) of S_1 on a grid")
    _ar(p)
    p.add_argument("--method", choices=["auto", "series", "mellin", "mc"], default="auto")
    p.add_argument("--role", choices=[CONVERGENT, ASYMPTOTIC], default=CONVERGENT)
    p.add_argument("--trunc", type=int, nargs=2, metavar=("M", "N"))
    p.add_argument("--x-min", type=float, default=0.05)
    p.add_argument("--x-max", type=float, default=6.0)
    p.add_argument("--points", type=int, default=300)
    p.add_argument("--paths", type=int, default=10_000)
    p.add_argument("--grid-steps", type=int, default=1000)
    p.add_argument("--seed", type=int, default=McConfig.seed)
    _quad_args(p)
    _common(p)
    p.set_defaults(func=cmd_density)

    p = sp.add_parser("mellin", help="M(c + iu) on the quadrature grid")
    _ar(p)
    p.add_argument("--c", type=float, default=1.0)
    _quad_args(p)
    _common(p)
    p.set_defaults(func=cmd_mellin)

    p = sp.add_parser("validate", help="run a cross-check against pinned tolerances")
    p.add_argument("experiment", choices=["fig2", "fig3", "fig4", "moments", "mc", "witness"])
    p.add_argument("--w", type=float, default=0.3)
    p.add_argument("--paths", type=int, default=McConfig.paths)
    p.add_argument("--grid-steps", type=int, default=McConfig.grid_steps)
    p.add_argument("--seed", type=int, default=McConfig.seed)
    _common(p)
    p.set_defaults(func=cmd_validate)

    p = sp.add_parser("curves", help="points of the curves rho = {l/alpha}, |l| <= N")
    p.add_argument("--N", type=int, default=10)
    p.add_argument("--alpha-min", type=float, default=0.0)
    p.add_argument("--alpha-max", type=float, default=2.0)
    p.add_argument("--rho-min", type=float, default=0.0)
    p.add_argument("--rho-max", type=float, default=1.0)
    p.add_argument("--n-alpha", type=int, default=400)
    _common(p)
    p.set_defaults(func=cmd_curves)

    p = sp.add_parser("dio", help="continued fractions and arithmetic sets")
    dsp = p.add_subparsers(dest="dio_command", required=True)
    q = dsp.add_parser("expand")
    q.add_argument("--value", required=True)
    q.add_argument("--depth", type=int, default=20)
    _common(q)
    for name in ("ltilde", "witness"):
        q = dsp.add_parser(name)
        q.add_argument("--b", default="2")
        q.add_argument("--eps", default="0.1")
        q.add_argument("--levels", type=int, default=3)
        if name == "witness":
            q.add_argument("--rho", default="3/5")
            q.add_argument("--x", default="1")
            q.add_argument("--level", type=int, default=None)
            q.add_argument("--transform", choices=["reflect", "shift"], default="reflect",
                           help="map into (1, 2) by 2 - x (default) or 1 + x")
        _common(q)
    q = dsp.add_parser("doney")
    _ar(q)
    q.add_argument("--bound", type=int, default=100)
    _common(q)
    q = dsp.add_parser("approx")
    _ar(q)
    q.add_argument("--q-bound", type=int, default=1000)
    _common(q)
    p.set_defaults(func=cmd_dio)
    return ap


def _error(exc, code: int) -> int:
    payload = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    if isinstance(exc, RationalAlphaError):
        payload.update(index=exc.j, factor=exc.factor)
    print(json.dumps(payload), file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return args.func(args)
    except (DomainError, RationalAlphaError, ValueError) as exc:
        return _error(exc, EXIT_DOMAIN)
    except (StableExtremaError, ArithmeticError, MemoryError) as exc:
        return _error(exc, EXIT_NUMERIC)


if __name__ == "__main__":
    sys.exit(main())
