"""Command-line front end.

Data goes to stdout, diagnostics to stderr. Exit codes: 0 success, 1 usage
error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import io
from .distributed import SCHEDULES, simulate_polynomial_filter
from .filters import (
    IdealLowPass,
    PolynomialFilter,
    Rational,
    apply_polynomial_filter,
    apply_spectral_filter,
    eigen_grid,
    fit_polynomial_response,
    fit_sweep,
    response_error,
    uniform_grid,
)
from .graph import GraphError
from .transforms import ijft, jft, joint_basis
from .variation import dirichlet_form, local_variation_map
from .wiener import CovarianceModel, mse_report

DEFAULT_SEED = 20160301
REPRESENTATIONS = ["laplacian", "normalized", "adjacency"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _default_seed() -> int:
    raw = os.environ.get("JFT_SEED")
    if raw is None or raw.strip() == "":
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"JFT_SEED must be an integer, got {raw!r}") from None


def _coeff_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _real_output(Y, what="output"):
    Y = np.asarray(Y)
    if np.iscomplexobj(Y):
        scale = max(np.abs(Y).max(initial=0.0), 1.0)
        if np.abs(Y.imag).max(initial=0.0) <= 1e-9 * scale:
            return Y.real
    return Y


def _check_dims(g, X):
    if X.shape[0] != g.n_nodes:
        raise ValueError(f"signal has {X.shape[0]} rows but the graph has {g.n_nodes} nodes")


# ---------------------------------------------------------------------------
# commands


def cmd_transform(args, out):
    g = io.read_graph(args.graph)
    jb = None
    if args.direction == "forward":
        X = io.read_signal(args.signal)
        _check_dims(g, X)
        jb = joint_basis(g, X.shape[1], args.representation)
        Y = jft(X, jb)
        out.write(io.format_spectrum(Y, jb.time.eigenvalues, jb.graph.eigenvalues))
    else:
        Y = io.read_spectrum(args.signal)
        _check_dims(g, Y)
        jb = joint_basis(g, Y.shape[1], args.representation)
        out.write(io.format_signal(_real_output(ijft(Y, jb))))


def cmd_inverse(args, out):
    args.direction = "inverse"
    cmd_transform(args, out)


def cmd_variation(args, out):
    g = io.read_graph(args.graph)
    X = io.read_signal(args.signal)
    _check_dims(g, X)
    X = _real_output(X)
    lv = local_variation_map(X, g)
    S = dirichlet_form(X, g, args.p)
    rows = [(n + 1, t + 1, float(lv[n, t])) for n in range(lv.shape[0]) for t in range(lv.shape[1])]
    text = io.format_table("n,t,local_variation", rows, comment=f"N={lv.shape[0]} T={lv.shape[1]}")
    out.write(text)
    out.write(f"# summary p={io.fmt(args.p)} S_p={io.fmt(S)}\n")


def _response_from_args(args):
    if args.response == "ideal_lowpass":
        return IdealLowPass()
    if args.response == "rational":
        if args.f is None or args.g is None:
            raise UsageError("--response rational needs --f and --g")
        return Rational(args.f, args.g)
    if os.path.exists(args.response):
        return io.read_tabulated(args.response)
    raise UsageError(f"unknown response {args.response!r} (ideal_lowpass, rational or a tabulated CSV file)")


def _grids(args, g, jb):
    if getattr(args, "grid", "eigen") == "uniform":
        lam_G_max = float(np.max(np.real(jb.graph.eigenvalues)))
        return uniform_grid(args.grid_time, args.grid_graph, max(lam_G_max, 1e-12))
    return eigen_grid(jb)


def cmd_design(args, out, err):
    g = io.read_graph(args.graph)
    h = _response_from_args(args)
    jb = joint_basis(g, args.T, args.representation)
    lam_T, lam_G = _grids(args, g, jb)
    pf = fit_polynomial_response(h, lam_T, lam_G, args.K, args.L, args.representation, strict=True)
    e = response_error(h, pf, lam_T, lam_G)
    out.write(io.format_filter_spec(pf))
    err.write(f"relative error {io.fmt(e)}\n")


def cmd_lowpass_sweep(args, out, err):
    g = io.read_graph(args.graph)
    h = _response_from_args(args)
    jb = joint_basis(g, args.T, args.representation)
    lam_T, lam_G = _grids(args, g, jb)
    sweep = fit_sweep(h, lam_T, lam_G, args.Kmax, args.Lmax, args.representation)
    rows = [(K, L, float(sweep.errors[K, L])) for K in range(args.Kmax + 1) for L in range(args.Lmax + 1)]
    out.write(io.format_table("K,L,error", rows, comment=f"N={g.n_nodes} T={args.T} representation={args.representation}"))


def _apply(g, X, spec, representation):
    if isinstance(spec, PolynomialFilter):
        return apply_polynomial_filter(X, spec, g)
    jb = joint_basis(g, X.shape[1], representation)
    return _real_output(apply_spectral_filter(X, spec, jb))


def cmd_apply(args, out):
    g = io.read_graph(args.graph)
    X = io.read_signal(args.signal)
    _check_dims(g, X)
    spec = io.read_filter_spec(args.filter)
    out.write(io.format_signal(_apply(g, X, spec, args.representation)))


def cmd_simulate(args, out, err):
    g = io.read_graph(args.graph)
    X = _real_output(io.read_signal(args.signal))
    _check_dims(g, X)
    pf = io.read_filter_spec(args.filter)
    if not isinstance(pf, PolynomialFilter):
        raise ValueError("simulate needs a polynomial filter spec")
    Y, ledger = simulate_polynomial_filter(g, X.shape[1], pf, X, schedule=args.schedule)
    if args.check:
        ref = apply_polynomial_filter(X, pf, g)
        diff = float(np.max(np.abs(Y - ref), initial=0.0))
        scale = max(float(np.max(np.abs(ref), initial=0.0)), 1.0)
        if diff > 1e-10 * scale:
            raise ValueError(f"simulation differs from matrix-free application by {diff:.3g}")
        err.write(f"check passed: max deviation {diff:.3g}\n")
    if args.output:
        io.write_signal(Y, args.output)
    out.write(json.dumps(ledger.to_dict(), indent=2, sort_keys=True) + "\n")


def cmd_wiener(args, out):
    g = io.read_graph(args.graph)
    seed = args.seed if args.seed is not None else _default_seed()
    model = CovarianceModel(args.f, args.g)
    rows = mse_report(model, g, args.T, count=args.draws, seed=seed, kind=args.representation)
    out.write(io.format_table(
        "filter,mse,stderr,draws",
        [(r.name, r.mse, r.stderr, r.draws) for r in rows],
        comment=f"N={g.n_nodes} T={args.T} seed={seed}",
    ))


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="jft", description="Joint time-vertex Fourier analysis of periodic graph signals.")
    p.add_argument("--version", action="version", version=io.FORMAT_VERSION)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def rep(sp, default="laplacian"):
        sp.add_argument("--representation", choices=REPRESENTATIONS, default=default)

    sp = sub.add_parser("transform", help="joint Fourier transform (or its inverse)")
    sp.add_argument("graph")
    sp.add_argument("signal", help="signal CSV (forward) or spectrum CSV (inverse)")
    sp.add_argument("--direction", choices=["forward", "inverse"], default="forward")
    rep(sp)

    sp = sub.add_parser("inverse", help="inverse joint Fourier transform of a spectrum CSV")
    sp.add_argument("graph")
    sp.add_argument("signal", help="spectrum CSV")
    rep(sp)

    sp = sub.add_parser("variation", help="local variation and p-Dirichlet form")
    sp.add_argument("graph")
    sp.add_argument("signal")
    sp.add_argument("--p", type=float, default=2.0)

    def response_flags(sp, default):
        sp.add_argument("--response", default=default,
                        help="ideal_lowpass, rational, or a tabulated CSV file")
        sp.add_argument("--f", type=_coeff_list, help="time polynomial coefficients a0,a1,...")
        sp.add_argument("--g", type=_coeff_list, help="graph polynomial coefficients a0,a1,...")
        sp.add_argument("--grid", choices=["eigen", "uniform"], default="eigen")
        sp.add_argument("--grid-time", type=int, default=64)
        sp.add_argument("--grid-graph", type=int, default=64)

    sp = sub.add_parser("design", help="fit a bivariate polynomial filter")
    sp.add_argument("graph")
    sp.add_argument("--T", type=int, required=True)
    sp.add_argument("--K", type=int, required=True)
    sp.add_argument("--L", type=int, required=True)
    response_flags(sp, None)
    rep(sp)

    sp = sub.add_parser("lowpass-sweep", help="fit error for every (K, L) up to the given orders")
    sp.add_argument("graph")
    sp.add_argument("--T", type=int, required=True)
    sp.add_argument("--Kmax", type=int, required=True)
    sp.add_argument("--Lmax", type=int, required=True)
    response_flags(sp, "ideal_lowpass")
    rep(sp, default="normalized")

    sp = sub.add_parser("apply", help="apply a filter spec to a signal")
    sp.add_argument("graph")
    sp.add_argument("signal")
    sp.add_argument("filter")
    rep(sp)

    sp = sub.add_parser("simulate", help="distributed evaluation of a polynomial filter")
    sp.add_argument("graph")
    sp.add_argument("signal")
    sp.add_argument("filter")
    sp.add_argument("--schedule", choices=list(SCHEDULES), default="graph_first")
    sp.add_argument("--check", action="store_true", help="compare against the matrix-free filter")
    sp.add_argument("--output", help="write the filtered signal here")

    sp = sub.add_parser("wiener", help="Monte Carlo MSE of Wiener-type filters")
    sp.add_argument("graph")
    sp.add_argument("--T", type=int, required=True)
    sp.add_argument("--f", type=_coeff_list, default=[1.0, 1.0])
    sp.add_argument("--g", type=_coeff_list, default=[0.0, 1.0])
    sp.add_argument("--draws", type=int, default=10000)
    sp.add_argument("--seed", type=int, default=None)
    rep(sp)
    return p


def _validate(args):
    for name in ("T", "K", "L", "Kmax", "Lmax", "draws"):
        v = getattr(args, name, None)
        if v is not None and v < (1 if name in ("T", "draws") else 0):
            raise UsageError(f"--{name} out of range: {v}")
    if args.command == "design" and args.response is None:
        raise UsageError("design needs --response")
    if getattr(args, "p", None) is not None and args.command == "variation" and args.p < 1:
        raise UsageError("--p must be >= 1")


def main(argv=None, stdout=None, stderr=None) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(err)
        return 1
    handlers = {
        "transform": lambda: cmd_transform(args, out),
        "inverse": lambda: cmd_inverse(args, out),
        "variation": lambda: cmd_variation(args, out),
        "design": lambda: cmd_design(args, out, err),
        "lowpass-sweep": lambda: cmd_lowpass_sweep(args, out, err),
        "apply": lambda: cmd_apply(args, out),
        "simulate": lambda: cmd_simulate(args, out, err),
        "wiener": lambda: cmd_wiener(args, out),
    }
    try:
        _validate(args)
        handlers[args.command]()
    except UsageError as exc:
        err.write(f"jft: usage error: {exc}\n")
        return 1
    except (io.ParseError, GraphError, ValueError, FileNotFoundError, np.linalg.LinAlgError) as exc:
        err.write(f"jft: error: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
