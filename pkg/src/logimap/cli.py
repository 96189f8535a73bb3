"""Command-line surface: every analysis as a reproducible CSV/PGM artifact.

One subcommand per analysis; no aggregate command.  All outputs are written
atomically (temp file in the target directory, then rename) and are
byte-identical across repeated runs and across --workers counts.  Floats
are serialized as the shortest decimal that round-trips the 64-bit value.

Exit codes: 0 success, 2 invalid arguments, 3 when convergence was demanded
(--require-converged) but not reached.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile

from . import cycles, ergodic, map_core, ode, pgm, picard
from .errors import IterationBudgetExhausted, ToolkitError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_CONVERGED = 3


def _fmt(x) -> str:
    """Shortest decimal representation that round-trips the double."""
    return repr(float(x))


def _write_atomic(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _write_csv(path: str, header: list[str], rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    _write_atomic(path, ("\n".join(lines) + "\n").encode("ascii"))


# ---------------------------------------------------------------- orbit


def _cmd_orbit(args) -> int:
    params = map_core.MapParams.unchecked(args.a)
    orb = map_core.orbit(params, args.x0, args.n, args.transient)
    rows = [(str(i), _fmt(x)) for i, x in enumerate(orb.states)]
    _write_csv(args.out, ["step", "x"], rows)
    if orb.escaped:
        print(
            f"orbit escaped after {len(orb.states)} recorded states",
            file=sys.stderr,
        )
    if args.fig_out:
        from . import figures

        figures.save_orbit_figure(orb, args.fig_out)
    return EXIT_OK


# --------------------------------------------------------- fixed points


def _cmd_fixed_points(args) -> int:
    rows = []
    for a in args.a:
        params = map_core.MapParams.unchecked(a)
        cls = map_core.classify_fixed_point(params)
        for x_star in map_core.fixed_points(params):
            rows.append((_fmt(a), _fmt(x_star), cls.value))
    _write_csv(args.out, ["a", "x_star", "classification"], rows)
    return EXIT_OK


# ----------------------------------------------------------------- cycle


def _cmd_cycle(args) -> int:
    params = map_core.MapParams.unchecked(args.a)
    orb = map_core.orbit(params, args.x0, args.n, args.transient)
    cyc = cycles.detect_cycle(orb, args.tol, args.max_period)
    if cyc is not None and args.refine:
        cyc = cycles.refine_cycle(params, cyc.points[0], cyc.period)
    rows = []
    if cyc is not None:
        for i, x in enumerate(cyc.points):
            rows.append(
                (_fmt(args.a), str(cyc.period), str(i), _fmt(x), _fmt(cyc.multiplier))
            )
    else:
        print(
            f"no cycle of period <= {args.max_period} at tol {args.tol}",
            file=sys.stderr,
        )
    _write_csv(args.out, ["a", "period", "point_index", "x", "multiplier"], rows)
    return EXIT_OK


# ------------------------------------------------------------ superstable


def _cmd_superstable(args) -> int:
    seq = cycles.superstable_ladder(args.max_period)
    rows = [
        (str(k), str(period), _fmt(a))
        for k, (period, a) in enumerate(seq.entries)
    ]
    _write_csv(args.out, ["k", "period", "a_k"], rows)
    return EXIT_OK


# ------------------------------------------------------------- feigenbaum


def _cmd_feigenbaum(args) -> int:
    seq = cycles.superstable_ladder(args.max_period)
    deltas = cycles.feigenbaum_delta(seq)
    a = seq.parameters()
    rows = []
    for k, d in enumerate(deltas, start=1):
        # Extrapolate the cascade limit from the gap this ratio closes.
        a_inf = a[k + 1] + (a[k + 1] - a[k]) / (d - 1.0)
        rows.append((str(k), _fmt(d), _fmt(a_inf)))
    _write_csv(args.out, ["k", "delta_k", "a_inf_estimate"], rows)
    if args.fig_out:
        from . import figures

        figures.save_feigenbaum_figure(deltas, args.fig_out)
    return EXIT_OK


# --------------------------------------------------------------- lyapunov


def _cmd_lyapunov(args) -> int:
    if args.a is not None:
        a_values = [args.a]
    else:
        if args.a_min is None or args.a_max is None or args.n_params is None:
            raise ToolkitError("give either --a or all of --a-min/--a-max/--n-params")
        if not args.a_min < args.a_max:
            raise ToolkitError("need a-min < a-max")
        n = args.n_params
        if n < 2:
            raise ToolkitError("need n-params >= 2")
        a_values = [
            args.a_min + i * (args.a_max - args.a_min) / (n - 1) for i in range(n)
        ]
    results = [
        ergodic.lyapunov(
            map_core.MapParams.unchecked(a), args.x0, args.n, args.transient
        )
        for a in a_values
    ]
    rows = [
        (
            _fmt(r.a),
            "-inf" if r.exponent is None else _fmt(r.exponent),
            str(r.n_used),
        )
        for r in results
    ]
    _write_csv(args.out, ["a", "exponent", "n_used"], rows)
    if args.fig_out:
        from . import figures

        figures.save_lyapunov_figure(results, args.fig_out)
    return EXIT_OK


# --------------------------------------------------------------- bifurcate


def _cmd_bifurcate(args) -> int:
    if not (args.csv_out or args.pgm_out or args.fig_out):
        raise ToolkitError("give at least one of --csv-out, --pgm-out, --fig-out")
    data = ergodic.bifurcation_scan(
        args.a_min,
        args.a_max,
        args.n_params,
        transient=args.transient,
        keep=args.keep,
        x0=args.x0,
        workers=args.workers,
    )
    if args.csv_out:
        rows = []
        for i in range(len(data)):
            a_txt = _fmt(data.a_values[i])
            if data.escaped[i]:
                rows.append((a_txt, "0", "nan", "1"))
                continue
            for j, x in enumerate(data.samples[i]):
                rows.append((a_txt, str(j), _fmt(x), "0"))
        _write_csv(args.csv_out, ["a", "sample_index", "x", "escaped"], rows)
    if args.pgm_out:
        _write_atomic(args.pgm_out, pgm.render_bifurcation_pgm(data, args.height))
    if args.fig_out:
        from . import figures

        figures.save_bifurcation_figure(data, args.fig_out)
    return EXIT_OK


# --------------------------------------------------------------------- ode


def _cmd_ode(args) -> int:
    params = ode.OdeParams(args.r, args.m, args.p0)
    sol = ode.rk4_integrate(params, args.t_end, args.dt)
    rows = []
    for t, p_rk4 in zip(sol.times(), sol.values):
        p_exact = ode.exact_solution(params, t)
        rows.append((_fmt(t), _fmt(p_exact), _fmt(p_rk4), _fmt(abs(p_rk4 - p_exact))))
    _write_csv(args.out, ["t", "P_exact", "P_rk4", "abs_err"], rows)
    if args.fig_out:
        from . import figures

        figures.save_ode_figure(params, sol, args.fig_out)
    return EXIT_OK


# ------------------------------------------------------------------ picard


def _cmd_picard(args) -> int:
    params = ode.OdeParams(args.r, args.m, args.x0)
    try:
        run = picard.picard_iterate(
            params, args.x0, args.t_horizon, args.dt, args.tol, args.max_iter
        )
        exhausted = False
    except IterationBudgetExhausted as exc:
        print(f"IterationBudgetExhausted: {exc}", file=sys.stderr)
        run = exc.run
        exhausted = True
    rows = []
    for k, d in enumerate(run.deltas):
        ratio = "" if k == 0 else _fmt(run.deltas[k] / run.deltas[k - 1])
        rows.append((str(k + 1), _fmt(d), ratio, _fmt(run.contraction_bound)))
    _write_csv(args.out, ["iterate", "sup_delta", "ratio", "contraction_bound"], rows)
    if args.fig_out:
        from . import figures

        figures.save_picard_figure(run, args.fig_out)
    if exhausted and args.require_converged:
        return EXIT_NOT_CONVERGED
    return EXIT_OK


# ------------------------------------------------------------------ bridge


def _cmd_bridge(args) -> int:
    if args.a is not None:
        outcomes = [picard.scalar_bridge(args.a, args.x_start, args.max_iter, args.tol)]
    else:
        if args.a_min is None or args.a_max is None or args.n_params is None:
            raise ToolkitError("give either --a or all of --a-min/--a-max/--n-params")
        outcomes = picard.breakdown_scan(
            args.a_min,
            args.a_max,
            args.n_params,
            x_start=args.x_start,
            max_iter=args.max_iter,
            tol=args.tol,
            workers=args.workers,
        )
    rows = []
    for o in outcomes:
        if o.classification is picard.BridgeClass.CONVERGED:
            payload = _fmt(o.limit)
        elif o.classification is picard.BridgeClass.CYCLE:
            payload = str(o.period)
        else:
            payload = ""
        rows.append((_fmt(o.a), o.classification.value, payload, str(o.steps)))
    _write_csv(args.out, ["a", "classification", "limit_or_period", "steps"], rows)
    if args.fig_out:
        from . import figures

        figures.save_bridge_figure(outcomes, args.fig_out)
    return EXIT_OK


# ------------------------------------------------------------------ parser


def _add_fig_out(p) -> None:
    p.add_argument(
        "--fig-out",
        default=None,
        help="also render a figure of the result to this file (png/pdf/svg)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logimap",
        description="Logistic-map dynamics: orbits, cycles, the doubling "
        "cascade, Lyapunov exponents, the logistic ODE, and successive "
        "approximation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("orbit", help="iterate the map and dump the trajectory")
    p.add_argument("--a", type=float, required=True, help="growth parameter")
    p.add_argument("--x0", type=float, required=True, help="initial state")
    p.add_argument("--n", type=int, required=True, help="states to record")
    p.add_argument(
        "--transient", type=int, default=0, help="steps to discard first (default 0)"
    )
    p.add_argument("--out", required=True, help="CSV path (step,x)")
    _add_fig_out(p)
    p.set_defaults(func=_cmd_orbit)

    p = sub.add_parser("fixed-points", help="fixed points and their stability")
    p.add_argument(
        "--a",
        type=float,
        action="append",
        required=True,
        help="growth parameter (repeatable)",
    )
    p.add_argument("--out", required=True, help="CSV path (a,x_star,classification)")
    p.set_defaults(func=_cmd_fixed_points)

    p = sub.add_parser("cycle", help="detect the periodic orbit an orbit settles on")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--x0", type=float, default=0.3)
    p.add_argument("--n", type=int, default=2048, help="recorded states (default 2048)")
    p.add_argument(
        "--transient", type=int, default=4096, help="discarded steps (default 4096)"
    )
    p.add_argument(
        "--tol", type=float, default=1e-8, help="tail match tolerance (default 1e-8)"
    )
    p.add_argument(
        "--max-period", type=int, default=64, help="largest period tried (default 64)"
    )
    p.add_argument(
        "--refine",
        action="store_true",
        help="Newton-polish the detected cycle points",
    )
    p.add_argument(
        "--out", required=True, help="CSV path (a,period,point_index,x,multiplier)"
    )
    p.set_defaults(func=_cmd_cycle)

    p = sub.add_parser(
        "superstable", help="parameters whose cycle passes through the critical point"
    )
    p.add_argument(
        "--max-period",
        type=int,
        default=128,
        help="deepest ladder period, a power of two <= 256 (default 128)",
    )
    p.add_argument("--out", required=True, help="CSV path (k,period,a_k)")
    p.set_defaults(func=_cmd_superstable)

    p = sub.add_parser("feigenbaum", help="gap ratios of the doubling ladder")
    p.add_argument(
        "--max-period",
        type=int,
        default=128,
        help="deepest ladder period, a power of two <= 256 (default 128)",
    )
    p.add_argument("--out", required=True, help="CSV path (k,delta_k,a_inf_estimate)")
    _add_fig_out(p)
    p.set_defaults(func=_cmd_feigenbaum)

    p = sub.add_parser("lyapunov", help="orbit-averaged log slope")
    p.add_argument("--a", type=float, default=None, help="single growth parameter")
    p.add_argument("--a-min", type=float, default=None, help="sweep start")
    p.add_argument("--a-max", type=float, default=None, help="sweep end")
    p.add_argument("--n-params", type=int, default=None, help="sweep grid size")
    p.add_argument("--x0", type=float, default=0.3, help="initial state (default 0.3)")
    p.add_argument(
        "--n", type=int, default=100000, help="averaged steps (default 100000)"
    )
    p.add_argument(
        "--transient", type=int, default=10000, help="discarded steps (default 10000)"
    )
    p.add_argument("--out", required=True, help="CSV path (a,exponent,n_used)")
    _add_fig_out(p)
    p.set_defaults(func=_cmd_lyapunov)

    p = sub.add_parser("bifurcate", help="attractor samples over a parameter sweep")
    p.add_argument("--a-min", type=float, required=True)
    p.add_argument("--a-max", type=float, required=True)
    p.add_argument("--n-params", type=int, required=True, help="grid width")
    p.add_argument(
        "--transient", type=int, default=10000, help="discarded steps (default 10000)"
    )
    p.add_argument(
        "--keep", type=int, default=256, help="samples kept per parameter (default 256)"
    )
    p.add_argument(
        "--x0",
        type=float,
        default=0.5,
        help="start every column here (default 0.5, the critical point)",
    )
    p.add_argument(
        "--workers", type=int, default=1, help="processes for the sweep (default 1)"
    )
    p.add_argument("--csv-out", default=None, help="CSV path (a,sample_index,x,escaped)")
    p.add_argument(
        "--pgm-out",
        "--png-out",
        dest="pgm_out",
        default=None,
        help="binary PGM path for the diagram",
    )
    p.add_argument(
        "--height", type=int, default=512, help="PGM rows binning x (default 512)"
    )
    _add_fig_out(p)
    p.set_defaults(func=_cmd_bifurcate)

    p = sub.add_parser("ode", help="RK4 vs closed form for the continuous equation")
    p.add_argument("--r", type=float, required=True, help="growth rate, > 0")
    p.add_argument("--m", type=float, required=True, help="carrying capacity, > 0")
    p.add_argument("--p0", type=float, required=True, help="initial population, >= 0")
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--out", required=True, help="CSV path (t,P_exact,P_rk4,abs_err)")
    _add_fig_out(p)
    p.set_defaults(func=_cmd_ode)

    p = sub.add_parser("picard", help="successive approximation of the ODE")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--m", type=float, required=True)
    p.add_argument(
        "--x0",
        type=float,
        required=True,
        help="initial condition; also the constant seed iterate",
    )
    p.add_argument(
        "--t-horizon",
        type=float,
        default=None,
        help="horizon (default: the contraction window 0.5/L)",
    )
    p.add_argument(
        "--dt", type=float, default=None, help="grid spacing (default: horizon/512)"
    )
    p.add_argument(
        "--tol", type=float, default=1e-10, help="sup-norm stop (default 1e-10)"
    )
    p.add_argument("--max-iter", type=int, default=64, help="iteration cap (default 64)")
    p.add_argument(
        "--require-converged",
        action="store_true",
        help="exit 3 if the budget runs out before tol is reached",
    )
    p.add_argument(
        "--out", required=True, help="CSV path (iterate,sup_delta,ratio,contraction_bound)"
    )
    _add_fig_out(p)
    p.set_defaults(func=_cmd_picard)

    p = sub.add_parser(
        "bridge", help="the scalar recurrence: converge, cycle, or neither"
    )
    p.add_argument("--a", type=float, default=None, help="single growth parameter")
    p.add_argument("--a-min", type=float, default=None, help="sweep start")
    p.add_argument("--a-max", type=float, default=None, help="sweep end")
    p.add_argument("--n-params", type=int, default=None, help="sweep grid size")
    p.add_argument(
        "--x-start", type=float, default=0.3, help="iteration seed (default 0.3)"
    )
    p.add_argument(
        "--max-iter", type=int, default=4096, help="iteration cap (default 4096)"
    )
    p.add_argument(
        "--tol", type=float, default=1e-12, help="convergence delta (default 1e-12)"
    )
    p.add_argument(
        "--workers", type=int, default=1, help="processes for the sweep (default 1)"
    )
    p.add_argument(
        "--out", required=True, help="CSV path (a,classification,limit_or_period,steps)"
    )
    _add_fig_out(p)
    p.set_defaults(func=_cmd_bridge)

    return parser


def run(argv=None) -> int:
    """Parse argv, dispatch one subcommand, return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except (ToolkitError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
