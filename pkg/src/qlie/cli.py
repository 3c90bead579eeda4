"""Command-line front end: ``qlie analyze | simulate | demo``.

Exit codes: 0 when a report was produced (whatever the verdict), 2 on
parse or validation errors, 3 when internal cross-checks disagree.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import replace

import numpy as np

from . import criteria, io, lie, models, simulator
from .criteria import InternalConsistencyError, Tolerances
from .linalg import unitarity_residual

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 2, 3
DEMOS = ("oscillator", "random", "diagonal", "bracket-table")


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def format_report(r: criteria.ControllabilityReport) -> str:
    n = r.n
    lines = [
        f"dimension n: {n}",
        f"value set: {len(r.value_set)} points in [{min(r.value_set):g}, {max(r.value_set):g}]",
        f"functionals {{1, F_1..F_L}} independent on V: {_yes(r.functional_independent)}"
        f" (effective count {r.effective_functional_count})",
        f"witness points: {', '.join(f'{w:.6g}' for w in r.witnesses)}",
        f"nonzero trace among H0, mu_k: {_yes(r.any_nonzero_trace)}",
        f"Lie algebra dimension: {r.lie_dim} (n^2 = {n * n})",
        f"traceless Lie algebra dimension: {r.traceless_lie_dim} (n^2 - 1 = {n * n - 1})",
        f"centralizer of P in algebra: {r.centralizer_dim}"
        f" (codimension {r.lie_dim - r.centralizer_dim}, required {2 * n - 2})",
        f"density-matrix controllable: {_yes(r.density_controllable)}",
        f"wavefunction controllable: {_yes(r.wavefunction_controllable)}",
    ]
    if r.reduced_density_controllable is not None:
        lines.append(
            f"reduced family (not a verdict): density {_yes(r.reduced_density_controllable)},"
            f" wavefunction {_yes(r.reduced_wavefunction_controllable)}"
        )
    lines += [f"warning: {w}" for w in r.warnings]
    return "\n".join(lines)


def _tolerances(base: Tolerances, args) -> Tolerances:
    env = os.environ.get("QLIE_TOL")
    rank = base.rank
    if env:
        try:
            rank = float(env)
        except ValueError:
            raise io.SystemFileError(f"QLIE_TOL: not a number: {env!r}") from None
    if getattr(args, "tol", None) is not None:
        rank = args.tol
    if not rank > 0:
        raise io.SystemFileError("tolerance must be positive")
    tol = replace(base, rank=rank)
    if getattr(args, "max_rounds", None) is not None:
        tol = replace(tol, max_rounds=args.max_rounds)
    return tol


def _emit_report(report, args, digest: str, t0: float, **extra) -> None:
    print(format_report(report))
    if args.json:
        doc = io.report_document(report, input_digest=digest, wall_time=time.perf_counter() - t0, **extra)
        io.write_json(args.json, doc)


def cmd_analyze(args) -> int:
    t0 = time.perf_counter()
    sys_, base, digest = io.load_system_file(args.path)
    tol = _tolerances(base, args)
    report = criteria.analyze(sys_, tol)
    _emit_report(report, args, f"sha256:{digest}", t0)
    return EXIT_OK


def _fmt_vec(c) -> str:
    return "[" + ", ".join(f"{z.real:.10g}{z.imag:+.10g}j" for z in c) + "]"


def cmd_simulate(args) -> int:
    sys_, _, digest = io.load_system_file(args.path)
    if args.control:
        obj, _ = io.read_json(args.control)
        ctrl = io.control_from_obj(obj)
    else:
        ctrl = simulator.PiecewiseConstantControl()
    u = simulator.propagator(sys_, ctrl)
    out = {
        "input_digest": f"sha256:{digest}",
        "segments": len(ctrl),
        "total_time": ctrl.duration,
        "unitarity_residual": unitarity_residual(u),
        "propagator": {"re": u.real.tolist(), "im": u.imag.tolist()},
    }
    print(f"segments: {len(ctrl)}, total time: {ctrl.duration:.10g}")
    print("propagator:")
    for row in u:
        print("  " + _fmt_vec(row))
    print(f"unitarity residual: {out['unitarity_residual']:.3e}")
    if args.state is not None:
        c0 = io.parse_state(args.state)
        try:
            c = simulator.propagate_state(sys_, ctrl, c0)
        except ValueError as exc:
            raise io.SystemFileError(f"--state: {exc}") from None
        drift = abs(np.linalg.norm(c) - 1.0)
        pops = np.abs(c) ** 2
        print("final state: " + _fmt_vec(c))
        print("final populations: " + ", ".join(f"{p:.12f}" for p in pops))
        print(f"norm drift: {drift:.3e}")
        out.update(state={"re": c.real.tolist(), "im": c.imag.tolist()}, populations=pops.tolist(), norm_drift=drift)
    if args.density is not None:
        obj, _ = io.read_json(args.density)
        rho0 = io._matrix(obj, "density", sys_.n)
        try:
            rho = simulator.propagate_density(sys_, ctrl, rho0)
        except ValueError as exc:
            raise io.SystemFileError(f"--density: {exc}") from None
        drift = float(np.max(np.abs(np.linalg.eigvalsh(rho) - np.linalg.eigvalsh(rho0))))
        print("final density matrix:")
        for row in rho:
            print("  " + _fmt_vec(row))
        print(f"eigenvalue drift: {drift:.3e}")
        out.update(density={"re": rho.real.tolist(), "im": rho.imag.tolist()}, eigenvalue_drift=drift)
    if args.json:
        io.write_json(args.json, out)
    return EXIT_OK


def cmd_demo(args) -> int:
    t0 = time.perf_counter()
    if args.name == "bracket-table":
        table = models.oscillator_bracket_table()
        d = lie.closure_dim_from_bracket_table(table)
        gens = ", ".join(table.names)
        print(f"oscillator bracket table, generators: {gens}")
        print(f"closure dimension: {d}")
        if args.json:
            io.write_json(args.json, {"tool": "qlie", "closure_dimension": d, "generators": list(table.names)})
        return EXIT_OK
    if args.n < 2:
        raise io.SystemFileError("--n must be >= 2")
    if args.name == "oscillator":
        sys_ = models.truncated_oscillator(args.n)
    elif args.name == "random":
        sys_ = models.random_dense(args.n, args.L, args.seed)
    else:
        sys_ = models.diagonal_pair(args.n)
    report = criteria.analyze(sys_, _tolerances(Tolerances(), args))
    print(f"model: {args.name} (n={args.n})")
    _emit_report(report, args, f"model:{args.name}:n={args.n}", t0, model=args.name)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qlie", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="decide controllability of a system file")
    p.add_argument("path", help="system file (JSON)")
    p.add_argument("--tol", type=float, help="relative rank tolerance (overrides QLIE_TOL)")
    p.add_argument("--json", metavar="PATH", help="write a JSON report")
    p.add_argument("--max-rounds", type=int, help="cap on commutator rounds")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="propagate under a piecewise-constant control")
    p.add_argument("path", help="system file (JSON)")
    p.add_argument("--control", metavar="PATH", help="JSON list of {duration, value}")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--state", metavar="CSV", help="initial amplitudes, e.g. 1,0")
    group.add_argument("--density", metavar="PATH", help="initial density matrix {re, im}")
    p.add_argument("--json", metavar="PATH", help="write results as JSON")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("demo", help="analyze a built-in model")
    p.add_argument("name", choices=DEMOS)
    p.add_argument("--n", type=int, default=4, help="Hilbert space dimension")
    p.add_argument("--L", type=int, default=1, help="number of functionals (random model)")
    p.add_argument("--seed", type=int, default=0, help="seed for the random model")
    p.add_argument("--tol", type=float, help="relative rank tolerance (overrides QLIE_TOL)")
    p.add_argument("--json", metavar="PATH", help="write a JSON report")
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InternalConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
