"""Command-line front end.

Subcommands: verify (identity suites -> JSON report), hierarchy (charge
table), transform (catalog report), flow (group-flow curves), simulate
(trajectory with monitored charges), discover (structure solver).  Exit
codes: 0 success, 1 domain error, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import numpy as np

from . import dynamics, hierarchy, symmetry, transform, verify
from .core import PuParams, hamiltonian_h1, hamiltonian_h2
from .errors import PuError

DEFAULT_TOL = 1e-9


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _atomic_write(path: str, data: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".puosc-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(data: str, out: str | None) -> None:
    if out:
        _atomic_write(out, data)
    else:
        sys.stdout.write(data)
        if not data.endswith("\n"):
            sys.stdout.write("\n")


def _csv(header: list[str], rows: list[list[float]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(x) for x in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json_dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--alpha", type=float, default=None)
    sub.add_argument("--beta", type=float, default=None)
    sub.add_argument("--omega1", type=float, default=None)
    sub.add_argument("--omega2", type=float, default=None)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--tol", type=float, default=None)
    sub.add_argument("--out", type=str, default=None)
    sub.add_argument("--format", choices=("csv", "json"), default=None)


def _params_from_args(parser: argparse.ArgumentParser, args) -> PuParams:
    ab = (args.alpha is not None, args.beta is not None)
    ww = (args.omega1 is not None, args.omega2 is not None)
    if any(ab) and any(ww):
        parser.error("give either --alpha/--beta or --omega1/--omega2, not both")
    if all(ww):
        return PuParams.from_frequencies(args.omega1, args.omega2)
    if all(ab):
        return PuParams(args.alpha, args.beta)
    parser.error("parameters required: --alpha with --beta, or --omega1 with --omega2")


def _tol_from_args(parser: argparse.ArgumentParser, args) -> float:
    tol = args.tol
    if tol is None:
        env = os.environ.get("PU_TOL")
        if env is not None:
            try:
                tol = float(env)
            except ValueError:
                parser.error(f"PU_TOL={env!r} is not a number")
        else:
            tol = DEFAULT_TOL
    if tol <= 0.0:
        parser.error("tolerance must be positive")
    return tol


def _amplitudes(args) -> tuple[float, float, float, float]:
    return (args.A1, args.A2, args.B1, args.B2)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="puosc",
                                     description="Pais-Uhlenbeck oscillator toolkit")
    subs = parser.add_subparsers(dest="command", required=True)

    p_verify = subs.add_parser("verify", help="run the identity suites")
    _add_common(p_verify)

    p_hier = subs.add_parser("hierarchy", help="charge coefficients and polynomials")
    _add_common(p_hier)
    p_hier.add_argument("--n", type=int, default=4, help="ladder depth")

    p_tr = subs.add_parser("transform", help="catalog transformation report")
    _add_common(p_tr)
    p_tr.add_argument("--kind", choices=transform.KINDS, required=True)
    p_tr.add_argument("--ax", type=float, default=1.0)
    p_tr.add_argument("--ay", type=float, default=None)
    p_tr.add_argument("--bx", type=float, default=None)
    p_tr.add_argument("--by", type=float, default=None)
    p_tr.add_argument("--g", type=float, default=0.0)

    p_flow = subs.add_parser("flow", help="sample a symmetry-group flow")
    _add_common(p_flow)
    p_flow.add_argument("--generator", choices=("X1", "X2", "X3", "X4"), default="X3")
    p_flow.add_argument("--s", type=float, default=1.0)
    p_flow.add_argument("--t-end", dest="t_end", type=float, default=10.0)
    p_flow.add_argument("--steps", type=int, default=200)
    for amp in ("A1", "A2", "B1", "B2"):
        p_flow.add_argument(f"--{amp}", type=float, default=0.0)

    p_sim = subs.add_parser("simulate", help="integrate and monitor charges")
    _add_common(p_sim)
    p_sim.add_argument("--h", type=float, default=1e-3)
    p_sim.add_argument("--t-end", dest="t_end", type=float, default=10.0)
    p_sim.add_argument("--potential", type=str, default=None,
                       help="interaction 'name[:lam=VALUE]' (quartic, cubic, cosine)")
    p_sim.add_argument("--potential-kind", choices=("on_q", "on_qdd"), default="on_q")
    for amp in ("A1", "A2", "B1", "B2"):
        p_sim.add_argument(f"--{amp}", type=float, default=0.0)

    p_disc = subs.add_parser("discover", help="solve for compatible (J, H) pairs")
    _add_common(p_disc)
    return parser


def _cmd_verify(parser, args) -> int:
    p = _params_from_args(parser, args)
    tol = _tol_from_args(parser, args)
    if args.format == "csv":
        parser.error("verify reports are JSON only")
    report = verify.run_verification(p, seed=args.seed, tol=tol)
    _emit(_json_dump(report), args.out)
    return 0 if report["pass"] else 1


def _cmd_hierarchy(parser, args) -> int:
    p = _params_from_args(parser, args)
    _tol_from_args(parser, args)
    if args.n < 1 or args.n > hierarchy.MAX_LADDER_DEPTH:
        parser.error(f"--n must be in 1..{hierarchy.MAX_LADDER_DEPTH}")
    ladder = hierarchy.charge_ladder(p, args.n)
    rows = []
    for k, charge in enumerate(ladder.charges, start=1):
        c1, c2 = hierarchy.coefficients_on_h1h2(p, charge)
        rows.append([float(k), c1, c2, hierarchy.pu_polynomial(k, p)])
    if args.format == "json":
        payload = {"seed": args.seed,
                   "params": {"alpha": p.alpha, "beta": p.beta},
                   "charges": [{"n": int(r[0]), "c_h1": r[1], "c_h2": r[2],
                                "p_n": r[3]} for r in rows]}
        _emit(_json_dump(payload), args.out)
    else:
        _emit(_csv(["n", "c_h1", "c_h2", "p_n"], rows), args.out)
    return 0


def _cmd_transform(parser, args) -> int:
    p = _params_from_args(parser, args)
    _tol_from_args(parser, args)
    kind = args.kind
    kwargs = {"ax": args.ax, "g": args.g}
    if kind.startswith("Ta"):
        kwargs["ay"] = args.ay if args.ay is not None else 1.0
    elif kind == "Tb1":
        if args.bx is None:
            parser.error("Tb1 requires --bx")
        kwargs["bx"] = args.bx
    else:
        if args.by is None:
            parser.error("Tb2 requires --by")
        kwargs["by"] = args.by
    spec = transform.build(kind, p, **kwargs)
    c1, c2 = transform.pullback_hamiltonian(spec, p)
    payload = {
        "seed": args.seed,
        "params": {"alpha": p.alpha, "beta": p.beta},
        "kind": kind,
        "mu": list(spec.mu),
        "nu": list(spec.nu),
        "lagrangian": {"ax": spec.ax, "ay": spec.ay, "bx": spec.bx,
                       "by": spec.by, "g": spec.g},
        "pullback": {"c_h1": c1, "c_h2": c2},
        "defining_residual": transform.defining_residual(spec, p),
    }
    try:
        jt = transform.flow_preserving_tensor(p, c1, c2)
        table = transform.pushforward_brackets(spec, jt)
        payload["flow_preserving_tensor"] = jt.matrix.tolist()
        payload["bracket_table"] = table.tolist()
        payload["canonical"] = bool(np.max(np.abs(table - transform.CANONICAL_XY)) <= 1e-10)
    except PuError as exc:
        payload["flow_preserving_tensor"] = None
        payload["bracket_table"] = None
        payload["canonical"] = False
        payload["tensor_error"] = str(exc)
    _emit(_json_dump(payload), args.out)
    return 0


def _cmd_flow(parser, args) -> int:
    p = _params_from_args(parser, args)
    _tol_from_args(parser, args)
    if args.format == "json":
        parser.error("flow curves are CSV only")
    regime = "degenerate" if p.degenerate else "nondegenerate"
    sol = dynamics.ClassicalSolution(p, _amplitudes(args), regime)
    gens = dict(zip(("X1", "X2", "X3", "X4"), symmetry.standard_basis(p)))
    states = [(t, dynamics.eval_solution(sol, t))
              for t in np.linspace(0.0, args.t_end, args.steps + 1)]
    curve = symmetry.flow_curve(gens[args.generator], args.s, states)
    rows = [[t, st.q, st.qd, st.qdd, st.qddd] for t, st in curve.samples]
    _emit(_csv(["t", "q", "qd", "qdd", "qddd"], rows), args.out)
    return 0


def _cmd_simulate(parser, args) -> int:
    p = _params_from_args(parser, args)
    _tol_from_args(parser, args)
    if args.format == "json":
        parser.error("trajectories are CSV only")
    regime = "degenerate" if p.degenerate else "nondegenerate"
    sol = dynamics.ClassicalSolution(p, _amplitudes(args), regime)
    v0 = dynamics.eval_solution(sol, 0.0)
    pot = None
    if args.potential:
        pot = dynamics.parse_potential(args.potential, kind=args.potential_kind)
        field = dynamics.PotentialField(p, pot)
    else:
        field = dynamics.LinearField(p)
    traj = dynamics.integrate(field, v0, args.h, args.t_end)
    charges = list(hierarchy.charge_ladder(p, 4).charges)
    header = ["t", "q", "qd", "qdd", "qddd", "H1", "H2", "H3", "H4"]
    columns = [traj.times] + [traj.states[:, i] for i in range(4)]
    columns += [dynamics.charge_values(traj, c) for c in charges]
    if pot is not None:
        base = hamiltonian_h1(p) if pot.kind == "on_q" else hamiltonian_h2(p)
        header.append("Hint")
        columns.append(dynamics.charge_values(traj, base, augment=pot))
    rows = np.column_stack(columns).tolist()
    _emit(_csv(header, rows), args.out)
    return 0


def _cmd_discover(parser, args) -> int:
    p = _params_from_args(parser, args)
    _tol_from_args(parser, args)
    result = dynamics.structure_discovery(p)
    from .core import flow_residual
    payload = {
        "seed": args.seed,
        "params": {"alpha": p.alpha, "beta": p.beta},
        "pairs": [{"j": j.matrix.tolist(), "s": h.matrix.tolist(),
                   "residual": flow_residual(j, h, p)} for j, h in result.pairs],
        "kernel_dimension": len(result.kernels),
        "skipped": [k.tolist() for k in result.skipped],
    }
    _emit(_json_dump(payload), args.out)
    return 0


_COMMANDS = {
    "verify": _cmd_verify,
    "hierarchy": _cmd_hierarchy,
    "transform": _cmd_transform,
    "flow": _cmd_flow,
    "simulate": _cmd_simulate,
    "discover": _cmd_discover,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](parser, args)
    except PuError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
