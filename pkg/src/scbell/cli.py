"""Command-line front end: ``scbell {fmax,smax,entangle,sweep,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import math
import os
import sys

from . import bell, channels, entanglement, states, verify
from .optimize import MaximizerConfig, maximize_chsh, maximize_svetlichny
from .qmat import StateError, format_complex, parse_complex

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
BOUNDARY_BAND = 1e-9
SEED_ENV = "SCBELL_SEED"


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return f"{x:.6f}"


def csv_num(x: float) -> str:
    return f"{x:.12g}"


def verdict(value: float, bound: float, separable: bool) -> str:
    """VIOLATES above the bound; BOUNDARY when an entangled state sits on it."""
    if value > bound + BOUNDARY_BAND:
        return "VIOLATES"
    if abs(value - bound) <= BOUNDARY_BAND and not separable:
        return "BOUNDARY"
    return "NO-VIOLATION"


# ---------- argument helpers ----------

def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return 0
    try:
        seed = int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer") from None
    if not 0 <= seed < 2**64:
        raise UsageError(f"{SEED_ENV} must be an unsigned 64-bit integer")
    return seed


def _add_state_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("state input (a state file or inline parameters, not both)")
    g.add_argument("--state", metavar="FILE", help="state file of 'key = value' lines")
    g.add_argument("--kind", choices=sorted(states.STATE_KINDS), help="state family for inline parameters")
    g.add_argument("--a1", type=float)
    g.add_argument("--a4", type=float)
    g.add_argument("--a2", help="complex coherence, e.g. 0.3+0.1i")
    g.add_argument("--b", help="comma-separated populations b1,b2,...")
    g.add_argument("--c1", help="complex coherence of the population families")


def _add_budget_args(p: argparse.ArgumentParser, restarts: int) -> None:
    p.add_argument("--seed", type=int, default=None, help=f"optimizer seed (default ${SEED_ENV} or 0)")
    p.add_argument("--restarts", type=int, default=restarts, help="multistart restarts")


def state_from_args(args, n_qubits: int) -> states.StateSpec:
    inline = {k: getattr(args, k) for k in ("kind", "a1", "a4", "a2", "b", "c1") if getattr(args, k) is not None}
    if args.state and inline:
        raise UsageError("--state cannot be combined with inline parameters (" + ", ".join(f"--{k}" for k in inline) + ")")
    if args.state:
        spec = states.load_state_file(args.state)
    else:
        spec = _inline_spec(inline, n_qubits)
    if spec.n_qubits != n_qubits:
        raise UsageError(f"this command needs a {n_qubits}-qubit state, got kind {spec.kind}")
    return spec


def _inline_spec(inline: dict, n_qubits: int) -> states.StateSpec:
    kind = inline.pop("kind", None)
    if kind is None:
        if "b" in inline or "c1" in inline:
            kind = "sc2diag" if n_qubits == 2 else "sc3diag"
        else:
            kind = "sc2" if n_qubits == 2 else "sc3"
    values: dict = {}
    if kind in ("sc2", "sc3"):
        if "b" in inline or "c1" in inline:
            raise UsageError(f"--b/--c1 do not apply to kind {kind}")
        a1, a4 = inline.get("a1"), inline.get("a4")
        if a1 is None and a4 is None:
            a1 = a4 = 0.5
        elif a1 is None:
            a1 = 1.0 - a4
        elif a4 is None:
            a4 = 1.0 - a1
        values = {"a1": a1, "a4": a4, "a2": _complex_arg("a2", inline.get("a2", "0"))}
    elif kind in ("sc2diag", "sc3diag"):
        if {"a1", "a4", "a2"} & set(inline):
            raise UsageError(f"--a1/--a4/--a2 do not apply to kind {kind}")
        if "b" not in inline:
            raise UsageError(f"kind {kind} needs --b")
        try:
            bs = [float(x) for x in inline["b"].split(",")]
        except ValueError:
            raise UsageError(f"--b must be comma-separated numbers, got {inline['b']!r}") from None
        want = 4 if kind == "sc2diag" else 8
        if len(bs) != want:
            raise UsageError(f"kind {kind} needs {want} populations, got {len(bs)}")
        values = {f"b{i + 1}": v for i, v in enumerate(bs)}
        values["c1"] = _complex_arg("c1", inline.get("c1", "0"))
    elif inline:
        raise UsageError(f"kind {kind} takes no parameters")
    return states.make_spec(kind, values)


def _complex_arg(name: str, text: str) -> complex:
    try:
        return parse_complex(text)
    except ValueError as exc:
        raise UsageError(f"--{name}: {exc}") from None


def _cfg(args, **kw) -> MaximizerConfig:
    seed = default_seed() if args.seed is None else args.seed
    if args.restarts < 1:
        raise UsageError("--restarts must be >= 1")
    try:
        return MaximizerConfig(seed=seed, restarts=args.restarts, **kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def describe(spec: states.StateSpec) -> str:
    if spec.params is None:
        return spec.kind
    parts = []
    for k, v in vars(spec.params).items():
        parts.append(f"{k}={format_complex(v) if isinstance(v, complex) else repr(v)}")
    return f"{spec.kind} " + " ".join(parts)


def _print_settings(label: str, s) -> None:
    names = ("a", "a'", "b", "b'", "c", "c'")
    print(f"{label}:")
    for name, d in zip(names, s.directions()):
        print(f"  {name:<2} theta={fmt(d.theta)} phi={fmt(d.phi)}")


# ---------- commands ----------

def cmd_fmax(args) -> int:
    spec = state_from_args(args, 2)
    rho = spec.build()
    cfg = _cfg(args)
    p = spec.params
    if spec.kind in ("sc2", "bell"):
        p = p or states.SC2Params(0.5, 0.5, 0.5)
        closed, settings = bell.fmax_sc2(p), bell.optimal_chsh_settings(p)
    else:
        closed, settings = bell.fmax_sc2_diag(p), bell.chsh_settings_sc2_diag(p)
    numeric, num_settings = maximize_chsh(rho, cfg)
    horo = bell.fmax_horodecki(rho)
    print(f"state: {describe(spec)}")
    print(f"F_max closed     : {fmt(closed)}")
    print(f"F_max numeric    : {fmt(numeric)}")
    print(f"F_max Horodecki  : {fmt(horo)}")
    print(f"verdict          : {verdict(closed, bell.CHSH_BOUND, states.ppt_separable(rho))}")
    if abs(closed - horo) > 1e-9:
        print(f"note: closed form is {fmt(horo - closed)} below the correlation-matrix maximum")
    _print_settings("closed-form settings", settings)
    _print_settings("numeric settings", num_settings)
    return EXIT_OK


def cmd_smax(args) -> int:
    spec = state_from_args(args, 3)
    rho = spec.build()
    cfg = _cfg(args)
    p = spec.params
    if spec.kind in ("sc3", "ghz"):
        p = p or states.SC3Params(0.5, 0.5, 0.5)
        closed, settings = bell.smax_sc3(p), bell.optimal_svetlichny_settings(p)
    else:
        closed, settings = bell.smax_sc3_diag(p), bell.svetlichny_settings_sc3_diag(p)
    numeric, num_settings = maximize_svetlichny(rho, cfg)
    print(f"state: {describe(spec)}")
    print(f"S_max closed     : {fmt(closed)}")
    print(f"S_max numeric    : {fmt(numeric)}")
    print(f"verdict          : {verdict(closed, bell.SVETLICHNY_BOUND, states.ppt_separable(rho))}")
    _print_settings("closed-form settings", settings)
    _print_settings("numeric settings", num_settings)
    return EXIT_OK


def cmd_entangle(args) -> int:
    n = 3 if args.measure in ("gen_concurrence", "ree") else 2
    spec = state_from_args(args, n)
    rho = spec.build()
    print(f"state: {describe(spec)}")
    if args.measure == "concurrence":
        print(f"concurrence (Wootters)    : {fmt(entanglement.concurrence_wootters(rho))}")
        if spec.kind in ("sc2", "bell"):
            p = spec.params or states.SC2Params(0.5, 0.5, 0.5)
            print(f"concurrence (closed form) : {fmt(entanglement.concurrence_sc2(p))}")
    elif args.measure == "chi":
        chi = entanglement.dense_coding_capacity(rho)
        print(f"dense-coding capacity     : {fmt(chi)}")
        print(f"useful for dense coding   : {'yes' if chi > 1 + 1e-12 else 'no'}")
    else:
        if spec.kind not in ("sc3", "ghz"):
            raise UsageError(f"{args.measure} is defined for kinds sc3 and ghz only")
        p = spec.params or states.SC3Params(0.5, 0.5, 0.5)
        if args.measure == "gen_concurrence":
            print(f"generalized concurrence   : {fmt(entanglement.gen_concurrence_sc3(p))}")
        else:
            direct = entanglement.ree_sc3_direct(p)
            printed = entanglement.ree_sc3_closed(p)
            corrected = entanglement.ree_sc3_closed(p, corrected=True)
            print(f"relative entropy (direct) : {fmt(direct)}")
            print(f"closed form, as printed   : {fmt(printed)}  (deviation {fmt(printed - direct)})")
            print(f"closed form, corrected    : {fmt(corrected)}  (deviation {fmt(corrected - direct)})")
    return EXIT_OK


def sweep_thresholds(initial: str) -> list[str]:
    if initial == "bell":
        closed = channels.find_threshold(lambda gt: channels.fmax_rho3_closed(channels.gamma_of(gt)), 2.0, (0.1, 1.0))
        exact = channels.find_threshold(lambda gt: channels.fmax_rho3_exact(channels.gamma_of(gt)), 2.0, (0.1, 1.0))
        conc = channels.find_threshold(lambda gt: channels.gamma_of(gt) ** 4, 0.5, (0.01, 3.0))
        return [
            f"F_max crosses 2 at Γt ≈ {fmt(closed)}",
            f"true CHSH maximum crosses 2 at Γt ≈ {fmt(exact)}",
            f"concurrence crosses 1/2 at Γt ≈ {fmt(conc)}",
        ]
    cross = channels.find_threshold(lambda gt: channels.smax_rho6_closed(channels.gamma_of(gt)), 4.0, (0.01, 0.5))
    return [
        f"S_max crosses 4 at Γt ≈ {fmt(cross)}",
        f"branch crossover (both branches = 2) at Γt ≈ {fmt(math.log(2.0))}",
    ]


def write_sweep_csv(records, initial: str, out) -> None:
    if initial == "bell":
        out.write("gamma_t,gamma,fmax_closed,fmax_numeric,concurrence\n")
        for r in records:
            row = (r.gamma_t, r.gamma, r.closed_value, r.numeric_value, r.measure_value)
            out.write(",".join(csv_num(x) for x in row) + "\n")
    else:
        out.write("gamma_t,gamma,smax_closed,smax_numeric\n")
        for r in records:
            row = (r.gamma_t, r.gamma, r.closed_value, r.numeric_value)
            out.write(",".join(csv_num(x) for x in row) + "\n")


def cmd_sweep(args) -> int:
    if args.steps < 2:
        raise UsageError("steps must be ≥ 2")
    if not args.gamma_rate > 0 or not args.t_max > 0:
        raise UsageError("--gamma-rate and --t-max must be positive")
    if args.full_budget:
        args.restarts = MaximizerConfig().restarts
    cfg = _cfg(args)
    initial = states.bell_state() if args.initial == "bell" else states.ghz_state()
    records = channels.run_sweep(initial, args.gamma_rate, args.t_max, args.steps, cfg)
    if args.out in (None, "-"):
        write_sweep_csv(records, args.initial, sys.stdout)
        report = sys.stderr
    else:
        with open(args.out, "w", newline="\n") as fh:
            write_sweep_csv(records, args.initial, fh)
        report = sys.stdout
        print(f"wrote {len(records)} rows to {args.out}", file=report)
    worst = max(abs(r.closed_value - r.numeric_value) for r in records)
    print(f"max |closed - numeric| over the grid: {worst:.3e}", file=report)
    for line in sweep_thresholds(args.initial):
        print(line, file=report)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    seed = default_seed() if args.seed is None else args.seed
    checks = verify.run_suite(args.suite, args.samples, seed)
    for c in checks:
        print(c.line())
        for note in c.notes:
            print(f"    {note}")
    ok = all(c.ok for c in checks)
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scbell", description="Bell-inequality maxima for Schmidt-correlated states")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fmax", help="CHSH maximum of a two-qubit state")
    _add_state_args(p)
    _add_budget_args(p, MaximizerConfig().restarts)
    p.set_defaults(func=cmd_fmax)

    p = sub.add_parser("smax", help="Svetlichny maximum of a three-qubit state")
    _add_state_args(p)
    _add_budget_args(p, MaximizerConfig().restarts)
    p.set_defaults(func=cmd_smax)

    p = sub.add_parser("entangle", help="entanglement and information measures")
    p.add_argument("--measure", required=True, choices=("concurrence", "gen_concurrence", "ree", "chi"))
    _add_state_args(p)
    p.set_defaults(func=cmd_entangle)

    p = sub.add_parser("sweep", help="transverse-noise time sweep to CSV")
    p.add_argument("--initial", required=True, choices=("bell", "ghz"))
    p.add_argument("--gamma-rate", type=float, default=1.0)
    p.add_argument("--t-max", type=float, default=3.0)
    p.add_argument("--steps", type=int, default=300)
    p.add_argument("--out", help="CSV path ('-' or omitted: stdout)")
    p.add_argument("--full-budget", action="store_true", help="use the default restart count instead of the sweep budget")
    _add_budget_args(p, channels.SWEEP_RESTARTS)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the seeded property suites")
    p.add_argument("--suite", default="all", choices=("all",) + verify.SUITES)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, states.ParamError, states.StateFileError, StateError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
