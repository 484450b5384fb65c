"""Command-line interface.

Exit codes: 0 success, 1 a verification-style failure, 2 bad input or usage.
Reports go to stdout as ``key: value`` lines; diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import algorithms
from .backends import BACKENDS, IncompatibleBackend, build_template, check_compatible
from .formats import (
    FormatError,
    emit_circuit,
    parse_circuit,
    parse_phases,
    parse_truth_table,
    read_text,
)
from .optimize import (
    GATE_SETS,
    BudgetExhausted,
    optimize_template,
    schedule_layers,
    sensitivity,
    stats,
)
from .qcore import COUPLING_KINDS, Circuit, CouplingGraph, Rz
from .simulate import (
    UNITARY_CAP,
    DenseUnitary,
    distance_up_to_global_phase,
    unitary_of,
    verify_phase_gate,
)
from .synth import Binder, check_programmable, template_from_skeleton
from .walsh import normalize_angle


class UsageError(Exception):
    pass


def fmt_prob(x: float) -> str:
    return f"{x:#.12g}"


def fmt_float(x: float) -> str:
    # shortest round-trip mantissa, scientific: 0.004 -> 4.0e-3
    return np.format_float_scientific(float(x), trim="0", exp_digits=1)


def _report(pairs: list[tuple[str, object]]) -> None:
    for k, v in pairs:
        print(f"{k}: {v}")


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# -- commands -----------------------------------------------------------------

def cmd_compile(args: argparse.Namespace) -> int:
    theta = parse_phases(read_text(args.phases))
    if args.n is not None and args.n != theta.width:
        raise UsageError(f"--n {args.n} does not match phase file width {theta.width}")
    n = theta.width
    if args.template:
        coupling = args.coupling or "path"
        skeleton = parse_circuit(read_text(args.template))
        if skeleton.width != n:
            raise UsageError(f"template width {skeleton.width} != phase width {n}")
        template = template_from_skeleton(skeleton, "file", CouplingGraph(coupling, n))
        report = check_programmable(template)
        if not report:
            raise UsageError(f"template not programmable ({report.clause}): {report.message}")
    else:
        coupling = args.coupling or {"gray": "full"}.get(args.backend, "path")
        check_compatible(args.backend, coupling)
        template = build_template(args.backend, n, coupling, args.gate_set, args.budget)
    circuit = Binder(template)(theta, args.include_global_phase)
    if args.normalize_angles:
        circuit = Circuit(
            n, [Rz(g.qubit, normalize_angle(g.angle)) if isinstance(g, Rz) else g for g in circuit]
        )
    _write(args.out, emit_circuit(circuit))
    out = sys.stderr if args.out in (None, "-") else sys.stdout
    for k, v in [("backend", template.backend), ("coupling", coupling), ("n", n)] + list(
        stats(circuit).as_dict().items()
    ):
        print(f"{k}: {v}", file=out)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    circuit = parse_circuit(read_text(args.circuit))
    theta = parse_phases(read_text(args.phases))
    if circuit.width != theta.width:
        raise UsageError(f"circuit width {circuit.width} != phase width {theta.width}")
    if circuit.width > UNITARY_CAP:
        raise UsageError(f"verification is capped at {UNITARY_CAP} qubits")
    result = verify_phase_gate(circuit, theta, args.tol)
    _report([("verified", str(result.ok).lower()), ("max_error", f"{result.max_error:.6e}"),
             ("tol", f"{args.tol:.1e}")])
    return 0 if result.ok else 1


def cmd_dj(args: argparse.Namespace) -> int:
    f = parse_truth_table(read_text(args.truth))
    kind = algorithms.classify_boolean(f)
    if kind == "neither" and not args.lenient:
        raise UsageError("function is neither constant nor balanced")
    res = algorithms.deutsch_jozsa(f, _backend(args, f.width), strict=not args.lenient)
    _report([("n", f.width), ("class", kind), ("verdict", res.verdict),
             ("prob_zero", fmt_prob(res.prob_zero)), ("rotations", res.stats.rotations),
             ("two_qubit_gates", res.stats.two_qubit_gates)])
    if kind != "neither" and res.verdict != kind:
        return 1
    return 0


def cmd_grover(args: argparse.Namespace) -> int:
    try:
        marked = [int(m) for m in args.marked.split(",") if m.strip()]
    except ValueError:
        raise UsageError("--marked must be a comma-separated list of integers") from None
    if any(not 0 <= m < 1 << args.n for m in marked):
        raise UsageError(f"marked indices must lie in 0..{(1 << args.n) - 1}")
    try:
        res = algorithms.grover(args.n, marked, _backend(args, args.n), args.iterations)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    t = len(res.marked)
    pairs: list[tuple[str, object]] = [
        ("n", args.n), ("marked", ",".join(map(str, res.marked))),
        ("iterations", res.iterations), ("success_prob", fmt_prob(res.success_prob)),
        ("closed_form", fmt_prob(algorithms.grover_closed_form(args.n, t, res.iterations))),
    ]
    pairs += [(f"iteration_{k}", fmt_prob(p)) for k, p in enumerate(res.trajectory)]
    _report(pairs)
    worst = max(abs(p - algorithms.grover_closed_form(args.n, t, k))
                for k, p in enumerate(res.trajectory))
    return 0 if worst <= 1e-9 else 1


def cmd_gcx(args: argparse.Namespace) -> int:
    h = parse_truth_table(read_text(args.truth))
    circuit = algorithms.generalized_cnot(h, _backend(args, h.width + 1))
    if args.out:
        _write(args.out, emit_circuit(circuit))
    err = distance_up_to_global_phase(
        unitary_of(circuit), DenseUnitary(circuit.width, algorithms.permutation_of(h))
    )
    ok = err <= args.tol
    _report([("n", circuit.width), ("controls", h.width), ("gates", len(circuit)),
             ("verified", str(ok).lower()), ("max_error", f"{err:.6e}")])
    return 0 if ok else 1


def cmd_optimize(args: argparse.Namespace) -> int:
    graph = CouplingGraph(args.coupling, args.n)
    try:
        res = optimize_template(args.n, graph, args.gate_set, node_budget=args.budget,
                                time_budget=args.time_limit)
    except BudgetExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        _report([("feasible", "false"), ("lower_bound", exc.lower_bound)])
        return 1
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    comments = [f"template {res.template.backend} coupling {args.coupling}",
                f"blocks {res.blocks} optimal {str(res.optimal).lower()}"]
    if args.out:
        _write(args.out, emit_circuit(res.template.skeleton, comments))
    s = stats(res.template)
    _report([("n", args.n), ("coupling", args.coupling), ("gate_set", args.gate_set),
             ("blocks", res.blocks), ("two_qubit_gates", res.two_qubit_gates),
             ("optimal", str(res.optimal).lower()), ("lower_bound", res.lower_bound),
             ("nodes", res.nodes), ("rotations", s.rotations), ("depth", s.depth)])
    return 0


def cmd_schedule(args: argparse.Namespace) -> int:
    circuit = parse_circuit(read_text(args.circuit))
    graph = CouplingGraph(args.coupling, circuit.width) if args.coupling else None
    try:
        layered = schedule_layers(circuit, graph)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _report([("n", circuit.width), ("gates", len(circuit)), ("depth", layered.depth),
             ("two_qubit_blocks", layered.two_qubit_blocks)])
    for i, layer in enumerate(layered.layers):
        body = "; ".join(emit_circuit(Circuit(circuit.width, [g])).splitlines()[1] for g in layer)
        print(f"layer_{i}: {body}")
    return 0


def cmd_sensitivity(args: argparse.Namespace) -> int:
    if args.epsilon < 0:
        raise UsageError("epsilon must be non-negative")
    rep = sensitivity(args.n, args.epsilon, args.mode, args.trials, args.seed)
    pairs = [("n", rep.n), ("mode", rep.mode), ("epsilon", fmt_float(rep.epsilon)),
             ("worst_case_bound", fmt_float(rep.worst_case_bound)),
             ("empirical_max", fmt_float(rep.empirical_max)),
             ("empirical_rms", fmt_float(rep.empirical_rms)),
             ("analytic_rms", fmt_float(rep.analytic_rms)), ("trials", rep.trials)]
    if rep.mode == "random":
        pairs.append(("seed", rep.seed))
    _report(pairs)
    return 0


def _backend(args: argparse.Namespace, n: int):
    coupling = args.coupling or {"gray": "full"}.get(args.backend, "path")
    check_compatible(args.backend, coupling)
    return build_template(args.backend, n, coupling)


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="phasenet", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def backend_opts(sp):
        sp.add_argument("--backend", choices=BACKENDS, default="recursive-cnot")
        sp.add_argument("--coupling", choices=COUPLING_KINDS, default=None)

    sp = sub.add_parser("compile", help="bind a phase file into a network")
    sp.add_argument("phases")
    sp.add_argument("-n", "--n", type=int, default=None)
    backend_opts(sp)
    sp.add_argument("--gate-set", choices=GATE_SETS, default="cnot",
                    help="gate set for the optimized backend")
    sp.add_argument("--budget", type=int, default=10_000_000,
                    help="node budget for the optimized backend")
    sp.add_argument("--template", default=None, help="bind into this skeleton file instead")
    sp.add_argument("-o", "--out", default=None)
    sp.add_argument("--include-global-phase", action="store_true")
    sp.add_argument("--normalize-angles", action="store_true",
                    help="reduce rotation angles to (-pi, pi] (changes only the global phase)")
    sp.set_defaults(func=cmd_compile)

    sp = sub.add_parser("verify", help="check a circuit against a phase file")
    sp.add_argument("circuit")
    sp.add_argument("phases")
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("dj", help="run Deutsch-Jozsa on a truth table")
    sp.add_argument("truth")
    backend_opts(sp)
    sp.add_argument("--lenient", action="store_true",
                    help="accept functions that are neither constant nor balanced")
    sp.set_defaults(func=cmd_dj)

    sp = sub.add_parser("grover", help="run Grover search")
    sp.add_argument("-n", "--n", type=int, required=True)
    sp.add_argument("--marked", required=True, help="comma-separated basis indices")
    sp.add_argument("--iterations", type=int, default=None)
    backend_opts(sp)
    sp.set_defaults(func=cmd_grover)

    sp = sub.add_parser("gcx", help="generalized controlled-NOT from a control truth table")
    sp.add_argument("truth")
    sp.add_argument("-o", "--out", default=None)
    sp.add_argument("--tol", type=float, default=1e-10)
    backend_opts(sp)
    sp.set_defaults(func=cmd_gcx)

    sp = sub.add_parser("optimize", help="search for a block-minimal template")
    sp.add_argument("-n", "--n", type=int, required=True)
    sp.add_argument("--coupling", choices=COUPLING_KINDS, default="path")
    sp.add_argument("--gate-set", choices=GATE_SETS, default="cnot")
    sp.add_argument("--budget", type=int, default=10_000_000, help="node limit")
    sp.add_argument("--time-limit", type=float, default=None, help="seconds")
    sp.add_argument("-o", "--out", default=None, help="template (skeleton circuit) file")
    sp.set_defaults(func=cmd_optimize)

    sp = sub.add_parser("schedule", help="layer a circuit for parallel execution")
    sp.add_argument("circuit")
    sp.add_argument("--coupling", choices=COUPLING_KINDS, default=None)
    sp.set_defaults(func=cmd_schedule)

    sp = sub.add_parser("sensitivity", help="phase error from rotation-angle errors")
    sp.add_argument("-n", "--n", type=int, required=True)
    sp.add_argument("--epsilon", type=float, required=True)
    sp.add_argument("--mode", choices=("adversarial", "random"), default="adversarial")
    sp.add_argument("--trials", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_sensitivity)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, FormatError, IncompatibleBackend) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
