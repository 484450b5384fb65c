"""Programmable network templates and angle binding.

A template is a fixed skeleton of classical two-qubit gates and z rotations
in which every nonzero parity condition ``y`` is carried, at some point, by
the wire a rotation acts on.  Binding a phase vector only fills in the
rotation angles; the skeleton never changes.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .qcore import (
    Circuit,
    Cnot,
    Cns,
    CouplingGraph,
    Gate,
    GlobalPhase,
    Hadamard,
    ParityMask,
    Rz,
    Swap,
    act_on_labels,
    identity_labels,
    is_classical,
    unit_mask,
    validate_circuit,
)
from .walsh import PhaseSpec, angles_from_phases

FLAVORS = ("cnot", "cns")


@dataclass(frozen=True)
class RotationSlot:
    position: int
    qubit: int
    condition: ParityMask


@dataclass(frozen=True)
class ConditionTrace:
    entries: tuple[tuple[int, int, ParityMask], ...]
    final_labels: tuple[ParityMask, ...]

    @property
    def conditions(self) -> list[int]:
        return [m.bits for _, _, m in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class NetworkTemplate:
    width: int
    skeleton: Circuit
    slots: tuple[RotationSlot, ...]
    backend: str
    coupling: CouplingGraph

    @property
    def conditions(self) -> list[int]:
        return [s.condition.bits for s in self.slots]


def trace_conditions(c: Circuit) -> ConditionTrace:
    """Replay wire labels through ``c``, recording the label under each Rz."""
    n = c.width
    labels = identity_labels(n)
    entries = []
    for pos, gate in enumerate(c.gates):
        if isinstance(gate, Rz):
            entries.append((pos, gate.qubit, ParityMask(labels[gate.qubit - 1], n)))
        elif is_classical(gate):
            act_on_labels(gate, labels)
        elif isinstance(gate, Hadamard):
            raise ValueError(f"gate {pos} is a Hadamard; wire labels are undefined")
        # GlobalPhase carries no label information
    return ConditionTrace(tuple(entries), tuple(ParityMask(v, n) for v in labels))


def template_from_skeleton(
    skeleton: Circuit, backend: str, coupling: CouplingGraph
) -> NetworkTemplate:
    """Derive slot metadata for a skeleton by tracing its labels."""
    trace = trace_conditions(skeleton)
    slots = tuple(RotationSlot(p, q, m) for p, q, m in trace.entries)
    return NetworkTemplate(skeleton.width, skeleton, slots, backend, coupling)


@dataclass(frozen=True)
class ProgrammabilityReport:
    ok: bool
    clause: str | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_programmable(t: NetworkTemplate) -> ProgrammabilityReport:
    """Accept iff the template hits every nonzero condition exactly once,
    its declared slot conditions match the traced labels, it restores the
    identity labelling, and it respects the coupling graph.
    """
    n = t.width
    if t.skeleton.width != n or t.coupling.width != n:
        return ProgrammabilityReport(False, "d", "width mismatch between template parts")

    declared = [s.condition.bits for s in t.slots if s.condition.bits != 0]
    n_global = sum(1 for s in t.slots if s.condition.bits == 0)
    if n_global > 1:
        return ProgrammabilityReport(False, "a", "more than one global-phase slot")
    seen: set[int] = set()
    for y in declared:
        if y in seen:
            return ProgrammabilityReport(False, "a", f"condition {y:0{n}b} appears twice")
        seen.add(y)
    missing = set(range(1, 1 << n)) - seen
    if missing:
        y = min(missing)
        return ProgrammabilityReport(
            False, "a", f"{len(missing)} conditions missing, e.g. {y:0{n}b}"
        )

    try:
        trace = trace_conditions(t.skeleton)
    except ValueError as exc:
        return ProgrammabilityReport(False, "b", str(exc))
    traced = {pos: (q, m) for pos, q, m in trace.entries}
    if len(traced) != len(t.slots):
        return ProgrammabilityReport(
            False, "b", f"skeleton has {len(traced)} rotations but {len(t.slots)} slots"
        )
    for s in t.slots:
        got = traced.get(s.position)
        if got is None:
            return ProgrammabilityReport(False, "b", f"slot at {s.position} is not an Rz")
        q, m = got
        if q != s.qubit or m != s.condition:
            return ProgrammabilityReport(
                False,
                "b",
                f"slot at {s.position}: declared ({s.qubit}, {s.condition}) "
                f"but traced ({q}, {m})",
            )

    ident = identity_labels(n)
    final = [m.bits for m in trace.final_labels]
    if final != ident:
        bad = next(j for j in range(n) if final[j] != ident[j])
        return ProgrammabilityReport(
            False, "c", f"wire {bad + 1} ends with label {final[bad]:0{n}b}"
        )

    report = validate_circuit(t.skeleton, t.coupling)
    if not report:
        return ProgrammabilityReport(False, "d", report.message)
    return ProgrammabilityReport(True)


def bind_angles(
    t: NetworkTemplate, theta: PhaseSpec, include_global_phase: bool = False
) -> Circuit:
    if t.width != theta.width:
        raise ValueError(f"template width {t.width} != phase width {theta.width}")
    report = check_programmable(t)
    if not report:
        raise ValueError(f"template is not programmable ({report.clause}): {report.message}")
    return _bind_unchecked(t, theta, include_global_phase)


def _bind_unchecked(
    t: NetworkTemplate, theta: PhaseSpec, include_global_phase: bool
) -> Circuit:
    phi = angles_from_phases(theta).phi
    gates: list[Gate] = list(t.skeleton.gates)
    for s in t.slots:
        gates[s.position] = Rz(s.qubit, float(phi[s.condition.bits]))
    if include_global_phase:
        # the y = 0 knob shifts every basis state by phi_0 / 2, which is
        # exactly what GlobalPhase(phi_0) applies
        gates.insert(0, GlobalPhase(float(phi[0])))
    return Circuit(t.width, gates)


class Binder:
    """Checks a template once, then binds many phase vectors to it."""

    def __init__(self, template: NetworkTemplate) -> None:
        report = check_programmable(template)
        if not report:
            raise ValueError(
                f"template is not programmable ({report.clause}): {report.message}"
            )
        self.template = template

    def __call__(self, theta: PhaseSpec, include_global_phase: bool = False) -> Circuit:
        if theta.width != self.template.width:
            raise ValueError(
                f"template width {self.template.width} != phase width {theta.width}"
            )
        return _bind_unchecked(self.template, theta, include_global_phase)


# --------------------------------------------------------------------------
# Backends


def synth_fig1_two_qubit() -> NetworkTemplate:
    """The basic two-qubit network: three rotations around a CNOT pair."""
    gates = [Rz(1), Rz(2), Cnot(1, 2), Rz(2), Cnot(1, 2)]
    return template_from_skeleton(Circuit(2, gates), "two-qubit", CouplingGraph("path", 2))


def _extend(gates: list[Gate], n: int, flavor: str, last: bool = False) -> list[Gate]:
    """One recursion step: network on ``n`` wires -> network on ``n + 1`` wires.

    Every rotation of the input sits on wire ``n``.  A new rotation on wire
    ``n + 1`` (condition ``x_{n+1}``) is prepended, and each old rotation
    with condition ``v`` becomes two rotations with conditions ``v``
    (shifted) and ``v ^ x_{n+1}``, after which both wires are restored.

    Intermediate steps keep both new rotations on wire ``n + 1`` so the next
    step again finds every rotation on its last wire.  The final step
    (``last``) leaves the ``v`` rotation on wire ``n``, which needs fewer
    gates and lets independent rotations share a layer.
    """
    a, b = n, n + 1
    if flavor == "cns":
        # CNS has order three on the label pair: (v, e) -> (v^e, v) -> (e, v^e) -> (v, e)
        if last:
            replacement = [Rz(a), Cns(a, b), Rz(a), Cns(a, b), Cns(a, b)]
        else:
            replacement = [Cns(a, b), Rz(b), Cns(a, b), Rz(b), Cns(a, b)]
    elif last:
        replacement = [Rz(a), Cnot(a, b), Rz(b), Cnot(a, b)]
    else:
        replacement = [Swap(a, b), Rz(b), Cnot(a, b), Rz(b), Cnot(a, b), Swap(a, b)]
    out: list[Gate] = [Rz(b)]
    for g in gates:
        if isinstance(g, Rz):
            if g.qubit != n:
                raise AssertionError("recursive network must rotate only its last wire")
            out.extend(replacement)
        else:
            out.append(g)
    return out


def synth_recursive(
    n: int, flavor: str = "cnot", coupling: CouplingGraph | None = None
) -> NetworkTemplate:
    """Nearest-neighbour network built by repeatedly adding one wire.

    Slot conditions come out in increasing integer order ``1 .. 2^n - 1``.
    """
    if n < 1:
        raise ValueError(f"need at least one qubit, got {n}")
    if flavor not in FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}; expected one of {FLAVORS}")
    if coupling is None:
        coupling = CouplingGraph("path", n)
    elif coupling.width != n or coupling.kind not in ("path", "ring"):
        raise ValueError(f"recursive backend needs a path or ring on {n} wires")
    gates: list[Gate] = [Rz(1)]
    for k in range(1, n):
        gates = _extend(gates, k, flavor, last=k == n - 1)
    return template_from_skeleton(Circuit(n, gates), f"recursive-{flavor}", coupling)


def gray_order(n: int) -> list[int]:
    """Nonzero ``n``-bit masks in the order visited by :func:`synth_graycode`.

    This is the binary-reflected Gray code read backwards from its last
    element, with wire ``n`` as the most significant Gray digit.  For ``n = 3``
    the order is ``1, 5, 7, 3, 2, 6, 4``.
    """
    def to_mask(g: int) -> int:
        # Gray digit i (LSB = 0) belongs to wire i + 1
        return sum(unit_mask(i + 1, n) for i in range(n) if g >> i & 1)

    return [to_mask(i ^ (i >> 1)) for i in range((1 << n) - 1, 0, -1)]


def synth_graycode(n: int) -> NetworkTemplate:
    """All-to-all CNOT network visiting conditions in Gray order.

    Conditions are grouped by their highest-numbered wire ``k``; wire ``k``
    accumulates group ``k`` (``k = n, n-1, ..., 1``) through one CNOT per Gray
    step, and a last CNOT from wire ``k - 1`` restores it, which also lands
    on the first condition of the next group.  Every pair of consecutive
    slots is separated by exactly one CNOT, ``2^n - 2`` in total.
    """
    if n < 1:
        raise ValueError(f"need at least one qubit, got {n}")
    order = gray_order(n)
    labels = identity_labels(n)
    gates: list[Gate] = []
    acc = n
    for i, y in enumerate(order):
        group = n - (y & -y).bit_length() + 1
        if i and group == acc:
            src = n - (y ^ order[i - 1]).bit_length() + 1
            gates.append(Cnot(src, acc))
            act_on_labels(gates[-1], labels)
        elif i:
            # group finished: restore the accumulator, hand over to the next wire
            gates.append(Cnot(group, acc))
            act_on_labels(gates[-1], labels)
            acc = group
        if labels[acc - 1] != y:
            raise AssertionError("gray network lost track of labels")
        gates.append(Rz(acc))
    if labels != identity_labels(n):
        raise AssertionError("gray network does not restore the inputs")
    return template_from_skeleton(
        Circuit(n, gates), "gray(start=wire n, accumulators n..1)", CouplingGraph("full", n)
    )


def with_coupling(t: NetworkTemplate, coupling: CouplingGraph) -> NetworkTemplate:
    return replace(t, coupling=coupling)
