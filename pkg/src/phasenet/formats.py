"""Plain-text carriers for phase vectors, truth tables and circuits.

Phase file::

    n 2
    0
    0
    0
    3.141592653589793

Truth-table file::

    n 3
    01101001

Circuit file (``#`` starts a comment; angles use 17 significant digits)::

    qubits 2
    rz 1 0.5
    cnot 1 2
"""
from __future__ import annotations

import math
from pathlib import Path

from .qcore import BooleanFunction, Circuit, Cnot, Cns, Gate, GlobalPhase, Hadamard, Rz, Swap
from .walsh import PhaseSpec


class FormatError(ValueError):
    """Malformed input file; the message names the offending line."""


def _lines(text: str) -> list[tuple[int, str]]:
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((no, line))
    return out


def _header(lines: list[tuple[int, str]], keyword: str) -> int:
    if not lines:
        raise FormatError(f"empty file, expected '{keyword} <N>' header")
    no, line = lines[0]
    parts = line.split()
    if len(parts) != 2 or parts[0] != keyword:
        raise FormatError(f"line {no}: expected '{keyword} <N>', got {line!r}")
    try:
        n = int(parts[1])
    except ValueError:
        raise FormatError(f"line {no}: qubit count {parts[1]!r} is not an integer") from None
    if n < 1:
        raise FormatError(f"line {no}: qubit count must be >= 1")
    return n


def _float(token: str, no: int) -> float:
    try:
        v = float(token)
    except ValueError:
        raise FormatError(f"line {no}: {token!r} is not a number") from None
    if not math.isfinite(v):
        raise FormatError(f"line {no}: value must be finite")
    return v


def format_angle(a: float) -> str:
    return f"{a:.17g}"


# -- phases -----------------------------------------------------------------

def parse_phases(text: str) -> PhaseSpec:
    lines = _lines(text)
    n = _header(lines, "n")
    body = lines[1:]
    if len(body) != 1 << n:
        raise FormatError(f"expected {1 << n} phase lines for n={n}, got {len(body)}")
    values = []
    for no, line in body:
        parts = line.split()
        if len(parts) != 1:
            raise FormatError(f"line {no}: expected one value, got {line!r}")
        values.append(_float(parts[0], no))
    return PhaseSpec(n, values)


def emit_phases(theta: PhaseSpec) -> str:
    return f"n {theta.width}\n" + "".join(f"{format_angle(v)}\n" for v in theta.theta)


# -- truth tables -----------------------------------------------------------

def parse_truth_table(text: str) -> BooleanFunction:
    lines = _lines(text)
    n = _header(lines, "n")
    if len(lines) != 2:
        raise FormatError(f"expected one table line after the header, got {len(lines) - 1}")
    no, bits = lines[1]
    if len(bits) != 1 << n:
        raise FormatError(f"line {no}: table needs {1 << n} characters, got {len(bits)}")
    if set(bits) - {"0", "1"}:
        raise FormatError(f"line {no}: table may only contain 0 and 1")
    return BooleanFunction(n, tuple(int(c) for c in bits))


def emit_truth_table(f: BooleanFunction) -> str:
    return f"n {f.width}\n{f}\n"


# -- circuits ---------------------------------------------------------------

_TWO = {"cnot": Cnot, "cns": Cns, "swap": Swap}


def _int(token: str, no: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise FormatError(f"line {no}: {token!r} is not a qubit index") from None


def parse_circuit(text: str) -> Circuit:
    lines = _lines(text)
    n = _header(lines, "qubits")
    gates: list[Gate] = []
    for no, line in lines[1:]:
        op, *args = line.split()
        want = {"rz": 2, "h": 1, "gphase": 1}.get(op, 2 if op in _TWO else None)
        if want is None:
            raise FormatError(f"line {no}: unknown gate {op!r}")
        if len(args) != want:
            raise FormatError(f"line {no}: {op} takes {want} arguments, got {len(args)}")
        try:
            if op == "rz":
                gate: Gate = Rz(_int(args[0], no), _float(args[1], no))
            elif op == "h":
                gate = Hadamard(_int(args[0], no))
            elif op == "gphase":
                gate = GlobalPhase(_float(args[0], no))
            else:
                gate = _TWO[op](_int(args[0], no), _int(args[1], no))
        except FormatError:
            raise
        except ValueError as exc:
            raise FormatError(f"line {no}: {exc}") from None
        if any(q > n for q in gate.qubits):
            raise FormatError(f"line {no}: qubit index beyond declared {n} qubits")
        gates.append(gate)
    return Circuit(n, gates)


def _gate_line(g: Gate) -> str:
    if isinstance(g, Rz):
        return f"rz {g.qubit} {format_angle(g.angle)}"
    if isinstance(g, Hadamard):
        return f"h {g.qubit}"
    if isinstance(g, GlobalPhase):
        return f"gphase {format_angle(g.angle)}"
    if isinstance(g, Swap):
        return f"swap {g.a} {g.b}"
    name = "cnot" if isinstance(g, Cnot) else "cns"
    return f"{name} {g.control} {g.target}"


def emit_circuit(c: Circuit, comments: list[str] | None = None) -> str:
    head = "".join(f"# {line}\n" for line in comments or [])
    return head + f"qubits {c.width}\n" + "".join(_gate_line(g) + "\n" for g in c.gates)


def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
