"""Domain types, gate vocabulary and GF(2) label algebra.

Bit order convention used everywhere in the package: for an ``N``-qubit
register, wire ``j`` (1-based) carries bit ``x_j`` and ``x_1`` is the most
significant bit of the integer index.  The unit mask of wire ``j`` is
therefore ``1 << (N - j)``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence, Union


def unit_mask(wire: int, width: int) -> int:
    """Integer mask selecting bit ``x_wire`` of a ``width``-bit index."""
    return 1 << (width - wire)


def parity(v: int) -> int:
    return bin(v).count("1") & 1


@dataclass(frozen=True, order=True)
class _BitString:
    bits: int
    width: int

    def __post_init__(self) -> None:
        if self.width < 1:
            raise ValueError(f"width must be >= 1, got {self.width}")
        if not 0 <= self.bits < (1 << self.width):
            raise ValueError(f"bits {self.bits} out of range for width {self.width}")

    def __int__(self) -> int:
        return self.bits

    def __index__(self) -> int:
        return self.bits

    def __str__(self) -> str:
        return format(self.bits, f"0{self.width}b")

    def bit(self, wire: int) -> int:
        """Value of ``x_wire`` (1-based, wire 1 = most significant)."""
        return (self.bits >> (self.width - wire)) & 1


class ParityMask(_BitString):
    """Control condition ``y``: the set of input bits XORed together."""

    @classmethod
    def unit(cls, wire: int, width: int) -> "ParityMask":
        return cls(unit_mask(wire, width), width)

    def __xor__(self, other: "ParityMask") -> "ParityMask":
        if not isinstance(other, ParityMask) or other.width != self.width:
            return NotImplemented
        return ParityMask(self.bits ^ other.bits, self.width)


class BasisIndex(_BitString):
    """Computational basis state ``|x_1 ... x_N>``."""


def inner_product_mod2(x: BasisIndex, y: ParityMask) -> int:
    if x.width != y.width:
        raise ValueError(f"width mismatch: {x.width} vs {y.width}")
    return parity(x.bits & y.bits)


# --------------------------------------------------------------------------
# Gates


def _check_wire(q: object) -> None:
    if isinstance(q, bool) or not isinstance(q, int) or q < 1:
        raise ValueError(f"qubit index must be an int >= 1, got {q!r}")


def _check_angle(a: float) -> None:
    if not math.isfinite(a):
        raise ValueError(f"angle must be finite, got {a!r}")


def _check_pair(a: int, b: int) -> None:
    _check_wire(a)
    _check_wire(b)
    if a == b:
        raise ValueError(f"two-qubit gate needs distinct qubits, got ({a}, {b})")


@dataclass(frozen=True)
class Rz:
    """z rotation ``diag(exp(-i*angle/2), exp(+i*angle/2))``."""

    qubit: int
    angle: float = 0.0

    def __post_init__(self) -> None:
        _check_wire(self.qubit)
        _check_angle(self.angle)

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.qubit,)


@dataclass(frozen=True)
class Hadamard:
    qubit: int

    def __post_init__(self) -> None:
        _check_wire(self.qubit)

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.qubit,)


@dataclass(frozen=True)
class GlobalPhase:
    """Multiplies every amplitude by ``exp(-i*angle/2)``."""

    angle: float

    def __post_init__(self) -> None:
        _check_angle(self.angle)

    @property
    def qubits(self) -> tuple[int, ...]:
        return ()


@dataclass(frozen=True)
class Cnot:
    control: int
    target: int

    def __post_init__(self) -> None:
        _check_pair(self.control, self.target)

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.control, self.target)


@dataclass(frozen=True)
class Cns:
    """CNOT(control -> target) followed by SWAP: ``|a, b> -> |a^b, a>``."""

    control: int
    target: int

    def __post_init__(self) -> None:
        _check_pair(self.control, self.target)

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.control, self.target)


@dataclass(frozen=True)
class Swap:
    a: int
    b: int

    def __post_init__(self) -> None:
        _check_pair(self.a, self.b)

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.a, self.b)


Gate = Union[Rz, Cnot, Cns, Swap, Hadamard, GlobalPhase]
CLASSICAL_GATES = (Cnot, Cns, Swap)
TWO_QUBIT_GATES = (Cnot, Cns, Swap)


def is_classical(gate: Gate) -> bool:
    return isinstance(gate, CLASSICAL_GATES)


@dataclass(frozen=True)
class Circuit:
    width: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self) -> None:
        if self.width < 1:
            raise ValueError(f"circuit width must be >= 1, got {self.width}")
        object.__setattr__(self, "gates", tuple(self.gates))
        for i, g in enumerate(self.gates):
            for q in g.qubits:
                if q > self.width:
                    raise ValueError(
                        f"gate {i} ({g}) touches qubit {q} outside 1..{self.width}"
                    )

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def __add__(self, other: "Circuit") -> "Circuit":
        if not isinstance(other, Circuit):
            return NotImplemented
        if other.width != self.width:
            raise ValueError(f"width mismatch: {self.width} vs {other.width}")
        return Circuit(self.width, self.gates + other.gates)

    def extended(self, gates: Iterable[Gate]) -> "Circuit":
        return Circuit(self.width, self.gates + tuple(gates))


# --------------------------------------------------------------------------
# Coupling graphs

COUPLING_KINDS = ("path", "ring", "full")


@dataclass(frozen=True)
class CouplingGraph:
    kind: str
    width: int
    edges: frozenset[tuple[int, int]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.kind not in COUPLING_KINDS:
            raise ValueError(f"unknown coupling kind {self.kind!r}")
        if self.width < 1:
            raise ValueError(f"coupling width must be >= 1, got {self.width}")
        n = self.width
        if self.kind == "full":
            edges = set(itertools.combinations(range(1, n + 1), 2))
        else:
            edges = {(i, i + 1) for i in range(1, n)}
            if self.kind == "ring" and n > 2:
                edges.add((1, n))
        object.__setattr__(self, "edges", frozenset(edges))

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def automorphisms(self) -> list[tuple[int, ...]]:
        """Wire relabelings preserving the edge set, as 0-based permutations.

        ``perm[i]`` is the new position of wire ``i + 1``.
        """
        n = self.width
        ident = tuple(range(n))
        if n == 1:
            return [ident]
        if self.kind == "path" or n == 2:
            return [ident, tuple(reversed(ident))]
        if self.kind == "ring":
            perms = set()
            for r in range(n):
                perms.add(tuple((i + r) % n for i in range(n)))
                perms.add(tuple((r - i) % n for i in range(n)))
            return sorted(perms)
        return list(itertools.permutations(range(n)))


# --------------------------------------------------------------------------
# Boolean functions


@dataclass(frozen=True)
class BooleanFunction:
    """Truth table of ``f: {0,1}^N -> {0,1}``; ``table[x]`` is ``f(x)``."""

    width: int
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.width < 1:
            raise ValueError(f"width must be >= 1, got {self.width}")
        table = tuple(int(v) for v in self.table)
        if len(table) != 1 << self.width:
            raise ValueError(
                f"truth table needs {1 << self.width} entries, got {len(table)}"
            )
        if any(v not in (0, 1) for v in table):
            raise ValueError("truth table entries must be 0 or 1")
        object.__setattr__(self, "table", table)

    def __call__(self, x: int) -> int:
        return self.table[int(x)]

    @classmethod
    def from_callable(cls, width: int, fn: Callable[[int], int]) -> "BooleanFunction":
        return cls(width, tuple(int(bool(fn(x))) for x in range(1 << width)))

    @classmethod
    def from_string(cls, bits: str) -> "BooleanFunction":
        width = max(len(bits).bit_length() - 1, 0)
        if len(bits) != 1 << width or width < 1:
            raise ValueError(f"truth table length {len(bits)} is not 2^N with N >= 1")
        if set(bits) - {"0", "1"}:
            raise ValueError("truth table may only contain '0' and '1'")
        return cls(width, tuple(int(c) for c in bits))

    @classmethod
    def indicator(cls, width: int, marked: Iterable[int]) -> "BooleanFunction":
        marked = {int(m) for m in marked}
        if any(not 0 <= m < (1 << width) for m in marked):
            raise ValueError(f"marked index out of range for width {width}")
        return cls(width, tuple(int(x in marked) for x in range(1 << width)))

    def ones(self) -> int:
        return sum(self.table)

    def __str__(self) -> str:
        return "".join(map(str, self.table))


# --------------------------------------------------------------------------
# Classical label algebra


def act_on_labels(gate: Gate, labels: list[int]) -> None:
    """In-place label update on a 0-indexed list of integer masks."""
    if isinstance(gate, Cnot):
        labels[gate.target - 1] ^= labels[gate.control - 1]
    elif isinstance(gate, Swap):
        a, b = gate.a - 1, gate.b - 1
        labels[a], labels[b] = labels[b], labels[a]
    elif isinstance(gate, Cns):
        a, b = gate.control - 1, gate.target - 1
        labels[a], labels[b] = labels[a] ^ labels[b], labels[a]
    else:
        raise TypeError(f"{type(gate).__name__} has no classical label action")


def classical_label_action(
    gate: Gate, labels: Sequence[ParityMask]
) -> tuple[ParityMask, ...]:
    """Propagate GF(2) wire labels through one classical gate."""
    if not is_classical(gate):
        raise TypeError(f"{type(gate).__name__} has no classical label action")
    if not labels:
        raise ValueError("need one label per wire")
    width = labels[0].width
    if any(m.width != width for m in labels):
        raise ValueError("labels must share one width")
    if max(gate.qubits) > len(labels):
        raise ValueError(f"gate {gate} addresses a wire beyond {len(labels)} labels")
    ints = [m.bits for m in labels]
    act_on_labels(gate, ints)
    return tuple(ParityMask(v, width) for v in ints)


def identity_labels(width: int) -> list[int]:
    return [unit_mask(j, width) for j in range(1, width + 1)]


def gf2_rank(rows: Iterable[int]) -> int:
    basis: list[int] = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
    return len(basis)


# --------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class ValidityReport:
    ok: bool
    index: int | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate_circuit(c: Circuit, g: CouplingGraph) -> ValidityReport:
    """Check index bounds and that every two-qubit gate sits on a coupled pair."""
    if c.width != g.width:
        raise ValueError(f"circuit width {c.width} != coupling width {g.width}")
    for i, gate in enumerate(c.gates):
        qs = gate.qubits
        if any(q < 1 or q > c.width for q in qs):
            return ValidityReport(False, i, f"gate {i} {gate} out of range 1..{c.width}")
        if len(qs) == 2 and not g.has_edge(*qs):
            return ValidityReport(
                False, i, f"gate {i} {gate} acts on uncoupled pair {qs} ({g.kind})"
            )
    return ValidityReport(True)
