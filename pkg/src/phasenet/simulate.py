"""Dense state-vector and unitary semantics for circuits.

Amplitudes are stored as tensors of shape ``(2,) * N`` (plus an optional
trailing batch axis), so axis ``j - 1`` is qubit ``j`` and the flattened
index puts ``x_1`` in the most significant position.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qcore import Circuit, Cnot, Cns, Gate, GlobalPhase, Hadamard, Rz, Swap
from .walsh import PhaseSpec

UNITARY_CAP = 12
STATE_CAP = 20
_INV_SQRT2 = 1.0 / np.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class StateVector:
    width: int
    amps: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amps, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != 1 << self.width:
            raise ValueError(f"state needs {1 << self.width} amplitudes, got {amps.shape[0]}")
        object.__setattr__(self, "amps", amps)

    @classmethod
    def basis(cls, width: int, index: int = 0) -> "StateVector":
        if width > STATE_CAP:
            raise ValueError(f"state-vector runs are capped at {STATE_CAP} qubits")
        amps = np.zeros(1 << width, dtype=np.complex128)
        amps[index] = 1.0
        return cls(width, amps)

    @classmethod
    def uniform(cls, width: int) -> "StateVector":
        amps = np.full(1 << width, 2.0 ** (-width / 2), dtype=np.complex128)
        return cls(width, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))


@dataclass(frozen=True, eq=False)
class DenseUnitary:
    width: int
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=np.complex128)
        dim = 1 << self.width
        if m.shape != (dim, dim):
            raise ValueError(f"unitary for N={self.width} must be {dim}x{dim}, got {m.shape}")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def diagonal_phase(cls, theta: PhaseSpec) -> "DenseUnitary":
        return cls(theta.width, np.diag(np.exp(-1j * theta.theta)))


def _sel(ndim: int, fixed: dict[int, int]) -> tuple:
    idx: list = [slice(None)] * ndim
    for axis, v in fixed.items():
        idx[axis] = slice(v, v + 1)  # keep the axis so 1-qubit states give views
    return tuple(idx)


def _apply(t: np.ndarray, gate: Gate, n: int) -> np.ndarray:
    """Apply ``gate`` to tensor ``t`` of shape ``(2,)*n + batch``, overwriting ``t``."""
    for q in gate.qubits:
        if q > n:
            raise ValueError(f"gate {gate} addresses qubit {q} beyond width {n}")
    nd = t.ndim

    if isinstance(gate, Rz):
        a = gate.qubit - 1
        t[_sel(nd, {a: 0})] *= np.exp(-0.5j * gate.angle)
        t[_sel(nd, {a: 1})] *= np.exp(0.5j * gate.angle)
        return t
    if isinstance(gate, GlobalPhase):
        t *= np.exp(-0.5j * gate.angle)
        return t
    if isinstance(gate, Hadamard):
        a = gate.qubit - 1
        i0, i1 = _sel(nd, {a: 0}), _sel(nd, {a: 1})
        t0 = t[i0].copy()
        t[i0] += t[i1]
        np.subtract(t0, t[i1], out=t[i1])
        t[i0] *= _INV_SQRT2
        t[i1] *= _INV_SQRT2
        return t
    if isinstance(gate, Swap):
        a, b, cycle = gate.a - 1, gate.b - 1, _SWAP
    elif isinstance(gate, Cnot):
        a, b, cycle = gate.control - 1, gate.target - 1, _CNOT
    elif isinstance(gate, Cns):
        a, b, cycle = gate.control - 1, gate.target - 1, _CNS
    else:
        raise TypeError(f"unknown gate type {type(gate).__name__}")
    # each permutation is a single cycle of (x_a, x_b) values; shift amplitudes along it
    idx = [_sel(nd, {a: xa, b: xb}) for xa, xb in cycle]
    last = t[idx[-1]].copy()
    for k in range(len(idx) - 1, 0, -1):
        t[idx[k]] = t[idx[k - 1]]
    t[idx[0]] = last
    return t


# Amplitude at cycle[k] moves to cycle[k + 1] (cyclically).
_CNOT = [(1, 0), (1, 1)]
_SWAP = [(0, 1), (1, 0)]
_CNS = [(0, 1), (1, 0), (1, 1)]


def apply_gate(s: StateVector, g: Gate) -> StateVector:
    n = s.width
    t = _apply(s.amps.copy().reshape((2,) * n), g, n)
    return StateVector(n, t.reshape(-1))


def run(c: Circuit, s: StateVector) -> StateVector:
    if c.width != s.width:
        raise ValueError(f"circuit width {c.width} != state width {s.width}")
    n = c.width
    t = s.amps.copy().reshape((2,) * n)
    for g in c.gates:
        t = _apply(t, g, n)
    return StateVector(n, t.reshape(-1))


def unitary_of(c: Circuit, cap: int = UNITARY_CAP) -> DenseUnitary:
    """Dense matrix whose column ``x`` is ``run(c, |x>)``."""
    n = c.width
    if n > cap:
        raise ValueError(f"unitary extraction is capped at {cap} qubits, circuit has {n}")
    dim = 1 << n
    t = np.eye(dim, dtype=np.complex128).reshape((2,) * n + (dim,))
    for g in c.gates:
        t = _apply(t, g, n)
    return DenseUnitary(n, t.reshape(dim, dim))


def distance_up_to_global_phase(u: DenseUnitary, v: DenseUnitary) -> float:
    """Max-norm of ``U - alpha V`` minimized over unit-modulus ``alpha``.

    ``alpha`` is first read off the largest entry of ``V`` and, separately,
    from the least-squares phase ``arg tr(V^dagger U)``.  The better start is
    then refined by a grid scan and golden-section search over the phase
    inside the window its residual allows.
    """
    if u.width != v.width:
        raise ValueError(f"width mismatch: {u.width} vs {v.width}")
    a, b = u.matrix.reshape(-1), v.matrix.reshape(-1)
    keep = (a != 0) | (b != 0)
    a, b = a[keep], b[keep]
    if a.size == 0:
        return 0.0

    def err(t: float) -> float:
        return float(np.max(np.abs(a - np.exp(1j * t) * b)))

    starts = [0.0]
    k = int(np.argmax(np.abs(b)))
    if abs(b[k]) > 0 and abs(a[k]) > 0:
        starts.append(float(np.angle(a[k] / b[k])))
    overlap = np.vdot(b, a)
    if abs(overlap) > 0:
        starts.append(float(np.angle(overlap)))
    t0 = min(starts, key=err)
    e0, bmax = err(t0), float(np.max(np.abs(b)))
    if e0 == 0.0 or bmax == 0.0:
        return e0
    # any better alpha lies within chord 2*e0/bmax of the start; scan that
    # window coarsely, then golden-section search around the best grid point
    w = min(np.pi, 2.0 * np.arcsin(min(1.0, e0 / bmax)))
    grid = np.linspace(t0 - w, t0 + w, 65)
    best = min(grid, key=err)
    step = grid[1] - grid[0]
    lo, hi = best - step, best + step
    g = (np.sqrt(5.0) - 1.0) / 2.0
    c, d = hi - g * (hi - lo), lo + g * (hi - lo)
    fc, fd = err(c), err(d)
    for _ in range(80):
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - g * (hi - lo)
            fc = err(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + g * (hi - lo)
            fd = err(d)
    return min(e0, err(best), fc, fd)


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    max_error: float

    def __bool__(self) -> bool:
        return self.ok


def verify_phase_gate(c: Circuit, theta: PhaseSpec, tol: float = 1e-10) -> VerifyResult:
    if c.width != theta.width:
        raise ValueError(f"circuit width {c.width} != phase width {theta.width}")
    err = distance_up_to_global_phase(unitary_of(c), DenseUnitary.diagonal_phase(theta))
    return VerifyResult(err <= tol, err)


def measure_probabilities(s: StateVector) -> np.ndarray:
    return np.abs(s.amps) ** 2
