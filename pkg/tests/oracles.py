"""Independent reference computations used to freeze expected values.

Nothing here imports the package's transform or simulator code paths:
matrices are assembled from Kronecker products and sums are written out
term by term.
"""
from __future__ import annotations

import numpy as np
from scipy.optimize import minimize_scalar

from phasenet.qcore import Cnot, Cns, GlobalPhase, Hadamard, Rz, Swap

I2 = np.eye(2)
H2 = np.array([[1, 1], [1, -1]]) / np.sqrt(2)


def hadamard_matrix(n: int) -> np.ndarray:
    """Unnormalized ``(-1)^(x.y)`` matrix, entry by entry."""
    dim = 1 << n
    return np.array(
        [[(-1) ** bin(x & y).count("1") for y in range(dim)] for x in range(dim)],
        dtype=float,
    )


def bits_of(x: int, n: int) -> list[int]:
    """``[x_1, ..., x_n]`` with ``x_1`` most significant."""
    return [(x >> (n - 1 - j)) & 1 for j in range(n)]


def from_bits(bits: list[int]) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | b
    return out


def classical_image(gate, x: int, n: int) -> int:
    """Where a classical gate sends basis state ``x``, from its truth table."""
    b = bits_of(x, n)
    if isinstance(gate, Cnot):
        b[gate.target - 1] ^= b[gate.control - 1]
    elif isinstance(gate, Swap):
        b[gate.a - 1], b[gate.b - 1] = b[gate.b - 1], b[gate.a - 1]
    elif isinstance(gate, Cns):
        a, t = gate.control - 1, gate.target - 1
        # CNOT first, then SWAP
        b[t] ^= b[a]
        b[a], b[t] = b[t], b[a]
    else:
        raise TypeError(gate)
    return from_bits(b)


def _embed_1q(m: np.ndarray, q: int, n: int) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for j in range(1, n + 1):
        out = np.kron(out, m if j == q else I2)
    return out


def gate_matrix(gate, n: int) -> np.ndarray:
    dim = 1 << n
    if isinstance(gate, Rz):
        m = np.diag([np.exp(-0.5j * gate.angle), np.exp(0.5j * gate.angle)])
        return _embed_1q(m, gate.qubit, n)
    if isinstance(gate, Hadamard):
        return _embed_1q(H2, gate.qubit, n)
    if isinstance(gate, GlobalPhase):
        return np.exp(-0.5j * gate.angle) * np.eye(dim)
    m = np.zeros((dim, dim), dtype=complex)
    for x in range(dim):
        m[classical_image(gate, x, n), x] = 1.0
    return m


def dense_unitary(circuit) -> np.ndarray:
    n = circuit.width
    u = np.eye(1 << n, dtype=complex)
    for g in circuit.gates:
        u = gate_matrix(g, n) @ u
    return u


def phase_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Min over global phases of ``max|U - e^{ia} V|``: grid scan then bounded polish."""
    def f(a: float) -> float:
        return float(np.max(np.abs(u - np.exp(1j * a) * v)))

    grid = np.linspace(0, 2 * np.pi, 3601)
    a0 = min(grid, key=f)
    step = grid[1] - grid[0]
    # search the offset from a0 so the solver's relative tolerance stays tiny
    res = minimize_scalar(lambda d: f(a0 + d), bounds=(-step, step), method="bounded",
                          options={"xatol": 1e-15})
    return min(f(a0), float(res.fun))


def rotation_conditions(circuit) -> list[tuple[int, int]]:
    """(qubit, mask) under each Rz, found by pushing unit inputs through
    the classical gates and reading off which inputs flip that wire."""
    n = circuit.width
    images = [1 << (n - 1 - j) for j in range(n)]  # image of e_1 .. e_n
    out = []
    for g in circuit.gates:
        if isinstance(g, Rz):
            mask = sum(1 << (n - 1 - j) for j in range(n)
                       if bits_of(images[j], n)[g.qubit - 1])
            out.append((g.qubit, mask))
        elif isinstance(g, (Cnot, Cns, Swap)):
            images = [classical_image(g, v, n) for v in images]
    return out


def final_images(circuit) -> list[int]:
    n = circuit.width
    images = [1 << (n - 1 - j) for j in range(n)]
    for g in circuit.gates:
        if isinstance(g, (Cnot, Cns, Swap)):
            images = [classical_image(g, v, n) for v in images]
    return images
