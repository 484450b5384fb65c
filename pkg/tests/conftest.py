import numpy as np
import pytest

from phasenet.qcore import Circuit, Cnot, Cns, GlobalPhase, Hadamard, Rz, Swap

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def random_circuit(rng, n: int, length: int, allow_hadamard: bool = True) -> Circuit:
    """Random gate soup on ``n`` qubits (all pairs allowed)."""
    kinds = ["rz", "cnot", "cns", "swap", "gphase"] + (["h"] if allow_hadamard else [])
    gates = []
    for _ in range(length):
        k = kinds[rng.integers(len(kinds))] if n > 1 else ["rz", "gphase", "h"][rng.integers(3 if allow_hadamard else 2)]
        if k == "rz":
            gates.append(Rz(int(rng.integers(1, n + 1)), float(rng.uniform(-4, 4))))
        elif k == "h":
            gates.append(Hadamard(int(rng.integers(1, n + 1))))
        elif k == "gphase":
            gates.append(GlobalPhase(float(rng.uniform(-4, 4))))
        else:
            a, b = (int(v) + 1 for v in rng.choice(n, 2, replace=False))
            gates.append({"cnot": Cnot, "cns": Cns, "swap": Swap}[k](a, b))
    return Circuit(n, gates)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
