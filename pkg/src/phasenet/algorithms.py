"""Deutsch-Jozsa, Grover and generalized controlled-NOT built on one
programmable phase network."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .backends import build_template
from .optimize import CircuitStats, stats
from .qcore import BooleanFunction, Circuit, Hadamard
from .simulate import StateVector, measure_probabilities, run
from .synth import Binder, NetworkTemplate
from .walsh import PhaseSpec, phase_spec_from_boolean


def _template(backend, n: int) -> NetworkTemplate:
    if isinstance(backend, NetworkTemplate):
        if backend.width != n:
            raise ValueError(f"template width {backend.width} != {n}")
        return backend
    return build_template(backend, n)


def _hadamards(n: int) -> Circuit:
    return Circuit(n, [Hadamard(q) for q in range(1, n + 1)])


def classify_boolean(f: BooleanFunction) -> str:
    ones = f.ones()
    if ones in (0, len(f.table)):
        return "constant"
    if 2 * ones == len(f.table):
        return "balanced"
    return "neither"


@dataclass(frozen=True)
class DjResult:
    verdict: str
    prob_zero: float
    stats: CircuitStats


def deutsch_jozsa(
    f: BooleanFunction, backend="recursive-cnot", strict: bool = True
) -> DjResult:
    """Run ``H^N U_f H^N`` on ``|0...0>`` with ``U_f`` bound into the network."""
    if strict and classify_boolean(f) == "neither":
        raise ValueError("f is neither constant nor balanced")
    n = f.width
    oracle = Binder(_template(backend, n))(phase_spec_from_boolean(f))
    circuit = _hadamards(n) + oracle + _hadamards(n)
    p0 = float(measure_probabilities(run(circuit, StateVector.basis(n)))[0])
    return DjResult("constant" if p0 >= 1 - 1e-9 else "balanced", p0, stats(oracle))


def diffusion_phase_spec(n: int) -> PhaseSpec:
    if n < 1:
        raise ValueError(f"need at least one qubit, got {n}")
    theta = np.zeros(1 << n)
    theta[0] = np.pi
    return PhaseSpec(n, theta)


def default_iterations(n: int, t: int) -> int:
    return math.floor(math.pi / 4 * math.sqrt((1 << n) / t))


def grover_closed_form(n: int, t: int, k: int) -> float:
    alpha = math.asin(math.sqrt(t / (1 << n)))
    return math.sin((2 * k + 1) * alpha) ** 2


@dataclass(frozen=True)
class GroverResult:
    iterations: int
    success_prob: float
    trajectory: tuple[float, ...]
    marked: tuple[int, ...]


def grover(
    n: int,
    marked: Iterable[int],
    backend="recursive-cnot",
    iterations: int | None = None,
) -> GroverResult:
    """Search for the ``marked`` basis states.

    Oracle and diffusion are both bindings of the same template.  The
    diffusion phase gate carries its global phase so that
    ``H U H = I - 2|s><s|`` holds exactly.  ``trajectory[k]`` is the success
    probability after ``k`` iterations.
    """
    marked = tuple(sorted({int(m) for m in marked}))
    if not marked or len(marked) >= 1 << n:
        raise ValueError("marked set must be nonempty and smaller than the search space")
    if iterations is None:
        iterations = default_iterations(n, len(marked))
    if iterations < 0:
        raise ValueError("iteration count must be non-negative")
    bind = Binder(_template(backend, n))
    oracle = bind(phase_spec_from_boolean(BooleanFunction.indicator(n, marked)), True)
    diffuse = _hadamards(n) + bind(diffusion_phase_spec(n), True) + _hadamards(n)
    step = oracle + diffuse

    state = run(_hadamards(n), StateVector.basis(n))
    idx = list(marked)
    traj = [float(measure_probabilities(state)[idx].sum())]
    for _ in range(iterations):
        state = run(step, state)
        traj.append(float(measure_probabilities(state)[idx].sum()))
    return GroverResult(iterations, traj[-1], tuple(traj), marked)


def generalized_cnot(h: BooleanFunction, backend="recursive-cnot") -> Circuit:
    """Flip the last qubit iff ``h`` of the other qubits is 1.

    The phase network realizes ``theta(c, b) = pi * h(c) * b``; conjugating the
    target with Hadamards turns that conditional phase into a bit flip.
    """
    n = h.width + 1
    theta = np.array([np.pi * h(x >> 1) * (x & 1) for x in range(1 << n)], dtype=float)
    body = Binder(_template(backend, n))(PhaseSpec(n, theta))
    return Circuit(n, [Hadamard(n)]) + body + Circuit(n, [Hadamard(n)])


def toffoli(controls: int, backend="recursive-cnot") -> Circuit:
    if controls < 1:
        raise ValueError("need at least one control")
    h = BooleanFunction.from_callable(controls, lambda c: c == (1 << controls) - 1)
    return generalized_cnot(h, backend)


def carry_condition() -> BooleanFunction:
    """Majority of three bits, the carry-out condition of a full adder."""
    return BooleanFunction.from_callable(3, lambda c: bin(c).count("1") >= 2)


def permutation_of(h: BooleanFunction) -> np.ndarray:
    """Reference permutation matrix of ``|c, b> -> |c, b ^ h(c)>``."""
    n = h.width + 1
    dim = 1 << n
    m = np.zeros((dim, dim))
    for x in range(dim):
        m[x ^ h(x >> 1), x] = 1.0
    return m
