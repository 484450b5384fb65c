"""Backend registry: pick a template builder by name and coupling."""
from __future__ import annotations

import functools

from .qcore import CouplingGraph
from .synth import NetworkTemplate, synth_graycode, synth_recursive

BACKENDS = ("recursive-cnot", "recursive-cns", "gray", "optimized")
DEFAULT_COUPLING = {
    "recursive-cnot": "path",
    "recursive-cns": "path",
    "gray": "full",
    "optimized": "path",
}
ALLOWED_COUPLINGS = {
    "recursive-cnot": ("path", "ring"),
    "recursive-cns": ("path", "ring"),
    "gray": ("full",),
    "optimized": ("path", "ring", "full"),
}


class IncompatibleBackend(ValueError):
    pass


def check_compatible(backend: str, coupling: str) -> None:
    if backend not in BACKENDS:
        raise IncompatibleBackend(f"unknown backend {backend!r}; expected one of {BACKENDS}")
    if coupling not in ALLOWED_COUPLINGS[backend]:
        raise IncompatibleBackend(
            f"backend {backend} requires coupling in {ALLOWED_COUPLINGS[backend]}, got {coupling}"
        )


@functools.lru_cache(maxsize=64)
def build_template(
    backend: str,
    n: int,
    coupling: str | None = None,
    gate_set: str = "cnot",
    node_budget: int = 10_000_000,
) -> NetworkTemplate:
    coupling = coupling or DEFAULT_COUPLING.get(backend, "path")
    check_compatible(backend, coupling)
    graph = CouplingGraph(coupling, n)
    if backend == "gray":
        return synth_graycode(n)
    if backend == "optimized":
        from .optimize import optimize_template

        return optimize_template(n, graph, gate_set, node_budget=node_budget).template
    return synth_recursive(n, backend.split("-", 1)[1], graph)
