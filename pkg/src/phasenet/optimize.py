"""Block-minimizing template search, layer scheduling, statistics and
angle-sensitivity analysis."""
from __future__ import annotations

import functools
import itertools
import math
import time
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .qcore import (
    Circuit,
    Cnot,
    Cns,
    CouplingGraph,
    Gate,
    GlobalPhase,
    Rz,
    Swap,
    TWO_QUBIT_GATES,
    identity_labels,
    validate_circuit,
)
from .synth import NetworkTemplate, check_programmable, template_from_skeleton
from .walsh import AngleSpec, phases_from_angles

SEARCH_CAP = 4
GATE_SETS = ("cnot", "cns")


# --------------------------------------------------------------------------
# Scheduling


@dataclass(frozen=True)
class LayeredCircuit:
    width: int
    layers: tuple[tuple[Gate, ...], ...]

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def two_qubit_blocks(self) -> int:
        return sum(
            1 for layer in self.layers if any(isinstance(g, TWO_QUBIT_GATES) for g in layer)
        )

    def flatten(self) -> Circuit:
        return Circuit(self.width, [g for layer in self.layers for g in layer])


def schedule_layers(c: Circuit, coupling: CouplingGraph | None = None) -> LayeredCircuit:
    """As-soon-as-possible layering that keeps every qubit's gate order.

    Gates without qubits (global phases) go into the first layer.
    """
    if coupling is not None:
        report = validate_circuit(c, coupling)
        if not report:
            raise ValueError(f"cannot schedule invalid circuit: {report.message}")
    ready = [0] * (c.width + 1)
    layers: list[list[Gate]] = []
    for g in c.gates:
        qs = g.qubits
        k = max((ready[q] for q in qs), default=0)
        if k == len(layers):
            layers.append([])
        layers[k].append(g)
        for q in qs:
            ready[q] = k + 1
    return LayeredCircuit(c.width, tuple(tuple(layer) for layer in layers))


@dataclass(frozen=True)
class CircuitStats:
    rotations: int
    gate_counts: dict[str, int]
    two_qubit_gates: int
    depth: int
    two_qubit_blocks: int

    def as_dict(self) -> dict[str, int]:
        out = {
            "rotations": self.rotations,
            "two_qubit_gates": self.two_qubit_gates,
            "depth": self.depth,
            "two_qubit_blocks": self.two_qubit_blocks,
        }
        out.update({f"count_{k}": v for k, v in sorted(self.gate_counts.items())})
        return out


_KIND_NAMES = {Rz: "Rz", Cnot: "Cnot", Cns: "Cns", Swap: "Swap", GlobalPhase: "GlobalPhase"}


def stats(c: Circuit | NetworkTemplate) -> CircuitStats:
    if isinstance(c, NetworkTemplate):
        c = c.skeleton
    counts = Counter(_KIND_NAMES.get(type(g), type(g).__name__) for g in c.gates)
    layered = schedule_layers(c)
    return CircuitStats(
        rotations=counts.get("Rz", 0),
        gate_counts=dict(counts),
        two_qubit_gates=sum(1 for g in c.gates if isinstance(g, TWO_QUBIT_GATES)),
        depth=layered.depth,
        two_qubit_blocks=layered.two_qubit_blocks,
    )


# --------------------------------------------------------------------------
# Search


class BudgetExhausted(RuntimeError):
    def __init__(self, message: str, lower_bound: int) -> None:
        super().__init__(message)
        self.lower_bound = lower_bound


@dataclass(frozen=True)
class SearchState:
    """Wire labels, conditions already rotated, and blocks spent so far."""

    labels: tuple[int, ...]
    hit: int
    blocks_used: int = 0


@dataclass(frozen=True)
class OptimizeResult:
    template: NetworkTemplate
    blocks: int
    two_qubit_gates: int
    optimal: bool
    nodes: int
    lower_bound: int


# gate encodings: (kind, a, b) with 0-based wires; kind 0 = CNOT/CNS, 1 = SWAP
Block = tuple[tuple[int, int, int], ...]


def _block_moves(coupling: CouplingGraph) -> list[Block]:
    edges = [(a - 1, b - 1) for a, b in coupling.sorted_edges()]
    per_edge = {e: [(0, e[0], e[1]), (0, e[1], e[0]), (1, e[0], e[1])] for e in edges}
    blocks = []
    for size in range(1, len(edges) + 1):
        for combo in itertools.combinations(edges, size):
            wires = [w for e in combo for w in e]
            if len(set(wires)) != len(wires):
                continue
            for choice in itertools.product(*(per_edge[e] for e in combo)):
                blocks.append(tuple(sorted(choice)))
    blocks.sort(key=lambda b: (len(b), b))
    return blocks


def _apply_block(labels: tuple[int, ...], block: Block, gate_set: str) -> tuple[int, ...]:
    out = list(labels)
    for kind, a, b in block:
        if kind == 1:
            out[a], out[b] = out[b], out[a]
        elif gate_set == "cnot":
            out[b] ^= out[a]
        else:
            out[a], out[b] = out[a] ^ out[b], out[a]
    return tuple(out)


@functools.lru_cache(maxsize=16)
def _distance_table(n: int, kind: str, gate_set: str) -> dict[tuple[int, ...], int]:
    """Blocks needed to bring every invertible labelling back to the identity."""
    moves = _block_moves(CouplingGraph(kind, n))
    ident = tuple(identity_labels(n))
    # forward closure from the identity reaches every labelling the moves can produce
    seen = {ident}
    frontier = [ident]
    preds: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    while frontier:
        nxt = []
        for lab in frontier:
            for m in moves:
                t = _apply_block(lab, m, gate_set)
                preds.setdefault(t, []).append(lab)
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    dist = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for lab in frontier:
            for p in preds.get(lab, ()):
                if p not in dist:
                    dist[p] = dist[lab] + 1
                    nxt.append(p)
        frontier = nxt
    return dist


class _Searcher:
    def __init__(
        self,
        n: int,
        coupling: CouplingGraph,
        gate_set: str,
        node_budget: int,
        time_budget: float | None,
    ) -> None:
        self.n = n
        self.gate_set = gate_set
        self.moves = _block_moves(coupling)
        self.max_new = max((len(b) for b in self.moves), default=1)
        self.full = ((1 << (1 << n)) - 1) & ~1
        self.ident = tuple(identity_labels(n))
        self.dist = _distance_table(n, coupling.kind, gate_set)
        self.node_budget = node_budget
        self.deadline = None if time_budget is None else time.monotonic() + time_budget
        self.nodes = 0
        self.failed: dict[tuple, list[tuple[int, int]]] = {}
        self.perms = self._symmetries(coupling)

    def _symmetries(self, coupling: CouplingGraph):
        n = self.n
        out = []
        for perm in coupling.automorphisms():
            if perm == tuple(range(n)):
                continue
            # bit of wire i sits at position n-1-i; wire i moves to wire perm[i]
            table = [0] * (1 << n)
            for v in range(1 << n):
                for i in range(n):
                    if v >> (n - 1 - i) & 1:
                        table[v] |= 1 << (n - 1 - perm[i])
            out.append((perm, table))
        return out

    def _key(self, labels: tuple[int, ...], hit: int) -> tuple:
        best = (labels, hit)
        for perm, table in self.perms:
            new = [0] * self.n
            for i, v in enumerate(labels):
                new[perm[i]] = table[v]
            h = 0
            rest = hit
            while rest:
                low = rest & -rest
                h |= 1 << table[low.bit_length() - 1]
                rest ^= low
            cand = (tuple(new), h)
            if cand < best:
                best = cand
        return best

    @staticmethod
    def _rotate(labels: tuple[int, ...], hit: int) -> int:
        for v in labels:
            hit |= 1 << v
        return hit

    def bound(self, labels: tuple[int, ...], hit: int) -> int:
        back = self.dist[labels]
        unhit = bin(self.full & ~hit).count("1")
        if unhit:
            # the final block restores unit labels, which never add new conditions
            return max(back, -(-unhit // self.max_new) + 1)
        return back

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise BudgetExhausted("node budget exhausted", 0)
        if self.deadline is not None and self.nodes % 4096 == 0:
            if time.monotonic() > self.deadline:
                raise BudgetExhausted("time budget exhausted", 0)

    def dfs(self, labels, hit, depth: int, gates: int, path: list) -> bool:
        self._tick()
        if hit == self.full and labels == self.ident:
            return True
        if depth == 0 or self.bound(labels, hit) > depth:
            return False
        key = self._key(labels, hit)
        for d, g in self.failed.get(key, ()):
            if d >= depth and g >= gates:
                return False
        for block in self.moves:
            if len(block) > gates:
                break
            nl = _apply_block(labels, block, self.gate_set)
            path.append(block)
            if self.dfs(nl, self._rotate(nl, hit), depth - 1, gates - len(block), path):
                return True
            path.pop()
        self.failed.setdefault(key, []).append((depth, gates))
        return False

    def beam(self, width: int) -> list[Block]:
        """Greedy beam search for some feasible block sequence (an incumbent)."""
        start = (self.ident, self._rotate(self.ident, 0))
        beam: list[tuple[tuple, list[Block]]] = [(start, [])]
        while True:
            done = [(lab, h, p) for (lab, h), p in beam if h == self.full]
            if done:
                lab, _, p = min(done, key=lambda d: (len(d[2]) + self.dist[d[0]], d[2]))
                return p + self._walk_home(lab)
            cand: dict[tuple, tuple] = {}
            for (lab, h), p in beam:
                for block in self.moves:
                    self._tick()
                    nl = _apply_block(lab, block, self.gate_set)
                    nh = self._rotate(nl, h)
                    key = self._key(nl, nh)
                    score = (-bin(nh).count("1"), self.dist[nl])
                    if key not in cand or score < cand[key][0]:
                        cand[key] = (score, (nl, nh), p + [block])
            ranked = sorted(cand.values(), key=lambda c: (c[0], c[1]))
            beam = [(state, p) for _, state, p in ranked[:width]]

    def _walk_home(self, labels: tuple[int, ...]) -> list[Block]:
        out = []
        while labels != self.ident:
            d = self.dist[labels]
            for block in self.moves:
                nl = _apply_block(labels, block, self.gate_set)
                if self.dist.get(nl, d) < d:
                    out.append(block)
                    labels = nl
                    break
        return out


def _emit(n: int, gate_set: str, path) -> Circuit:
    labels = list(identity_labels(n))
    hit = 0
    gates: list[Gate] = []

    def rotate_phase():
        nonlocal hit
        for w in range(n):
            if not hit >> labels[w] & 1:
                hit |= 1 << labels[w]
                gates.append(Rz(w + 1))

    rotate_phase()
    for block in path:
        for kind, a, b in block:
            if kind == 1:
                gates.append(Swap(a + 1, b + 1))
                labels[a], labels[b] = labels[b], labels[a]
            elif gate_set == "cnot":
                gates.append(Cnot(a + 1, b + 1))
                labels[b] ^= labels[a]
            else:
                gates.append(Cns(a + 1, b + 1))
                labels[a], labels[b] = labels[a] ^ labels[b], labels[a]
        rotate_phase()
    return Circuit(n, gates)


def optimize_template(
    n: int,
    coupling: CouplingGraph | None = None,
    gate_set: str = "cnot",
    node_budget: int = 10_000_000,
    time_budget: float | None = None,
    cap: int = SEARCH_CAP,
    beam_width: int = 64,
) -> OptimizeResult:
    """Search for a template with the fewest two-qubit blocks.

    A block is any set of gates on disjoint coupled pairs; between blocks
    every wire whose label is a not-yet-rotated condition gets a rotation.
    A beam search first supplies a feasible incumbent; iterative deepening
    then tries every shallower block count.  Among templates with the fewest
    blocks the one with the fewest two-qubit gates wins, ties broken by the
    smallest block encoding.  ``optimal`` is true only when every shallower
    block count was exhausted within the budget.
    """
    if n < 1:
        raise ValueError(f"need at least one qubit, got {n}")
    if n > cap:
        raise ValueError(f"search is capped at N={cap}; got N={n}")
    if gate_set not in GATE_SETS:
        raise ValueError(f"unknown gate set {gate_set!r}; expected one of {GATE_SETS}")
    if node_budget <= 0:
        raise ValueError("node budget must be positive")
    coupling = coupling or CouplingGraph("path", n)
    if coupling.width != n:
        raise ValueError(f"coupling width {coupling.width} != {n}")

    s = _Searcher(n, coupling, gate_set, node_budget, time_budget)
    start = s.ident
    start_hit = s._rotate(start, 0)
    lower = s.bound(start, start_hit)
    try:
        best = s.beam(beam_width)
    except BudgetExhausted as exc:
        raise BudgetExhausted(
            f"{exc}; no template found, at least {lower} blocks needed", lower
        ) from None

    optimal = False
    try:
        depth = lower
        while depth < len(best):
            path: list = []
            if s.dfs(start, start_hit, depth, depth * s.max_new, path):
                best = path
                break
            depth += 1
            lower = depth
        # every shallower block count is now ruled out
        optimal = True
        lower = len(best)
        for gates in range(len(best), sum(len(b) for b in best)):
            path = []
            if s.dfs(start, start_hit, len(best), gates, path):
                best = path
                break
        else:
            # confirm the incumbent is the lexicographically first at its gate count
            path = []
            gates = sum(len(b) for b in best)
            if s.dfs(start, start_hit, len(best), gates, path):
                best = path
    except BudgetExhausted:
        pass
    return _result(n, coupling, gate_set, best, optimal, s.nodes, lower)


def _result(n, coupling, gate_set, path, optimal, nodes, lower) -> OptimizeResult:
    skeleton = _emit(n, gate_set, path)
    template = template_from_skeleton(skeleton, f"optimized-{gate_set}", coupling)
    report = check_programmable(template)
    if not report:
        raise AssertionError(f"search produced a non-programmable template: {report.message}")
    return OptimizeResult(
        template=template,
        blocks=len(path),
        two_qubit_gates=sum(len(b) for b in path),
        optimal=optimal,
        nodes=nodes,
        lower_bound=lower,
    )


# --------------------------------------------------------------------------
# Sensitivity


@dataclass(frozen=True)
class SensitivityReport:
    n: int
    epsilon: float
    mode: str
    worst_case_bound: float
    empirical_max: float
    empirical_rms: float
    trials: int
    seed: int | None = None
    analytic_rms: float = field(default=0.0)


def sensitivity(
    n: int,
    epsilon: float,
    mode: str = "adversarial",
    trials: int = 1,
    seed: int | None = 0,
) -> SensitivityReport:
    """Phase error caused by perturbing every rotation angle by at most ``epsilon``.

    The phase error is ``dtheta = H @ dphi / 2``, so the worst case over all
    perturbations is ``2^(n-1) * epsilon``.
    """
    if epsilon < 0 or not math.isfinite(epsilon):
        raise ValueError(f"epsilon must be a finite non-negative number, got {epsilon}")
    if n < 1:
        raise ValueError(f"need at least one qubit, got {n}")
    dim = 1 << n
    bound = 2.0 ** (n - 1) * epsilon
    analytic = epsilon * 2.0 ** (n / 2) / (2 * math.sqrt(3))
    if mode == "adversarial":
        # dphi_y = eps * (-1)^(x*.y) with x* = 0 aligns every term at x = 0
        dtheta = phases_from_angles(AngleSpec(n, np.full(dim, epsilon))).theta
        err = np.abs(dtheta)
        return SensitivityReport(
            n, epsilon, mode, bound, float(err.max()),
            float(np.sqrt(np.mean(err**2))), 1, None, analytic,
        )
    if mode != "random":
        raise ValueError(f"unknown mode {mode!r}; expected 'adversarial' or 'random'")
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = np.random.default_rng(seed)
    worst = 0.0
    sq = 0.0
    for _ in range(trials):
        dphi = rng.uniform(-epsilon, epsilon, dim)
        dtheta = phases_from_angles(AngleSpec(n, dphi)).theta
        worst = max(worst, float(np.abs(dtheta).max()))
        sq += float(np.dot(dtheta, dtheta))
    rms = math.sqrt(sq / (trials * dim))
    return SensitivityReport(n, epsilon, mode, bound, worst, rms, trials, seed, analytic)
