import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phasenet.qcore import (
    Circuit, Cnot, Cns, CouplingGraph, GlobalPhase, Hadamard, ParityMask, Rz, Swap,
)
from phasenet.simulate import verify_phase_gate
from phasenet.synth import (
    Binder,
    NetworkTemplate,
    RotationSlot,
    bind_angles,
    check_programmable,
    gray_order,
    synth_fig1_two_qubit,
    synth_graycode,
    synth_recursive,
    template_from_skeleton,
    trace_conditions,
)
from phasenet.walsh import AngleSpec, PhaseSpec, phases_from_angles

from oracles import dense_unitary, final_images, phase_distance, rotation_conditions

PI = np.pi


def builders():
    return {
        "recursive-cnot": lambda n: synth_recursive(n, "cnot"),
        "recursive-cns": lambda n: synth_recursive(n, "cns"),
        "gray": synth_graycode,
    }


def two_qubit_count(c: Circuit) -> int:
    return sum(len(g.qubits) == 2 for g in c.gates)


class TestRecursive:
    def test_one_qubit(self):
        t = synth_recursive(1)
        assert t.skeleton.gates == (Rz(1),)
        assert [(s.qubit, s.condition.bits) for s in t.slots] == [(1, 1)]

    @pytest.mark.parametrize("flavor", ["cnot", "cns"])
    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_natural_order_against_oracle(self, flavor, n):
        t = synth_recursive(n, flavor)
        conds = rotation_conditions(t.skeleton)
        assert [m for _, m in conds] == list(range(1, 1 << n))
        assert final_images(t.skeleton) == [1 << (n - 1 - j) for j in range(n)]
        assert t.conditions == list(range(1, 1 << n))

    def test_gate_sets(self):
        kinds = {type(g) for g in synth_recursive(4, "cns").skeleton.gates}
        assert kinds == {Rz, Cns}
        kinds = {type(g) for g in synth_recursive(4, "cnot").skeleton.gates}
        assert kinds <= {Rz, Cnot, Swap}

    def test_nearest_neighbour(self):
        for flavor in ("cnot", "cns"):
            for g in synth_recursive(6, flavor).skeleton.gates:
                if len(g.qubits) == 2:
                    a, b = g.qubits
                    assert abs(a - b) == 1

    def test_errors(self):
        with pytest.raises(ValueError):
            synth_recursive(0)
        with pytest.raises(ValueError):
            synth_recursive(3, "toffoli")
        with pytest.raises(ValueError):
            synth_recursive(3, coupling=CouplingGraph("full", 3))

    def test_ring_variant(self):
        t = synth_recursive(4, "cnot", CouplingGraph("ring", 4))
        assert t.coupling.kind == "ring" and check_programmable(t)


class TestBaseNetwork:
    def test_slots(self):
        t = synth_fig1_two_qubit()
        assert [(s.qubit, s.condition.bits) for s in t.slots] == [(1, 0b10), (2, 0b01), (2, 0b11)]
        assert two_qubit_count(t.skeleton) == 2
        assert check_programmable(t)

    def test_trace(self):
        trace = trace_conditions(synth_fig1_two_qubit().skeleton)
        assert trace.conditions == [0b10, 0b01, 0b11]
        assert [m.bits for m in trace.final_labels] == [0b10, 0b01]


class TestGray:
    def test_order_examples(self):
        assert gray_order(1) == [1]
        assert gray_order(3) == [1, 5, 7, 3, 2, 6, 4]

    def test_one_qubit(self):
        t = synth_graycode(1)
        assert t.skeleton.gates == (Rz(1),)

    @pytest.mark.parametrize("n", range(2, 9))
    def test_hamming_steps_and_count(self, n):
        t = synth_graycode(n)
        conds = [m for _, m in rotation_conditions(t.skeleton)] if n <= 6 else t.conditions
        assert sorted(conds) == list(range(1, 1 << n))
        assert all(bin(a ^ b).count("1") == 1 for a, b in zip(conds, conds[1:]))
        assert two_qubit_count(t.skeleton) <= 1 << n
        assert two_qubit_count(t.skeleton) == (1 << n) - 2
        assert t.coupling.kind == "full"

    def test_one_cnot_between_slots(self):
        gates = synth_graycode(4).skeleton.gates
        rz_pos = [i for i, g in enumerate(gates) if isinstance(g, Rz)]
        assert all(b - a == 2 for a, b in zip(rz_pos, rz_pos[1:]))


class TestTrace:
    def test_empty(self):
        assert len(trace_conditions(Circuit(2, [Cnot(1, 2)]))) == 0

    def test_hadamard_rejected(self):
        with pytest.raises(ValueError):
            trace_conditions(Circuit(1, [Hadamard(1), Rz(1)]))

    def test_global_phase_ignored(self):
        assert trace_conditions(Circuit(1, [GlobalPhase(1.0), Rz(1)])).conditions == [1]

    def test_positions_increase(self):
        entries = trace_conditions(synth_recursive(4).skeleton).entries
        pos = [p for p, _, _ in entries]
        assert pos == sorted(set(pos))

    @pytest.mark.parametrize("name", list(builders()))
    @pytest.mark.parametrize("n", range(1, 9))
    def test_every_backend_programmable(self, name, n):
        t = builders()[name](n)
        rep = check_programmable(t)
        assert rep, rep.message
        assert len(t.slots) == (1 << n) - 1
        assert sorted(t.conditions) == list(range(1, 1 << n))

    @pytest.mark.parametrize("n", [9, 10])
    def test_recursive_order_large(self, n):
        assert trace_conditions(synth_recursive(n).skeleton).conditions == list(range(1, 1 << n))


class TestCheckProgrammable:
    def test_duplicate_condition(self):
        t = synth_fig1_two_qubit()
        slots = t.slots + (RotationSlot(1, 2, ParityMask(0b01, 2)),)
        rep = check_programmable(dataclasses.replace(t, slots=slots))
        assert not rep and rep.clause == "a"

    def test_missing_condition(self):
        t = synth_fig1_two_qubit()
        rep = check_programmable(dataclasses.replace(t, slots=t.slots[:2]))
        assert not rep and rep.clause == "a"

    def test_deleted_final_cnot(self):
        t = synth_fig1_two_qubit()
        broken = template_from_skeleton(Circuit(2, t.skeleton.gates[:-1]), "x", t.coupling)
        rep = check_programmable(broken)
        assert not rep and rep.clause == "c"

    def test_mislabelled_slot(self):
        t = synth_fig1_two_qubit()
        s = t.slots
        swapped = (RotationSlot(s[0].position, 1, s[1].condition),
                   RotationSlot(s[1].position, 2, s[0].condition), s[2])
        rep = check_programmable(dataclasses.replace(t, slots=swapped))
        assert not rep and rep.clause == "b"

    def test_coupling_violation(self):
        t = synth_graycode(3)
        rep = check_programmable(dataclasses.replace(t, coupling=CouplingGraph("path", 3)))
        assert not rep and rep.clause == "d"

    def test_bind_refuses_broken(self):
        t = synth_fig1_two_qubit()
        with pytest.raises(ValueError):
            bind_angles(dataclasses.replace(t, slots=t.slots[:2]), PhaseSpec(2, np.zeros(4)))
        with pytest.raises(ValueError):
            Binder(dataclasses.replace(t, slots=t.slots[:2]))


class TestBind:
    def test_zero(self):
        c = bind_angles(synth_recursive(3), PhaseSpec(3, np.zeros(8)))
        assert all(g.angle == 0 for g in c.gates if isinstance(g, Rz))

    def test_two_qubit_example(self):
        t = synth_fig1_two_qubit()
        c = bind_angles(t, PhaseSpec(2, [0, 0, 0, PI]), include_global_phase=True)
        assert isinstance(c.gates[0], GlobalPhase)
        assert c.gates[0].angle == pytest.approx(PI / 2)  # the global knob
        angles = [g.angle for g in c.gates if isinstance(g, Rz)]
        np.testing.assert_allclose(angles, [-PI / 2, -PI / 2, PI / 2], atol=1e-15)

    def test_width_mismatch(self):
        with pytest.raises(ValueError):
            bind_angles(synth_recursive(2), PhaseSpec(3, np.zeros(8)))
        with pytest.raises(ValueError):
            Binder(synth_recursive(2))(PhaseSpec(1, [0, 0]))

    @settings(max_examples=40, deadline=None)
    @given(st.sampled_from(list(builders())), st.integers(1, 6), st.integers(0, 2**31))
    def test_bound_angles_reproduce_phases(self, name, n, seed):
        theta = np.random.default_rng(seed).uniform(-PI, PI, 1 << n)
        t = builders()[name](n)
        c = bind_angles(t, PhaseSpec(n, theta), include_global_phase=True)
        phi = np.zeros(1 << n)
        phi[0] = c.gates[0].angle
        for s in t.slots:
            phi[s.condition.bits] = c.gates[s.position + 1].angle
        back = phases_from_angles(AngleSpec(n, phi)).theta
        assert np.max(np.abs(back - theta)) <= 1e-12

    @settings(max_examples=20, deadline=None)
    @given(st.sampled_from(list(builders())), st.integers(1, 5), st.integers(0, 2**31))
    def test_dense_oracle(self, name, n, seed):
        theta = np.random.default_rng(seed).uniform(-PI, PI, 1 << n)
        c = bind_angles(builders()[name](n), PhaseSpec(n, theta))
        u = dense_unitary(c)
        assert phase_distance(u, np.diag(np.exp(-1j * theta))) <= 1e-10
        assert verify_phase_gate(c, PhaseSpec(n, theta)).ok

    def test_global_phase_is_exact_when_included(self):
        theta = np.random.default_rng(3).uniform(-PI, PI, 8)
        c = bind_angles(synth_recursive(3, "cns"), PhaseSpec(3, theta), include_global_phase=True)
        assert np.max(np.abs(dense_unitary(c) - np.diag(np.exp(-1j * theta)))) <= 1e-12

    def test_template_type(self):
        assert isinstance(synth_recursive(2), NetworkTemplate)
