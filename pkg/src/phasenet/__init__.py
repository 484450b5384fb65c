"""Programmable controlled phase-shift networks.

A single fixed network of z rotations and classical two-qubit gates
realizes any diagonal gate ``|x> -> exp(-i theta_x) |x>``; only the
rotation angles change, and they follow from ``theta`` by a Walsh-Hadamard
transform.
"""
from .qcore import (
    BasisIndex,
    BooleanFunction,
    Circuit,
    Cnot,
    Cns,
    CouplingGraph,
    GlobalPhase,
    Hadamard,
    ParityMask,
    Rz,
    Swap,
    classical_label_action,
    inner_product_mod2,
    validate_circuit,
)
from .simulate import (
    DenseUnitary,
    StateVector,
    apply_gate,
    distance_up_to_global_phase,
    measure_probabilities,
    run,
    unitary_of,
    verify_phase_gate,
)
from .synth import (
    NetworkTemplate,
    bind_angles,
    check_programmable,
    synth_fig1_two_qubit,
    synth_graycode,
    synth_recursive,
    trace_conditions,
)
from .walsh import (
    AngleSpec,
    PhaseSpec,
    angles_from_phases,
    phase_spec_from_boolean,
    phases_from_angles,
    wht,
    wht_inplace,
)

__version__ = "0.1.0"
