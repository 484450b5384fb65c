import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from phasenet.qcore import BooleanFunction
from phasenet.walsh import (
    AngleSpec,
    PhaseSpec,
    angles_from_phases,
    normalize_angle,
    phase_spec_from_boolean,
    phases_from_angles,
    wht,
    wht_inplace,
)

from oracles import hadamard_matrix

PI = math.pi


def vectors(max_n=8, elements=st.floats(-10, 10)):
    return st.integers(0, max_n).flatmap(
        lambda n: arrays(np.float64, 1 << n, elements=elements))


class TestTransform:
    def test_length_one(self):
        assert wht([3.5]).tolist() == [3.5]

    def test_delta(self):
        assert wht([1, 0, 0, 0]).tolist() == [1, 1, 1, 1]

    def test_rejects_bad_length(self):
        with pytest.raises(ValueError):
            wht([1, 2, 3])
        with pytest.raises(ValueError):
            wht([])

    def test_inplace_returns_same_buffer(self):
        v = np.arange(8.0)
        assert wht_inplace(v) is v

    @pytest.mark.parametrize("n", range(0, 7))
    def test_matches_matrix_oracle(self, n):
        v = np.random.default_rng(n).normal(size=1 << n)
        np.testing.assert_allclose(wht(v), hadamard_matrix(n) @ v, rtol=0, atol=1e-12)

    @given(vectors(elements=st.integers(-1000, 1000).map(float)))
    def test_involution_integers_exact(self, v):
        assert np.array_equal(wht(wht(v)), len(v) * v)

    @given(vectors())
    def test_involution_reals(self, v):
        back = wht(wht(v)) / len(v)
        assert np.max(np.abs(back - v), initial=0) <= 1e-12 * max(1.0, np.max(np.abs(v)))

    def test_deterministic(self):
        v = np.random.default_rng(1).normal(size=1 << 12)
        assert np.array_equal(wht(v), wht(v))


class TestProgramming:
    def test_zero(self):
        assert not angles_from_phases(PhaseSpec(3, np.zeros(8))).phi.any()

    def test_two_qubit_example(self):
        phi = angles_from_phases(PhaseSpec(2, [0, 0, 0, PI])).phi
        np.testing.assert_allclose(phi, [PI / 2, -PI / 2, -PI / 2, PI / 2], atol=1e-15)

    def test_one_qubit_example(self):
        assert angles_from_phases(PhaseSpec(1, [0, PI])).phi.tolist() == [PI, -PI]

    def test_total_phase_at_11(self):
        phi = np.array([0.3, -1.1, 0.7, 2.9])  # indices 00, 01, 10, 11
        theta = phases_from_angles(AngleSpec(2, phi)).theta
        assert theta[3] == pytest.approx(0.5 * (phi[0] - phi[2] - phi[1] + phi[3]), abs=1e-15)

    def test_pure_global_knob(self):
        theta = phases_from_angles(AngleSpec(3, [1.25] + [0] * 7)).theta
        assert theta.tolist() == [0.625] * 8

    @given(vectors(max_n=10))
    def test_round_trip(self, v):
        if len(v) < 2:
            v = np.concatenate([v, v])
        t = PhaseSpec.from_values(v)
        back = phases_from_angles(angles_from_phases(t)).theta
        assert np.max(np.abs(back - t.theta)) <= 1e-12

    @given(st.integers(1, 8), st.floats(-3, 3), st.floats(-3, 3), st.integers(0, 2**31))
    def test_linearity(self, n, a, b, seed):
        rng = np.random.default_rng(seed)
        t1, t2 = rng.uniform(-PI, PI, (2, 1 << n))
        lhs = angles_from_phases(PhaseSpec(n, a * t1 + b * t2)).phi
        rhs = a * angles_from_phases(PhaseSpec(n, t1)).phi + b * angles_from_phases(PhaseSpec(n, t2)).phi
        assert np.max(np.abs(lhs - rhs)) <= 1e-12

    @settings(max_examples=30)
    @given(st.integers(1, 10), st.integers(0, 2**31))
    def test_parseval(self, n, seed):
        theta = np.random.default_rng(seed).uniform(-PI, PI, 1 << n)
        phi = angles_from_phases(PhaseSpec(n, theta)).phi
        h = hadamard_matrix(n) @ theta if n <= 8 else wht(theta)
        assert np.sum(phi**2) == pytest.approx(np.sum(h**2) / 4 ** (n - 1), rel=1e-12)
        # H/sqrt(2^N) is orthogonal
        assert np.sum(phi**2) == pytest.approx(np.sum(theta**2) * 2**n / 4 ** (n - 1), rel=1e-12)

    def test_angles_are_not_reduced(self):
        phi = angles_from_phases(PhaseSpec(1, [0, 3 * PI])).phi
        assert phi[0] == 3 * PI


class TestSpecs:
    def test_validation(self):
        with pytest.raises(ValueError):
            PhaseSpec(2, [0, 0, 0])
        with pytest.raises(ValueError):
            PhaseSpec(1, [0, float("nan")])
        with pytest.raises(ValueError):
            AngleSpec(0, [1.0])

    def test_read_only(self):
        t = PhaseSpec(1, [0, 1])
        with pytest.raises(ValueError):
            t.theta[0] = 2

    def test_from_boolean(self):
        assert not phase_spec_from_boolean(BooleanFunction(2, (0, 0, 0, 0))).theta.any()
        xor = BooleanFunction.from_callable(2, lambda x: (x >> 1) ^ (x & 1))
        assert phase_spec_from_boolean(xor).theta.tolist() == [0, PI, PI, 0]
        g = BooleanFunction.indicator(3, [5])
        assert phase_spec_from_boolean(g).theta.tolist() == [0, 0, 0, 0, 0, PI, 0, 0]
        assert phase_spec_from_boolean(g, scale=0.5).theta[5] == 0.5

    @given(st.floats(-1e6, 1e6))
    def test_normalize(self, a):
        r = normalize_angle(a)
        assert -PI < r <= PI
        assert math.isclose(math.cos(r), math.cos(a), abs_tol=1e-6)
        assert normalize_angle(r) == r

    def test_normalize_edges(self):
        assert normalize_angle(PI) == PI
        assert normalize_angle(-PI) == PI
