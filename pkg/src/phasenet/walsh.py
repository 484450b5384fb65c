"""Unnormalized Walsh-Hadamard transform between phases and rotation angles.

A network of z rotations applied to every parity condition ``y`` imprints
the phase ``theta_x = 1/2 * sum_y (-1)^(x.y) * phi_y`` on basis state ``x``.
Since ``H @ H = 2^N * I`` for the unnormalized transform, the angles that
realize a requested phase vector are ``phi = H @ theta / 2^(N-1)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qcore import BooleanFunction


def _log2_exact(n: int) -> int:
    if n < 1 or n & (n - 1):
        raise ValueError(f"length {n} is not a power of two")
    return n.bit_length() - 1


def wht_inplace(v: np.ndarray) -> np.ndarray:
    """Butterfly Walsh-Hadamard transform of a 1-D float array, in place.

    Entry ``x`` of the result is ``sum_y (-1)^popcount(x & y) * v[y]``.
    The summation order is fixed, so repeated calls are bit-identical.
    """
    if v.ndim != 1:
        raise ValueError("expected a 1-D array")
    n = v.shape[0]
    _log2_exact(n)
    h = 1
    while h < n:
        blocks = v.reshape(-1, 2, h)
        a = blocks[:, 0, :].copy()
        b = blocks[:, 1, :]
        blocks[:, 0, :] += b
        np.subtract(a, b, out=blocks[:, 1, :])
        h *= 2
    return v


def wht(v) -> np.ndarray:
    """Out-of-place transform; returns a new float64 array."""
    out = np.array(v, dtype=np.float64, copy=True).reshape(-1)
    return wht_inplace(out)


def _frozen(values, width: int, what: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64).reshape(-1)
    if arr.shape[0] != 1 << width:
        raise ValueError(f"{what} needs {1 << width} entries for N={width}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} entries must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PhaseSpec:
    """Target phases ``theta_x`` of ``|x> -> exp(-i theta_x) |x>``."""

    width: int
    theta: np.ndarray

    def __post_init__(self) -> None:
        if self.width < 1:
            raise ValueError(f"width must be >= 1, got {self.width}")
        object.__setattr__(self, "theta", _frozen(self.theta, self.width, "theta"))

    @classmethod
    def from_values(cls, values) -> "PhaseSpec":
        arr = np.asarray(values, dtype=np.float64).reshape(-1)
        return cls(_log2_exact(arr.shape[0]), arr)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PhaseSpec):
            return NotImplemented
        return self.width == other.width and np.array_equal(self.theta, other.theta)


@dataclass(frozen=True, eq=False)
class AngleSpec:
    """Rotation angles ``phi_y`` indexed by condition mask; ``phi[0]`` is the global knob."""

    width: int
    phi: np.ndarray

    def __post_init__(self) -> None:
        if self.width < 1:
            raise ValueError(f"width must be >= 1, got {self.width}")
        object.__setattr__(self, "phi", _frozen(self.phi, self.width, "phi"))

    @classmethod
    def from_values(cls, values) -> "AngleSpec":
        arr = np.asarray(values, dtype=np.float64).reshape(-1)
        return cls(_log2_exact(arr.shape[0]), arr)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AngleSpec):
            return NotImplemented
        return self.width == other.width and np.array_equal(self.phi, other.phi)


def angles_from_phases(t: PhaseSpec) -> AngleSpec:
    phi = wht(t.theta)
    phi /= 2.0 ** (t.width - 1)
    return AngleSpec(t.width, phi)


def phases_from_angles(a: AngleSpec) -> PhaseSpec:
    theta = wht(a.phi)
    theta *= 0.5
    return PhaseSpec(a.width, theta)


def phase_spec_from_boolean(f: BooleanFunction, scale: float = np.pi) -> PhaseSpec:
    return PhaseSpec(f.width, scale * np.asarray(f.table, dtype=np.float64))


def normalize_angle(a: float) -> float:
    """Reduce to ``(-pi, pi]``; values already in range are returned untouched."""
    if -np.pi < a <= np.pi:
        return float(a)
    r = float(np.remainder(a + np.pi, 2 * np.pi) - np.pi)
    return np.pi if r == -np.pi else r
