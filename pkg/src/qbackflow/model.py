"""Physical constants, condensate and environment parameters.

All quantities are SI. The geometry is one-dimensional along the vertical
axis; "up" is positive, so gravity of magnitude g contributes -g to the
acceleration of every arm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

# CODATA 2018 values.
HBAR = 1.054571817e-34          # J s
ATOMIC_MASS_UNIT = 1.66053906660e-27  # kg
SPEED_OF_LIGHT = 299792458.0    # m / s

#: Largest fraction of probability that can flow backward for a free
#: nonrelativistic particle with positive momentum (Bracken-Melloy bound).
#: Reporting/reference only; never used in a computation path.
BRACKEN_MELLOY_BOUND = 0.0384517


class DomainError(ValueError):
    """An input is outside the physical domain of an operation."""


def derive_oscillator_length(mass: float, trap_frequency: float) -> float:
    """Harmonic-trap ground-state length a = sqrt(hbar / (m * omega))."""
    if mass <= 0.0:
        raise DomainError(f"mass must be positive, got {mass}")
    if trap_frequency <= 0.0:
        raise DomainError(f"trap_frequency must be positive, got {trap_frequency}")
    return math.sqrt(HBAR / (mass * trap_frequency))


def expansion_rate(t: float, trap_frequency: float) -> float:
    """Width growth factor b(t) = sqrt(1 + omega^2 t^2) after trap release."""
    if t < 0.0:
        raise DomainError("time must be nonnegative (sequences only move forward)")
    return math.sqrt(1.0 + (trap_frequency * t) ** 2)


def expansion_rate_derivative(t: float, trap_frequency: float) -> float:
    """db/dt = omega^2 t / b(t)."""
    if t < 0.0:
        raise DomainError("time must be nonnegative")
    return trap_frequency ** 2 * t / math.sqrt(1.0 + (trap_frequency * t) ** 2)


@dataclass(frozen=True)
class CondensateParams:
    """Identity of the released BEC: mass, trap, launch velocity."""

    mass: float                 # kg
    trap_frequency: float       # rad / s
    launch_velocity: float      # m / s, signed, up positive
    oscillator_length: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "oscillator_length",
            derive_oscillator_length(self.mass, self.trap_frequency),
        )


@dataclass(frozen=True)
class Environment:
    """Gravity magnitude (acts downward) and the value of hbar in use."""

    gravity: float = 9.81       # m / s^2, magnitude, >= 0
    hbar: float = HBAR          # J s

    def __post_init__(self):
        if self.gravity < 0.0:
            raise DomainError("gravity must be a nonnegative magnitude")
        if self.hbar <= 0.0:
            raise DomainError("hbar must be positive")


@dataclass(frozen=True)
class TransitionParams:
    """Two-level optical transition driving the pulses."""

    wavelength: float           # m
    ground_energy: float = 0.0  # J
    excited_energy: float | None = None  # J; default hbar * 2 pi c / wavelength above ground
    wavevector_magnitude: float = field(init=False)

    def __post_init__(self):
        if self.wavelength <= 0.0:
            raise DomainError("wavelength must be positive")
        object.__setattr__(self, "wavevector_magnitude", 2.0 * math.pi / self.wavelength)
        if self.excited_energy is None:
            photon = HBAR * 2.0 * math.pi * SPEED_OF_LIGHT / self.wavelength
            object.__setattr__(self, "excited_energy", self.ground_energy + photon)
        if self.excited_energy <= self.ground_energy:
            raise DomainError("excited_energy must exceed ground_energy")

    def recoil_velocity_for(self, mass: float) -> float:
        """Single-photon recoil velocity hbar k / m."""
        return HBAR * self.wavevector_magnitude / mass

    def energy(self, internal_state: int) -> float:
        """Energy of internal state index mu: +1 ground, -1 excited."""
        if internal_state == +1:
            return self.ground_energy
        if internal_state == -1:
            return self.excited_energy
        raise DomainError(f"internal_state must be +1 or -1, got {internal_state}")


@dataclass(frozen=True)
class ReferenceConstants:
    """Documentation-only reference values."""

    bracken_melloy_bound: float = BRACKEN_MELLOY_BOUND


def sr88_params(launch_velocity: float = 0.2,
                trap_frequency: float = 2.0 * math.pi * 70.0) -> CondensateParams:
    """The 88Sr condensate used throughout: 88 u, 2 pi x 70 rad/s trap, 0.2 m/s launch."""
    return CondensateParams(
        mass=88.0 * ATOMIC_MASS_UNIT,
        trap_frequency=trap_frequency,
        launch_velocity=launch_velocity,
    )


def sr88_transition() -> TransitionParams:
    """The 689 nm intercombination line used for the LMT pulses."""
    return TransitionParams(wavelength=689e-9)
