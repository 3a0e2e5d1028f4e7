"""Classical arm trajectories under gravity with instantaneous kicks.

Each interferometer arm is a piecewise-ballistic center-of-mass path.
Between pulses position and velocity follow free fall; at a pulse the
velocity jumps by hbar * k_eff / m where k_eff is the signed effective
kick wavenumber (the beam direction folded with the internal state, so
that a pulse with k_eff multiplies the wavefunction by e^{i k_eff x}).

Alongside the path the trajectory accumulates three phase ledgers:

* action phase   : (1/hbar) * integral of the COM Lagrangian,
                   closed form per segment,
* internal phase : -E_mu * dt / hbar per segment, mu toggling at pulses,
* laser phase    : per pulse, mu * phi_L + k_eff * x_c(t) - pi/2
                   (the -pi/2 is the -i prefactor of a resonant pulse).

Phases are kept unreduced in double-double precision; see phaseacc.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .model import CondensateParams, DomainError, Environment, TransitionParams
from .phaseacc import DoubleDouble, PhaseAccumulator, product

GROUND = +1
EXCITED = -1


class OrderingError(ValueError):
    """A pulse was applied before the trajectory's current end."""


class NoEncounterError(RuntimeError):
    """The two arms never meet after the requested time."""

    def __init__(self, msg: str, min_separation: float):
        super().__init__(msg)
        self.min_separation = min_separation


def free_fall_step(position: float, velocity: float, dt: float,
                   g: float) -> tuple[float, float]:
    """Ballistic update over dt: x' = x + v dt - g dt^2 / 2, v' = v - g dt."""
    if dt < 0.0:
        raise DomainError("dt must be nonnegative")
    return position + velocity * dt - 0.5 * g * dt * dt, velocity - g * dt


def action_phase(momentum_after_pulse: float, position_after_pulse: float,
                 dt: float, mass: float, g: float,
                 hbar: float | None = None) -> float:
    """COM action between pulses divided by hbar.

    (1/hbar) [ (P^2/2m - m g x) dt - P g dt^2 + (1/3) m g^2 dt^3 ]
    for an arm that leaves a pulse with momentum P at height x.
    """
    return action_phase_dd(momentum_after_pulse, position_after_pulse,
                           dt, mass, g, hbar).value()


def action_phase_dd(P: float, x: float, dt: float, mass: float, g: float,
                    hbar: float | None = None) -> DoubleDouble:
    """Double-double version of :func:`action_phase`."""
    if dt < 0.0:
        raise DomainError("dt must be nonnegative")
    if hbar is None:
        from .model import HBAR as hbar  # noqa: F811
    acc = product(P, P).div_float(2.0 * mass).mul_float(dt)
    acc = acc.add(product(mass, g, x, dt).neg())
    acc = acc.add(product(P, g, dt, dt).neg())
    acc = acc.add(product(mass, g, g, dt, dt, dt).div_float(3.0))
    return acc.div_float(hbar)


def internal_phase(energy: float, dt: float, hbar: float | None = None) -> float:
    """Phase -E dt / hbar accumulated by an internal state over dt."""
    return internal_phase_dd(energy, dt, hbar).value()


def internal_phase_dd(energy: float, dt: float,
                      hbar: float | None = None) -> DoubleDouble:
    if dt < 0.0:
        raise DomainError("dt must be nonnegative")
    if hbar is None:
        from .model import HBAR as hbar  # noqa: F811
    return product(energy, dt).div_float(hbar).neg()


@dataclass(frozen=True)
class Segment:
    """One ballistic stretch; the last segment of a trajectory is open-ended."""

    start_time: float
    end_time: float             # math.inf for the live segment
    start_position: float
    start_velocity: float
    internal_state: int         # +1 ground, -1 excited


@dataclass(frozen=True)
class ArmTrajectory:
    """Immutable COM path of one arm with accumulated phase ledgers.

    The ledgers cover all *closed* segments (up to the last pulse); use
    :meth:`phases_at` to extend them to an arbitrary later time.
    """

    params: CondensateParams
    env: Environment
    transition: TransitionParams
    segments: tuple[Segment, ...]
    action_phase_total: DoubleDouble
    laser_phase_total: DoubleDouble
    internal_phase_total: DoubleDouble
    kick_count: int = 0
    kick_velocity_total: float = 0.0

    @staticmethod
    def launch(params: CondensateParams, env: Environment,
               transition: TransitionParams, *, position: float = 0.0,
               velocity: float | None = None, time: float = 0.0,
               internal_state: int = GROUND) -> "ArmTrajectory":
        v = params.launch_velocity if velocity is None else velocity
        seg = Segment(time, math.inf, position, v, internal_state)
        zero = DoubleDouble()
        return ArmTrajectory(params, env, transition, (seg,), zero, zero, zero)

    # -- path queries -------------------------------------------------

    def _segment_at(self, t: float) -> Segment:
        if t < self.segments[0].start_time:
            raise DomainError(f"time {t} precedes trajectory start")
        for seg in reversed(self.segments):
            if t >= seg.start_time:
                return seg
        raise AssertionError("unreachable")

    def position(self, t: float) -> float:
        seg = self._segment_at(t)
        x, _ = free_fall_step(seg.start_position, seg.start_velocity,
                              t - seg.start_time, self.env.gravity)
        return x

    def velocity(self, t: float) -> float:
        seg = self._segment_at(t)
        return seg.start_velocity - self.env.gravity * (t - seg.start_time)

    @property
    def end_time(self) -> float:
        return self.segments[-1].start_time

    def internal_state_at(self, t: float) -> int:
        return self._segment_at(t).internal_state

    # -- construction -------------------------------------------------

    def kick(self, pulse_time: float, signed_k: float,
             laser_phase: float = 0.0) -> "ArmTrajectory":
        """Close the live segment at pulse_time and start a kicked one.

        signed_k is the effective kick wavenumber: the velocity jumps by
        hbar * signed_k / m and the internal state toggles.  Accumulates
        the closed segment's action and internal phases and the pulse's
        laser/kick phase.
        """
        last = self.segments[-1]
        if pulse_time < last.start_time:
            raise OrderingError(
                f"pulse at t={pulse_time} precedes trajectory end t={last.start_time}")
        g = self.env.gravity
        m = self.params.mass
        hbar = self.env.hbar
        dt = pulse_time - last.start_time
        x_c, v_c = free_fall_step(last.start_position, last.start_velocity, dt, g)

        action = self.action_phase_total.add(
            action_phase_dd(m * last.start_velocity, last.start_position,
                            dt, m, g, hbar))
        internal = self.internal_phase_total.add(
            internal_phase_dd(self.transition.energy(last.internal_state), dt, hbar))
        mu = last.internal_state
        laser = PhaseAccumulator(self.laser_phase_total)
        laser.add_product(float(mu), laser_phase)
        laser.add_product(signed_k, x_c)
        laser.add(-0.5 * math.pi)

        dv = hbar * signed_k / m
        closed = replace(last, end_time=pulse_time)
        live = Segment(pulse_time, math.inf, x_c, v_c + dv, -mu)
        return ArmTrajectory(self.params, self.env, self.transition,
                             self.segments[:-1] + (closed, live),
                             action, laser.total(), internal,
                             self.kick_count + 1,
                             self.kick_velocity_total + dv)

    # -- phase queries ------------------------------------------------

    def phases_at(self, t: float) -> tuple[DoubleDouble, DoubleDouble, DoubleDouble]:
        """(action, laser, internal) phase totals through time t.

        t must not precede the last pulse; the live segment contributes
        its ballistic action and internal evolution up to t.
        """
        last = self.segments[-1]
        if t < last.start_time:
            raise DomainError("phase query before the last pulse is not supported")
        m = self.params.mass
        dt = t - last.start_time
        action = self.action_phase_total.add(
            action_phase_dd(m * last.start_velocity, last.start_position,
                            dt, m, self.env.gravity, self.env.hbar))
        internal = self.internal_phase_total.add(
            internal_phase_dd(self.transition.energy(last.internal_state),
                              dt, self.env.hbar))
        return action, self.laser_phase_total, internal

    def total_phase_at(self, t: float) -> DoubleDouble:
        a, l, i = self.phases_at(t)
        return a.add(l).add(i)


def apply_momentum_kick(trajectory: ArmTrajectory, pulse_time: float,
                        signed_k: float, mass: float | None = None,
                        laser_phase: float = 0.0) -> ArmTrajectory:
    """Spec-surface alias for :meth:`ArmTrajectory.kick`."""
    if mass is not None and mass != trajectory.params.mass:
        raise DomainError("kick mass must match the trajectory's condensate mass")
    return trajectory.kick(pulse_time, signed_k, laser_phase)


def solve_encounter(free_arm: ArmTrajectory, pulsed_arm: ArmTrajectory,
                    after_time: float, *, position_tol: float = 0.0) -> float:
    """Earliest time >= after_time at which the arm COMs coincide.

    Gravity cancels in the relative coordinate, so after the last pulse
    the separation is linear in time and the root is exact.
    """
    if after_time < max(free_arm.end_time, pulsed_arm.end_time):
        raise DomainError("after_time must not precede the arms' last pulses")
    r = pulsed_arm.position(after_time) - free_arm.position(after_time)
    w = pulsed_arm.velocity(after_time) - free_arm.velocity(after_time)
    scale = max(abs(free_arm.position(after_time)), abs(pulsed_arm.position(after_time)), 1e-30)
    tol = max(position_tol, 1e-12 * scale)
    if abs(r) <= tol:
        return after_time
    if w == 0.0 or (r > 0) == (w > 0):
        raise NoEncounterError(
            f"arms separate after t={after_time}: separation {abs(r):.3e} m, "
            f"relative velocity {w:.3e} m/s", abs(r))
    return after_time - r / w
