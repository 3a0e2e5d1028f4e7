import math

import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from qbackflow.kinematics import (
    EXCITED,
    GROUND,
    ArmTrajectory,
    NoEncounterError,
    OrderingError,
    action_phase,
    action_phase_dd,
    apply_momentum_kick,
    free_fall_step,
    internal_phase,
    solve_encounter,
)
from qbackflow.model import (
    CondensateParams,
    DomainError,
    Environment,
    TransitionParams,
    sr88_params,
    sr88_transition,
)

HBAR = 1.054571817e-34


def _arms(gravity=9.81, launch=0.2):
    params = sr88_params(launch_velocity=launch)
    env = Environment(gravity=gravity)
    tr = sr88_transition()
    free = ArmTrajectory.launch(params, env, tr)
    pulsed = ArmTrajectory.launch(params, env, tr)
    return params, env, tr, free, pulsed


def test_free_fall_step():
    x, v = free_fall_step(1.0, 2.0, 3.0, 9.81)
    assert x == pytest.approx(1.0 + 6.0 - 0.5 * 9.81 * 9.0)
    assert v == pytest.approx(2.0 - 9.81 * 3.0)
    with pytest.raises(DomainError):
        free_fall_step(0.0, 0.0, -1.0, 9.81)


def test_action_phase_matches_lagrangian_integral():
    # (1/hbar) integral of m v^2 / 2 - m g x along the ballistic path.
    m, g, hbar = 2.0, 3.0, 1.5   # synthetic units keep quad well-scaled
    p0, x0, dt = 5.0, -1.0, 0.7

    def lagrangian(t):
        v = p0 / m - g * t
        x = x0 + (p0 / m) * t - 0.5 * g * t * t
        return 0.5 * m * v * v - m * g * x

    expected, _ = quad(lagrangian, 0.0, dt, epsabs=1e-14, epsrel=1e-13)
    assert action_phase(p0, x0, dt, m, g, hbar) == pytest.approx(
        expected / hbar, rel=1e-12)


@settings(max_examples=200)
@given(st.floats(-5e-27, 5e-27), st.floats(-1e-4, 1e-4),
       st.floats(1e-6, 1e-3), st.floats(1e-6, 1e-3), st.floats(0.0, 2.0))
def test_action_additivity(p0, x0, dt1, dt2, g):
    # Splitting a ballistic stretch at an interior point leaves the
    # total action unchanged to 1e-12 rad.  The split state (x1, v1) is
    # rounded to float64, so the achievable absolute agreement scales
    # with the action magnitude; the domain here keeps actions at
    # ~1e3 rad where one ulp of the handoff stays below the budget.
    m = 1.461e-25
    whole = action_phase_dd(p0, x0, dt1 + dt2, m, g, HBAR)
    x1, v1 = free_fall_step(x0, p0 / m, dt1, g)
    first = action_phase_dd(p0, x0, dt1, m, g, HBAR)
    second = action_phase_dd(m * v1, x1, dt2, m, g, HBAR)
    split_total = first.add(second)
    assert abs(split_total.value() - whole.value()) <= 1e-12


@settings(max_examples=100)
@given(st.floats(-1e-24, 1e-24), st.floats(-1e-3, 1e-3),
       st.floats(1e-6, 1e-2), st.floats(1e-6, 1e-2), st.floats(0.0, 10.0))
def test_action_additivity_relative_at_scale(p0, x0, dt1, dt2, g):
    # At interferometer scale (~1e6 rad) additivity holds to a few ulp
    # of the total: the ledger itself adds no error beyond the float64
    # rounding of the handoff state.
    m = 1.461e-25
    whole = action_phase_dd(p0, x0, dt1 + dt2, m, g, HBAR)
    x1, v1 = free_fall_step(x0, p0 / m, dt1, g)
    split_total = action_phase_dd(p0, x0, dt1, m, g, HBAR).add(
        action_phase_dd(m * v1, x1, dt2, m, g, HBAR))
    scale = max(abs(whole.value()), 1.0)
    assert abs(split_total.value() - whole.value()) <= 2e-15 * scale


def test_internal_phase_sign():
    assert internal_phase(2.0 * HBAR, 3.0, HBAR) == pytest.approx(-6.0)
    assert internal_phase(0.0, 5.0, HBAR) == 0.0


def test_trajectory_path_and_kick():
    params, env, tr, free, pulsed = _arms()
    k = tr.wavevector_magnitude
    t1 = 1e-3
    pulsed = pulsed.kick(t1, k, laser_phase=0.4)
    # position continuous, velocity jumps by hbar k / m
    assert pulsed.position(t1) == pytest.approx(free.position(t1), rel=1e-15)
    dv = HBAR * k / params.mass
    assert pulsed.velocity(t1) - free.velocity(t1) == pytest.approx(
        dv, rel=1e-12)
    assert pulsed.internal_state_at(t1) == EXCITED
    assert pulsed.internal_state_at(0.5 * t1) == GROUND
    assert pulsed.kick_count == 1
    assert pulsed.kick_velocity_total == pytest.approx(dv, rel=1e-15)


def test_kick_ordering_enforced():
    _, _, tr, _, pulsed = _arms()
    pulsed = pulsed.kick(1e-3, tr.wavevector_magnitude)
    with pytest.raises(OrderingError):
        pulsed.kick(0.5e-3, tr.wavevector_magnitude)


def test_phase_query_before_last_pulse_rejected():
    _, _, tr, _, pulsed = _arms()
    pulsed = pulsed.kick(1e-3, tr.wavevector_magnitude)
    with pytest.raises(DomainError):
        pulsed.phases_at(0.5e-3)


def test_phases_at_incremental_consistency():
    # Accumulating through a kick equals querying the pre-kick ledger at
    # the kick time plus the pulse terms.
    params, env, tr, _, pulsed = _arms()
    k = tr.wavevector_magnitude
    t1, phi = 1e-3, 0.7
    before_action, before_laser, before_internal = pulsed.phases_at(t1)
    kicked = pulsed.kick(t1, k, laser_phase=phi)
    assert kicked.action_phase_total.value() == pytest.approx(
        before_action.value(), rel=1e-14)
    assert kicked.internal_phase_total.value() == pytest.approx(
        before_internal.value(), rel=1e-14, abs=1e-20)
    x_c = pulsed.position(t1)
    expected_laser = GROUND * phi + k * x_c - 0.5 * math.pi
    assert kicked.laser_phase_total.value() == pytest.approx(
        expected_laser, rel=1e-12)


def test_apply_momentum_kick_alias():
    params, _, tr, _, pulsed = _arms()
    k = tr.wavevector_magnitude
    a = apply_momentum_kick(pulsed, 1e-3, k, mass=params.mass)
    b = pulsed.kick(1e-3, k)
    assert a.velocity(2e-3) == b.velocity(2e-3)
    with pytest.raises(DomainError):
        apply_momentum_kick(pulsed, 1e-3, k, mass=2.0 * params.mass)


def test_solve_encounter_exact_linear_root():
    _, _, tr, free, pulsed = _arms()
    k = tr.wavevector_magnitude
    pulsed = pulsed.kick(0.0, k).kick(1e-3, -2 * k)
    t = solve_encounter(free, pulsed, pulsed.end_time)
    assert t > 1e-3
    assert abs(pulsed.position(t) - free.position(t)) <= 1e-12 * abs(
        free.position(t))


def test_solve_encounter_gravity_invariant():
    # Gravity cancels in the relative coordinate: identical pulse
    # sequences meet at the same time for any g.
    times = {}
    for g in (0.0, 2.0, 9.81):
        _, _, tr, free, pulsed = _arms(gravity=g, launch=0.05)
        k = tr.wavevector_magnitude
        pulsed = pulsed.kick(0.0, k).kick(1e-3, -2 * k)
        times[g] = solve_encounter(free, pulsed, pulsed.end_time)
    ref = times[9.81]
    assert times[0.0] == pytest.approx(ref, rel=1e-12)
    assert times[2.0] == pytest.approx(ref, rel=1e-12)


def test_no_encounter_reports_min_separation():
    _, _, tr, free, pulsed = _arms()
    k = tr.wavevector_magnitude
    pulsed = pulsed.kick(0.0, k)  # arms separate forever
    t0 = 1e-3
    with pytest.raises(NoEncounterError) as err:
        solve_encounter(free, pulsed, t0)
    expected = abs(pulsed.position(t0) - free.position(t0))
    assert err.value.min_separation == pytest.approx(expected, rel=1e-12)


def test_reference_sequence_frozen_calibration():
    # The shipped reference sequence is regression-locked: encounter
    # time, velocity difference (12 recoils) and the free arm's own
    # velocity at the encounter.
    from qbackflow.cli import build_trajectories, parse_config
    from qbackflow.presets import (
        REFERENCE_DELTA_V_M_PER_S,
        REFERENCE_ENCOUNTER_TIME_S,
        REFERENCE_FREE_VELOCITY_M_PER_S,
        REFERENCE_RECOIL_COUNT,
        reference_config,
    )

    sc = parse_config(reference_config(0.6 * math.pi))
    free, pulsed = build_trajectories(sc)
    t_f = solve_encounter(free, pulsed, pulsed.end_time)
    assert t_f == pytest.approx(REFERENCE_ENCOUNTER_TIME_S, rel=1e-12)
    dv = pulsed.velocity(t_f) - free.velocity(t_f)
    assert dv == pytest.approx(REFERENCE_DELTA_V_M_PER_S, rel=1e-12)
    v_r = sc.transition.recoil_velocity_for(sc.params.mass)
    assert dv == pytest.approx(REFERENCE_RECOIL_COUNT * v_r, rel=1e-12)
    assert free.velocity(t_f) == pytest.approx(
        REFERENCE_FREE_VELOCITY_M_PER_S, abs=1e-9)
    assert pulsed.kick_count == 1 + 38 + 49
