"""Batch command-line entry point.

Subcommands:

* ``run``      — execute one scenario; write report JSON + profile CSVs.
* ``sweep``    — sweep splitting-pulse area or real weights; write CSV/JSON.
* ``validate`` — cross-check the analytic pipeline against the numerical
                 propagator on the reduced-scale scenario.
* ``presets``  — list shipped configurations or dump one as JSON.

Configuration is a single JSON document with SI, unit-suffixed keys (see
``presets.reference_config`` for a complete example).  Exit codes:
0 success, 2 configuration/validation error, 3 physics/pipeline error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_PIPELINE = 3

__version__ = "0.1.0"


class ConfigError(ValueError):
    """A configuration document failed validation."""


def _get(cfg: dict, key: str, kind, where: str, default=None, required=True):
    if key not in cfg:
        if not required:
            return default
        raise ConfigError(f"{where}: missing required key {key!r}")
    value = cfg[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind):
        raise ConfigError(f"{where}.{key}: expected {kind.__name__}, "
                          f"got {type(value).__name__}")
    return value


def _positive(value: float, where: str) -> float:
    if not value > 0.0:
        raise ConfigError(f"{where}: must be positive, got {value}")
    return value


@dataclass(frozen=True)
class Scenario:
    params: object            # CondensateParams
    env: object               # Environment
    transition: object        # TransitionParams
    split_time: float
    split_area: float
    split_phase: float
    split_sign: int
    weights_mode: str         # "splitting_pulse" | "real_cb"
    real_cb: float | None
    pulse_events: tuple       # ((time_s, sign, laser_phase_rad), ...)
    encounter_auto: bool
    encounter_time: float | None
    grid_cfg: dict
    spectrum_cfg: dict
    output_cfg: dict
    sweep_spec: object | None  # SweepSpec
    raw: dict


def parse_config(cfg: dict) -> Scenario:
    """Validate a configuration document into a Scenario."""
    from .model import DomainError
    try:
        return _parse_config(cfg)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc


def _parse_config(cfg: dict) -> Scenario:
    from .model import CondensateParams, Environment, TransitionParams, sr88_params
    from .sweep import SweepSpec

    if not isinstance(cfg, dict):
        raise ConfigError("configuration root must be a JSON object")

    cond = _get(cfg, "condensate", dict, "config")
    if "preset" in cond:
        if cond["preset"] != "sr88":
            raise ConfigError(f"condensate.preset: unknown {cond['preset']!r}")
        params = sr88_params(
            launch_velocity=_get(cond, "launch_velocity_m_per_s", float,
                                 "condensate", default=0.2, required=False))
    else:
        params = CondensateParams(
            mass=_positive(_get(cond, "mass_kg", float, "condensate"),
                           "condensate.mass_kg"),
            trap_frequency=_positive(
                _get(cond, "trap_frequency_rad_per_s", float, "condensate"),
                "condensate.trap_frequency_rad_per_s"),
            launch_velocity=_get(cond, "launch_velocity_m_per_s", float,
                                 "condensate"))

    env_cfg = _get(cfg, "environment", dict, "config", default={}, required=False)
    env = Environment(gravity=_get(env_cfg, "gravity_m_per_s2", float,
                                   "environment", default=9.81, required=False))

    tr_cfg = _get(cfg, "transition", dict, "config")
    transition = TransitionParams(
        wavelength=_positive(_get(tr_cfg, "wavelength_m", float, "transition"),
                             "transition.wavelength_m"))

    sp = _get(cfg, "splitting_pulse", dict, "config")
    split_time = _get(sp, "time_s", float, "splitting_pulse")
    split_area = _get(sp, "pulse_area_rad", float, "splitting_pulse")
    if not 0.0 <= split_area <= 4.0 * math.pi:
        raise ConfigError("splitting_pulse.pulse_area_rad: must lie in [0, 4 pi]")
    split_phase = _get(sp, "laser_phase_rad", float, "splitting_pulse",
                       default=0.0, required=False)
    split_sign = _get(sp, "sign", int, "splitting_pulse", default=1,
                      required=False)
    if split_sign not in (1, -1):
        raise ConfigError("splitting_pulse.sign: must be 1 or -1")

    w_cfg = _get(cfg, "weights", dict, "config",
                 default={"mode": "splitting_pulse"}, required=False)
    mode = _get(w_cfg, "mode", str, "weights")
    real_cb = None
    if mode == "real_cb":
        real_cb = _get(w_cfg, "cb", float, "weights")
        if not 0.0 <= real_cb <= 1.0:
            raise ConfigError("weights.cb: must lie in [0, 1]")
    elif mode != "splitting_pulse":
        raise ConfigError(f"weights.mode: unknown {mode!r}")

    events = []
    arrays = _get(cfg, "pulse_arrays", list, "config", default=[],
                  required=False)
    for i, arr in enumerate(arrays):
        where = f"pulse_arrays[{i}]"
        if not isinstance(arr, dict):
            raise ConfigError(f"{where}: expected object")
        count = _get(arr, "count", int, where)
        if count < 1:
            raise ConfigError(f"{where}.count: must be >= 1")
        start = _get(arr, "start_s", float, where)
        interval = _positive(_get(arr, "interval_s", float, where),
                             f"{where}.interval_s")
        sign = _get(arr, "sign", int, where)
        if sign not in (1, -1):
            raise ConfigError(f"{where}.sign: must be 1 or -1")
        phase = _get(arr, "laser_phase_rad", float, where, default=0.0,
                     required=False)
        events.extend((start + j * interval, sign, phase)
                      for j in range(count))

    times = [split_time] + [t for t, _, _ in events]
    if any(b <= a for a, b in zip(times, times[1:])):
        raise ConfigError("pulse times must be strictly increasing "
                          "(splitting pulse first)")
    if split_time < 0.0:
        raise ConfigError("splitting_pulse.time_s: must be >= 0")

    enc = _get(cfg, "encounter", dict, "config", default={"auto": True},
               required=False)
    auto = bool(enc.get("auto", "time_s" not in enc))
    enc_time = None
    if not auto:
        enc_time = _get(enc, "time_s", float, "encounter")
        if enc_time <= times[-1]:
            raise ConfigError("encounter.time_s: must follow the last pulse")

    grid_cfg = _get(cfg, "grid", dict, "config", default={}, required=False)
    spectrum_cfg = _get(cfg, "spectrum", dict, "config",
                        default={"enabled": False}, required=False)
    output_cfg = _get(cfg, "output", dict, "config", default={},
                      required=False)

    sweep_spec = None
    if "sweep" in cfg:
        sw = _get(cfg, "sweep", dict, "config")
        rng = _get(sw, "range", list, "sweep")
        if len(rng) != 2:
            raise ConfigError("sweep.range: expected [lo, hi]")
        try:
            sweep_spec = SweepSpec(
                variable=_get(sw, "variable", str, "sweep"),
                lo=float(rng[0]), hi=float(rng[1]),
                n_samples=_get(sw, "n_samples", int, "sweep"))
        except ValueError as exc:
            raise ConfigError(f"sweep: {exc}") from exc

    return Scenario(params, env, transition, split_time, split_area,
                    split_phase, split_sign, mode, real_cb, tuple(events),
                    auto, enc_time, grid_cfg, spectrum_cfg, output_cfg,
                    sweep_spec, cfg)


# -- pipeline -------------------------------------------------------------

@dataclass(frozen=True)
class PipelineContext:
    scenario: Scenario
    free_arm: object
    pulsed_arm: object
    encounter_time: float
    weights: object
    grid: object
    state: object


def build_trajectories(sc: Scenario):
    from .kinematics import ArmTrajectory
    free = ArmTrajectory.launch(sc.params, sc.env, sc.transition)
    pulsed = ArmTrajectory.launch(sc.params, sc.env, sc.transition)
    k = sc.transition.wavevector_magnitude
    pulsed = pulsed.kick(sc.split_time, sc.split_sign * k, sc.split_phase)
    for time, sign, phase in sc.pulse_events:
        pulsed = pulsed.kick(time, sign * k, phase)
    return free, pulsed


def resolve_encounter(sc: Scenario, free, pulsed) -> float:
    if not sc.encounter_auto:
        return sc.encounter_time
    from .kinematics import solve_encounter
    return solve_encounter(free, pulsed, pulsed.end_time)


def make_weights(sc: Scenario):
    from .pulses import PulseSpec, real_weights, splitting_weights
    if sc.weights_mode == "real_cb":
        return real_weights(sc.real_cb)
    return splitting_weights(PulseSpec(
        time=sc.split_time, pulse_area=sc.split_area,
        laser_phase=sc.split_phase, wavevector_sign=sc.split_sign))


def _auto_grid(sc: Scenario, center: float, t_f: float, q: float,
               grid_points: int | None):
    from .model import expansion_rate
    from .wavefield import Grid
    g = sc.grid_cfg
    if "half_width_m" in g and "n_points" in g:
        grid = Grid(center=center,
                    half_width=_positive(float(g["half_width_m"]),
                                         "grid.half_width_m"),
                    n_points=int(g["n_points"]))
    else:
        sigma = sc.params.oscillator_length * expansion_rate(
            t_f, sc.params.trap_frequency)
        factor = float(g.get("half_width_factor", 8.0))
        env_samples = int(g.get("envelope_samples", 50))
        fringe_samples = int(g.get("fringe_samples", 20))
        spacing = sigma / env_samples
        if q != 0.0:
            spacing = min(spacing, 2.0 * math.pi / abs(q) / fringe_samples)
        grid = Grid.auto(center, sigma, beat_wavenumber=None,
                         half_width_factor=factor, max_spacing=spacing)
    if grid_points is not None:
        grid = Grid(center=grid.center, half_width=grid.half_width,
                    n_points=grid_points)
    return grid


def build_state(cfg: dict, grid_points: int | None = None) -> PipelineContext:
    """Run the scenario pipeline up to the analytic encounter state."""
    from .wavefield import encounter_state
    sc = parse_config(cfg)
    free, pulsed = build_trajectories(sc)
    t_f = resolve_encounter(sc, free, pulsed)
    weights = make_weights(sc)
    center = free.position(t_f)
    q = sc.params.mass * (pulsed.velocity(t_f) - free.velocity(t_f)) / sc.env.hbar
    grid = _auto_grid(sc, center, t_f, q, grid_points)
    state = encounter_state(grid, free, pulsed, t_f, weights, sc.params,
                            sc.env, sc.transition)
    return PipelineContext(sc, free, pulsed, t_f, weights, grid, state)


def spectrum_state(ctx: PipelineContext):
    """Encounter state on a wider, spectrum-safe grid (or None)."""
    from .model import expansion_rate, expansion_rate_derivative
    from .wavefield import Grid, encounter_state
    scfg = ctx.scenario.spectrum_cfg
    if not scfg.get("enabled", False):
        return None
    sc = ctx.scenario
    t_f = ctx.encounter_time
    sigma = sc.params.oscillator_length * expansion_rate(
        t_f, sc.params.trap_frequency)
    factor = float(scfg.get("half_width_factor", 6.0))
    half_width = factor * sigma
    m_over_h = sc.params.mass / sc.env.hbar
    b = expansion_rate(t_f, sc.params.trap_frequency)
    bdot = expansion_rate_derivative(t_f, sc.params.trap_frequency)
    k_need = (m_over_h * max(abs(ctx.free_arm.velocity(t_f)),
                             abs(ctx.pulsed_arm.velocity(t_f)))
              + 8.0 / sigma + m_over_h * (bdot / b) * half_width)
    spacing = math.pi / (1.5 * k_need)
    grid = Grid.auto(ctx.grid.center, sigma, half_width_factor=factor,
                     max_spacing=spacing)
    return encounter_state(grid, ctx.free_arm, ctx.pulsed_arm, t_f,
                           ctx.weights, sc.params, sc.env, sc.transition)


def _spectrum_block(ctx: PipelineContext) -> dict | None:
    import numpy as np
    from .observables import momentum_spectrum
    from .wavefield import combined_from_state
    st = spectrum_state(ctx)
    if st is None:
        return None
    spec = momentum_spectrum(combined_from_state(st))
    d = spec.spectral_density
    floor = 1e-3 * float(d.max())
    peaks = np.flatnonzero((d[1:-1] > d[:-2]) & (d[1:-1] >= d[2:])
                           & (d[1:-1] > floor)) + 1
    top = peaks[np.argsort(d[peaks])[::-1][:2]]
    m_over_h = ctx.scenario.params.mass / ctx.scenario.env.hbar
    return {
        "negative_weight": spec.negative_weight,
        "wavenumber_bin_per_m": float(spec.wavenumbers[1] - spec.wavenumbers[0]),
        "peak_wavenumbers_per_m": sorted(float(spec.wavenumbers[i]) for i in top),
        "expected_peak_wavenumbers_per_m": sorted([
            m_over_h * ctx.free_arm.velocity(ctx.encounter_time),
            m_over_h * ctx.pulsed_arm.velocity(ctx.encounter_time)]),
        "_spectrum": spec,
    }


def run_scenario(cfg: dict, out_dir: str | None = None,
                 grid_points: int | None = None):
    """Full run: report + optional spectrum (+ artifacts when out_dir given)."""
    import numpy as np
    from .ioutil import atomic_write_text
    from .observables import classical_backflow_check, report

    ctx = build_state(cfg, grid_points)
    rep = report(ctx.state)
    check = classical_backflow_check(ctx.scenario.params,
                                     abs(ctx.scenario.params.launch_velocity))
    spec_block = _spectrum_block(ctx)

    doc = {
        "report": rep.scalars(),
        "encounter": {
            "time_s": ctx.encounter_time,
            "position_m": ctx.grid.center,
            "free_velocity_m_per_s": ctx.free_arm.velocity(ctx.encounter_time),
            "pulsed_velocity_m_per_s": ctx.pulsed_arm.velocity(ctx.encounter_time),
            "delta_v_m_per_s": (ctx.pulsed_arm.velocity(ctx.encounter_time)
                                - ctx.free_arm.velocity(ctx.encounter_time)),
            "beat_wavenumber_per_m": ctx.state.q,
        },
        "weights": {
            "c_b": [ctx.weights.c_b.real, ctx.weights.c_b.imag],
            "c_f": [ctx.weights.c_f.real, ctx.weights.c_f.imag],
        },
        "classical_check": {
            "plane_wave_ratio": check.plane_wave_ratio,
            "spreading_ratio": check.spreading_ratio,
            "passed": check.passed,
        },
        "provenance": {
            "package_version": __version__,
            "config": ctx.scenario.raw,
            "grid": {"center_m": ctx.grid.center,
                     "half_width_m": ctx.grid.half_width,
                     "n_points": ctx.grid.n_points,
                     "spacing_m": ctx.grid.spacing},
        },
    }
    if spec_block is not None:
        spectrum = spec_block.pop("_spectrum")
        doc["momentum_spectrum"] = spec_block

    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        atomic_write_text(os.path.join(out_dir, "report.json"),
                          json.dumps(doc, indent=2) + "\n")
        window = float(ctx.scenario.output_cfg.get(
            "profile_window_m", ctx.grid.half_width))
        u = ctx.grid.offsets()
        sel = np.abs(u) <= window
        rows = np.column_stack([
            ctx.grid.positions()[sel], rep.flux_profile[sel],
            rep.density_profile[sel], rep.critical_density_profile[sel]])
        buf = ["x_m,flux_per_s,density_per_m,rho_crit_per_m"]
        buf.extend(f"{r[0]:.17g},{r[1]:.17g},{r[2]:.17g},{r[3]:.17g}"
                   for r in rows)
        atomic_write_text(os.path.join(out_dir, "profiles.csv"),
                          "\n".join(buf) + "\n")
        if spec_block is not None:
            # only bins carrying weight; the empty far tails would bloat
            # the CSV by orders of magnitude
            keep = spectrum.spectral_density > 1e-15 * spectrum.spectral_density.max()
            srows = ["k_per_m,density"]
            srows.extend(f"{k:.17g},{v:.17g}" for k, v in
                         zip(spectrum.wavenumbers[keep],
                             spectrum.spectral_density[keep]))
            atomic_write_text(os.path.join(out_dir, "spectrum.csv"),
                              "\n".join(srows) + "\n")
        if ctx.scenario.output_cfg.get("wavefield_dump", False):
            from .wavefield import combined_from_state, wavefield_to_binary
            wavefield_to_binary(combined_from_state(ctx.state),
                                os.path.join(out_dir, "wavefield.bin"))
    return doc, rep, ctx


def run_sweep(cfg: dict, out_dir: str | None = None,
              grid_points: int | None = None):
    from .ioutil import atomic_write_text
    from .sweep import SweepEngine
    ctx = build_state(cfg, grid_points)
    spec = ctx.scenario.sweep_spec
    if spec is None:
        raise ConfigError("config has no 'sweep' section")
    engine = SweepEngine(ctx.state)
    if spec.variable == "pulse_area":
        result = engine.sweep_pulse_area(spec)
    else:
        result = engine.sweep_real_weights(spec)
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        result.to_csv(os.path.join(out_dir, "sweep.csv"))
        summary = result.summary()
        summary["provenance"] = {
            "package_version": __version__,
            "config": ctx.scenario.raw,
            "grid": {"center_m": ctx.grid.center,
                     "half_width_m": ctx.grid.half_width,
                     "n_points": ctx.grid.n_points,
                     "spacing_m": ctx.grid.spacing},
        }
        atomic_write_text(os.path.join(out_dir, "sweep.json"),
                          json.dumps(summary, indent=2) + "\n")
    return result, ctx


# -- validation -----------------------------------------------------------

def oracle_grid_for(ctx: PipelineContext, oracle_points: int):
    """Lab-frame grid holding both arms' full excursions plus envelope."""
    import numpy as np
    from .model import expansion_rate
    from .wavefield import Grid
    sc = ctx.scenario
    t_f = ctx.encounter_time
    sigma_f = sc.params.oscillator_length * expansion_rate(
        t_f, sc.params.trap_frequency)
    span = [ctx.grid.center]
    for arm in (ctx.free_arm, ctx.pulsed_arm):
        for t in np.linspace(0.0, t_f, 64):
            span.append(arm.position(float(t)))
    lo, hi = min(span) - 10.0 * sigma_f, max(span) + 10.0 * sigma_f
    half = max(ctx.grid.center - lo, hi - ctx.grid.center)
    return Grid(center=ctx.grid.center, half_width=half,
                n_points=oracle_points)


def oracle_arm_field(ctx: PipelineContext, trajectory, grid,
                     time_step: float):
    """Propagate one arm numerically, including pulse and internal-state
    scalar phases, so its absolute phase is comparable to the analytic
    evaluation (up to one arm-independent global phase)."""
    import numpy as np
    from .oracle import KickEvent, PropagatorConfig, gaussian_packet, propagate
    from .wavefield import WaveField
    sc = ctx.scenario
    t_f = ctx.encounter_time
    k = sc.transition.wavevector_magnitude
    # Pulses act as -i e^{i mu phi_L} e^{i s k x}; mu is the internal
    # state before the pulse, which toggles from ground at launch.
    kicks = []
    if trajectory.kick_count:
        pulses = [(sc.split_time, sc.split_sign, sc.split_phase)]
        pulses += list(sc.pulse_events)
        mu = +1
        for time, sign, phase in pulses:
            kicks.append(KickEvent(time, sign * k, mu * phase))
            mu = -mu
    config = PropagatorConfig(
        time_step=time_step, grid=grid, mass=sc.params.mass,
        potential="linear_gravity", gravity=sc.env.gravity,
        kick_events=tuple(kicks), hbar=sc.env.hbar,
        trap_frequency=sc.params.trap_frequency)
    initial = gaussian_packet(
        grid, sc.params.oscillator_length, sc.params.launch_velocity,
        center=trajectory.segments[0].start_position, mass=sc.params.mass,
        hbar=sc.env.hbar)
    out = propagate(initial, config, t_f)
    # The internal-state energy is the one scalar the propagator does
    # not model; it differs between the arms, so fold it in exactly.
    _, _, internal = trajectory.phases_at(t_f)
    return WaveField(grid, out.amplitudes * np.exp(1j * internal.mod_two_pi()),
                     t_f)


def oracle_cross_check(cfg: dict, *, time_step: float = 2.5e-7,
                       oracle_points: int = 513) -> dict:
    """Compare the analytic arms and combined state against the
    split-step propagator for a (reduced-scale) scenario.

    Returns per-field (max relative amplitude error, phase spread) pairs.
    """
    from .oracle import compare_fields
    from .wavefield import (WaveField, combine, free_arm_wavefunction,
                            pulsed_arm_wavefunction)

    ctx = build_state(cfg)
    sc = ctx.scenario
    t_f = ctx.encounter_time
    n = round(t_f / time_step)
    if abs(n * time_step - t_f) > 1e-12:
        raise ConfigError("encounter time is not a multiple of time_step; "
                          "pick a scenario with commensurate pulse timing")
    grid = oracle_grid_for(ctx, oracle_points)

    analytic_free = free_arm_wavefunction(grid, t_f, sc.params, sc.env,
                                          sc.transition,
                                          trajectory=ctx.free_arm)
    analytic_pulsed = pulsed_arm_wavefunction(grid, ctx.pulsed_arm, t_f,
                                              sc.params, sc.env, sc.transition)
    analytic_combined = combine(analytic_free, analytic_pulsed, ctx.weights)

    numeric_free = oracle_arm_field(ctx, ctx.free_arm, grid, time_step)
    numeric_pulsed = oracle_arm_field(ctx, ctx.pulsed_arm, grid, time_step)
    numeric_combined = WaveField(
        grid,
        ctx.weights.c_f * numeric_free.amplitudes
        + ctx.weights.c_b * numeric_pulsed.amplitudes, t_f)

    return {
        "free_arm": compare_fields(analytic_free, numeric_free),
        "pulsed_arm": compare_fields(analytic_pulsed, numeric_pulsed),
        "combined": compare_fields(analytic_combined, numeric_combined),
        "encounter_time_s": t_f,
    }


def run_validation(verbose: bool = True) -> bool:
    from .presets import reduced_scale_config
    results = oracle_cross_check(reduced_scale_config())
    ok = True
    for name in ("free_arm", "pulsed_arm", "combined"):
        amp, phase = results[name]
        passed = amp <= 1e-5 and phase <= 1e-5
        ok = ok and passed
        if verbose:
            print(f"{name}: max amplitude error {amp:.3e}, "
                  f"phase spread {phase:.3e} rad "
                  f"[{'ok' if passed else 'FAIL'}]")
    return ok


# -- entry point ----------------------------------------------------------

def _load_config(args) -> dict:
    if getattr(args, "preset", None):
        from .presets import preset_config
        try:
            return preset_config(args.preset)
        except KeyError as exc:
            raise ConfigError(str(exc)) from exc
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                return json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{args.config}: invalid JSON: {exc}") from exc
    raise ConfigError("provide --config PATH or --preset NAME")


def _apply_threads(threads: int | None) -> None:
    if threads is None:
        return
    if threads < 1:
        raise ConfigError("--threads must be >= 1")
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
        os.environ[var] = str(threads)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="qbackflow",
        description="Backflow-state preparation and analysis for "
                    "LMT atom interferometry")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON scenario file")
        p.add_argument("--preset", help="shipped preset name")
        p.add_argument("--out-dir", default=".", help="artifact directory")
        p.add_argument("--grid-points", type=int,
                       help="override the grid point count (odd)")
        p.add_argument("--threads", type=int,
                       help="cap data-parallel worker threads")

    common(sub.add_parser("run", help="run one scenario"))
    common(sub.add_parser("sweep", help="run a parameter sweep"))
    sub.add_parser("validate",
                   help="cross-check analytics against the propagator")
    p_presets = sub.add_parser("presets", help="list or dump presets")
    p_presets.add_argument("--preset", help="dump this preset as JSON")

    args = parser.parse_args(argv)

    try:
        if args.command == "presets":
            from .presets import PRESETS, preset_config
            if args.preset:
                try:
                    print(json.dumps(preset_config(args.preset), indent=2))
                except KeyError as exc:
                    raise ConfigError(str(exc)) from exc
            else:
                for name in sorted(PRESETS):
                    print(name)
            return EXIT_OK

        if args.command == "validate":
            return EXIT_OK if run_validation() else EXIT_PIPELINE

        _apply_threads(args.threads)
        cfg = _load_config(args)
        if args.grid_points is not None and (
                args.grid_points < 3 or args.grid_points % 2 == 0):
            raise ConfigError("--grid-points must be odd and >= 3")
        if args.command == "run":
            doc, rep, ctx = run_scenario(cfg, args.out_dir, args.grid_points)
            print(f"encounter at t = {ctx.encounter_time:.9g} s, "
                  f"delta v = {doc['encounter']['delta_v_m_per_s']:.6g} m/s")
            print(f"backflow rate {rep.backflow_rate:.6g} m/s, "
                  f"rho_crit max {100 * rep.rho_crit_max_fraction:.4g}%, "
                  f"density min {100 * rep.density_min_fraction:.4g}%")
            print(f"artifacts written to {args.out_dir}")
            return EXIT_OK
        if args.command == "sweep":
            result, _ = run_sweep(cfg, args.out_dir, args.grid_points)
            print(f"max backflow rate {result.max_backflow_rate:.6g} m/s "
                  f"at {result.spec.variable} = {result.argmax_value:.6g} "
                  f"(refined {result.refined_argmax_value:.6g})")
            print(f"artifacts written to {args.out_dir}")
            return EXIT_OK
        raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError,) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # physics/pipeline errors
        from .model import DomainError
        kind = "pipeline error"
        if isinstance(exc, DomainError):
            kind = "physics error"
        print(f"{kind}: {exc}", file=sys.stderr)
        return EXIT_PIPELINE


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
