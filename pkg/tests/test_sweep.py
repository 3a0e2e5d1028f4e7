import json
import math

import numpy as np
import pytest

from qbackflow.model import DomainError
from qbackflow.observables import backflow_rate, flux_profile, report
from qbackflow.pulses import real_weights
from qbackflow.sweep import (
    SweepEngine,
    SweepSpec,
    canonical_pulse_area_weights,
    sweep_pulse_area,
    sweep_real_weights,
)


def test_spec_validation():
    with pytest.raises(DomainError):
        SweepSpec("detuning", 0.0, 1.0, 10)
    with pytest.raises(DomainError):
        SweepSpec("pulse_area", 0.0, 1.0, 1)
    with pytest.raises(DomainError):
        SweepSpec("pulse_area", 1.0, 1.0, 10)
    with pytest.raises(DomainError):
        SweepSpec("pulse_area", -0.1, 1.0, 10)
    with pytest.raises(DomainError):
        SweepSpec("real_cb", 0.0, 1.1, 10)
    vals = SweepSpec("real_cb", 0.0, 1.0, 11).values()
    assert vals[0] == 0.0 and vals[-1] == 1.0 and len(vals) == 11


def test_canonical_weights():
    w = canonical_pulse_area_weights(0.6 * math.pi)
    assert w.c_b == abs(math.cos(0.3 * math.pi))
    assert w.c_f == -1j * abs(math.sin(0.3 * math.pi))
    # populations match the splitting pulse for any area
    for area in (0.2, 1.0, 2.5, 4.0, 6.0):
        w = canonical_pulse_area_weights(area)
        assert abs(w.c_b) == pytest.approx(abs(math.cos(0.5 * area)))
        assert abs(w.c_f) == pytest.approx(abs(math.sin(0.5 * area)))
    with pytest.raises(DomainError):
        canonical_pulse_area_weights(-0.1)


def test_engine_matches_direct_evaluation(reduced_ctx):
    # The engine's precomputed-kernel rate equals the straightforward
    # flux-profile integral for arbitrary weights.
    state = reduced_ctx.state
    engine = SweepEngine(state)
    for w in (canonical_pulse_area_weights(0.75 * math.pi),
              real_weights(0.3), real_weights(0.9), state.weights):
        direct = backflow_rate(flux_profile(state, w), state.grid)
        assert engine.backflow_rate(w) == pytest.approx(
            direct, rel=1e-12, abs=1e-300)


def test_engine_density_metrics_match_report(reduced_ctx):
    state = reduced_ctx.state
    engine = SweepEngine(state)
    w = state.weights
    rho_frac, dmin_frac = engine.density_metrics(w)
    rep = report(state, w)
    assert rho_frac == pytest.approx(rep.rho_crit_max_fraction, rel=1e-9)
    assert dmin_frac == pytest.approx(rep.density_min_fraction, rel=1e-9)


def test_sweep_result_shape_and_refinement(reduced_ctx):
    spec = SweepSpec("pulse_area", 0.0, 2.0 * math.pi, 41)
    res = sweep_pulse_area(reduced_ctx.state, spec)
    assert len(res.samples) == 41
    assert res.max_backflow_rate == max(s.backflow_rate for s in res.samples)
    assert res.refined_max_backflow_rate >= res.max_backflow_rate
    lo = res.argmax_value - spec.values()[1]
    hi = res.argmax_value + spec.values()[1]
    assert lo <= res.refined_argmax_value <= hi


def test_sweep_variable_mismatch_rejected(reduced_ctx):
    engine = SweepEngine(reduced_ctx.state)
    with pytest.raises(DomainError):
        engine.sweep_pulse_area(SweepSpec("real_cb", 0.0, 1.0, 5))
    with pytest.raises(DomainError):
        engine.sweep_real_weights(SweepSpec("pulse_area", 0.0, 1.0, 5))


def test_real_weight_sweep_monotone_edges(sweep_ctx):
    res = sweep_real_weights(sweep_ctx.state,
                             SweepSpec("real_cb", 0.0, 1.0, 21))
    rates = res.rates()
    assert rates[0] == 0.0     # c_b = 0: free arm only
    assert rates[-1] == 0.0    # c_b = 1: LMT arm only


def test_csv_and_json_outputs(tmp_path, reduced_ctx):
    res = sweep_real_weights(reduced_ctx.state,
                             SweepSpec("real_cb", 0.0, 1.0, 5))
    csv_path = tmp_path / "sweep.csv"
    json_path = tmp_path / "sweep.json"
    res.to_csv(str(csv_path))
    res.to_json(str(json_path))
    lines = csv_path.read_text().strip().split("\n")
    assert lines[0] == "value,backflow_rate_m_per_s,rho_crit_max,density_min"
    assert len(lines) == 6
    doc = json.loads(json_path.read_text())
    assert doc["variable"] == "real_cb"
    assert doc["n_samples"] == 5
    assert doc["max_backflow_rate_m_per_s"] == res.max_backflow_rate
