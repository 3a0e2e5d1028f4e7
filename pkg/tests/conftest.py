"""Shared fixtures: the expensive encounter states are built once per session."""

from __future__ import annotations

import math

import pytest

from qbackflow.cli import build_state
from qbackflow.presets import preset_config, reduced_scale_config, reference_config


@pytest.fixture(scope="session")
def reduced_ctx():
    """Reduced-scale pipeline context (fast; shared read-only)."""
    return build_state(reduced_scale_config())


@pytest.fixture(scope="session")
def ref_ctx_06():
    return build_state(preset_config("paper-0.6pi"))


@pytest.fixture(scope="session")
def ref_ctx_075():
    return build_state(preset_config("paper-0.75pi"))


@pytest.fixture(scope="session")
def sweep_ctx():
    """Reference encounter state at the sweep presets' grid resolution."""
    return build_state(preset_config("paper-fig8a"))


@pytest.fixture(scope="session")
def sweep_engine(sweep_ctx):
    from qbackflow.sweep import SweepEngine
    return SweepEngine(sweep_ctx.state)


@pytest.fixture(scope="session")
def fig8a_result(sweep_engine):
    from qbackflow.sweep import SweepSpec
    return sweep_engine.sweep_pulse_area(
        SweepSpec("pulse_area", 0.0, 4.0 * math.pi, 401))


@pytest.fixture(scope="session")
def fig8b_result(sweep_engine):
    from qbackflow.sweep import SweepSpec
    return sweep_engine.sweep_real_weights(SweepSpec("real_cb", 0.0, 1.0, 201))
