"""Quantum-backflow state preparation of a BEC by large momentum transfer.

Library layout:

* :mod:`qbackflow.model`       — constants, condensate/transition parameters
* :mod:`qbackflow.phaseacc`    — extended-precision phase accumulation
* :mod:`qbackflow.kinematics`  — COM trajectories, action/laser/internal phases
* :mod:`qbackflow.pulses`      — two-level pulse algebra and arm weights
* :mod:`qbackflow.wavefield`   — analytic wavefunctions on spatial grids
* :mod:`qbackflow.observables` — flux, critical density, backflow metrics
* :mod:`qbackflow.oracle`      — independent split-step propagator (validation)
* :mod:`qbackflow.sweep`       — pulse-area / weight sweeps and peak finding
* :mod:`qbackflow.presets`     — shipped scenario configurations
* :mod:`qbackflow.cli`         — JSON-config batch entry point
"""

from .model import (
    BRACKEN_MELLOY_BOUND,
    CondensateParams,
    DomainError,
    Environment,
    TransitionParams,
    sr88_params,
    sr88_transition,
)

__version__ = "0.1.0"

__all__ = [
    "BRACKEN_MELLOY_BOUND",
    "CondensateParams",
    "DomainError",
    "Environment",
    "TransitionParams",
    "sr88_params",
    "sr88_transition",
    "__version__",
]
