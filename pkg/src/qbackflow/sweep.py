"""Parameter sweeps over splitting-pulse area and real arm weights.

The expensive grid work (envelope R, phase gradient grad(theta), beat
fringes) is weight-independent, so one EncounterState is precomputed and
every sample only recombines a handful of large arrays:

    (m/hbar) J = K0 + |c_b|^2 Kq + Re(w) K2 - Im(w) K3,
    w = c_f* c_b  (the beat phase theta_b - theta_f is folded into K2/K3)

with K0 = grad(theta) R^2, Kq = q R^2, K2 = (2 grad(theta) + q) R^2 cos,
K3 = (2 grad(theta) + q) R^2 sin.

Phase convention for the pulse-area sweep: the splitting pulse's laser
phase is a free experimental knob that only offsets the beat fringe, so
samples use the canonical weights (|cos(A/2)|, -i |sin(A/2)|).  This
fixes the fringe offset across the sweep and makes the backflow rate an
exact function of the populations, symmetric about A = pi to rounding.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .ioutil import atomic_write_text
from .model import DomainError
from .pulses import ArmAmplitudes, real_weights
from .wavefield import EncounterState

#: Golden-section refinement stops when the bracket shrinks below this
#: fraction of the sweep range.
REFINE_FRACTION = 1e-4

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

VARIABLES = ("pulse_area", "real_cb")


@dataclass(frozen=True)
class SweepSpec:
    variable: str            # "pulse_area" | "real_cb"
    lo: float
    hi: float
    n_samples: int

    def __post_init__(self):
        if self.variable not in VARIABLES:
            raise DomainError(f"unknown sweep variable {self.variable!r}")
        if self.n_samples < 2:
            raise DomainError("n_samples must be >= 2")
        if not self.lo < self.hi:
            raise DomainError("sweep range must satisfy lo < hi")
        if self.variable == "pulse_area" and not (
                0.0 <= self.lo and self.hi <= 4.0 * math.pi + 1e-12):
            raise DomainError("pulse_area range must lie within [0, 4 pi]")
        if self.variable == "real_cb" and not (0.0 <= self.lo and self.hi <= 1.0):
            raise DomainError("real_cb range must lie within [0, 1]")

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n_samples)


@dataclass(frozen=True)
class SweepSample:
    value: float
    backflow_rate: float             # m/s
    rho_crit_max_fraction: float
    density_min_fraction: float


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    samples: tuple[SweepSample, ...]
    argmax_value: float              # grid argmax (ties -> smaller value)
    max_backflow_rate: float
    refined_argmax_value: float      # golden-section refinement
    refined_max_backflow_rate: float

    def rates(self) -> np.ndarray:
        return np.array([s.backflow_rate for s in self.samples])

    def to_csv(self, path: str) -> None:
        rows = "".join(
            f"{s.value:.17g},{s.backflow_rate:.17g},"
            f"{s.rho_crit_max_fraction:.17g},{s.density_min_fraction:.17g}\n"
            for s in self.samples)
        atomic_write_text(
            path, "value,backflow_rate_m_per_s,rho_crit_max,density_min\n" + rows)

    def summary(self) -> dict:
        return {
            "variable": self.spec.variable,
            "range": [self.spec.lo, self.spec.hi],
            "n_samples": self.spec.n_samples,
            "argmax_value": self.argmax_value,
            "max_backflow_rate_m_per_s": self.max_backflow_rate,
            "refined_argmax_value": self.refined_argmax_value,
            "refined_max_backflow_rate_m_per_s": self.refined_max_backflow_rate,
        }

    def to_json(self, path: str) -> None:
        atomic_write_text(path, json.dumps(self.summary(), indent=2) + "\n")


def canonical_pulse_area_weights(pulse_area: float) -> ArmAmplitudes:
    """Sweep weights (|cos(A/2)|, -i |sin(A/2)|); see module docstring."""
    if not 0.0 <= pulse_area <= 4.0 * math.pi + 1e-12:
        raise DomainError("pulse_area must lie in [0, 4 pi]")
    return ArmAmplitudes(abs(math.cos(0.5 * pulse_area)),
                         -1j * abs(math.sin(0.5 * pulse_area)))


class SweepEngine:
    """Weight-independent precompute plus cheap per-sample evaluation."""

    def __init__(self, state: EncounterState, *,
                 center_window_fringes: float = 4.0):
        self.state = state
        grid = state.grid
        r2 = state.R_profile ** 2
        gt = state.theta_gradient_profile
        q = state.q
        u = grid.offsets()
        phase = q * u + state.delta_theta
        cos_p = np.cos(phase)
        sin_p = np.sin(phase)
        big = (2.0 * gt + q) * r2
        self._k0 = gt * r2
        self._kq = q * r2
        self._k2 = big * cos_p
        self._k3 = big * sin_p
        self._dx = grid.spacing
        self._ht_over_m = state.hbar / state.mass
        self._work = np.empty_like(r2)

        # Critical-density base profile q/(q+2 grad theta) R^2, restricted
        # to where the envelope carries weight (tails excluded as in
        # observables.report).
        from .observables import SUPPORT_DENSITY_FRACTION
        denom = q + 2.0 * gt
        support = (denom != 0.0) & (r2 >= SUPPORT_DENSITY_FRACTION * r2.max())
        with np.errstate(divide="ignore", invalid="ignore"):
            base = np.where(denom == 0.0, np.nan, q / denom * r2)
        valid = base[support]
        self._rho_base_max = float(valid.max()) if valid.size else float("nan")
        self._rho_base_min = float(valid.min()) if valid.size else float("nan")

        # Central window (a few fringes around x_c) for the density
        # extrema; the envelope is flat there so the window maximum is
        # the global density maximum to high accuracy.
        if q != 0.0:
            window = center_window_fringes * 2.0 * math.pi / abs(q)
        else:
            window = grid.half_width
        half_bins = min(grid.n_points // 2,
                        max(1, int(window / grid.spacing)))
        c = grid.n_points // 2
        sl = slice(c - half_bins, c + half_bins + 1)
        self._r2_win = r2[sl]
        self._p_win = (r2 * cos_p)[sl]
        self._q_win = (r2 * sin_p)[sl]
        # Inner window: the dip nearest x_c is searched over +-2 fringes,
        # matching observables.report.
        inner_bins = max(1, half_bins // 2)
        isl = slice(half_bins - inner_bins, half_bins + inner_bins + 1)
        self._inner = isl

    # -- per-sample metrics -------------------------------------------

    def backflow_rate(self, weights: ArmAmplitudes) -> float:
        w = np.conj(weights.c_f) * weights.c_b
        cb2 = abs(weights.c_b) ** 2
        work = self._work
        np.multiply(self._kq, cb2, out=work)
        work += self._k0
        if w.real != 0.0:
            work += w.real * self._k2
        if w.imag != 0.0:
            work -= w.imag * self._k3
        np.negative(work, out=work)
        np.maximum(work, 0.0, out=work)
        total = float(work.sum()) - 0.5 * float(work[0] + work[-1])
        return self._ht_over_m * self._dx * total

    def density_metrics(self, weights: ArmAmplitudes) -> tuple[float, float]:
        """(rho_crit_max_fraction, density_min_fraction) for one sample."""
        w = np.conj(weights.c_f) * weights.c_b
        psi2 = self._r2_win + 2.0 * (w.real * self._p_win - w.imag * self._q_win)
        peak = float(psi2.max())
        contrast = abs(weights.c_f) ** 2 - abs(weights.c_b) ** 2
        rho_max = contrast * (self._rho_base_max if contrast >= 0.0
                              else self._rho_base_min)
        inner = psi2[self._inner]
        mins = np.flatnonzero((inner[1:-1] < inner[:-2])
                              & (inner[1:-1] <= inner[2:])) + 1
        if len(mins):
            mid = (len(inner) - 1) // 2
            density_min = float(inner[mins[np.argmin(np.abs(mins - mid))]])
        else:
            density_min = float(inner.min())
        return rho_max / peak, density_min / peak

    def sample(self, value: float, weights: ArmAmplitudes) -> SweepSample:
        rho_frac, dmin_frac = self.density_metrics(weights)
        return SweepSample(value, self.backflow_rate(weights),
                           rho_frac, dmin_frac)

    # -- sweeps ---------------------------------------------------------

    def _run(self, spec: SweepSpec, weights_of) -> SweepResult:
        samples = tuple(self.sample(float(v), weights_of(float(v)))
                        for v in spec.values())
        rates = np.array([s.backflow_rate for s in samples])
        idx = int(np.argmax(rates))  # first occurrence -> smaller value on ties
        argmax_value = samples[idx].value
        max_rate = samples[idx].backflow_rate
        if max_rate > 0.0:
            lo = samples[max(idx - 1, 0)].value
            hi = samples[min(idx + 1, len(samples) - 1)].value
            r_val, r_rate = self._golden_section(
                lo, hi, spec.hi - spec.lo, weights_of)
            if r_rate < max_rate:
                r_val, r_rate = argmax_value, max_rate
        else:
            r_val, r_rate = argmax_value, max_rate
        return SweepResult(spec, samples, argmax_value, max_rate, r_val, r_rate)

    def _golden_section(self, lo: float, hi: float, full_range: float,
                        weights_of) -> tuple[float, float]:
        f = lambda v: self.backflow_rate(weights_of(v))
        a, b = lo, hi
        c = b - _INV_GOLDEN * (b - a)
        d = a + _INV_GOLDEN * (b - a)
        fc, fd = f(c), f(d)
        while (b - a) > REFINE_FRACTION * full_range:
            if fc >= fd:
                b, d, fd = d, c, fc
                c = b - _INV_GOLDEN * (b - a)
                fc = f(c)
            else:
                a, c, fc = c, d, fd
                d = a + _INV_GOLDEN * (b - a)
                fd = f(d)
        v = 0.5 * (a + b)
        return v, f(v)

    def sweep_pulse_area(self, spec: SweepSpec) -> SweepResult:
        if spec.variable != "pulse_area":
            raise DomainError("spec.variable must be 'pulse_area'")
        return self._run(spec, canonical_pulse_area_weights)

    def sweep_real_weights(self, spec: SweepSpec) -> SweepResult:
        if spec.variable != "real_cb":
            raise DomainError("spec.variable must be 'real_cb'")
        return self._run(spec, real_weights)


def sweep_pulse_area(state: EncounterState, spec: SweepSpec) -> SweepResult:
    return SweepEngine(state).sweep_pulse_area(spec)


def sweep_real_weights(state: EncounterState, spec: SweepSpec) -> SweepResult:
    return SweepEngine(state).sweep_real_weights(spec)
