"""Flux, critical density, backflow rate and momentum-space diagnostics.

All profile functions evaluate the factored encounter form: with the
free arm written as R e^{i theta} and the beat wavenumber q, the
combined density and flux are

    |Psi|^2      = R^2 |c_f + c_b e^{i(qu + dtheta)}|^2
    (m/hbar) J   = grad(theta) |Psi|^2 + q R^2 |c_b|^2
                   + q R^2 Re[ c_f* c_b e^{i(qu + dtheta)} ]

with u = x - x_c and dtheta = theta_b - theta_f.  The critical density

    rho_crit = q / (q + 2 grad(theta)) * R^2 * (|c_f|^2 - |c_b|^2)

is the threshold below which a measured density dip signals backflow;
it is negative (backflow impossible) when the free arm is the weaker one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import CondensateParams, DomainError
from .pulses import ArmAmplitudes
from .wavefield import EncounterState, Grid, WaveField

#: Grid points with envelope density below this fraction of its maximum
#: are excluded from reported extrema (far tails carry no signal but the
#: critical-density prefactor can blow up near grad(theta) sign changes).
SUPPORT_DENSITY_FRACTION = 1e-6

#: Window half-width, in fringe wavelengths, for the reported density
#: minimum near the encounter center.
DENSITY_MIN_WINDOW_FRINGES = 2.0


@dataclass(frozen=True)
class BackflowReport:
    """Aggregated single-encounter observables."""

    flux_profile: np.ndarray             # 1/s
    density_profile: np.ndarray          # 1/m
    critical_density_profile: np.ndarray  # 1/m, NaN at singular points
    backflow_rate: float                 # m/s
    backflow_fraction: float             # rate / integral |J| dx
    backflow_interval_count: int
    max_negative_flux: float             # 1/s, min of J (<= 0)
    rho_crit_max_fraction: float         # max rho_crit / max |Psi|^2
    density_min_fraction: float          # local min near x_c / max |Psi|^2
    fringe_wavelength: float             # m, measured peak to peak (NaN if none)
    singular_point_count: int = 0

    def scalars(self) -> dict:
        """JSON-friendly scalar fields."""
        fw = self.fringe_wavelength
        return {
            "backflow_rate_m_per_s": self.backflow_rate,
            "backflow_fraction": self.backflow_fraction,
            "backflow_interval_count": self.backflow_interval_count,
            "max_negative_flux_per_s": self.max_negative_flux,
            "rho_crit_max_fraction": self.rho_crit_max_fraction,
            "density_min_fraction": self.density_min_fraction,
            "fringe_wavelength_m": None if math.isnan(fw) else fw,
            "singular_point_count": self.singular_point_count,
        }


@dataclass(frozen=True)
class MomentumSpectrum:
    wavenumbers: np.ndarray      # 1/m, ascending
    spectral_density: np.ndarray  # normalized: sum * dk == 1
    negative_weight: float

    def __post_init__(self):
        if self.negative_weight < 0.0:
            raise DomainError("negative_weight must be nonnegative")


@dataclass(frozen=True)
class ClassicalBackflowCheck:
    """The two dimensionless ratios excluding classical backflow.

    plane_wave_ratio = m v a_x / hbar must be large (the packet behaves
    like a plane wave of definite positive momentum); spreading_ratio =
    a_x omega / v must be small (spreading is slow against the drift).
    """

    plane_wave_ratio: float
    spreading_ratio: float
    plane_wave_threshold: float = 100.0
    spreading_threshold: float = 0.1
    passed: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "passed",
            self.plane_wave_ratio >= self.plane_wave_threshold
            and self.spreading_ratio <= self.spreading_threshold)


def _beat(state: EncounterState, weights: ArmAmplitudes) -> np.ndarray:
    u = state.grid.offsets()
    return weights.c_f + weights.c_b * np.exp(
        1j * (state.q * u + state.delta_theta))


def density_profile(state: EncounterState,
                    weights: ArmAmplitudes | None = None) -> np.ndarray:
    weights = state.weights if weights is None else weights
    return state.R_profile ** 2 * np.abs(_beat(state, weights)) ** 2


def flux_profile(state: EncounterState,
                 weights: ArmAmplitudes | None = None) -> np.ndarray:
    """Probability flux J(x) of the combined state, in 1/s."""
    weights = state.weights if weights is None else weights
    r2 = state.R_profile ** 2
    beat = _beat(state, weights)
    psi2 = r2 * np.abs(beat) ** 2
    cross = np.conj(weights.c_f) * weights.c_b * np.exp(
        1j * (state.q * state.grid.offsets() + state.delta_theta))
    j = (state.theta_gradient_profile * psi2
         + state.q * r2 * abs(weights.c_b) ** 2
         + state.q * r2 * cross.real)
    return (state.hbar / state.mass) * j


def critical_density_profile(state: EncounterState,
                             weights: ArmAmplitudes | None = None
                             ) -> np.ndarray:
    """rho_crit(x); NaN marks singular points where q + 2 grad(theta) = 0."""
    weights = state.weights if weights is None else weights
    denom = state.q + 2.0 * state.theta_gradient_profile
    contrast = abs(weights.c_f) ** 2 - abs(weights.c_b) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        rho = np.where(denom == 0.0, np.nan,
                       state.q / denom * state.R_profile ** 2 * contrast)
    return rho


def backflow_rate(flux: np.ndarray, grid: Grid) -> float:
    """Area of the flux profile below zero (trapezoidal), in m/s."""
    return float(np.trapezoid(np.maximum(-flux, 0.0), dx=grid.spacing))


def flux_finite_difference(field: WaveField, mass: float,
                           hbar: float) -> np.ndarray:
    """(hbar/m) Im(Psi* dPsi/dx) by 4th-order central differences.

    The two points at each edge, where the stencil does not fit, are NaN.
    """
    psi = field.amplitudes
    h = field.grid.spacing
    out = np.full(len(psi), np.nan)
    d = (-psi[4:] + 8.0 * psi[3:-1] - 8.0 * psi[1:-3] + psi[:-4]) / (12.0 * h)
    out[2:-2] = (hbar / mass) * np.imag(np.conj(psi[2:-2]) * d)
    return out


def momentum_spectrum(field: WaveField, *,
                      norm_tolerance: float = 1e-3,
                      edge_weight_limit: float = 1e-9) -> MomentumSpectrum:
    """Normalized |<k|Psi>|^2 on the grid-consistent wavenumber axis.

    Raises on an unnormalized field and on aliasing (non-negligible
    spectral weight in the outermost 2% of wavenumber bins, meaning a
    plane-wave component reached the Nyquist wavenumber).
    """
    n = field.grid.n_points
    dx = field.grid.spacing
    if abs(field.norm() - 1.0) > norm_tolerance:
        raise DomainError(f"field norm {field.norm()} is not 1")
    spectrum = np.fft.fftshift(np.fft.fft(field.amplitudes))
    k = 2.0 * math.pi * np.fft.fftshift(np.fft.fftfreq(n, d=dx))
    density = np.abs(spectrum) ** 2
    dk = k[1] - k[0]
    total = float(density.sum() * dk)
    density = density / total
    guard = max(2, int(0.02 * n))
    edge = float((density[:guard].sum() + density[-guard:].sum()) * dk)
    if edge > edge_weight_limit:
        raise DomainError(
            f"aliasing: spectral weight {edge:.3e} within 2% of the Nyquist "
            f"wavenumber {k[-1]:.3e} 1/m; refine the grid spacing")
    negative = float(density[k < 0.0].sum() * dk)
    return MomentumSpectrum(k, density, negative)


def classical_backflow_check(params: CondensateParams, velocity: float,
                             plane_wave_threshold: float = 100.0,
                             spreading_threshold: float = 0.1
                             ) -> ClassicalBackflowCheck:
    """Diagnose whether apparent backflow could be merely classical."""
    if velocity < 0.0:
        raise DomainError("velocity must be nonnegative")
    from .model import HBAR
    a = params.oscillator_length
    r1 = params.mass * velocity * a / HBAR
    r2 = math.inf if velocity == 0.0 else a * params.trap_frequency / velocity
    return ClassicalBackflowCheck(r1, r2, plane_wave_threshold,
                                  spreading_threshold)


def _interval_count(mask: np.ndarray) -> int:
    if not mask.any():
        return 0
    m = mask.astype(np.int8)
    return int(m[0]) + int(np.count_nonzero(np.diff(m) == 1))


def _measure_fringe_wavelength(density: np.ndarray, grid: Grid) -> float:
    """Distance between the two interior density maxima nearest center."""
    interior = (density[1:-1] > density[:-2]) & (density[1:-1] >= density[2:])
    peaks = np.flatnonzero(interior) + 1
    if len(peaks) < 2:
        return float("nan")
    center = grid.n_points // 2
    order = np.argsort(np.abs(peaks - center), kind="stable")
    a, b = sorted(peaks[order[:2]])
    if a == b:
        return float("nan")
    return float((b - a) * grid.spacing)


def report(state: EncounterState,
           weights: ArmAmplitudes | None = None) -> BackflowReport:
    """Populate every backflow observable for one encounter."""
    weights = state.weights if weights is None else weights
    flux = flux_profile(state, weights)
    density = density_profile(state, weights)
    rho = critical_density_profile(state, weights)
    grid = state.grid

    peak = float(density.max())
    if peak <= 0.0:
        raise DomainError("combined density vanishes everywhere")

    rate = backflow_rate(flux, grid)
    total = float(np.trapezoid(np.abs(flux), dx=grid.spacing))
    fraction = rate / total if total > 0.0 else 0.0
    neg = flux < 0.0
    max_negative = float(flux.min()) if neg.any() else 0.0

    singular = np.isnan(rho)
    support = state.R_profile ** 2 >= (
        SUPPORT_DENSITY_FRACTION * float((state.R_profile ** 2).max()))
    valid = support & ~singular
    rho_max = float(np.nanmax(rho[valid])) if valid.any() else float("nan")

    # Density minimum nearest the encounter center, within a window of
    # a few fringes (the zoomed-in dip the critical density is compared
    # against).
    if state.q != 0.0:
        window = DENSITY_MIN_WINDOW_FRINGES * 2.0 * math.pi / abs(state.q)
    else:
        window = grid.half_width
    half_bins = min(grid.n_points // 2, max(1, int(window / grid.spacing)))
    center = grid.n_points // 2
    local = density[center - half_bins:center + half_bins + 1]
    inner = (local[1:-1] < local[:-2]) & (local[1:-1] <= local[2:])
    minima = np.flatnonzero(inner) + 1
    if len(minima):
        nearest = minima[np.argmin(np.abs(minima - half_bins))]
        density_min = float(local[nearest])
    else:
        density_min = float(local.min())

    return BackflowReport(
        flux_profile=flux,
        density_profile=density,
        critical_density_profile=rho,
        backflow_rate=rate,
        backflow_fraction=fraction,
        backflow_interval_count=_interval_count(neg),
        max_negative_flux=max_negative,
        rho_crit_max_fraction=rho_max / peak,
        density_min_fraction=density_min / peak,
        fringe_wavelength=_measure_fringe_wavelength(density, grid),
        singular_point_count=int(np.count_nonzero(singular)),
    )
