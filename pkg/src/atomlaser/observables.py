"""Observables derived from states and trajectories.

Populations, relative phase, the Josephson/self-trapping classifier, the
symmetric/antisymmetric global-state population ratio, and the outcoupled-atom
spectrum with peak/dip detection.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import maximum_filter1d, minimum_filter1d
from scipy.signal import find_peaks, peak_widths

from .continuum import DiscretizedContinuum
from .dynamics import SystemState
from .params import DerivedParams

JOSEPHSON = "Josephson"
SELF_TRAPPING = "SelfTrapping"

#: Default peak prominence threshold as a fraction of the global maximum.
PEAK_PROMINENCE_FRAC = 0.02
#: Default dip prominence threshold as a fraction of the global maximum.
#: Calibrated so that interference dark lines are detected while ordinary
#: valleys between well-separated peaks are not.
DIP_PROMINENCE_FRAC = 0.25


@dataclass(frozen=True)
class Populations:
    N_A: float
    N_B: float
    N_C: float
    frac_A: float
    frac_B: float
    frac_C: float


def populations(state: SystemState, n_total: float | None = None) -> Populations:
    """Mode populations N_A = |a|^2, N_B = |b|^2, N_C = sum_j |c_j|^2.

    Fractions are normalized by ``n_total`` when given, otherwise by the
    state's own total norm (the two agree within the integrator drift).
    """
    n_a = abs(state.amp_a) ** 2
    n_b = abs(state.amp_b) ** 2
    n_c = float(np.sum(state.amp_c.real**2 + state.amp_c.imag**2))
    total = n_total if n_total is not None else (n_a + n_b + n_c)
    if total == 0.0:
        return Populations(n_a, n_b, n_c, 0.0, 0.0, 0.0)
    return Populations(n_a, n_b, n_c, n_a / total, n_b / total, n_c / total)


@dataclass(frozen=True)
class RegimeRecord:
    """Oscillation-regime classification of a state.

    regime is "Josephson" exactly when H_c < 1, "SelfTrapping" otherwise, and
    None when the classifier is unavailable (J = 0).
    """

    t: float
    H_c: float
    p_tilde: float
    nu: float
    phi: float
    regime: str | None


def relative_phase(state: SystemState) -> float:
    """arg(conj(<a>)*<b>) in (-pi, pi]."""
    z = np.conj(state.amp_a) * state.amp_b
    return math.atan2(z.imag, z.real)


def classify(
    state: SystemState,
    derived: DerivedParams,
    *,
    n_total: float | None = None,
    p_normalization: str = "total",
) -> RegimeRecord:
    """Evaluate the oscillation-regime functional of a state.

    H_c = (nu/2)*p^2 + sqrt(1 - p^2)*cos(phi) with nu = kappa*N_trap/J and,
    by default, p = (N_A - N_B)/N normalized by the *total* atom number
    (including outcoupled atoms).  ``p_normalization="trapped"`` switches to
    the trapped-only normalization N_trap = N_A + N_B.

    A vanishing tunnel coupling makes the functional undefined; in that case
    the record carries H_c = nan, nu = inf and regime = None rather than
    raising.
    """
    pops = populations(state)
    n_trap = pops.N_A + pops.N_B
    if p_normalization == "total":
        norm = n_total if n_total is not None else (n_trap + pops.N_C)
    elif p_normalization == "trapped":
        norm = n_trap
    else:
        raise ValueError(f"unknown p_normalization {p_normalization!r}")
    p = 0.0 if norm == 0.0 else (pops.N_A - pops.N_B) / norm
    phi = relative_phase(state)
    if derived.J == 0.0:
        return RegimeRecord(t=state.t, H_c=math.nan, p_tilde=p, nu=math.inf, phi=phi, regime=None)
    nu = derived.kappa * n_trap / derived.J
    h_c = nu / 2.0 * p * p + math.sqrt(max(1.0 - p * p, 0.0)) * math.cos(phi)
    regime = JOSEPHSON if h_c < 1.0 else SELF_TRAPPING
    return RegimeRecord(t=state.t, H_c=h_c, p_tilde=p, nu=nu, phi=phi, regime=regime)


def global_state_ratio(alpha0_frac: float, beta0_frac: float, phi0: float) -> float:
    """Initial population ratio of the symmetric to the antisymmetric global state.

    (1 + 2*sqrt(alpha*beta)*cos(phi)) / (1 - 2*sqrt(alpha*beta)*cos(phi));
    a vanishing denominator (equal split at phi = 0) yields math.inf as a
    sentinel, detectable with math.isinf.
    """
    if not 0.0 <= alpha0_frac <= 1.0 or not 0.0 <= beta0_frac <= 1.0:
        raise ValueError("population fractions must lie in [0, 1]")
    cross = 2.0 * math.sqrt(alpha0_frac * beta0_frac) * math.cos(phi0)
    numerator = 1.0 + cross
    denominator = 1.0 - cross
    if denominator == 0.0:
        return math.inf
    return numerator / denominator


@dataclass(frozen=True)
class PeakInfo:
    """A detected spectral peak: position, height, full width at half prominence."""

    omega: float
    height: float
    width: float
    prominence: float
    index: int


@dataclass(frozen=True)
class DipInfo:
    """A detected spectral dip; depth is the prominence of the inverted minimum."""

    omega: float
    depth: float
    index: int


def detect_peaks(
    density: np.ndarray,
    frequencies: np.ndarray | None = None,
    prominence_frac: float = PEAK_PROMINENCE_FRAC,
) -> list[PeakInfo]:
    """Local maxima with prominence above ``prominence_frac`` of the global max.

    The density must live on a uniform grid.  Without ``frequencies`` the
    positions and widths are reported in grid units.  Results are ordered by
    increasing position; equal-height candidates are therefore resolved
    toward lower frequency by construction.
    """
    density = np.asarray(density, dtype=float)
    if density.size == 0 or np.all(density <= 0.0):
        return []
    threshold = prominence_frac * density.max()
    idx, props = find_peaks(density, prominence=threshold)
    if idx.size == 0:
        return []
    widths_bins = peak_widths(density, idx, rel_height=0.5)[0]
    if frequencies is None:
        omegas = idx.astype(float)
        scale = 1.0
    else:
        omegas = np.asarray(frequencies, dtype=float)[idx]
        scale = float(frequencies[1] - frequencies[0]) if len(frequencies) > 1 else 1.0
    return [
        PeakInfo(
            omega=float(omegas[k]),
            height=float(density[idx[k]]),
            width=float(widths_bins[k] * scale),
            prominence=float(props["prominences"][k]),
            index=int(idx[k]),
        )
        for k in range(idx.size)
    ]


def detect_dips(
    density: np.ndarray,
    frequencies: np.ndarray | None = None,
    prominence_frac: float = DIP_PROMINENCE_FRAC,
    peaks: list[PeakInfo] | None = None,
) -> list[DipInfo]:
    """Local minima between the outermost detected peaks.

    A dip must dig below its surroundings by more than ``prominence_frac`` of
    the global density maximum.  Spectra with fewer than two peaks have no
    in-between region and hence no dips.
    """
    density = np.asarray(density, dtype=float)
    if peaks is None:
        peaks = detect_peaks(density, frequencies)
    if len(peaks) < 2:
        return []
    lo = peaks[0].index
    hi = peaks[-1].index
    segment = -density[lo : hi + 1]
    idx, props = find_peaks(segment, prominence=prominence_frac * density.max())
    if idx.size == 0:
        return []
    idx = idx + lo
    if frequencies is None:
        omegas = idx.astype(float)
    else:
        omegas = np.asarray(frequencies, dtype=float)[idx]
    return [
        DipInfo(omega=float(omegas[k]), depth=float(props["prominences"][k]), index=int(idx[k]))
        for k in range(idx.size)
    ]


@dataclass(frozen=True)
class SpectrumAnalysis:
    """Outcoupled-atom distribution over the continuum modes.

    density has units of atoms per s^-1, so epsilon * sum(density) equals the
    outcoupled atom number exactly by construction.  peak_ratio is the height
    of the higher-frequency of the two tallest peaks divided by the height of
    the lower-frequency one (nan when fewer than two peaks were detected).
    """

    omegas: np.ndarray
    density: np.ndarray
    total_outcoupled: float
    peaks: list[PeakInfo]
    dips: list[DipInfo]
    peak_ratio: float


def _ratio_of_tallest(peaks: list[PeakInfo]) -> float:
    if len(peaks) < 2:
        return math.nan
    # Stable sort: ties in height resolve toward lower frequency.
    by_height = sorted(peaks, key=lambda p: (-p.height, p.omega))
    left, right = sorted(by_height[:2], key=lambda p: p.omega)
    return right.height / left.height


def spectrum(
    final_state: SystemState,
    cont: DiscretizedContinuum,
    peak_prominence_frac: float = PEAK_PROMINENCE_FRAC,
    dip_prominence_frac: float = DIP_PROMINENCE_FRAC,
) -> SpectrumAnalysis:
    """Distribution |c_j|^2 / epsilon of the outcoupled atoms with detected features.

    The per-unit-frequency normalization makes the density independent of the
    mode count at fixed cutoff.
    """
    density = (final_state.amp_c.real**2 + final_state.amp_c.imag**2) / cont.epsilon
    peaks = detect_peaks(density, cont.frequencies, peak_prominence_frac)
    dips = detect_dips(density, cont.frequencies, dip_prominence_frac, peaks=peaks)
    total = float(cont.epsilon * np.sum(density))
    return SpectrumAnalysis(
        omegas=cont.frequencies,
        density=density,
        total_outcoupled=total,
        peaks=peaks,
        dips=dips,
        peak_ratio=_ratio_of_tallest(peaks),
    )


def hc_envelope(hc: np.ndarray, window_samples: int) -> tuple[np.ndarray, np.ndarray]:
    """Rolling-extrema envelope (lower, upper) of a classifier time series.

    The construction is a plain moving minimum/maximum over ``window_samples``
    points; it is provided for plotting regime transitions and is not a
    calibrated estimator.
    """
    if window_samples < 1:
        raise ValueError("window_samples must be >= 1")
    upper = maximum_filter1d(hc, size=window_samples, mode="nearest")
    lower = minimum_filter1d(hc, size=window_samples, mode="nearest")
    return lower, upper
