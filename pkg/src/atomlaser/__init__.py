"""Atom-laser outcoupling from two tunnel-coupled condensates into a 1D continuum.

The package simulates two macroscopically occupied trap modes (a lasing mode
``A`` and a pumping mode ``B``) coupled to each other by tunneling and to a
band of free-space modes by an outcoupling field.  The continuum is resolved
explicitly as a uniform frequency grid, so the same integrator covers both the
weak-outcoupling regime, where mode ``A`` decays at an essentially constant
rate, and the strong-outcoupling regime, where the discretized band bends the
decay into bound-state oscillations, spectral dips, and population revivals.

All frequencies are angular (rad/s, written ``s^-1`` throughout); energies in
dynamical expressions are expressed as angular frequencies unless a quantity
is explicitly suffixed ``_J`` (joules).

Public entry points:

* :mod:`atomlaser.params` -- physical parameters and derived scales,
* :mod:`atomlaser.continuum` -- the discretized outcoupling band,
* :mod:`atomlaser.dynamics` -- mean-field integration of the coupled modes,
* :mod:`atomlaser.observables` -- populations, phase, regime classifier, spectra,
* :mod:`atomlaser.oracles` -- independent cross-checks for testing,
* :mod:`atomlaser.sweep` -- parameter grids with summary extraction,
* :mod:`atomlaser.cli` -- the ``atomlaser`` command-line front end.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .params import (
    HBAR,
    SODIUM_MASS,
    SODIUM_SCATTERING_LENGTH,
    DerivedParams,
    PhysicalParams,
    ValidationCheck,
    ValidationReport,
    derive,
    josephson_coupling,
    validate,
)
from .continuum import (
    DiscretizedContinuum,
    compute_shift,
    density_of_states,
    discretize,
    spectral_response,
)
from .dynamics import (
    EtaSchedule,
    IntegrationError,
    PulseSchedule,
    SystemState,
    Trajectory,
    initial_state,
    integrate,
    markovian_reference,
    rhs,
)
from .observables import (
    JOSEPHSON,
    SELF_TRAPPING,
    DipInfo,
    PeakInfo,
    Populations,
    RegimeRecord,
    SpectrumAnalysis,
    classify,
    detect_dips,
    detect_peaks,
    global_state_ratio,
    hc_envelope,
    populations,
    relative_phase,
    spectrum,
)
from .oracles import (
    OracleResult,
    isolated_closed_form,
    quadrature_oracle,
    reduced_two_mode,
    shift_closed_form,
    upper_incomplete_gamma_neg_half,
)
from .sweep import (
    SUMMARY_NAMES,
    SweepResult,
    SweepRow,
    SweepSpec,
    extract_summary,
    run_sweep,
)

__all__ = [
    "__version__",
    # params
    "HBAR",
    "SODIUM_MASS",
    "SODIUM_SCATTERING_LENGTH",
    "PhysicalParams",
    "DerivedParams",
    "ValidationCheck",
    "ValidationReport",
    "derive",
    "josephson_coupling",
    "validate",
    # continuum
    "DiscretizedContinuum",
    "compute_shift",
    "density_of_states",
    "discretize",
    "spectral_response",
    # dynamics
    "EtaSchedule",
    "IntegrationError",
    "PulseSchedule",
    "SystemState",
    "Trajectory",
    "initial_state",
    "integrate",
    "markovian_reference",
    "rhs",
    # observables
    "JOSEPHSON",
    "SELF_TRAPPING",
    "DipInfo",
    "PeakInfo",
    "Populations",
    "RegimeRecord",
    "SpectrumAnalysis",
    "classify",
    "detect_dips",
    "detect_peaks",
    "global_state_ratio",
    "hc_envelope",
    "populations",
    "relative_phase",
    "spectrum",
    # oracles
    "OracleResult",
    "isolated_closed_form",
    "quadrature_oracle",
    "reduced_two_mode",
    "shift_closed_form",
    "upper_incomplete_gamma_neg_half",
    # sweep
    "SUMMARY_NAMES",
    "SweepResult",
    "SweepRow",
    "SweepSpec",
    "extract_summary",
    "run_sweep",
]
