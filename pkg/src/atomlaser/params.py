"""Physical inputs and closed-form derived parameters of the two-trap model.

All frequencies in this package are angular frequencies in s^-1 (rad/s),
never lab-frame Hz.  Lengths are metres, masses kilograms, energies joules.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

HBAR = 1.0545718e-34
"""Reduced Planck constant, J*s."""

# Default species: sodium-23, triplet-channel scattering.
SODIUM_MASS = 3.818e-26
SODIUM_SCATTERING_LENGTH = 2.75e-9


@dataclass(frozen=True)
class PhysicalParams:
    """Raw inputs of a single run.

    Attributes:
        mass: Atomic mass in kg.
        scattering_length_tt: s-wave scattering length between trapped
            atoms, in m.
        omega_z: Longitudinal trap frequency in s^-1.
        lambda_ratio: Trap anisotropy omega_z/omega_x (dimensionless).
        eta: Dimensionless separation between the two trapped modes, in
            units of the oscillator length.
        Lambda: Outcoupling strength of the rectangular pulse, s^-2.
        N_total: Total atom number (mean-field, may be non-integer).
        alpha0_frac: Initial population fraction of the lasing mode A.
        beta0_frac: Initial population fraction of the pumping mode B.
        phi0: Initial relative phase arg(<b>/<a>) in rad.
        tau: Pulse and simulation duration in s.
        kappa_override: If not None, forces the per-particle interaction
            rate kappa (s^-1) instead of the closed-form value; set to 0.0
            for interaction-free runs.
    """

    mass: float = SODIUM_MASS
    scattering_length_tt: float = SODIUM_SCATTERING_LENGTH
    omega_z: float = 200.0
    lambda_ratio: float = 0.4
    eta: float = 1.7
    Lambda: float = 100.0
    N_total: float = 100.0
    alpha0_frac: float = 0.7
    beta0_frac: float = 0.3
    phi0: float = 0.0
    tau: float = 10.0
    kappa_override: float | None = None

    def __post_init__(self) -> None:
        numeric = {
            "mass": self.mass,
            "scattering_length_tt": self.scattering_length_tt,
            "omega_z": self.omega_z,
            "lambda_ratio": self.lambda_ratio,
            "eta": self.eta,
            "Lambda": self.Lambda,
            "N_total": self.N_total,
            "alpha0_frac": self.alpha0_frac,
            "beta0_frac": self.beta0_frac,
            "phi0": self.phi0,
            "tau": self.tau,
        }
        for name, value in numeric.items():
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.mass <= 0:
            raise ValueError("mass must be positive")
        if self.scattering_length_tt <= 0:
            raise ValueError("scattering_length_tt must be positive")
        if self.omega_z <= 0:
            raise ValueError("omega_z must be positive")
        if self.lambda_ratio <= 0:
            raise ValueError("lambda_ratio must be positive")
        if self.eta < 0:
            raise ValueError("eta must be non-negative")
        if self.Lambda < 0:
            raise ValueError("Lambda must be non-negative")
        if self.N_total <= 0:
            raise ValueError("N_total must be positive")
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        if not 0.0 <= self.alpha0_frac <= 1.0:
            raise ValueError("alpha0_frac must lie in [0, 1]")
        if not 0.0 <= self.beta0_frac <= 1.0:
            raise ValueError("beta0_frac must lie in [0, 1]")
        if abs(self.alpha0_frac + self.beta0_frac - 1.0) > 1e-12:
            raise ValueError(
                "alpha0_frac + beta0_frac must equal 1 (the continuum "
                f"starts empty); got {self.alpha0_frac + self.beta0_frac!r}"
            )
        if self.kappa_override is not None:
            if not math.isfinite(self.kappa_override) or self.kappa_override < 0:
                raise ValueError("kappa_override must be finite and >= 0")


@dataclass(frozen=True)
class DerivedParams:
    """Closed-form quantities derived from :class:`PhysicalParams`.

    Attributes:
        l_z: Longitudinal oscillator length sqrt(hbar/(m*omega_z)), m.
        J: Tunnel (Josephson) coupling between the trapped modes, s^-1.
        kappa: Per-particle interaction rate, s^-1.
        N_max: Validity bound on the total atom number (dimensionless).
        t_collapse: Mean-field phase-coherence collapse time 1/(2*sqrt(N)*kappa),
            s; infinite for kappa = 0.
        mu_A0, mu_B0: Initial chemical potentials of the two modes, J.
    """

    l_z: float
    J: float
    kappa: float
    N_max: float
    t_collapse: float
    mu_A0: float
    mu_B0: float


def josephson_coupling(omega_z: float, lambda_ratio: float, eta: float) -> float:
    """Tunnel coupling J = omega_z*(1/2 + 1/lambda - eta/(lambda*sqrt(pi)))*exp(-eta^2)."""
    sqrt_pi = math.sqrt(math.pi)
    return omega_z * (0.5 + 1.0 / lambda_ratio - eta / (lambda_ratio * sqrt_pi)) * math.exp(-(eta**2))


def derive(params: PhysicalParams) -> DerivedParams:
    """Compute all derived model parameters in closed form.

    Args:
        params: Validated physical inputs.

    Returns:
        DerivedParams with the oscillator length, tunnel coupling,
        interaction rate (honouring ``kappa_override``), the atom-number
        validity bound, the collapse time, and initial chemical potentials
        mu_X0 = hbar*omega_z/2 + 2*hbar*kappa*N_X(0).

    Raises:
        ValueError: If inputs are non-finite or the anisotropy is not positive.
    """
    if not math.isfinite(params.omega_z) or not math.isfinite(params.eta):
        raise ValueError("non-finite inputs")
    if params.lambda_ratio * math.sqrt(math.pi) <= 0:
        raise ValueError("lambda_ratio*sqrt(pi) must be positive")

    l_z = math.sqrt(HBAR / (params.mass * params.omega_z))
    J = josephson_coupling(params.omega_z, params.lambda_ratio, params.eta)
    if params.kappa_override is not None:
        kappa = params.kappa_override
    else:
        kappa = (
            HBAR
            * params.scattering_length_tt
            / (params.lambda_ratio * params.mass * math.sqrt(2.0 * math.pi) * l_z**3)
        )
    N_max = params.lambda_ratio ** (1.0 / 3.0) * math.sqrt(2.0 * math.pi) * l_z / params.scattering_length_tt
    if kappa == 0.0:
        t_collapse = math.inf
    else:
        t_collapse = 1.0 / (2.0 * math.sqrt(params.N_total) * kappa)
    n_a0 = params.alpha0_frac * params.N_total
    n_b0 = params.beta0_frac * params.N_total
    mu_A0 = HBAR * params.omega_z / 2.0 + 2.0 * HBAR * kappa * n_a0
    mu_B0 = HBAR * params.omega_z / 2.0 + 2.0 * HBAR * kappa * n_b0
    return DerivedParams(
        l_z=l_z,
        J=J,
        kappa=kappa,
        N_max=N_max,
        t_collapse=t_collapse,
        mu_A0=mu_A0,
        mu_B0=mu_B0,
    )


@dataclass(frozen=True)
class ValidationCheck:
    name: str
    ok: bool
    message: str


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the model-validity checks. Warnings never block a run."""

    checks: tuple[ValidationCheck, ...]

    @property
    def warnings(self) -> tuple[str, ...]:
        return tuple(c.message for c in self.checks if not c.ok)

    @property
    def all_ok(self) -> bool:
        return all(c.ok for c in self.checks)


# Separations outside this window make tunnelling either ill-defined
# (overlapping traps) or negligible/negative.
ETA_TUNNELING_RANGE = (0.5, 2.0)


def validate(params: PhysicalParams, derived: DerivedParams) -> ValidationReport:
    """Check model-validity bounds; every failure is a warning, never an error."""
    checks = []

    ok = params.N_total < 0.1 * derived.N_max
    checks.append(
        ValidationCheck(
            name="two-mode validity",
            ok=ok,
            message=(
                f"N_total={params.N_total:g} is not small compared to "
                f"N_max={derived.N_max:.4g}; the two-mode ansatz degrades"
                if not ok
                else "N_total well below N_max"
            ),
        )
    )

    ok = params.tau <= derived.t_collapse
    checks.append(
        ValidationCheck(
            name="coherence time",
            ok=ok,
            message=(
                f"tau={params.tau:g} s exceeds t_collapse={derived.t_collapse:.4g} s; "
                "mean-field phase coherence is not guaranteed over the full pulse"
                if not ok
                else "tau within the coherence window"
            ),
        )
    )

    lo, hi = ETA_TUNNELING_RANGE
    ok = lo <= params.eta <= hi
    checks.append(
        ValidationCheck(
            name="tunneling range",
            ok=ok,
            message=(
                f"eta={params.eta:g} outside [{lo}, {hi}]; tunnel coupling is "
                "either ill-defined (overlapping traps) or negligible"
                if not ok
                else "eta in the tunnelling-relevant range"
            ),
        )
    )

    return ValidationReport(checks=tuple(checks))
