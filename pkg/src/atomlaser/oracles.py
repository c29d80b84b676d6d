"""Independent reference implementations used to validate the production path.

Nothing here is called by the simulator or the CLI; the test suite compares
production results against these deliberately separate code paths: a
closed-form solution of the isolated two-mode system, a minimal two-mode
integrator that keeps the nonlinearity, a generic adaptive quadrature, and an
incomplete-gamma closed form for the level shift.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import DOP853, quad
from scipy.special import erfc

from .dynamics import SystemState, Trajectory
from .params import DerivedParams, PhysicalParams


@dataclass(frozen=True)
class OracleResult:
    name: str
    max_abs_error: float
    max_rel_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_rel_error <= self.tolerance


def isolated_closed_form(N_A0: float, N_B0: float, phi0: float, J: float, t) -> np.ndarray:
    """Population of mode A for two isolated, interaction-free coupled modes.

    N_A(t) = N_A0*cos(Jt)^2 + N_B0*sin(Jt)^2 + sqrt(N_A0*N_B0)*sin(2Jt)*sin(phi0)

    The complement N - N_A(t) gives mode B.  Valid only for kappa = 0 and no
    outcoupling.
    """
    t = np.asarray(t, dtype=float)
    jt = J * t
    return (
        N_A0 * np.cos(jt) ** 2
        + N_B0 * np.sin(jt) ** 2
        + math.sqrt(N_A0 * N_B0) * np.sin(2.0 * jt) * math.sin(phi0)
    )


def reduced_two_mode(
    params: PhysicalParams,
    derived: DerivedParams,
    sample_dt: float = 1e-3,
    rtol: float = 1e-13,
    atol: float = 1e-15,
) -> Trajectory:
    """Integrate only the two trapped amplitudes, keeping the nonlinearity.

    Independent of :func:`atomlaser.dynamics.integrate`: no continuum, its own
    rotating frame and recording loop, and much tighter default tolerances
    (the closed system is cheap).  Requires Lambda = 0.
    """
    if params.Lambda != 0.0:
        raise ValueError("reduced_two_mode requires Lambda = 0")
    J = derived.J
    kappa = derived.kappa
    n_total = params.N_total

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        a, b = y
        return np.array(
            [
                -1j * (2.0 * kappa * (a.real**2 + a.imag**2) * a + J * b),
                -1j * (2.0 * kappa * (b.real**2 + b.imag**2) * b + J * a),
            ]
        )

    y0 = np.array(
        [
            math.sqrt(n_total * params.alpha0_frac),
            math.sqrt(n_total * params.beta0_frac) * np.exp(1j * params.phi0),
        ],
        dtype=complex,
    )
    n_samples = max(2, int(round(params.tau / sample_dt)) + 1)
    ts = np.linspace(0.0, params.tau, n_samples)
    N_A = np.empty(n_samples)
    N_B = np.empty(n_samples)
    phi = np.empty(n_samples)
    hc = np.empty(n_samples)
    p_tilde = np.empty(n_samples)

    def record(i: int, y: np.ndarray) -> None:
        na = y[0].real**2 + y[0].imag**2
        nb = y[1].real**2 + y[1].imag**2
        N_A[i] = na
        N_B[i] = nb
        z = np.conj(y[0]) * y[1]
        phi_i = math.atan2(z.imag, z.real)
        phi[i] = phi_i
        p = (na - nb) / n_total
        p_tilde[i] = p
        if J == 0.0:
            hc[i] = math.nan
        else:
            nu = kappa * (na + nb) / J
            hc[i] = nu / 2.0 * p * p + math.sqrt(max(1.0 - p * p, 0.0)) * math.cos(phi_i)

    record(0, y0)
    next_sample = 1
    solver = DOP853(rhs, 0.0, y0, t_bound=params.tau, rtol=rtol, atol=atol)
    n_steps = 0
    while solver.status == "running":
        solver.step()
        n_steps += 1
        if solver.status == "failed":
            raise RuntimeError(f"two-mode oracle failed at t={solver.t:.6g}")
        if next_sample < n_samples and ts[next_sample] <= solver.t + 1e-15:
            interp = solver.dense_output()
            while next_sample < n_samples and ts[next_sample] <= solver.t + 1e-15:
                record(next_sample, interp(ts[next_sample]))
                next_sample += 1

    trap_phase = np.exp(-1j * params.omega_z * params.tau / 2.0)
    final = SystemState(
        t=params.tau,
        amp_a=complex(solver.y[0] * trap_phase),
        amp_b=complex(solver.y[1] * trap_phase),
        amp_c=np.zeros(0, dtype=complex),
    )
    N_C = np.zeros(n_samples)
    drift = float(np.max(np.abs(N_A + N_B - n_total)))
    return Trajectory(
        sample_dt=sample_dt,
        ts=ts,
        N_A=N_A,
        N_B=N_B,
        N_C=N_C,
        relative_phase=phi,
        H_c=hc,
        p_tilde=p_tilde,
        final_state=final,
        norm_drift=drift,
        n_steps=n_steps,
    )


def quadrature_oracle(
    integrand: Callable[[float], float],
    lower: float,
    upper: float,
    *,
    epsrel: float = 1e-10,
) -> float:
    """Adaptive quadrature with a hard error-estimate check, rel. tol 1e-10."""
    value, err = quad(integrand, lower, upper, epsabs=0.0, epsrel=epsrel, limit=200)
    if value != 0.0 and abs(err / value) > 10.0 * epsrel:
        raise RuntimeError(f"quadrature error estimate {err:.2e} too large for value {value:.6e}")
    return value


def upper_incomplete_gamma_neg_half(x: float) -> float:
    """Gamma(-1/2, x) = 2*exp(-x)/sqrt(x) - 2*sqrt(pi)*erfc(sqrt(x)), x > 0."""
    if x <= 0:
        raise ValueError("x must be positive")
    sqrt_x = math.sqrt(x)
    return 2.0 * math.exp(-x) / sqrt_x - 2.0 * math.sqrt(math.pi) * erfc(sqrt_x)


def shift_closed_form(Lambda: float, omega_z: float, omega_up: float) -> float:
    """Level shift via the incomplete-gamma identity (validates compute_shift).

    S = (2*Lambda/(omega_z*sqrt(pi))) * Gamma(-1/2, 2*omega_up/omega_z).
    """
    if Lambda == 0.0:
        return 0.0
    x = 2.0 * omega_up / omega_z
    return 2.0 * Lambda / (omega_z * math.sqrt(math.pi)) * upper_incomplete_gamma_neg_half(x)
