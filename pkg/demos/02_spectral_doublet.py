"""
The outcoupled spectrum is a doublet split by twice the tunneling rate
======================================================================

Weak outcoupling (Lambda = 100 s^-2) probes the trapped pair without
disturbing it much, so the energy distribution of the emitted atoms images
the trapped eigenstructure: the symmetric and antisymmetric superpositions
sit at omega_z/2 -/+ J and the spectrum shows two lines separated by 2J.

The heights of the two lines measure how much of the initial state was
prepared in each superposition,

    P_+- = |sqrt(alpha0) +- sqrt(beta0) e^{i phi0}|^2 / 2,

so their ratio follows (1 + w cos phi0)/(1 - w cos phi0) with
w = 2 sqrt(alpha0 beta0).  The second half of the script sweeps phi0 and
fits that law.
"""

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import atomlaser as al

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

# ---------------------------------------------------------------------------
# 1. One run, one doublet
# ---------------------------------------------------------------------------

params = al.PhysicalParams(Lambda=100.0, eta=1.7, kappa_override=0.0,
                           phi0=0.0, tau=10.0)
derived = al.derive(params)
cont = al.discretize(params.Lambda, params.omega_z, 1500, 300.0)
traj = al.integrate(params, derived, cont)
analysis = al.spectrum(traj.final_state, cont)

print(f"J = {derived.J:.4f} 1/s  ->  expected splitting 2J = {2 * derived.J:.3f} 1/s")
for pk in analysis.peaks:
    print(f"peak at omega = {pk.omega:7.3f} 1/s, height {pk.height:7.3f}, "
          f"width {pk.width:.3f} 1/s")
sep = analysis.peaks[-1].omega - analysis.peaks[0].omega
print(f"measured splitting: {sep:.3f} 1/s (grid spacing {cont.epsilon:.3f} 1/s)")

fig, ax = plt.subplots(figsize=(6.5, 4.0))
ax.plot(analysis.omegas, analysis.density, lw=0.9)
for pk in analysis.peaks:
    ax.axvline(pk.omega, color="gray", lw=0.7, ls=":")
ax.annotate("", xy=(analysis.peaks[0].omega, analysis.peaks[0].height * 0.6),
            xytext=(analysis.peaks[-1].omega, analysis.peaks[0].height * 0.6),
            arrowprops=dict(arrowstyle="<->", lw=0.8))
ax.text(0.5 * (analysis.peaks[0].omega + analysis.peaks[-1].omega),
        analysis.peaks[0].height * 0.64, "2J", ha="center")
ax.set_xlim(60, 140)
ax.set_xlabel(r"$\omega$ (1/s)")
ax.set_ylabel("outcoupled density (atoms s)")
ax.set_title(r"weak-outcoupling doublet at $\omega_z/2 \mp J$")
fig.tight_layout()
fig.savefig(OUT / "doublet.png", dpi=150)
print(f"wrote {OUT / 'doublet.png'}")

# ---------------------------------------------------------------------------
# 2. Peak-height ratio vs initial phase
# ---------------------------------------------------------------------------

phis = np.linspace(0.0, 2.0 * math.pi, 9)
spec = al.SweepSpec(
    base=params,
    axes=(("phi0", tuple(float(p) for p in phis)),),
    observables=("peak_ratio",),
)
result = al.run_sweep(spec)
ratios = np.array([row.values["peak_ratio"] for row in result.rows], dtype=float)

w = 2.0 * math.sqrt(params.alpha0_frac * params.beta0_frac)
law = (1.0 + w * np.cos(phis)) / (1.0 - w * np.cos(phis))
c = float(np.dot(law, ratios) / np.dot(law, law))
r2 = 1.0 - np.sum((ratios - c * law) ** 2) / np.sum((ratios - ratios.mean()) ** 2)
print(f"ratio law fit: scale c = {c:.3f}, R^2 = {r2:.3f}")

fig, ax = plt.subplots(figsize=(6.0, 4.0))
ax.semilogy(phis, ratios, "o", label="measured right/left ratio")
dense = np.linspace(0.0, 2.0 * math.pi, 400)
ax.semilogy(dense, c * (1.0 + w * np.cos(dense)) / (1.0 - w * np.cos(dense)),
            "k--", lw=0.9, label="superposition-weight law")
ax.set_xlabel(r"initial relative phase $\phi_0$ (rad)")
ax.set_ylabel("peak-height ratio")
ax.set_title("the doublet remembers the prepared superposition")
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "peak_ratio_law.png", dpi=150)
print(f"wrote {OUT / 'peak_ratio_law.png'}")
