# %% [markdown]
# # EIT transmission spectra
#
# A probe on |1> -> |3> and a control on |2> -> |3> open a transparency
# window whose depth and width depend on the optical depth d, the control
# Rabi frequency and the ground-state decoherence. Units: gamma = 1.
#
# Closed forms for a weak probe:
#
# * off-resonant floor F = exp(-d)
# * peak F + A = exp(-d gamma gamma0 / Omega_C^2)
# * window width ~ Omega_C^2 / (gamma sqrt(d))

# %%
import numpy as np

from vaporeit import (FieldConfig, RelaxationConfig, build_lambda3, eit_linewidth,
                      extract_contrast, transmission_spectrum)

scheme = build_lambda3(splitting=1e4)
relax = RelaxationConfig(gamma_nat=1.0, gamma=1.0, gamma0=1e-3, gamma_quench=0.0,
                         gamma_mix=0.0, gamma_rt=0.0)

# %% [markdown]
# Peak transmission against the closed form on a small grid.

# %%
print(" d    Omega_C   T(0)      exp(-d g g0/Oc^2)")
for d in (2.0, 10.0, 30.0):
    for oc in (0.2, 0.5):
        f = FieldConfig(omega_c=oc, omega_p=1e-3 * oc)
        T0 = transmission_spectrum(d, scheme, f, relax, deltas=np.array([0.0])).transmission[0]
        print(f"{d:4.0f}  {oc:6.2f}   {T0:.5f}   {np.exp(-d * 1e-3 / oc ** 2):.5f}")

# %% [markdown]
# Contrast decomposition and linewidth narrowing with optical depth.

# %%
f = FieldConfig(omega_c=0.5, omega_p=0.0)
for d in (4.0, 16.0, 64.0):
    sp = transmission_spectrum(d, scheme, f, relax, method="linear")
    c = extract_contrast(sp)
    print(f"d={d:5.1f}  F={c.F:.2e}  A={c.A:.4f}  C={c.C:.4f}  FWHM={eit_linewidth(sp):.4f}"
          f"  (Oc^2/sqrt(d) = {0.25 / np.sqrt(d):.4f})")

# %% [markdown]
# A strong probe saturates the transition: "full" solves each slice's
# steady state at the local probe amplitude, "linear" keeps the weak-probe
# response. They agree once the probe is weak.

# %%
deltas = np.linspace(-0.4, 0.4, 9)
for op in (1e-4, 0.2):
    full = transmission_spectrum(8.0, scheme, FieldConfig(omega_c=0.5, omega_p=op), relax,
                                 deltas=deltas)
    lin = transmission_spectrum(8.0, scheme, FieldConfig(omega_c=0.5, omega_p=0.0), relax,
                                deltas=deltas, method="linear")
    print(f"Omega_P={op:g}: max |full - linear| = {np.max(np.abs(full.transmission - lin.transmission)):.2e}")

# %% [markdown]
# The floor law needs detunings far outside the EIT window but well inside
# the optical line. At d = 4 the default grid (+-20 EIT widths) already
# reaches the line wings, which is why F above exceeds exp(-4). A weak
# control with a +-0.03 gamma window separates the two scales.

# %%
fw = FieldConfig(omega_c=0.01, omega_p=1e-5)
narrow = np.linspace(-0.03, 0.03, 201)
for d in (0.5, 1.0, 2.0, 4.0):
    F = extract_contrast(transmission_spectrum(d, scheme, fw, relax.replace(gamma0=1e-6),
                                               deltas=narrow)).F
    print(f"d={d:3.1f}  F={F:.5f}  exp(-d)={np.exp(-d):.5f}")
