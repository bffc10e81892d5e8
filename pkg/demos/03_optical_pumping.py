# %% [markdown]
# # Optical pumping
#
# A control field alone empties its lower level at the rate Omega_C^2/gamma
# (Lambda scheme). With sigma+ light on all 16 D1 sublevels, population
# collects in the trapped state |2,2>. The cell's buffer gas sets how
# completely: N2 quenches the excited state, while Ne mixes its sublevels.

# %%
import numpy as np

from vaporeit import (FieldConfig, RelaxationConfig, build_d1_16level, build_lambda3, evolve,
                      populations, steady_state)
from vaporeit.atoms import EXCITED_SPLITTING, GROUND_SPLITTING
from vaporeit.trapping import preset, rabi_from_power

# %% [markdown]
# Pumping rate from the decay of the control's lower level.

# %%
s3 = build_lambda3(splitting=1e4)
relax = RelaxationConfig(gamma_nat=1.0, gamma=1.0, gamma0=0.0, gamma_quench=0.0,
                         gamma_mix=0.0, gamma_rt=0.0)
oc = 0.05
f = FieldConfig(omega_c=oc, omega_p=0.0)
rho0 = np.diag([0.0, 1.0, 0.0]).astype(complex)
ts = np.linspace(50, 400, 8)
p2 = [populations(evolve(rho0, s3, f, relax, t))[1] for t in ts]
rate = -np.polyfit(ts, np.log(p2), 1)[0]
print(f"fitted pumping rate {rate:.5f}   Omega_C^2/gamma = {oc ** 2:.5f}")

# %% [markdown]
# Trapped-state population for the two buffer gases, using preset rates
# expressed in units of the optical linewidth.

# %%
def scaled(name, omega_c, **overrides):
    cell = preset(name, **overrides)
    g = cell.gamma
    ph = cell.relaxation(omega_c, radiation_trapping=False)
    r = RelaxationConfig(gamma_nat=ph.gamma_nat / g, gamma=1.0, gamma0=ph.gamma0 / g,
                         gamma_quench=ph.gamma_quench / g, gamma_mix=ph.gamma_mix / g,
                         gamma_rt=0.0, ground_reset_fraction=ph.ground_reset_fraction)
    return build_d1_16level(GROUND_SPLITTING / g, EXCITED_SPLITTING / g), r, omega_c / g


print("power [mW]   P(|2,2>) N2    P(|2,2>) Ne")
for power in (1.0, 3.0, 9.0, 20.0):
    row = []
    for name in ("long-n2", "long-ne"):
        s, r, om = scaled(name, rabi_from_power(power))
        rho = steady_state(s, FieldConfig(omega_c=om, omega_p=0.2 * om), r)
        row.append(populations(rho)[s.index("ground", 2, 2)])
    print(f"{power:8.1f}     {row[0]:.4f}         {row[1]:.4f}")

# %% [markdown]
# With ground relaxation as pure dephasing (no population reset) nothing
# competes with the pumping, and the stretched state takes everything.

# %%
s, r, om = scaled("long-ne", rabi_from_power(9.0), ground_reset_fraction=0.0)
rho = steady_state(s, FieldConfig(omega_c=om, omega_p=0.2 * om), r)
print(f"pure dephasing: P(|2,2>) = {populations(rho)[s.index('ground', 2, 2)]:.6f}")
