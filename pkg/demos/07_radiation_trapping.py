# %% [markdown]
# # Radiation trapping in warm cells
#
# Fluorescence that cannot leave the cell sideways is reabsorbed and
# depolarizes the ground state. The rate grows with the transverse optical
# depth and with the scattered power. This script shows the physical
# parameters of the three preset cells and the stored-light efficiency
# against optical depth, with pulse shapes optimized at each point.

# %%
from vaporeit import efficiency_vs_depth, preset
from vaporeit.trapping import rabi_from_power

oc = rabi_from_power(9.0)
for name in ("long-ne", "long-n2", "short-ne"):
    c = preset(name)
    print(f"{name:9s} T={c.temperature:.0f} C  n={c.n:.2e} cm^-3  d={c.optical_depth:.1f}  "
          f"d_T={c.transverse_optical_depth:.2f}  Gamma_rt={c.trapping_rate(oc):.3g} rad/s")

# %% [markdown]
# Efficiency against depth at 9 mW and a 400 us dark time (a few minutes
# with several workers).

# %%
for name in ("long-ne", "short-ne"):
    for row in efficiency_vs_depth(name, [5.0, 20.0, 80.0], workers=3):
        print(f"{name:9s} d={row['d']:5.1f}  d_T={row['d_T']:5.2f}  "
              f"Gamma_rt={row['gamma_rt']:.3g}  efficiency={row['efficiency']:.4f}")
