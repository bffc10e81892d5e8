# %% [markdown]
# # Slow light
#
# A weak probe pulse inside the EIT window propagates with a group delay
# of d gamma / (2 Omega_C^2) (half-Rabi convention, gamma = 1). The
# Maxwell-Bloch solver integrates the density matrix of 64 slices in time
# and builds the field along z from the slice coherences.

# %%
import numpy as np

from vaporeit import (FieldConfig, RelaxationConfig, build_lambda3, propagate_pulse,
                      slow_light_delay)

scheme = build_lambda3(splitting=1e4)
relax = RelaxationConfig(gamma_nat=1.0, gamma=1.0, gamma0=1e-3, gamma_quench=0.0,
                         gamma_mix=0.0, gamma_rt=0.0)
fields = FieldConfig(omega_c=0.5, omega_p=0.0)

t = np.linspace(0.0, 1000.0, 5001)
pulse = 1e-3 * np.exp(-((t - 200.0) / 60.0) ** 2)

# %%
print("  d    delay    d/(2 Oc^2)   transmitted energy")
for d in (2.0, 5.0, 10.0, 20.0):
    rec = propagate_pulse(d, scheme, fields, relax, t, pulse)
    energy = np.sum(np.abs(rec.output) ** 2) / np.sum(np.abs(pulse) ** 2)
    print(f"{d:4.0f}  {slow_light_delay(rec):7.2f}   {d / (2 * 0.25):7.2f}      {energy:.3f}")

# %% [markdown]
# The measured delay falls a little short of the group-delay estimate
# because the pulse bandwidth is not negligible against the window width,
# and the estimate ignores the ground decoherence gamma0.
