# %% [markdown]
# # Stored light and pulse-shape optimization
#
# Switching the control off maps the slowed probe onto a ground-state spin
# wave. Switching it back on retrieves the probe. Efficiency is the
# retrieved energy over the input energy. Feeding back the time-reversed,
# conjugated readout as the next input raises the efficiency monotonically
# toward the best achievable for a given optical depth.

# %%
import numpy as np

from vaporeit import FieldConfig, RelaxationConfig, build_lambda3, iterate_optimal, run_storage
from vaporeit.storage import envelope_change, gaussian_envelope, storage_samples

scheme = build_lambda3(splitting=1e4)
fields = FieldConfig(omega_c=0.5, omega_p=0.0)
relax = RelaxationConfig(gamma_nat=1.0, gamma=1.0, gamma0=1e-3, gamma_quench=0.0,
                         gamma_mix=0.0, gamma_rt=0.0, ground_reset_fraction=0.0)

# %% [markdown]
# One store/retrieve cycle. Energy is split between leakage (probe that
# exits before storage), retrieval and absorption.

# %%
d = 10.0
n = storage_samples(d, fields, relax, minimum=1024)
run = run_storage(d, scheme, fields, gaussian_envelope(n, 0.7, 0.1), tau=50.0, relax=relax)
print(f"efficiency {run.efficiency:.4f}  leakage {run.leakage:.4f}  absorbed {run.absorbed:.4f}"
      f"  sum {run.efficiency + run.leakage + run.absorbed:.6f}")

# %% [markdown]
# The dark-time decay follows exp(-2 gamma0 tau) once tau exceeds the
# optical transient (~10/gamma).

# %%
env = gaussian_envelope(n, 0.7, 0.1)
base = run_storage(d, scheme, fields, env, 10.0, relax=relax).efficiency
for tau in (10.0, 100.0, 300.0):
    eff = run_storage(d, scheme, fields, env, tau, relax=relax).efficiency
    print(f"tau={tau:5.0f}  eff/eff(10) = {eff / base:.6f}   exp(-2 g0 (tau-10)) = "
          f"{np.exp(-2e-3 * (tau - 10)):.6f}")

# %% [markdown]
# Time-reversal iteration.

# %%
traj = iterate_optimal(d, scheme, fields, gaussian_envelope(n), 10.0, n_iter=8, relax=relax)
for (k, _, eff), ch in zip(traj, np.r_[envelope_change(traj), np.nan]):
    print(f"iteration {k}: efficiency {eff:.5f}   shape change to next {ch:.2e}")
