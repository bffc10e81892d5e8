# %% [markdown]
# # Atomic structure of the 87Rb D1 line
#
# Dipole couplings between the ground hyperfine levels F = 1, 2 and the
# excited levels F' = 1, 2 follow from Clebsch-Gordan coefficients and a
# Wigner 6j symbol. This script prints the hyperfine branching ratios, a
# few coupling strengths and the structure of the two level schemes.

# %%
import numpy as np

from vaporeit.atoms import build_d1_16level, build_lambda3, dipole_coefficient

# %% [markdown]
# Each excited sublevel decays with total strength 1. The split between the
# two ground hyperfine levels is 1/6 : 5/6 from F' = 1 and 1/2 : 1/2 from F' = 2.

# %%
for Fp in (1, 2):
    for mFp in range(-Fp, Fp + 1):
        to = {F: sum(dipole_coefficient(F, mF, mFp - mF, Fp, mFp) ** 2
                     for mF in range(-F, F + 1) if abs(mFp - mF) <= 1) for F in (1, 2)}
        print(f"F'={Fp} mF'={mFp:+d}:  to F=1 {to[1]:.4f}   to F=2 {to[2]:.4f}")

# %% [markdown]
# Under sigma+ light the stretched state |F=2, mF=2> has no upward coupling:
# it is the trapped state that optical pumping fills.

# %%
s16 = build_d1_16level()
i22 = s16.index("ground", 2, 2)
print("sigma+ couplings out of |2,2>:", np.count_nonzero(s16.dipole_matrix("control", 1)[:, i22]))
print("16-level scheme:", s16.n, "levels,", len(s16.couplings), "dipole couplings")

s3 = build_lambda3()
print("Lambda scheme probe matrix:\n", s3.dipole_matrix("probe", 1))
print("Lambda scheme control matrix:\n", s3.dipole_matrix("control", 1))
