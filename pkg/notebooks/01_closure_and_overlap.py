# %% [markdown]
# # Closure error and wave-packet overlap
#
# Earth's rotation turns the laser while the atoms fly, so the two arms of the
# interferometer no longer meet at the last pulse. This walks through how big
# that miss is and what it costs in contrast.

# %%
import math

import numpy as np

from coriolis_ai import (
    SequenceGeometry,
    WavePacket,
    cesium_species,
    closure_error,
    compensated_rate,
    overlap,
    rate_contrast_factor,
)

cs = cesium_species()
print(f"recoil velocity  {cs.recoil_velocity * 1e3:.4f} mm/s")
print(f"recoil frequency {cs.recoil_rate / 2 / math.pi:.2f} Hz")

# %% [markdown]
# Ten photon recoils, T = 250 ms, no mirror compensation.

# %%
g = SequenceGeometry(bragg_order=5, T=0.25, T_prime=0.002)
delta = closure_error(cs, g)
print("effective rate  ", compensated_rate(g) * 1e6, "urad/s")
print("closure error   ", delta.delta * 1e9, "nm")

# %%
packet = WavePacket((105e-9, 86e-9, 813e-9))
print("overlap, position form:", round(overlap(packet, delta), 4))
print("overlap, rate form with sigma_Omega = 34 urad/s:", round(rate_contrast_factor(57.4e-6, 34e-6), 4))

# %% [markdown]
# Sweep the y' mirror rate. The overlap is a Gaussian in the rate because the
# miss distance is linear in it.

# %%
rates = np.linspace(-50e-6, 150e-6, 9)
for r in rates:
    gg = g.replace(comp_rate_yp=r, comp_rate_xp=-26.2e-6)
    print(f"{r * 1e6:7.1f} urad/s  overlap {overlap(packet, closure_error(cs, gg)):.3f}")
