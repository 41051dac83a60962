# %% [markdown]
# # Reading contrast off an ellipse
#
# Vibrations scramble the fringe phase shot to shot, but both conjugate
# interferometers see the same scramble. Plotting one against the other gives
# an ellipse whose size is the contrast and whose shape is the recoil offset.

# %%
import numpy as np

from coriolis_ai import (
    NoiseModel,
    SequenceGeometry,
    WavePacket,
    binned_contrast,
    cesium_species,
    differential_phase,
    fit_ellipse,
    shots_to_points,
    simulate_scan,
)

cs = cesium_species()
packet = WavePacket((105e-9, 86e-9, 813e-9))
g = SequenceGeometry(bragg_order=5, T=0.18, T_prime=0.002)

# %%
scan = simulate_scan(cs, g, packet, NoiseModel(), "comp_rate_yp", [0.0, 50.2e-6], 400, seed=1)
for value, shots in scan:
    fit = fit_ellipse(shots_to_points(shots))
    print(f"y' rate {value * 1e6:5.1f} urad/s  contrast_x {fit.amplitude_x:.3f}  d = {fit.differential_phase:.3f} rad")

d = differential_phase(cs, g)
print("expected d folded into (0, pi):", round(min(d, 2 * np.pi - d), 3))

# %% [markdown]
# Twenty-shot bins give a contrast with an error bar.

# %%
for b in binned_contrast(scan, 20):
    print(f"{b.parameter * 1e6:5.1f}  {b.contrast:.4f} +- {b.stderr:.4f}  ({b.n_bins} bins)")
