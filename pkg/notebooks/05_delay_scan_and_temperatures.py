# %% [markdown]
# # Vertical packet size and what the widths mean
#
# Delaying the last pulse opens the interferometer vertically at 2 n v_r per
# second of delay. With the horizontal rotation compensated, contrast versus
# delay measures sigma_z.

# %%
from dataclasses import replace
from tempfile import mkdtemp

from coriolis_ai import (
    cesium_species,
    effective_temperature,
    thermal_de_broglie,
    velocity_selection_sigma,
)
from coriolis_ai.cli import cmd_scan
from coriolis_ai.config import preset

scan = cmd_scan(replace(preset("fig5-right"), out_dir=mkdtemp()))["scans"][0]
fit = scan["scan_fit"]
print(f"delay width {fit['width'] * 1e6:.2f} +- {fit['width_err'] * 1e6:.2f} us ({fit['width_convention']} convention)")
print(f"sigma_z     {scan['packet_sigma_m'] * 1e9:.0f} nm")

# %% [markdown]
# Packet widths as temperatures. These describe single atoms and sit well
# below the 1.2 uK of the cloud.

# %%
cs = cesium_species()
for axis, sigma in zip("xyz", (105e-9, 86e-9, 813e-9)):
    print(f"T_{axis} = {effective_temperature(cs, sigma) * 1e9:8.2f} nK")
print(f"thermal de Broglie at 2 uK: {thermal_de_broglie(cs, 2e-6) * 1e9:.1f} nm")
print(f"velocity selection, 500 us pulse: {velocity_selection_sigma(cs, 500e-6) * 1e9:.0f} nm")
