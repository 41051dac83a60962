# %% [markdown]
# # Rotation-rate scans and the packet width
#
# Scan the y' mirror rate at five pulse separations, fit a Gaussian to each
# contrast curve and turn the widths into a packet size.

# %%
import math
from dataclasses import replace
from pathlib import Path
from tempfile import mkdtemp

from coriolis_ai import combine_axis_rates, weighted_mean
from coriolis_ai.cli import cmd_scan
from coriolis_ai.config import preset

out = Path(mkdtemp())
summary = cmd_scan(replace(preset("table1"), out_dir=str(out)))

# %%
print(" T [ms]   center [urad/s]   width [urad/s]   sigma [nm]")
for s in summary["scans"]:
    f = s["scan_fit"]
    print(
        f"{s['T_s'] * 1e3:6.0f}   {f['center'] * 1e6:6.2f} +- {f['center_err'] * 1e6:.2f}"
        f"   {f['width'] * 1e6:6.1f} +- {f['width_err'] * 1e6:.1f}   {s['packet_sigma_m'] * 1e9:6.1f}"
    )

# %%
centers = [s["scan_fit"]["center"] * 1e6 for s in summary["scans"]]
errors = [s["scan_fit"]["center_err"] * 1e6 for s in summary["scans"]]
y_opt, y_err = weighted_mean(centers, errors)
print(f"weighted optimum {y_opt:.2f} +- {y_err:.2f} urad/s")
print("weighted sigma   %.1f +- %.1f nm" % weighted_mean(
    [s["packet_sigma_m"] * 1e9 for s in summary["scans"]],
    [s["packet_sigma_m"] * 1e9 * s["scan_fit"]["width_err"] / s["scan_fit"]["width"] for s in summary["scans"]],
))

# %% [markdown]
# The x' axis sits 82 degrees from y'. Combining both optima gives the total
# horizontal rate the mirror must supply.

# %%
x_summary = cmd_scan(replace(preset("fig5-left"), out_dir=str(out / "x")))
x_center = x_summary["scans"][0]["scan_fit"]["center"] * 1e6
print(f"x' optimum {x_center:.2f} urad/s")
print(f"combined   {combine_axis_rates(y_opt, -x_center, math.radians(82)):.2f} urad/s")
print("CSV and JSON written to", out)
