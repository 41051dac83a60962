# %% [markdown]
# # Phase budget and rotation systematics

# %%
import math

from coriolis_ai import (
    BERKELEY_LATITUDE,
    CONSTANTS,
    SequenceGeometry,
    cesium_species,
    conjugate_phases,
    delta_g,
    gravitational_area_phase,
    mach_zehnder_rotation_phase,
)

cs = cesium_species()
g = SequenceGeometry(bragg_order=5, T=0.25, T_prime=0.002)

# %% [markdown]
# Recoil phase flips sign between the conjugate interferometers while the
# gravity phase is shared, so their offset is pure recoil.

# %%
budget = conjugate_phases(cs, g)
for key, value in budget.as_dict().items():
    print(f"{key:22s} {value: .6e}")
print(f"{'area phase':22s} {gravitational_area_phase(cs, g): .6e}")

# %% [markdown]
# A gravimeter launched with 1 cm/s of horizontal velocity picks up a Coriolis
# bias. West is the worst direction; south gives nothing.

# %%
for name, v in [("west", (0.01, 0.0)), ("south", (0.0, 0.01))]:
    dg = delta_g(v, BERKELEY_LATITUDE)
    print(f"{name:6s} dg = {dg:.3e} m/s^2 = {dg / CONSTANTS.standard_gravity:.2e} g")

# %%
for convention in ("effective", "single_photon"):
    phi = mach_zehnder_rotation_phase(cs, (0.01, 0.0), 0.16, BERKELEY_LATITUDE, convention=convention)
    print(f"{convention:14s} {phi:.3f} rad")

# %% [markdown]
# Compensating the rotation to 1.7 % leaves

# %%
print(f"{delta_g((0.01, 0.0), BERKELEY_LATITUDE) * 0.017 / CONSTANTS.standard_gravity:.1e} g")
print(f"(cos of latitude {math.cos(BERKELEY_LATITUDE):.4f})")
