# %% [markdown]
# # Array geometries and exact beam patterns
#
# Four arrays with apertures of roughly 1.2 to 1.3 m at 15 GHz: a 128-element
# linear array, an 85 x 85 square array, a 400-element circular array and a
# 40-ring concentric circular array. Each is focused at one fortieth of its
# Rayleigh distance and its gain is evaluated by direct summation.

# %%
import numpy as np

from nfbeamscope import build_layout, reference_specs, trace_axial, trace_lateral
from nfbeamscope.metrics import segment_mainlobe
from nfbeamscope.response import reference_focus

layouts = {name: build_layout(spec) for name, spec in reference_specs().items()}
for name, lay in layouts.items():
    print(f"{name:5s} N={lay.element_count:5d}  D={lay.aperture_length:.4f} m  "
          f"R_D={lay.rayleigh_distance:7.2f} m  reference (az, el)={lay.reference}")

# %% [markdown]
# ## Axial pattern of the linear array
#
# Ranges are sampled uniformly in 1/r between 2D and R_D. Printing a coarse
# subsample shows the mainlobe around the focus and the lobes on either side.

# %%
ula = layouts["ULA"]
focus = reference_focus(ula)
trace = trace_axial(ula, focus, points=4001)
for r, g in zip(trace.coordinates[::250], trace.gains_db[::250]):
    print(f"r = {r:8.3f} m   G = {g:7.2f} dB")

# %% [markdown]
# ## The mainlobe is symmetric in reciprocal range
#
# The 3-dB points sit farther apart on the far side in meters, but at equal
# distances from the focus once expressed as 1/r.

# %%
seg = segment_mainlobe(trace)
lo, hi = seg.half_power_points
rf = focus.range
print(f"r_min={lo:.3f}  r_f={rf:.3f}  r_max={hi:.3f}")
print(f"meters:     near {rf - lo:.3f}, far {hi - rf:.3f}")
print(f"reciprocal: near {1 / lo - 1 / rf:.5f}, far {1 / rf - 1 / hi:.5f}")

# %% [markdown]
# ## Angular cut at the focal range
#
# Azimuth in the horizontal plane, the in-plane direction for the circular
# arrays.

# %%
for name, lay in layouts.items():
    if name in ("USA", "UCCA"):
        continue  # large arrays; see 03 for the full table
    t = trace_lateral(lay, reference_focus(lay, lateral=True), points=2001)
    k = np.argmax(t.gains)
    print(f"{name}: peak at az={t.coordinates[k]:+.4f} rad, "
          f"half-power width {np.ptp(segment_mainlobe(t).half_power_points) * 1e3:.2f} mrad")
